// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <atomic>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "clonebench/auth.hpp"
#include "clonebench/error.hpp"
#include "clonebench/suc.hpp"

namespace clonebench {
namespace {

// Answers `good` queries and then drops the link.
class FlakyChannel final : public DeviceChannel {
 public:
  FlakyChannel(DeviceChannel& inner, std::size_t good) : inner_(&inner), left_(good) {}
  std::size_t challenge_bits() const override { return inner_->challenge_bits(); }
  BitString respond(const BitString& c) override {
    if (left_ == 0) throw ChannelError("link down");
    --left_;
    return inner_->respond(c);
  }

 private:
  DeviceChannel* inner_;
  std::size_t left_;
};

SucParams fast_params() {
  SucParams p;
  p.rounds = 8;
  return p;
}

class Protocol : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(7);
    ASSERT_EQ(enroll(genuine, 1000, rng, store), 1000u);
  }
  SucDevice dev = personalize(fast_params(), Rng(100), "dev-1");
  SucDevice other = personalize(fast_params(), Rng(101), "dev-2");
  SucChannel genuine{dev};
  SucChannel foreign{other};
  CrpStore store{"dev-1", CrpMode::kForward};
};

TEST_F(Protocol, EnrollmentStoresDistinctUnusedPairs) {
  EXPECT_EQ(store.size(), 1000u);
  EXPECT_EQ(store.unused_count(), 1000u);
  std::set<std::string> seen;
  for (const auto& r : store.records()) {
    EXPECT_FALSE(r.used);
    EXPECT_EQ(r.response, suc_encrypt(dev, r.challenge));
    seen.insert(r.challenge.to_hex());
  }
  EXPECT_EQ(seen.size(), 1000u);
  Rng rng(8);
  EXPECT_EQ(enroll(genuine, 50, rng, store), 50u);
  EXPECT_EQ(store.size(), 1050u);
}

TEST_F(Protocol, StoreJsonRoundTripIsByteIdentical) {
  identify(store, genuine, "dev-1");
  const std::string text = store_to_json(store).dump();
  const CrpStore back = store_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(store_to_json(back).dump(), text);
  EXPECT_EQ(back.unused_count(), 999u);
  nlohmann::json bad = nlohmann::json::parse(text);
  bad["schema_version"] = 7;
  try {
    store_from_json(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDataError);
  }
}

TEST_F(Protocol, StoreHoldsNoDescriptor) {
  const std::string bytes = store_to_json(store).dump();
  const auto fragments = SucDeviceVault::descriptor_fragments(dev);
  ASSERT_EQ(fragments.size(), 9u);
  const std::string device_file = SucDeviceVault::save(dev).dump();
  for (const auto& f : fragments) {
    EXPECT_EQ(bytes.find(f), std::string::npos) << f;
    EXPECT_NE(device_file.find(f), std::string::npos) << f;
  }
}

TEST_F(Protocol, GenuineAccepted) {
  for (int i = 0; i < 1000; ++i) {
    const VerdictReport v = identify(store, genuine, "dev-1");
    ASSERT_TRUE(v.accepted());
    ASSERT_EQ(v.reason, Reason::kMatch);
  }
  const VerdictReport v = identify(store, genuine, "dev-1");
  EXPECT_FALSE(v.accepted());
  EXPECT_EQ(v.reason, Reason::kDepleted);
}

TEST_F(Protocol, ImpostorsRejected) {
  ImpostorChannel impostor(Rng(9));
  for (int i = 0; i < 500; ++i) {
    EXPECT_EQ(identify(store, impostor, "dev-1").reason, Reason::kMismatch);
    EXPECT_EQ(identify(store, foreign, "dev-1").reason, Reason::kMismatch);
  }
  EXPECT_EQ(store.unused_count(), 0u);
}

TEST_F(Protocol, WrongDeviceIdIsInvalidInput) {
  EXPECT_THROW(identify(store, genuine, "dev-2"), Error);
  EXPECT_EQ(store.unused_count(), 1000u);
}

TEST_F(Protocol, ReplayRejected) {
  const CrpRecord rec = store.records().front();
  const VerdictReport first = verify_transcript(store, "dev-1", rec.challenge, rec.response);
  EXPECT_TRUE(first.accepted());
  const VerdictReport again = verify_transcript(store, "dev-1", rec.challenge, rec.response);
  EXPECT_FALSE(again.accepted());
  EXPECT_EQ(again.reason, Reason::kReplay);
  Rng rng(10);
  EXPECT_EQ(verify_transcript(store, "dev-1", rng.bits(64), rng.bits(64)).reason,
            Reason::kMismatch);
}

TEST_F(Protocol, TamperingDetected) {
  const std::vector<std::size_t> none;
  TamperedChannel clean = tamper_channel(genuine, none);
  EXPECT_TRUE(identify(store, clean, "dev-1").accepted());
  for (std::size_t pos : {0u, 17u, 63u}) {
    const std::vector<std::size_t> one = {pos};
    TamperedChannel t = tamper_channel(genuine, one);
    const VerdictReport v = identify(store, t, "dev-1");
    EXPECT_FALSE(v.accepted());
    EXPECT_EQ(v.reason, Reason::kMismatch);
  }
  // Flipping the same bit twice in transit restores the answer.
  const std::vector<std::size_t> one = {5};
  TamperedChannel t1 = tamper_channel(genuine, one);
  TamperedChannel t2 = tamper_channel(t1, one);
  EXPECT_TRUE(identify(store, t2, "dev-1").accepted());
  const std::vector<std::size_t> oob = {64};
  EXPECT_THROW(tamper_channel(genuine, oob), Error);
}

TEST_F(Protocol, BrokenLinkIsTamperVerdict) {
  FlakyChannel dead(genuine, 0);
  const VerdictReport v = identify(store, dead, "dev-1");
  EXPECT_FALSE(v.accepted());
  EXPECT_EQ(v.reason, Reason::kTamper);
  EXPECT_EQ(store.unused_count(), 999u);
}

TEST_F(Protocol, AbortedEnrollmentLeavesStoreUnchanged) {
  const std::string before = store_to_json(store).dump();
  FlakyChannel flaky(genuine, 10);
  Rng rng(11);
  try {
    enroll(flaky, 20, rng, store);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEnrollmentAborted);
  }
  EXPECT_EQ(store_to_json(store).dump(), before);
}

TEST_F(Protocol, ConcurrentSessionsNeverShareARecord) {
  std::atomic<int> accepted{0};
  std::atomic<int> depleted{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      SucChannel ch(dev);
      for (int i = 0; i < 300; ++i) {
        const VerdictReport v = identify(store, ch, "dev-1");
        if (v.accepted()) ++accepted;
        if (v.reason == Reason::kDepleted) ++depleted;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(accepted.load(), 1000);
  EXPECT_EQ(depleted.load(), 200);
}

TEST(Store, AppendIsAllOrNothing) {
  CrpStore store("d", CrpMode::kForward);
  Rng rng(12);
  const BitString c = rng.bits(64);
  store.append({{c, rng.bits(64), false}});
  const std::vector<CrpRecord> dup = {{rng.bits(64), rng.bits(64), false},
                                      {c, rng.bits(64), false}};
  EXPECT_THROW(store.append(dup), Error);
  EXPECT_THROW(store.append({{rng.bits(32), rng.bits(64), false}}), Error);
  EXPECT_EQ(store.size(), 1u);
  CrpRecord out;
  EXPECT_EQ(store.claim(c, &out), CrpStore::ClaimStatus::kClaimed);
  EXPECT_EQ(store.claim(c, &out), CrpStore::ClaimStatus::kAlreadyUsed);
  EXPECT_EQ(store.claim(rng.bits(64), &out), CrpStore::ClaimStatus::kUnknown);
  EXPECT_FALSE(store.claim_next().has_value());
}

TEST(Modes, Names) {
  EXPECT_EQ(parse_mode(mode_name(CrpMode::kInverse)), CrpMode::kInverse);
  EXPECT_EQ(parse_mode("forward"), CrpMode::kForward);
  EXPECT_THROW(parse_mode("sideways"), Error);
  EXPECT_EQ(reason_name(Reason::kDepleted), "depleted");
  EXPECT_EQ(verdict_name(Verdict::kAccept), "accept");
}

TEST(InverseMode, DeviceDecryptsStoredResponses) {
  const SucDevice dev = personalize(fast_params(), Rng(200), "inv");
  const SucDevice other = personalize(fast_params(), Rng(201), "inv-2");
  SucChannel ch(dev);
  SucChannel wrong(other);
  CrpStore store("inv", CrpMode::kInverse);
  Rng rng(13);
  enroll(ch, 200, rng, store);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(identify(store, ch, "inv").accepted());
  for (int i = 0; i < 100; ++i) EXPECT_FALSE(identify(store, wrong, "inv").accepted());
}

TEST(InverseMode, PufChannelCannotInvert) {
  const SucDevice dev = personalize(fast_params(), Rng(202), "inv");
  SucResponder resp(dev);
  PufChannel ch(resp, EnvironmentConditions::nominal(), Rng(1));
  CrpStore store("inv", CrpMode::kInverse);
  Rng rng(14);
  try {
    enroll(ch, 5, rng, store);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEnrollmentAborted);
  }
  EXPECT_EQ(store.size(), 0u);
}

class Combined : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(20);
    enroll(channel, 20, rng, store);
    const Fingerprint fp = fingerprint(structure, EnvironmentConditions::nominal(), nullptr);
    const RepetitionParams params = design_repetition(0.05, 1e-5, 16);
    helper.fe = fe_generate(fp.bits.slice(0, params.codeword_bits()), params, 64, rng).second;
    helper.thresholds = fp.thresholds;
    helper.dof_bits = 230.0;
  }
  SucDevice dev = personalize(fast_params(), Rng(300), "c");
  SucChannel channel{dev};
  CrpStore store{"c", CrpMode::kForward};
  StructureModel structure = structure_new(301);
  StructuralHelper helper;
};

TEST_F(Combined, GenuineAcceptedWithSummedEntropy) {
  Rng noise(21);
  const Fingerprint fp = fingerprint(structure, EnvironmentConditions::nominal(), &noise,
                                     helper.thresholds);
  const VerdictReport v = combined_verify(store, helper, fp, channel, "c", 0.25);
  ASSERT_TRUE(v.accepted());
  ASSERT_TRUE(v.entropy_bits.has_value());
  EXPECT_DOUBLE_EQ(*v.entropy_bits, 310.0);
  EXPECT_EQ(nlohmann::json(v).at("verdict"), "accept");
}

TEST_F(Combined, ForeignStructureRejectedWithoutSpendingAPair) {
  const Fingerprint fp = fingerprint(structure_new(999), EnvironmentConditions::nominal(),
                                     nullptr, helper.thresholds);
  const VerdictReport v = combined_verify(store, helper, fp, channel, "c", 0.25);
  EXPECT_FALSE(v.accepted());
  EXPECT_EQ(v.reason, Reason::kMismatch);
  EXPECT_EQ(store.unused_count(), 20u);
}

TEST_F(Combined, ForeignCipherRejected) {
  const SucDevice other = personalize(fast_params(), Rng(302), "x");
  SucChannel wrong(other);
  const Fingerprint fp = fingerprint(structure, EnvironmentConditions::nominal(), nullptr,
                                     helper.thresholds);
  EXPECT_FALSE(combined_verify(store, helper, fp, wrong, "c", 0.25).accepted());
}

TEST_F(Combined, TauBoundsCorrections) {
  const Fingerprint fp = fingerprint(structure, EnvironmentConditions::nominal(), nullptr,
                                     helper.thresholds);
  EXPECT_THROW(combined_verify(store, helper, fp, channel, "c", 0.0), Error);
  EXPECT_THROW(combined_verify(store, helper, fp, channel, "c", 0.5), Error);
  Fingerprint noisy = fp;
  for (std::size_t i = 0; i < 40; i += 4) noisy.bits.flip(i);
  // Ten corrections over a 16-block reading pass tau = 0.25 but not 0.01.
  EXPECT_TRUE(combined_verify(store, helper, noisy, channel, "c", 0.25).accepted());
  EXPECT_FALSE(combined_verify(store, helper, noisy, channel, "c", 0.01).accepted());
}

TEST_F(Combined, AcceptImpliesMatch) {
  Rng noise(22);
  ImpostorChannel impostor(Rng(23));
  for (int i = 0; i < 10; ++i) {
    const Fingerprint fp = fingerprint(structure, EnvironmentConditions::nominal(), &noise,
                                       helper.thresholds);
    DeviceChannel& ch = i % 2 == 0 ? static_cast<DeviceChannel&>(channel) : impostor;
    const VerdictReport v = combined_verify(store, helper, fp, ch, "c", 0.25);
    if (v.accepted()) EXPECT_EQ(v.reason, Reason::kMatch);
    EXPECT_EQ(v.accepted(), i % 2 == 0);
  }
}

TEST_F(Combined, HelperJsonRoundTrip) {
  const StructuralHelper back = nlohmann::json(helper).get<StructuralHelper>();
  EXPECT_EQ(back.thresholds, helper.thresholds);
  EXPECT_EQ(back.fe.sketch, helper.fe.sketch);
  EXPECT_DOUBLE_EQ(back.dof_bits, 230.0);
}

}  // namespace
}  // namespace clonebench
