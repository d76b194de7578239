// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/repro.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <type_traits>

#include <fmt/format.h>

#include "clonebench/acoustic.hpp"
#include "clonebench/attacks.hpp"
#include "clonebench/auth.hpp"
#include "clonebench/error.hpp"
#include "clonebench/fuzzy_extractor.hpp"
#include "clonebench/metrics.hpp"
#include "clonebench/puf_models.hpp"
#include "clonebench/serialization.hpp"
#include "clonebench/suc.hpp"

namespace clonebench {

namespace {

// The attack API must offer no way from a SucDevice to anything cloneable.
template <typename T>
concept ReadoutCloneable = requires(const T& target, Rng& rng) {
  readout_clone(target, rng);
};
template <typename T>
concept ExposesDescriptor = requires(const T& d) { d.descriptor(); } ||
                            requires(const T& d) { d.sboxes(); } ||
                            requires(const T& d) { d.master_key(); };

static_assert(ReadoutCloneable<SramPuf>);
static_assert(!ReadoutCloneable<SucDevice>);
static_assert(!ExposesDescriptor<SucDevice>);
static_assert(!std::is_copy_constructible_v<SucDevice>);

struct Outcome {
  bool pass = false;
  std::string summary;
  nlohmann::json measured;
};

// ---------------------------------------------------------------------------

Outcome sram_ber(Rng& rng) {
  constexpr std::size_t kCells = 16384;
  constexpr std::size_t kReps = 100;
  constexpr double kTol = 0.005;
  SramDevice dev(SramPuf::create(kCells, rng.split("device").seed()));
  const std::vector<BitString> challenges{BitString()};
  const std::vector<EnvironmentConditions> grid{{25.0, 1.26}, {-40.0, 1.26}, {85.0, 1.26}};
  const std::vector<double> target{kSramBerNominal, kSramBerExtreme, kSramBerExtreme};
  Rng noise = rng.split("noise");
  const auto table = reliability(dev, challenges, grid, kReps, noise);
  Outcome out;
  out.pass = true;
  out.measured = {{"cell_measurements_per_point", kCells * kReps}, {"rows", nlohmann::json::array()}};
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ber = table.rows[i].ber;
    out.pass = out.pass && std::abs(ber - target[i]) <= kTol;
    out.measured["rows"].push_back({{"temperature_c", grid[i].temperature_c},
                                    {"ber", ber},
                                    {"target", target[i]}});
    parts.push_back(fmt::format("{:+.0f}C {:.3f}% (target {:.0f}%)",
                                grid[i].temperature_c, 100 * ber, 100 * target[i]));
  }
  out.summary = fmt::format("BER {}; tolerance 0.5%", fmt::join(parts, ", "));
  return out;
}

Outcome fe_correction(Rng& rng) {
  constexpr std::size_t kTrials = 1000;
  constexpr double kFlip = 0.25;
  const auto params = design_repetition(kFlip, 1e-6, 128);
  const BitString w = rng.split("reading").bits(params.codeword_bits());
  Rng gen = rng.split("generate");
  const auto [key, helper] = fe_generate(w, params, 128, gen);
  Rng noise = rng.split("noise");
  std::size_t recovered = 0;
  double flipped = 0;
  for (std::size_t t = 0; t < kTrials; ++t) {
    BitString noisy = w;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
      if (noise.uniform01() < kFlip) noisy.flip(i);
    }
    flipped += fractional_hamming_distance(noisy, w);
    const auto k = fe_reproduce(noisy, helper);
    recovered += (k && *k == key) ? 1 : 0;
  }
  Outcome out;
  out.pass = recovered >= 999;
  out.measured = {{"n_rep", params.n_rep},
                  {"n_blocks", params.n_blocks},
                  {"trials", kTrials},
                  {"recovered", recovered},
                  {"mean_flip_fraction", flipped / kTrials}};
  out.summary = fmt::format("n_rep={} n_blocks={}; {}/{} exact keys at {:.4f} mean flip rate (need >= 999)",
                            params.n_rep, params.n_blocks, recovered, kTrials, flipped / kTrials);
  return out;
}

Outcome suc_cardinality(Rng& rng) {
  constexpr std::size_t kBatch = 100000;
  const SucParams params;
  Rng batch_a = rng.split("batch-a");
  Rng batch_b = rng.split("batch-b");
  const auto a = security_report(params, kBatch, batch_a);
  const auto b = security_report(params, kBatch, batch_b);
  const double gap = std::abs(a.sbox_entropy_bits - b.sbox_entropy_bits);
  Outcome out;
  out.pass = a.cardinality_bits >= 274.0 && gap <= 0.5;
  out.measured = {{"cardinality_bits", a.cardinality_bits},
                  {"sbox_entropy_bits_a", a.sbox_entropy_bits},
                  {"sbox_entropy_bits_b", b.sbox_entropy_bits},
                  {"acceptance_rate_a", a.sbox_acceptance_rate},
                  {"acceptance_rate_b", b.sbox_acceptance_rate},
                  {"batch_size", kBatch}};
  out.summary = fmt::format(
      "cardinality {:.1f} bits (need >= 274); H_sbox {:.3f} vs {:.3f} bits, gap {:.3f} (need <= 0.5)",
      a.cardinality_bits, a.sbox_entropy_bits, b.sbox_entropy_bits, gap);
  return out;
}

// Rounds of independently drawn acceptable S-boxes, as a personalization
// would install them.
std::vector<SBox> draw_round_sboxes(const SucParams& params, std::size_t rounds, Rng& rng) {
  std::vector<SBox> boxes;
  while (boxes.size() < rounds) {
    SBox s = random_bijection(rng);
    if (sbox_acceptable(s, params)) boxes.push_back(s);
  }
  return boxes;
}

Outcome suc_bounds(Rng& rng) {
  constexpr std::size_t kTrails = 1000;
  const SucParams params;
  Rng sampling = rng.split("report");
  const auto report = security_report(params, 1000, sampling);
  const std::size_t bound = report.min_active_sboxes;
  const std::size_t bound5 = min_active_sboxes(params.permutation, 5);

  Rng trails = rng.split("trails");
  std::size_t fewest = SIZE_MAX;
  std::size_t fewest5 = SIZE_MAX;
  for (std::size_t t = 0; t < kTrails; ++t) {
    const auto boxes = draw_round_sboxes(params, params.rounds, trails);
    fewest = std::min(fewest, sample_trail_active_sboxes(boxes, params.permutation, trails));
    fewest5 = std::min(fewest5, sample_trail_active_sboxes(std::span(boxes).first(5),
                                                           params.permutation, trails));
  }
  Outcome out;
  out.pass = bound >= 40 && report.diff_complexity_log2 >= 80 &&
             report.lin_complexity_log2 >= 80 && fewest >= bound && fewest5 >= bound5;
  out.measured = {{"min_active_sboxes", bound},
                  {"diff_complexity_log2", report.diff_complexity_log2},
                  {"lin_complexity_log2", report.lin_complexity_log2},
                  {"sampled_trails", kTrails},
                  {"fewest_active_sampled", fewest},
                  {"min_active_sboxes_5_rounds", bound5},
                  {"fewest_active_sampled_5_rounds", fewest5}};
  out.summary = fmt::format(
      "A(40)={} (need >= 40); diff 2^{:.0f}, lin 2^{:.0f} (need >= 2^80); "
      "{} sampled trails: fewest active {} (40 rounds), {} vs A(5)={} (5 rounds)",
      bound, report.diff_complexity_log2, report.lin_complexity_log2, kTrails, fewest,
      fewest5, bound5);
  return out;
}

Outcome challenge_space(Rng&) {
  const auto dense = challenge_space_bits({32, 20, std::nullopt});
  const auto sparse = challenge_space_bits({32, 20, 10});
  Outcome out;
  const bool noted = sparse.note.find("2^65") != std::string::npos;
  out.pass = dense.bits == 100.0 && std::abs(sparse.bits - 67.49) <= 0.01 && noted;
  out.measured = {{"dense_bits", dense.bits}, {"sparse_bits", sparse.bits}, {"sparse_note", sparse.note}};
  out.summary = fmt::format("t=32 k=20: {:.4f} bits (need exactly 100); p=10: {:.4f} bits "
                            "(need 67.49 +- 0.01){}",
                            dense.bits, sparse.bits, noted ? ", discrepancy noted" : ", note missing");
  return out;
}

std::vector<Fingerprint> fingerprint_population(std::size_t n, Rng& rng) {
  Rng noise = rng.split("noise");
  std::vector<Fingerprint> pop;
  pop.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Fingerprint f = fingerprint(StructureModel::create(rng.split(i).seed()),
                                EnvironmentConditions::nominal(), &noise);
    f.device_id = fmt::format("structure-{}", i);
    pop.push_back(std::move(f));
  }
  return pop;
}

Outcome structural_entropy(Rng& rng) {
  constexpr std::size_t kDevices = 1000;
  Rng pop_rng = rng.split("population");
  const auto pop = fingerprint_population(kDevices, pop_rng);
  const auto est = structural_entropy_estimate(pop);
  Rng iid_rng = rng.split("iid");
  std::vector<BitString> iid;
  for (std::size_t i = 0; i < kDevices; ++i) iid.push_back(iid_rng.bits(256));
  const auto control = estimate_degrees_of_freedom(iid);
  const double rel = control.dof_bits / 256.0 - 1.0;
  Outcome out;
  out.pass = est.dof_bits > 200 && std::abs(rel) <= 0.05;
  out.measured = {{"devices", kDevices},
                  {"structural", est},
                  {"iid_control", control}};
  out.summary = fmt::format("dof {:.1f} bits over {} devices (need > 200); i.i.d. control {:.1f} "
                            "({:+.2f}% vs 256, need within 5%)",
                            est.dof_bits, kDevices, control.dof_bits, 100 * rel);
  return out;
}

Outcome combined_entropy(Rng& rng) {
  Rng pop_rng = rng.split("population");
  const auto pop = fingerprint_population(200, pop_rng);
  const auto est = structural_entropy_estimate(pop);

  const StructureModel genuine = StructureModel::create(pop_rng.split(0).seed());
  const StructureModel foreign = StructureModel::create(pop_rng.split(1).seed());
  Rng noise = rng.split("noise");
  const Fingerprint enrolled = fingerprint(genuine, EnvironmentConditions::nominal(), &noise);
  const auto params = design_repetition(0.05, 1e-5, 16);
  require(params.codeword_bits() <= enrolled.bits.size(), ErrorCode::kInfeasibleDesign,
          "repetition design does not fit the fingerprint");
  Rng gen = rng.split("generate");
  StructuralHelper helper;
  helper.fe = fe_generate(enrolled.bits.slice(0, params.codeword_bits()), params, 64, gen).second;
  helper.thresholds = enrolled.thresholds;
  helper.dof_bits = est.dof_bits;

  const SucDevice ecu = personalize(SucParams{}, rng.split("genie"), "ecu-0");
  SucChannel channel(ecu);
  CrpStore store("ecu-0", CrpMode::kForward);
  Rng enroll_rng = rng.split("enroll");
  enroll(channel, 10, enroll_rng, store);

  const auto measure = [&](const StructureModel& s) {
    return fingerprint(s, EnvironmentConditions::nominal(), &noise, helper.thresholds);
  };
  constexpr double kTau = 0.25;
  const auto ok = combined_verify(store, helper, measure(genuine), channel, "ecu-0", kTau);
  const auto bad = combined_verify(store, helper, measure(foreign), channel, "ecu-0", kTau);
  StructuralHelper weak = helper;
  weak.dof_bits = 40.0;
  const auto low = combined_verify(store, weak, measure(genuine), channel, "ecu-0", kTau);

  const double expected = est.dof_bits + 80.0;
  Outcome out;
  out.pass = ok.accepted() && ok.entropy_bits && *ok.entropy_bits == expected &&
             !bad.accepted() && low.accepted() && low.entropy_bits &&
             *low.entropy_bits == 120.0;
  out.measured = {{"structural_dof_bits", est.dof_bits},
                  {"genuine", ok},
                  {"foreign_structure", bad},
                  {"low_entropy_structure", low}};
  out.summary = fmt::format(
      "genuine {} with {:.4f} bits = {:.4f} + 80; foreign structure {}; 40-bit structure {} with {:.0f} bits",
      verdict_name(ok.verdict), ok.entropy_bits.value_or(-1), est.dof_bits,
      verdict_name(bad.verdict), verdict_name(low.verdict), low.entropy_bits.value_or(-1));
  return out;
}

Outcome protocol(Rng& rng) {
  constexpr std::size_t kGenuine = 1000;
  constexpr std::size_t kImpostor = 100000;
  constexpr std::size_t kReplays = 100;
  const SucDevice dev = personalize(SucParams{}, rng.split("genie"), "ecu-1");
  SucChannel channel(dev);

  CrpStore store("ecu-1", CrpMode::kForward);
  Rng enroll_rng = rng.split("enroll");
  enroll(channel, kGenuine, enroll_rng, store);
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < kGenuine; ++i) {
    accepted += identify(store, channel, "ecu-1").accepted() ? 1 : 0;
  }

  CrpStore inverse("ecu-1", CrpMode::kInverse);
  enroll(channel, 100, enroll_rng, inverse);
  std::size_t inverse_accepted = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    inverse_accepted += identify(inverse, channel, "ecu-1").accepted() ? 1 : 0;
  }

  CrpStore bulk("ecu-1", CrpMode::kForward);
  enroll(channel, kImpostor, enroll_rng, bulk);
  ImpostorChannel impostor(rng.split("impostor"));
  std::size_t impostor_accepted = 0;
  for (std::size_t i = 0; i < kImpostor; ++i) {
    impostor_accepted += identify(bulk, impostor, "ecu-1").accepted() ? 1 : 0;
  }

  std::size_t replay_rejected = 0;
  const auto consumed = store.records();
  for (std::size_t i = 0; i < kReplays; ++i) {
    const auto v = verify_transcript(store, "ecu-1", consumed[i].challenge, consumed[i].response);
    replay_rejected += (!v.accepted() && v.reason == Reason::kReplay) ? 1 : 0;
  }
  const auto depleted = identify(store, channel, "ecu-1");

  Outcome out;
  out.pass = accepted == kGenuine && inverse_accepted == 100 && impostor_accepted == 0 &&
             replay_rejected == kReplays && depleted.reason == Reason::kDepleted;
  out.measured = {{"genuine_accepted", accepted},
                  {"genuine_trials", kGenuine},
                  {"inverse_mode_accepted", inverse_accepted},
                  {"impostor_accepted", impostor_accepted},
                  {"impostor_trials", kImpostor},
                  {"replays_rejected", replay_rejected},
                  {"replay_trials", kReplays}};
  out.summary = fmt::format(
      "genuine {}/{} (inverse mode {}/100); impostor {}/{}; replay rejected {}/{}; "
      "exhausted store -> {}",
      accepted, kGenuine, inverse_accepted, impostor_accepted, kImpostor, replay_rejected,
      kReplays, reason_name(depleted.reason));
  return out;
}

Outcome attack_asymmetry(Rng& rng) {
  constexpr std::size_t kBudget = 5000;
  constexpr std::size_t kSucBudget = 100000;
  constexpr std::size_t kTest = 10000;
  const ArbiterDevice arbiter(ArbiterPuf::create(64, rng.split("arbiter").seed()));
  Rng a_rng = rng.split("arbiter-crps");
  const auto arb_model = train_model(collect_crps(arbiter, kBudget, a_rng));
  const auto arb = eval_model(arb_model, arbiter, kTest, a_rng);

  const SucDevice dev = personalize(SucParams{}, rng.split("genie"), "ecu-2");
  const SucBitTarget target(dev, 0);
  Rng s_rng = rng.split("suc-crps");
  const auto suc_model = train_model(collect_crps(target, kSucBudget, s_rng));
  const auto suc = eval_model(suc_model, target, kTest, s_rng);
  const auto suc_small_model = train_model(collect_crps(target, kBudget, s_rng));
  const auto suc_small = eval_model(suc_small_model, target, kTest, s_rng);

  const double gap = arb.accuracy - suc_small.accuracy;
  Outcome out;
  out.pass = arb.accuracy >= 0.95 && suc.accuracy >= 0.45 && suc.accuracy <= 0.55 && gap >= 0.35;
  out.measured = {{"arbiter", arb}, {"suc", suc}, {"suc_equal_budget", suc_small}, {"gap", gap}};
  out.summary = fmt::format(
      "arbiter {:.4f} at {} CRPs (need >= 0.95); SUC bit {:.4f} at {} CRPs (need 0.45..0.55); "
      "gap at equal budget {:.4f} (need >= 0.35)",
      arb.accuracy, kBudget, suc.accuracy, kSucBudget, gap);
  return out;
}

Outcome readout(Rng& rng) {
  constexpr std::size_t kTrials = 1000;
  const auto params = design_repetition(kSramBerExtreme, 1e-6, 32);
  const SramPuf target = SramPuf::create(params.codeword_bits(), rng.split("target").seed());
  Rng attacker = rng.split("attacker");
  const SramPuf clone = readout_clone(target, attacker);
  const std::size_t pattern_hd = hamming_distance(clone.reference_pattern(), target.reference_pattern());

  Rng gen = rng.split("generate");
  const auto [key, helper] = fe_generate(target.reference_pattern(), params, 128, gen);
  Rng noise = rng.split("noise");
  const std::vector<EnvironmentConditions> grid{{25.0, 1.26}, {-40.0, 1.26}, {85.0, 1.26}};
  bool rates_match = true;
  nlohmann::json rows = nlohmann::json::array();
  std::vector<std::string> parts;
  for (const auto& env : grid) {
    std::size_t genuine_ok = 0;
    std::size_t clone_ok = 0;
    for (std::size_t t = 0; t < kTrials; ++t) {
      const auto kg = fe_reproduce(sram_startup(target, env, &noise), helper);
      const auto kc = fe_reproduce(sram_startup(clone, env, &noise), helper);
      genuine_ok += (kg && *kg == key) ? 1 : 0;
      clone_ok += (kc && *kc == key) ? 1 : 0;
    }
    const double rg = static_cast<double>(genuine_ok) / kTrials;
    const double rc = static_cast<double>(clone_ok) / kTrials;
    rates_match = rates_match && std::abs(rg - rc) <= 0.02;
    rows.push_back({{"temperature_c", env.temperature_c}, {"genuine_rate", rg}, {"clone_rate", rc}});
    parts.push_back(fmt::format("{:+.0f}C {:.3f}/{:.3f}", env.temperature_c, rg, rc));
  }

  // Unknownness audit: a SUC's store must not carry any descriptor bytes,
  // while the device file (positive control) must.
  const SucDevice dev = personalize(SucParams{}, rng.split("genie"), "ecu-3");
  SucChannel channel(dev);
  CrpStore store("ecu-3", CrpMode::kForward);
  Rng enroll_rng = rng.split("enroll");
  enroll(channel, 1000, enroll_rng, store);
  const std::string store_bytes = store_to_json(store).dump(2);
  const std::string device_bytes = SucDeviceVault::save(dev).dump(2);
  std::size_t leaked = 0;
  std::size_t control_hits = 0;
  const auto fragments = SucDeviceVault::descriptor_fragments(dev);
  for (const auto& f : fragments) {
    leaked += store_bytes.find(f) != std::string::npos ? 1 : 0;
    control_hits += device_bytes.find(f) != std::string::npos ? 1 : 0;
  }

  Outcome out;
  out.pass = pattern_hd == 0 && rates_match && leaked == 0 && control_hits == fragments.size();
  out.measured = {{"reference_hd", pattern_hd},
                  {"n_rep", params.n_rep},
                  {"n_blocks", params.n_blocks},
                  {"trials", kTrials},
                  {"rows", rows},
                  {"descriptor_fragments", fragments.size()},
                  {"fragments_in_store", leaked},
                  {"fragments_in_device_file", control_hits},
                  {"suc_readout_clone_compiles", false}};
  out.summary = fmt::format(
      "clone reference HD {}; genuine/clone key rates {} (need within 0.02); SUC: no readout "
      "path (compile-time), {}/{} descriptor fragments in store bytes",
      pattern_hd, fmt::join(parts, ", "), leaked, fragments.size());
  return out;
}

// Independent delay-line simulation: both signals race through every stage.
int path_delay_response(const ArbiterPuf& puf, const BitString& c) {
  double top = 0;
  double bottom = 0;
  for (std::size_t i = 0; i < puf.n_stages(); ++i) {
    const auto& d = puf.stage_delays()[i];
    if (!c.get(i)) {
      top += d.straight_top;
      bottom += d.straight_bottom;
    } else {
      const double new_top = bottom + d.cross_to_top;
      bottom = top + d.cross_to_bottom;
      top = new_top;
    }
  }
  return top - bottom > 0 ? 1 : 0;
}

Outcome oracles(Rng& rng) {
  // Arbiter: linear reduction against path-delay simulation, every challenge.
  std::size_t arb_checked = 0;
  std::size_t arb_bad = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto puf = ArbiterPuf::create(n, rng.split("arbiter").split(n * 16 + s).seed());
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        const BitString c = BitString::from_u64(v, n);
        arb_bad += arbiter_eval(puf, c, EnvironmentConditions::nominal(), nullptr) !=
                           path_delay_response(puf, c)
                       ? 1
                       : 0;
        ++arb_checked;
      }
    }
  }

  // Toeplitz: explicit constant-diagonal matrix times vector over GF(2).
  std::size_t toe_checked = 0;
  std::size_t toe_bad = 0;
  Rng toe = rng.split("toeplitz");
  for (std::size_t m = 1; m <= 16; ++m) {
    for (std::size_t l = 1; l <= 16; ++l) {
      for (int rep = 0; rep < 8; ++rep) {
        const BitString seed = toe.bits(m + l - 1);
        const BitString x = toe.bits(m);
        std::vector<std::vector<int>> t(l, std::vector<int>(m));
        for (std::size_t i = 0; i < l; ++i) {
          for (std::size_t j = 0; j < m; ++j) t[i][j] = seed.get(i + m - 1 - j);
        }
        bool diagonal = true;
        for (std::size_t i = 0; i + 1 < l; ++i) {
          for (std::size_t j = 0; j + 1 < m; ++j) diagonal = diagonal && t[i][j] == t[i + 1][j + 1];
        }
        BitString expect(l);
        for (std::size_t i = 0; i < l; ++i) {
          int acc = 0;
          for (std::size_t j = 0; j < m; ++j) acc ^= t[i][j] & static_cast<int>(x.get(j));
          expect.set(i, acc != 0);
        }
        toe_bad += (!diagonal || toeplitz_hash(seed, x, l) != expect) ? 1 : 0;
        ++toe_checked;
      }
    }
  }

  // Repetition code: every error pattern, decoded block b flips iff its
  // error weight exceeds (n_rep - 1) / 2. Full enumeration while the word
  // has at most 21 bits; the 7 x 4 case enumerates each block's 2^7
  // patterns against every message with the other blocks clean.
  std::size_t rep_checked = 0;
  std::size_t rep_bad = 0;
  const auto check_pattern = [&](std::size_t n_rep, std::size_t n_blocks, std::uint64_t msg,
                                 std::uint64_t err) {
    const BitString m = BitString::from_u64(msg, n_blocks);
    BitString received = repetition_encode(m, n_rep);
    BitString expect = m;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      std::size_t weight = 0;
      for (std::size_t i = 0; i < n_rep; ++i) {
        if ((err >> (b * n_rep + i)) & 1u) {
          received.flip(b * n_rep + i);
          ++weight;
        }
      }
      if (weight > (n_rep - 1) / 2) expect.flip(b);
    }
    rep_bad += repetition_decode(received, n_rep) != expect ? 1 : 0;
    ++rep_checked;
  };
  for (std::size_t n_rep = 1; n_rep <= 7; n_rep += 2) {
    for (std::size_t n_blocks = 1; n_blocks <= 4; ++n_blocks) {
      const std::size_t bits = n_rep * n_blocks;
      const std::uint64_t messages = std::uint64_t{1} << n_blocks;
      if (bits <= 21) {
        for (std::uint64_t err = 0; err < (std::uint64_t{1} << bits); ++err) {
          check_pattern(n_rep, n_blocks, err % messages, err);
        }
      } else {
        for (std::uint64_t msg = 0; msg < messages; ++msg) {
          for (std::size_t b = 0; b < n_blocks; ++b) {
            for (std::uint64_t e = 0; e < (std::uint64_t{1} << n_rep); ++e) {
              check_pattern(n_rep, n_blocks, msg, e << (b * n_rep));
            }
          }
        }
      }
    }
  }

  Outcome out;
  out.pass = arb_bad == 0 && toe_bad == 0 && rep_bad == 0;
  out.measured = {{"arbiter_checked", arb_checked}, {"arbiter_mismatches", arb_bad},
                  {"toeplitz_checked", toe_checked}, {"toeplitz_mismatches", toe_bad},
                  {"repetition_checked", rep_checked}, {"repetition_mismatches", rep_bad}};
  out.summary = fmt::format(
      "arbiter vs path delay {}/{} agree (n <= 12); Toeplitz vs matrix {}/{} (<= 16x16); "
      "repetition {}/{} (n_rep <= 7)",
      arb_checked - arb_bad, arb_checked, toe_checked - toe_bad, toe_checked,
      rep_checked - rep_bad, rep_checked);
  return out;
}

struct Entry {
  ReproInfo info;
  std::function<Outcome(Rng&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table{
      {{"sram-ber", "SRAM power-up BER at 25, -40 and 85 C", 10}, sram_ber},
      {{"fe-correction", "fuzzy extractor recovers keys under 25% flips", 30}, fe_correction},
      {{"suc-cardinality", "SUC class cardinality and S-box entropy", 60}, suc_cardinality},
      {{"suc-bounds", "SUC active S-box and attack-complexity bounds", 120}, suc_bounds},
      {{"challenge-space", "wave-train challenge-space arithmetic", 1}, challenge_space},
      {{"structural-entropy", "structural fingerprint degrees of freedom", 60}, structural_entropy},
      {{"combined-entropy", "combined verification entropy additivity", 5}, combined_entropy},
      {{"protocol", "identification completeness, soundness and replay", 30}, protocol},
      {{"attack-asymmetry", "modeling attack on arbiter vs SUC", 300}, attack_asymmetry},
      {{"readout-clone", "SRAM readout cloning vs SUC unknownness", 30}, readout},
      {{"oracles", "arbiter, Toeplitz and repetition oracles", 60}, oracles},
  };
  return table;
}

}  // namespace

const std::vector<ReproInfo>& repro_catalog() {
  static const std::vector<ReproInfo> catalog = [] {
    std::vector<ReproInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return catalog;
}

bool is_repro_name(std::string_view name) {
  return std::any_of(entries().begin(), entries().end(),
                     [&](const Entry& e) { return e.info.name == name; });
}

ReproResult run_repro(std::string_view name, std::uint64_t seed) {
  const auto it = std::find_if(entries().begin(), entries().end(),
                               [&](const Entry& e) { return e.info.name == name; });
  require(it != entries().end(), ErrorCode::kInvalidParameter,
          fmt::format("unknown experiment '{}'", name));
  Rng rng = Rng(seed).split(it->info.name);
  const auto start = std::chrono::steady_clock::now();
  Outcome o = it->run(rng);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ReproResult r;
  r.name = it->info.name;
  r.seconds = secs;
  r.time_limit_seconds = it->info.time_limit_seconds;
  r.pass = o.pass && secs < r.time_limit_seconds;
  r.summary = std::move(o.summary);
  r.measured = std::move(o.measured);
  return r;
}

void to_json(nlohmann::json& j, const ReproResult& r) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"name", r.name},
                     {"pass", r.pass},
                     {"summary", r.summary},
                     {"measured", r.measured},
                     {"seconds", r.seconds},
                     {"time_limit_seconds", r.time_limit_seconds}};
}

}  // namespace clonebench
