// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "clonebench/cli.hpp"

namespace clonebench {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = cli_dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("clonebench_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                ->current_test_info()
                                                ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv("CLONEBENCH_SEED");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    ::unsetenv("CLONEBENCH_SEED");
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(Cli, ChallengeSpaceExactOutput) {
  const CliResult r = run({"acoustic", "space", "--t", "32", "--k", "20"});
  EXPECT_EQ(r.code, kExitAccept);
  EXPECT_EQ(r.out, "{\"bits\":100.0}\n");
}

TEST_F(Cli, SparseChallengeSpaceCarriesNote) {
  const CliResult r = run({"acoustic", "space", "--t", "32", "--k", "20", "--p", "10"});
  ASSERT_EQ(r.code, kExitAccept);
  EXPECT_NEAR(r.json().at("bits").get<double>(), 67.4953, 1e-4);
  EXPECT_NE(r.json().at("note").get<std::string>().find("2^65"), std::string::npos);
}

TEST_F(Cli, ProtocolFlowAndDepletion) {
  const std::string dev = path("dev.json");
  const std::string store = path("store.json");
  ASSERT_EQ(run({"--seed", "5", "--out", dev, "suc", "personalize", "--id", "d1", "--rounds", "8"})
                .code,
            kExitAccept);
  ASSERT_EQ(run({"--seed", "6", "enroll", "--pairs", "2", "--store", store, "--device", dev}).code,
            kExitAccept);
  CliResult r = run({"identify", "--store", store, "--device", dev});
  EXPECT_EQ(r.code, kExitAccept);
  EXPECT_EQ(r.json().at("reason"), "match");
  r = run({"identify", "--store", store, "--device", dev, "--flip", "3"});
  EXPECT_EQ(r.code, kExitReject);
  EXPECT_EQ(r.json().at("reason"), "mismatch");
  r = run({"identify", "--store", store, "--device", dev});
  EXPECT_EQ(r.code, kExitReject);
  EXPECT_EQ(r.json().at("reason"), "depleted");
}

TEST_F(Cli, SameSeedSameOutput) {
  const std::vector<std::string> args = {"--seed", "77", "puf", "simulate", "--model",
                                         "arbiter", "--stages", "32", "--challenges", "4"};
  const CliResult a = run(args);
  const CliResult b = run(args);
  ASSERT_EQ(a.code, kExitAccept);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run({"--seed", "78", "puf", "simulate", "--model", "arbiter", "--stages",
                        "32", "--challenges", "4"})
                       .out);
}

TEST_F(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args = {"puf", "simulate", "--model", "sram", "--cells", "64"};
  ::setenv("CLONEBENCH_SEED", "1234", 1);
  const CliResult a = run(args);
  ::setenv("CLONEBENCH_SEED", "1234", 1);
  const CliResult b = run(args);
  EXPECT_EQ(a.code, kExitAccept);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, run({"--seed", "1234", "puf", "simulate", "--model", "sram", "--cells", "64"})
                       .out);
  ::setenv("CLONEBENCH_SEED", "not-a-number", 1);
  EXPECT_EQ(run(args).code, kExitUsage);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({"no-such-verb"}).code, kExitUsage);
  EXPECT_EQ(run({"acoustic", "space", "--t", "1", "--k", "20"}).code, kExitUsage);
  EXPECT_EQ(run({"repro", "no-such-experiment"}).code, kExitUsage);
  const std::string dev = path("dev.json");
  ASSERT_EQ(run({"--seed", "1", "--out", dev, "suc", "personalize", "--id", "u", "--rounds", "2"})
                .code,
            kExitAccept);
  EXPECT_EQ(run({"suc", "encrypt", "--device", dev, "--block", "zz"}).code, kExitUsage);
  EXPECT_EQ(run({"suc", "encrypt", "--device", path("missing.json"), "--block", "00"}).code,
            kExitData);
  EXPECT_EQ(run({"--help"}).code, kExitAccept);
}

TEST_F(Cli, DataErrors) {
  const std::string bad = path("bad.json");
  std::ofstream(bad) << "{not json";
  EXPECT_EQ(run({"fe", "reproduce", "--helper", bad, "--reading", "00"}).code, kExitData);
  const std::string future = path("future.json");
  std::ofstream(future) << R"({"schema_version": 99, "device_id": "x", "mode": "forward",
                               "challenge_bits": 64, "response_bits": 64, "records": []})";
  EXPECT_EQ(run({"identify", "--store", future, "--device", future}).code, kExitData);
  EXPECT_EQ(run({"fe", "reproduce", "--helper", path("absent.json"), "--reading", "00"}).code,
            kExitData);
}

TEST_F(Cli, PersonalizeNeverPrintsDescriptor) {
  const std::string dev = path("dev.json");
  const CliResult r = run({"--seed", "9", "--out", dev, "suc", "personalize", "--id", "p", "--rounds",
                     "4"});
  ASSERT_EQ(r.code, kExitAccept);
  const nlohmann::json saved = nlohmann::json::parse(slurp(dev));
  ASSERT_TRUE(saved.contains("descriptor"));
  const std::string key = saved.at("descriptor").at("master_key_hex").get<std::string>();
  EXPECT_EQ(r.out.find(key), std::string::npos);
  EXPECT_EQ(r.err.find(key), std::string::npos);
  EXPECT_FALSE(r.json().contains("descriptor"));

  const CliResult dumped = run({"--seed", "9", "--unsafe-dump", "suc", "personalize", "--id", "p",
                          "--rounds", "4"});
  ASSERT_EQ(dumped.code, kExitAccept);
  EXPECT_NE(dumped.out.find(key), std::string::npos);
}

TEST_F(Cli, ConfigFileSuppliesOptions) {
  const std::string cfg = path("run.toml");
  std::ofstream(cfg) << "seed = 4242\n";
  const CliResult a = run({"--config", cfg, "puf", "simulate", "--model", "sram", "--cells", "32"});
  const CliResult b = run({"--seed", "4242", "puf", "simulate", "--model", "sram", "--cells", "32"});
  ASSERT_EQ(a.code, kExitAccept);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, FuzzyExtractorRoundTrip) {
  const std::string helper = path("helper.json");
  const CliResult d = run({"fe", "design", "--ber", "0.25", "--fail", "1e-6", "--blocks", "128"});
  ASSERT_EQ(d.code, kExitAccept);
  EXPECT_EQ(d.json().at("n_rep"), 111);
  const std::string reading(3 * 16 / 4, 'a');
  const CliResult g = run({"--seed", "3", "--out", helper, "fe", "generate", "--n-rep", "3",
                     "--blocks", "16", "--key-len", "32", "--reading", reading});
  ASSERT_EQ(g.code, kExitAccept) << g.err;
  const CliResult ok = run({"fe", "reproduce", "--helper", helper, "--reading", reading});
  EXPECT_EQ(ok.code, kExitAccept);
  EXPECT_EQ(ok.json().at("key_hex"), g.json().at("key_hex"));
  const CliResult bad = run({"fe", "reproduce", "--helper", helper, "--reading",
                       std::string(reading.size(), '5')});
  EXPECT_EQ(bad.code, kExitReject);
}

TEST_F(Cli, ReproListNamesEveryExperiment) {
  const CliResult r = run({"repro", "--list"});
  ASSERT_EQ(r.code, kExitAccept);
  EXPECT_EQ(r.json().size(), 11u);
}

TEST_F(Cli, ReproOutputIsDeterministic) {
  const CliResult a = run({"--seed", "1", "repro", "challenge-space"});
  const CliResult b = run({"--seed", "1", "repro", "challenge-space"});
  ASSERT_EQ(a.code, kExitAccept);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(a.json().at("pass").get<bool>());
}

}  // namespace
}  // namespace clonebench
