// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

// Runs every end-to-end experiment once and prints one verdict line per
// acceptance criterion. Exit status is nonzero if any criterion fails.
//
//   clonebench_acceptance [seed]

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <fmt/core.h>

#include "clonebench/repro.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 0);
  int failures = 0;
  int criterion = 0;
  for (const auto& info : clonebench::repro_catalog()) {
    ++criterion;
    try {
      const auto r = clonebench::run_repro(info.name, seed);
      fmt::print("criterion {:2} {:<20} {} ({:.2f}s, limit {:.0f}s) {}\n", criterion, r.name,
                 r.pass ? "PASS" : "FAIL", r.seconds, r.time_limit_seconds, r.summary);
      if (!r.pass) ++failures;
    } catch (const std::exception& e) {
      fmt::print("criterion {:2} {:<20} FAIL error: {}\n", criterion, info.name, e.what());
      ++failures;
    }
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed (seed {})\n", criterion - failures, criterion, seed);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
