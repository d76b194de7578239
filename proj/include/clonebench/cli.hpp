// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clonebench {

// Exit codes of the command-line tool.
inline constexpr int kExitAccept = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

// Runs one command. args excludes the program name. The JSON result goes to
// `out`, log lines and diagnostics to `err`.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err);

int cli_dispatch(int argc, char** argv);

}  // namespace clonebench
