// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/cli.hpp"

int main(int argc, char** argv) { return clonebench::cli_dispatch(argc, argv); }
