// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#include "ffad_cli.hpp"

int main(int argc, char** argv) { return ffad::cli::run(argc, argv); }
