// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "moodpupilar/cli/commands.hpp"

int main(int argc, char** argv) { return moodpupilar::cli::run(argc, argv, std::cout, std::cerr); }
