// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "spec2cli/commands.hpp"

int main(int argc, char** argv) { return spec2::cli::run_cli(argc, argv, std::cout, std::cerr); }
