// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "ucmx/cli.hpp"

int main(int argc, char** argv) { return ucmx::cli::run(argc, argv, std::cout, std::cerr); }
