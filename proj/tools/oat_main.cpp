// SPDX-License-Identifier: Apache-2.0

#include "oat/cli.hpp"

int main(int argc, char** argv) { return oat::cli::run(argc, argv); }
