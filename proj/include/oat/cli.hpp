// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace oat::cli {

// Runs the CLI and returns the process exit code:
// 0 success, 2 usage/input, 3 compatibility, 4 empty result, 5 internal.
int run(int argc, const char* const* argv);

}  // namespace oat::cli
