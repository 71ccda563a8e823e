// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace oat {

// Exit-code contract shared by the library error hierarchy and the CLI:
// 0 success, 2 usage/input, 3 compatibility, 4 empty result, 5 internal.
enum class ExitCode : int {
    ok = 0,
    usage = 2,
    compat = 3,
    empty = 4,
    internal = 5,
};

class Error : public std::runtime_error {
  public:
    Error(const std::string& msg, ExitCode code)
        : std::runtime_error(msg), code_(code) {}
    ExitCode exit_code() const { return code_; }

  private:
    ExitCode code_;
};

// Bad files, malformed streams, violated preconditions, missing inputs.
class InputError : public Error {
  public:
    explicit InputError(const std::string& msg) : Error(msg, ExitCode::usage) {}
};

// Mismatched codebook hashes, wrong file versions.
class CompatError : public Error {
  public:
    explicit CompatError(const std::string& msg) : Error(msg, ExitCode::compat) {}
};

// Structurally valid input that yields nothing (e.g. uniform occupancy grid).
class EmptyResultError : public Error {
  public:
    explicit EmptyResultError(const std::string& msg) : Error(msg, ExitCode::empty) {}
};

class InternalError : public Error {
  public:
    explicit InternalError(const std::string& msg) : Error(msg, ExitCode::internal) {}
};

}  // namespace oat
