// SPDX-License-Identifier: Apache-2.0
#pragma once

// Little-endian binary IO helpers for the OAT* container formats.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "oat/error.hpp"

namespace oat::io {

class Writer {
  public:
    explicit Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
        if (!out_) throw InputError("cannot open for writing: " + path);
    }
    void bytes(const void* p, size_t n) { out_.write(static_cast<const char*>(p), std::streamsize(n)); }
    void magic(const char m[4]) { bytes(m, 4); }
    template <typename T>
    void pod(T v) {
        static_assert(std::is_trivially_copyable_v<T>);
        bytes(&v, sizeof(T));
    }
    void close() {
        out_.close();
        if (!out_) throw InputError("write failed: " + path_);
    }

  private:
    std::ofstream out_;
    std::string path_;
};

class Reader {
  public:
    explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
        if (!in_) throw InputError("cannot open file: " + path);
    }
    void bytes(void* p, size_t n) {
        in_.read(static_cast<char*>(p), std::streamsize(n));
        if (size_t(in_.gcount()) != n)
            throw InputError(path_ + ": truncated at byte offset " + std::to_string(offset_));
        offset_ += n;
    }
    void expect_magic(const char m[4], const char* what) {
        char got[4];
        bytes(got, 4);
        if (std::memcmp(got, m, 4) != 0)
            throw InputError(path_ + ": bad magic, not a " + std::string(what) + " file");
    }
    template <typename T>
    T pod() {
        static_assert(std::is_trivially_copyable_v<T>);
        T v;
        bytes(&v, sizeof(T));
        return v;
    }
    bool at_eof() {
        return in_.peek() == std::char_traits<char>::eof();
    }
    size_t offset() const { return offset_; }
    const std::string& path() const { return path_; }

  private:
    std::ifstream in_;
    std::string path_;
    size_t offset_ = 0;
};

}  // namespace oat::io
