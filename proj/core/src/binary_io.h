// core/src/binary_io.h

// Copyright 2026 The antispoof Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Little-endian encoding helpers shared by the binary file formats.

#ifndef ANTISPOOF_SRC_BINARY_IO_H_
#define ANTISPOOF_SRC_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>

#include "antispoof/error.h"

namespace antispoof::internal {

template <typename U>
void PutLe(std::string *out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i)
    out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void PutF32(std::string *out, float v) {
  PutLe(out, std::bit_cast<std::uint32_t>(v));
}
inline void PutF64(std::string *out, double v) {
  PutLe(out, std::bit_cast<std::uint64_t>(v));
}

/// Sequential reader over a byte buffer; throws kCorruption on overrun.
class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string what)
      : bytes_(bytes), what_(std::move(what)) {}

  template <typename U>
  U GetLe() {
    Need(sizeof(U));
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
      v |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    pos_ += sizeof(U);
    return v;
  }
  float GetF32() { return std::bit_cast<float>(GetLe<std::uint32_t>()); }
  double GetF64() { return std::bit_cast<double>(GetLe<std::uint64_t>()); }

  std::string_view GetBytes(std::size_t n) {
    Need(n);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n)
      throw Error(ErrorCategory::kCorruption, what_ + ": truncated payload");
  }

 private:
  std::string_view bytes_;
  std::string what_;
  std::size_t pos_ = 0;
};

std::string ReadFileBytes(const std::filesystem::path &path);

/// Writes to a sibling temporary file and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path &path,
                     std::string_view bytes);

}  // namespace antispoof::internal

#endif  // ANTISPOOF_SRC_BINARY_IO_H_
