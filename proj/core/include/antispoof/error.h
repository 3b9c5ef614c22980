// core/include/antispoof/error.h

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

#ifndef ANTISPOOF_ERROR_H_
#define ANTISPOOF_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace antispoof {

/// Coarse failure class. The CLI prints it as the first token of its
/// one-line error message so scripts can branch on it.
enum class ErrorCategory {
  kConfig,      // bad option, inconsistent parameters
  kInput,       // malformed or unsupported input data
  kIo,          // file missing, unreadable or unwritable
  kCorruption,  // digest mismatch, truncated or foreign binary file
  kData,        // data insufficient for the requested computation
};

std::string_view CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string &message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace antispoof

#endif  // ANTISPOOF_ERROR_H_
