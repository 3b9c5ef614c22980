// core/include/antispoof/exact_sum.h

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

#ifndef ANTISPOOF_EXACT_SUM_H_
#define ANTISPOOF_EXACT_SUM_H_

#include <vector>

namespace antispoof {

/// Floating-point sum kept as a list of non-overlapping partials (Shewchuk's
/// expansion, as in Python's math.fsum). Value() is the correctly rounded
/// exact sum, so it does not depend on the order of Add() calls.
class ExactSum {
 public:
  void Add(double x);
  void Merge(const ExactSum &other);
  double Value() const;

 private:
  std::vector<double> partials_;
};

}  // namespace antispoof

#endif  // ANTISPOOF_EXACT_SUM_H_
