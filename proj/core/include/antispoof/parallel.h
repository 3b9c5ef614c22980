// core/include/antispoof/parallel.h

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

#ifndef ANTISPOOF_PARALLEL_H_
#define ANTISPOOF_PARALLEL_H_

#include <functional>

namespace antispoof {

/// Runs task(i) for i in [0, num_tasks) on up to num_workers threads. Tasks
/// are handed out dynamically; callers that need reproducible output write
/// per-task results into slots indexed by i and combine them afterwards.
/// If tasks throw, the exception of the lowest failing index is rethrown
/// once every worker has stopped.
void ParallelFor(int num_tasks, int num_workers,
                 const std::function<void(int)> &task);

}  // namespace antispoof

#endif  // ANTISPOOF_PARALLEL_H_
