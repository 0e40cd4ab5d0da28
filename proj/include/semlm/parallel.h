// Copyright 2026 The SemLM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMLM_PARALLEL_H_
#define SEMLM_PARALLEL_H_

#ifdef SEMLM_HAVE_OPENMP
#include <omp.h>
#endif

namespace semlm {

#ifdef SEMLM_HAVE_OPENMP
inline int MaxThreads() { return omp_get_max_threads(); }
inline void SetThreads(int n) { omp_set_num_threads(n); }
#else
inline int MaxThreads() { return 1; }
inline void SetThreads(int) {}
#endif

}  // namespace semlm

#endif  // SEMLM_PARALLEL_H_
