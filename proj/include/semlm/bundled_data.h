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

#ifndef SEMLM_BUNDLED_DATA_H_
#define SEMLM_BUNDLED_DATA_H_

#include <string_view>

namespace semlm {

// Newline-delimited canonical discourse markers (data/pdtb_markers.txt).
std::string_view BundledMarkerText();

// VerbNet-to-FrameNet table in TSV form (data/vn_fn_mapping.tsv).
std::string_view BundledMappingText();

}  // namespace semlm

#endif  // SEMLM_BUNDLED_DATA_H_
