// Copyright (c) 2026, the acx authors.
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
//
// The compiled-in corpus table. The definition is generated at build time
// from corpus/*.json by cmake/embed_corpus.cmake.

#ifndef ACX_CORPUS_DATA_HPP_
#define ACX_CORPUS_DATA_HPP_

#include <cstddef>

namespace acx::detail {

struct CorpusFile {
  const char* id;    // file name without extension
  const char* text;  // raw JSON
};

extern const CorpusFile kCorpusFiles[];
extern const std::size_t kCorpusFileCount;

}  // namespace acx::detail

#endif  // ACX_CORPUS_DATA_HPP_
