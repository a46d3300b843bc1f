// Copyright 2026 The Stone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "stone/provider.hpp"
#include "stone/syntax_profile.hpp"
#include "stone/tokenizer.hpp"

namespace stone {

/// The built-in desk-scale world: a code-flavored vocabulary (every
/// printable ASCII character plus common lexemes and identifier fragments,
/// padded to an even size) and a first-order toy model over it.
/// Deterministic for a given language and seed.

std::vector<std::string> demo_decode_table(const std::string& language = "python");

VocabularyProfile demo_vocabulary(const std::string& language = "python");

Tokenizer demo_tokenizer(const std::string& language = "python");

/// Toy model matched to demo_vocabulary(language). `syntax_burst` is the
/// fraction of contexts dominated by one syntax token.
std::unique_ptr<ToyModel> demo_model(const VocabularyProfile& profile, std::uint64_t seed,
                                     double syntax_burst = 0.15);

}  // namespace stone
