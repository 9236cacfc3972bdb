// Copyright 2026 the smtlab authors
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

#ifndef SMT_ALIGN_HPP
#define SMT_ALIGN_HPP

#include <filesystem>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "smt/corpus.hpp"
#include "smt/util.hpp"

namespace smt {

// Virtual empty source word that absorbs target words with no good match.
inline constexpr const char* kNullWord = "<NULL>";

// Lexical translation table t(target | source). Rows normalize to one.
struct TranslationTable {
  std::unordered_map<std::string, std::unordered_map<std::string, double>> t;
  std::string direction;

  double prob(const std::string& src, const std::string& tgt) const;
};

struct AlignmentMatrix {
  int src_len = 0;
  int tgt_len = 0;
  std::set<std::pair<int, int>> links;  // (source index, target index)

  bool operator==(const AlignmentMatrix& o) const {
    return src_len == o.src_len && tgt_len == o.tgt_len && links == o.links;
  }
};

enum class Symmetrization { Intersection, Union, GrowDiag, GrowDiagFinal, GrowDiagFinalAnd };

Symmetrization symmetrization_from_string(const std::string& name);
const char* to_string(Symmetrization h);

struct DimensionMismatch : Error {
  DimensionMismatch() : Error("alignment dimensions do not match") {}
};

struct Ibm1Config {
  int iterations = 5;
  bool use_null = true;
};

// IBM Model 1 EM. Initialization is uniform over co-occurring pairs; each
// iteration collects exact expected counts and renormalizes. Per-iteration
// corpus log-likelihoods (base e, including the 1/(l+1)^m length terms)
// are appended to *loglik when given; EM guarantees they never decrease.
TranslationTable train_ibm1(const ParallelCorpus& corpus, const Ibm1Config& cfg,
                            std::vector<double>* loglik = nullptr);

// Expected link counts after a single E step over one pair (exposed for
// tests; this is where the 50/50 NULL split on a one-word pair shows up).
std::unordered_map<std::string, std::unordered_map<std::string, double>>
expected_counts(const TranslationTable& table, const SentencePair& pair, bool use_null);

// Links every target word to its best source word; NULL preferences drop
// the link. Ties between source words go to the lowest index, and a source
// word beats NULL on a tie.
AlignmentMatrix viterbi_align(const TranslationTable& table, const SentencePair& pair);

AlignmentMatrix symmetrize(const AlignmentMatrix& fwd, const AlignmentMatrix& bwd,
                           Symmetrization heuristic);

// Pharaoh format: space-separated "i-j" pairs, one sentence per line.
std::string format_pharaoh(const AlignmentMatrix& a);
AlignmentMatrix parse_pharaoh(const std::string& line, int src_len, int tgt_len);

void save_alignments(const std::vector<AlignmentMatrix>& alignments,
                     const std::filesystem::path& file);

}  // namespace smt

#endif  // SMT_ALIGN_HPP
