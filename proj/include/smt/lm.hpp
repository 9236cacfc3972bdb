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

#ifndef SMT_LM_HPP
#define SMT_LM_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "smt/util.hpp"

namespace smt {

using WordId = int;

inline constexpr const char* kBos = "<s>";
inline constexpr const char* kEos = "</s>";
inline constexpr const char* kUnk = "<unk>";

struct NgramHash {
  std::size_t operator()(const std::vector<WordId>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (WordId w : v) {
      h ^= static_cast<std::size_t>(w) + 0x9E3779B9u;
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct EmptyCorpus : Error {
  EmptyCorpus() : Error("empty corpus") {}
};

struct DegenerateCounts : Error {
  int order;
  explicit DegenerateCounts(int k)
      : Error("no n-gram counts at order " + std::to_string(k)), order(k) {}
};

struct MalformedArpa : Error {
  std::size_t line;
  MalformedArpa(std::size_t line_no, const std::string& what)
      : Error("malformed ARPA at line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

// Back-off n-gram model with interpolated Kneser-Ney estimates. All
// probabilities are log10 (ARPA convention). Stored probabilities carry
// the interpolation mass, so backing off with the stored weights yields
// exactly normalized distributions.
struct NGramModel {
  struct Entry {
    double logprob = 0.0;
    double backoff = 0.0;  // log10 weight; 0 when the n-gram is not a context
  };
  using Table = std::unordered_map<std::vector<WordId>, Entry, NgramHash>;

  int order = 0;
  std::vector<std::string> id_to_word;
  std::unordered_map<std::string, WordId> word_to_id;
  WordId bos = -1, eos = -1, unk = -1;
  std::vector<Table> tables;      // tables[k-1] holds the k-grams
  std::vector<double> discounts;  // per-order D_k (empty after load_arpa)

  WordId lookup(const std::string& word) const;
  std::vector<WordId> to_ids(std::span<const std::string> words) const;

  // P(word | context) through the back-off tables; context longer than
  // order-1 is truncated from the left. Out-of-vocabulary words score as
  // <unk>. Always finite.
  double logprob_ids(std::span<const WordId> context, WordId word) const;
  double logprob(const std::vector<std::string>& context, const std::string& word) const;

  // Sum of token log-probabilities including </s>, starting from <s>.
  double sentence_logprob(const std::vector<std::string>& sentence) const;

  // Every id that can be predicted (everything except <s>).
  std::vector<WordId> predicted_vocab() const;
};

struct KnConfig {
  int order = 5;
  // Open-vocabulary mode: map words seen once in training to <unk>.
  bool map_singletons = false;
  // Overrides the counts-of-counts estimate at every order (testing aid).
  std::optional<double> fixed_discount;
};

NGramModel train_kn(const std::vector<std::vector<std::string>>& sentences,
                    const KnConfig& cfg = {});

double perplexity(const NGramModel& model,
                  const std::vector<std::vector<std::string>>& sentences);

void save_arpa(const NGramModel& model, const std::filesystem::path& file);
NGramModel load_arpa(const std::filesystem::path& file);

}  // namespace smt

#endif  // SMT_LM_HPP
