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

#ifndef SMT_CORPUS_HPP
#define SMT_CORPUS_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <tuple>
#include <vector>

#include "smt/util.hpp"

namespace smt {

struct SentencePair {
  std::vector<std::string> src;
  std::vector<std::string> tgt;
  std::size_t origin_line = 1;

  bool operator==(const SentencePair& o) const { return src == o.src && tgt == o.tgt; }
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;
  std::string src_lang = "pl";
  std::string tgt_lang = "en";

  std::size_t size() const { return pairs.size(); }
};

struct VocabStats {
  std::size_t src_unique = 0;
  std::size_t tgt_unique = 0;
  std::size_t src_total = 0;
  std::size_t tgt_total = 0;
  std::size_t line_count = 0;
};

enum class LenUnit { Characters, Tokens };

struct CleaningConfig {
  std::size_t max_len = 80;
  LenUnit len_unit = LenUnit::Characters;
  bool strip_markup = true;
  bool drop_repetitions = true;
  bool drop_nonlanguage_symbols = true;
  bool lowercase = false;
};

enum class Side { Src, Tgt, Both };
enum class DropReason { TooLong, Repetition, Empty };

const char* to_string(Side s);
const char* to_string(DropReason r);

struct CleaningLog {
  struct Record {
    std::size_t line;
    DropReason reason;
    Side side;
  };
  std::vector<Record> records;

  // One record per line: LINE<TAB>REASON<TAB>SIDE
  std::string to_text() const;
  void save(const std::filesystem::path& file) const;
};

struct LineCountMismatch : Error {
  std::size_t src_n, tgt_n;
  LineCountMismatch(std::size_t s, std::size_t t);
};

struct EncodingError : Error {
  std::size_t line;
  explicit EncodingError(std::size_t line_no, const std::string& file);
};

struct InsufficientData : Error {
  InsufficientData() : Error("dev + test size must be smaller than the corpus") {}
};

// Whitespace split with clause punctuation (. , ! ? ; :) detached as
// single-character tokens. Intra-word hyphens and apostrophes stay put.
std::vector<std::string> tokenize(std::string_view line);

// Loads and tokenizes a line-aligned file pair. Throws LineCountMismatch
// when the files disagree and EncodingError on invalid UTF-8.
ParallelCorpus load_parallel(const std::filesystem::path& src_path,
                             const std::filesystem::path& tgt_path,
                             const std::string& src_lang = "pl",
                             const std::string& tgt_lang = "en");

std::pair<ParallelCorpus, CleaningLog> clean(const ParallelCorpus& corpus,
                                             const CleaningConfig& cfg);

VocabStats vocab_stats(const ParallelCorpus& corpus);

// Deterministic disjoint partition. Pairs equal to a dev or test pair are
// additionally removed from train so held-out data never leaks into it.
std::tuple<ParallelCorpus, ParallelCorpus, ParallelCorpus> split_random(
    const ParallelCorpus& corpus, std::size_t dev_n, std::size_t test_n,
    std::uint64_t seed);

void write_corpus(const ParallelCorpus& corpus, const std::filesystem::path& src_path,
                  const std::filesystem::path& tgt_path);

std::string detokenize(const std::vector<std::string>& tokens);

}  // namespace smt

#endif  // SMT_CORPUS_HPP
