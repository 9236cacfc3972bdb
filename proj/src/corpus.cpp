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

#include "smt/corpus.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace smt {

const char* to_string(Side s) {
  switch (s) {
    case Side::Src: return "src";
    case Side::Tgt: return "tgt";
    case Side::Both: return "both";
  }
  return "?";
}

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::TooLong: return "TooLong";
    case DropReason::Repetition: return "Repetition";
    case DropReason::Empty: return "Empty";
  }
  return "?";
}

std::string CleaningLog::to_text() const {
  std::string out;
  for (const auto& rec : records) {
    out += std::to_string(rec.line);
    out += '\t';
    out += to_string(rec.reason);
    out += '\t';
    out += to_string(rec.side);
    out += '\n';
  }
  return out;
}

void CleaningLog::save(const std::filesystem::path& file) const {
  write_file(file, to_text());
}

LineCountMismatch::LineCountMismatch(std::size_t s, std::size_t t)
    : Error("line count mismatch: " + std::to_string(s) + " vs " + std::to_string(t)),
      src_n(s),
      tgt_n(t) {}

EncodingError::EncodingError(std::size_t line_no, const std::string& file)
    : Error("invalid UTF-8 on line " + std::to_string(line_no) + " of " + file),
      line(line_no) {}

namespace {

bool is_clause_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
}

}  // namespace

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  for (const std::string& chunk : split_ws(line)) {
    std::string word;
    for (char c : chunk) {
      if (is_clause_punct(c)) {
        if (!word.empty()) {
          out.push_back(word);
          word.clear();
        }
        out.push_back(std::string(1, c));
      } else {
        word.push_back(c);
      }
    }
    if (!word.empty()) out.push_back(word);
  }
  return out;
}

std::string detokenize(const std::vector<std::string>& tokens) {
  return join(tokens, " ");
}

ParallelCorpus load_parallel(const std::filesystem::path& src_path,
                             const std::filesystem::path& tgt_path,
                             const std::string& src_lang, const std::string& tgt_lang) {
  std::vector<std::string> src_lines = read_lines(src_path);
  std::vector<std::string> tgt_lines = read_lines(tgt_path);
  if (src_lines.size() != tgt_lines.size())
    throw LineCountMismatch(src_lines.size(), tgt_lines.size());

  ParallelCorpus corpus;
  corpus.src_lang = src_lang;
  corpus.tgt_lang = tgt_lang;
  corpus.pairs.reserve(src_lines.size());
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    if (!valid_utf8(src_lines[i])) throw EncodingError(i + 1, src_path.string());
    if (!valid_utf8(tgt_lines[i])) throw EncodingError(i + 1, tgt_path.string());
    SentencePair pair;
    pair.src = tokenize(src_lines[i]);
    pair.tgt = tokenize(tgt_lines[i]);
    pair.origin_line = i + 1;
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

namespace {

// Removes <...> spans inside a token. A tag must open and close within
// the same token; unterminated brackets are kept as literal text.
std::string strip_tags(const std::string& token) {
  std::string out;
  std::size_t i = 0;
  while (i < token.size()) {
    if (token[i] == '<') {
      std::size_t close = token.find('>', i + 1);
      if (close != std::string::npos) {
        i = close + 1;
        continue;
      }
    }
    out.push_back(token[i]);
    ++i;
  }
  return out;
}

std::string filter_alphabet(const std::string& token) {
  std::vector<char32_t> kept;
  for (char32_t cp : utf8_decode(token))
    if (latin_alphabet_char(cp)) kept.push_back(cp);
  return utf8_encode(kept);
}

std::vector<std::string> transform_side(const std::vector<std::string>& tokens,
                                        const CleaningConfig& cfg) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const std::string& tok : tokens) {
    std::string t = tok;
    if (cfg.strip_markup) t = strip_tags(t);
    if (cfg.drop_nonlanguage_symbols) t = filter_alphabet(t);
    if (cfg.lowercase) t = latin_lower(t);
    if (!t.empty()) out.push_back(std::move(t));
  }
  if (!cfg.drop_repetitions) return out;

  // Runs of >= 3 identical adjacent tokens collapse to a single token.
  std::vector<std::string> collapsed;
  collapsed.reserve(out.size());
  for (std::size_t i = 0; i < out.size();) {
    std::size_t j = i;
    while (j < out.size() && out[j] == out[i]) ++j;
    std::size_t run = j - i;
    std::size_t keep = run >= 3 ? 1 : run;
    for (std::size_t k = 0; k < keep; ++k) collapsed.push_back(out[i]);
    i = j;
  }
  return collapsed;
}

std::size_t side_length(const std::vector<std::string>& tokens, const CleaningConfig& cfg) {
  if (cfg.len_unit == LenUnit::Tokens) return tokens.size();
  std::size_t chars = 0;
  for (const auto& t : tokens) chars += utf8_decode(t).size();
  if (!tokens.empty()) chars += tokens.size() - 1;  // single spaces between tokens
  return chars;
}

}  // namespace

std::pair<ParallelCorpus, CleaningLog> clean(const ParallelCorpus& corpus,
                                             const CleaningConfig& cfg) {
  ParallelCorpus out;
  out.src_lang = corpus.src_lang;
  out.tgt_lang = corpus.tgt_lang;
  CleaningLog log;

  const SentencePair* prev_kept = nullptr;
  for (const SentencePair& pair : corpus.pairs) {
    SentencePair p;
    p.origin_line = pair.origin_line;
    p.src = transform_side(pair.src, cfg);
    p.tgt = transform_side(pair.tgt, cfg);

    if (p.src.empty() || p.tgt.empty()) {
      Side side = p.src.empty() && p.tgt.empty() ? Side::Both
                  : p.src.empty()                ? Side::Src
                                                 : Side::Tgt;
      log.records.push_back({p.origin_line, DropReason::Empty, side});
      continue;
    }

    bool src_long = side_length(p.src, cfg) > cfg.max_len;
    bool tgt_long = side_length(p.tgt, cfg) > cfg.max_len;
    if (src_long || tgt_long) {
      Side side = src_long && tgt_long ? Side::Both : src_long ? Side::Src : Side::Tgt;
      log.records.push_back({p.origin_line, DropReason::TooLong, side});
      continue;
    }

    if (cfg.drop_repetitions && prev_kept && *prev_kept == p) {
      log.records.push_back({p.origin_line, DropReason::Repetition, Side::Both});
      continue;
    }

    out.pairs.push_back(std::move(p));
    prev_kept = &out.pairs.back();
  }
  return {std::move(out), std::move(log)};
}

VocabStats vocab_stats(const ParallelCorpus& corpus) {
  VocabStats stats;
  std::unordered_set<std::string> src_vocab, tgt_vocab;
  for (const SentencePair& pair : corpus.pairs) {
    for (const auto& t : pair.src) {
      src_vocab.insert(t);
      ++stats.src_total;
    }
    for (const auto& t : pair.tgt) {
      tgt_vocab.insert(t);
      ++stats.tgt_total;
    }
  }
  stats.src_unique = src_vocab.size();
  stats.tgt_unique = tgt_vocab.size();
  stats.line_count = corpus.pairs.size();
  return stats;
}

std::tuple<ParallelCorpus, ParallelCorpus, ParallelCorpus> split_random(
    const ParallelCorpus& corpus, std::size_t dev_n, std::size_t test_n,
    std::uint64_t seed) {
  const std::size_t n = corpus.pairs.size();
  if (dev_n + test_n >= n) throw InsufficientData();

  std::vector<std::size_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) indices[i] = i;
  SplitMix64 rng(seed);
  rng.shuffle(indices);

  std::set<std::size_t> dev_idx(indices.begin(), indices.begin() + dev_n);
  std::set<std::size_t> test_idx(indices.begin() + dev_n, indices.begin() + dev_n + test_n);

  ParallelCorpus train, dev, test;
  for (ParallelCorpus* c : {&train, &dev, &test}) {
    c->src_lang = corpus.src_lang;
    c->tgt_lang = corpus.tgt_lang;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dev_idx.count(i))
      dev.pairs.push_back(corpus.pairs[i]);
    else if (test_idx.count(i))
      test.pairs.push_back(corpus.pairs[i]);
    else
      train.pairs.push_back(corpus.pairs[i]);
  }

  // Remove train pairs that also occur in dev or test (token equality).
  auto held_out = [&](const SentencePair& p) {
    for (const auto& d : dev.pairs)
      if (d == p) return true;
    for (const auto& t : test.pairs)
      if (t == p) return true;
    return false;
  };
  std::erase_if(train.pairs, held_out);
  return {std::move(train), std::move(dev), std::move(test)};
}

void write_corpus(const ParallelCorpus& corpus, const std::filesystem::path& src_path,
                  const std::filesystem::path& tgt_path) {
  std::vector<std::string> src_lines, tgt_lines;
  src_lines.reserve(corpus.pairs.size());
  tgt_lines.reserve(corpus.pairs.size());
  for (const auto& pair : corpus.pairs) {
    src_lines.push_back(detokenize(pair.src));
    tgt_lines.push_back(detokenize(pair.tgt));
  }
  write_lines(src_path, src_lines);
  write_lines(tgt_path, tgt_lines);
}

}  // namespace smt
