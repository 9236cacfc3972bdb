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

#include "smt/lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace smt {

namespace {

constexpr double kBosLogprob = -99.0;  // <s> is context-only, never predicted

}  // namespace

WordId NGramModel::lookup(const std::string& word) const {
  auto it = word_to_id.find(word);
  if (it != word_to_id.end()) return it->second;
  return unk;
}

std::vector<WordId> NGramModel::to_ids(std::span<const std::string> words) const {
  std::vector<WordId> ids;
  ids.reserve(words.size());
  for (const auto& w : words) ids.push_back(lookup(w));
  return ids;
}

double NGramModel::logprob_ids(std::span<const WordId> context, WordId word) const {
  if (word < 0) return kBosLogprob;  // no <unk> in this model: hard floor
  if (context.size() > static_cast<std::size_t>(order - 1))
    context = context.subspan(context.size() - (order - 1));

  // Longest stored match wins; otherwise charge the context's back-off
  // weight and retry with the shortened context.
  double bow_sum = 0.0;
  std::vector<WordId> key;
  for (;;) {
    key.assign(context.begin(), context.end());
    key.push_back(word);
    const Table& table = tables[key.size() - 1];
    auto it = table.find(key);
    if (it != table.end()) return bow_sum + it->second.logprob;
    if (context.empty()) return bow_sum + kBosLogprob;  // unreachable for words in vocab
    std::vector<WordId> ctx(context.begin(), context.end());
    auto ctx_it = tables[ctx.size() - 1].find(ctx);
    if (ctx_it != tables[ctx.size() - 1].end()) bow_sum += ctx_it->second.backoff;
    context = context.subspan(1);
  }
}

double NGramModel::logprob(const std::vector<std::string>& context,
                           const std::string& word) const {
  std::vector<WordId> ctx = to_ids(context);
  return logprob_ids(ctx, lookup(word));
}

double NGramModel::sentence_logprob(const std::vector<std::string>& sentence) const {
  std::vector<WordId> history = {bos};
  double total = 0.0;
  for (const auto& w : sentence) {
    WordId id = lookup(w);
    total += logprob_ids(history, id);
    history.push_back(id);
  }
  total += logprob_ids(history, eos);
  return total;
}

std::vector<WordId> NGramModel::predicted_vocab() const {
  std::vector<WordId> v;
  v.reserve(id_to_word.size());
  for (WordId id = 0; id < static_cast<WordId>(id_to_word.size()); ++id)
    if (id != bos) v.push_back(id);
  return v;
}

namespace {

using Ngram = std::vector<WordId>;
using CountTable = std::unordered_map<Ngram, std::int64_t, NgramHash>;

double estimate_discount(const CountTable& counts, std::optional<double> fixed) {
  if (fixed) return *fixed;
  std::int64_t n1 = 0, n2 = 0;
  for (const auto& [gram, c] : counts) {
    if (c == 1) ++n1;
    if (c == 2) ++n2;
  }
  if (n1 == 0) return 0.75;
  double d = static_cast<double>(n1) / (static_cast<double>(n1) + 2.0 * n2);
  if (d <= 0.0 || d >= 1.0) return 0.75;
  return d;
}

}  // namespace

NGramModel train_kn(const std::vector<std::vector<std::string>>& sentences,
                    const KnConfig& cfg) {
  if (sentences.empty()) throw EmptyCorpus();
  if (cfg.order < 1) throw Error("order must be >= 1");
  const int order = cfg.order;

  // Open-vocabulary mode replaces singleton tokens with <unk> up front.
  std::unordered_map<std::string, std::int64_t> freq;
  if (cfg.map_singletons)
    for (const auto& s : sentences)
      for (const auto& w : s) ++freq[w];

  NGramModel model;
  model.order = order;
  auto intern = [&model](const std::string& w) -> WordId {
    auto it = model.word_to_id.find(w);
    if (it != model.word_to_id.end()) return it->second;
    WordId id = static_cast<WordId>(model.id_to_word.size());
    model.id_to_word.push_back(w);
    model.word_to_id.emplace(w, id);
    return id;
  };
  model.bos = intern(kBos);
  model.eos = intern(kEos);
  model.unk = intern(kUnk);

  // Raw counts of all k-grams over <s> ... </s> padded sentences.
  std::vector<CountTable> raw(order);
  for (const auto& sentence : sentences) {
    std::vector<WordId> padded;
    padded.reserve(sentence.size() + 2);
    padded.push_back(model.bos);
    for (const auto& w : sentence) {
      if (cfg.map_singletons && freq[w] == 1)
        padded.push_back(model.unk);
      else
        padded.push_back(intern(w));
    }
    padded.push_back(model.eos);
    for (int k = 1; k <= order; ++k)
      for (std::size_t i = 0; i + k <= padded.size(); ++i)
        ++raw[k - 1][Ngram(padded.begin() + i, padded.begin() + i + k)];
  }
  for (int k = 1; k <= order; ++k)
    if (raw[k - 1].empty()) throw DegenerateCounts(k);

  // Kneser-Ney adjusted counts: the highest order keeps raw counts;
  // below it a k-gram's count becomes the number of distinct words that
  // precede it, except for k-grams anchored at <s>, which keep raw counts
  // (nothing can precede the sentence start).
  std::vector<CountTable> adj(order);
  adj[order - 1] = raw[order - 1];
  for (int k = order - 1; k >= 1; --k) {
    CountTable& table = adj[k - 1];
    for (const auto& [gram, c] : raw[k]) {
      (void)c;
      Ngram suffix(gram.begin() + 1, gram.end());
      ++table[suffix];
    }
    for (const auto& [gram, c] : raw[k - 1])
      if (gram[0] == model.bos) table[gram] = c;
  }

  model.discounts.resize(order);
  for (int k = 1; k <= order; ++k)
    model.discounts[k - 1] = estimate_discount(adj[k - 1], cfg.fixed_discount);

  model.tables.resize(order);

  // Unigrams: interpolate the adjusted counts with a uniform distribution
  // over the predicted vocabulary; every predicted word gets an entry so
  // <unk> always has probability mass.
  {
    const double d1 = model.discounts[0];
    double total = 0.0;
    std::int64_t types = 0;
    for (const auto& [gram, c] : adj[0]) {
      if (gram[0] == model.bos) continue;
      total += static_cast<double>(c);
      ++types;
    }
    const double vocab_size = static_cast<double>(model.id_to_word.size() - 1);
    const double gamma = d1 * static_cast<double>(types) / total;
    for (WordId w : model.predicted_vocab()) {
      Ngram key{w};
      auto it = adj[0].find(key);
      double count = it == adj[0].end() ? 0.0 : static_cast<double>(it->second);
      double p = std::max(count - d1, 0.0) / total + gamma / vocab_size;
      model.tables[0][key] = {std::log10(p), 0.0};
    }
    model.tables[0][{model.bos}] = {kBosLogprob, 0.0};
  }

  // Higher orders, bottom-up so the recursion can query finished tables.
  for (int k = 2; k <= order; ++k) {
    const double dk = model.discounts[k - 1];
    // Group continuations by context.
    std::map<Ngram, std::vector<std::pair<WordId, std::int64_t>>> by_context;
    for (const auto& [gram, c] : adj[k - 1]) {
      Ngram ctx(gram.begin(), gram.end() - 1);
      by_context[ctx].emplace_back(gram.back(), c);
    }
    for (const auto& [ctx, conts] : by_context) {
      double total = 0.0;
      for (const auto& [w, c] : conts) total += static_cast<double>(c);
      const double gamma = dk * static_cast<double>(conts.size()) / total;
      const Ngram tail(ctx.begin() + 1, ctx.end());
      for (const auto& [w, c] : conts) {
        double lower = std::pow(10.0, model.logprob_ids(tail, w));
        double p = std::max(static_cast<double>(c) - dk, 0.0) / total + gamma * lower;
        Ngram key = ctx;
        key.push_back(w);
        model.tables[k - 1][key] = {std::log10(p), 0.0};
      }
      model.tables[k - 2][ctx].backoff = std::log10(gamma);
    }
  }
  return model;
}

double perplexity(const NGramModel& model,
                  const std::vector<std::vector<std::string>>& sentences) {
  if (sentences.empty()) throw EmptyCorpus();
  double logsum = 0.0;
  std::size_t tokens = 0;
  for (const auto& s : sentences) {
    logsum += model.sentence_logprob(s);
    tokens += s.size() + 1;  // </s> is predicted too
  }
  return std::pow(10.0, -logsum / static_cast<double>(tokens));
}

namespace {

std::string format_logprob(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.7f", v);
  return buf;
}

}  // namespace

void save_arpa(const NGramModel& model, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot open " + file.string() + " for writing");

  out << "\\data\\\n";
  for (int k = 1; k <= model.order; ++k)
    out << "ngram " << k << "=" << model.tables[k - 1].size() << "\n";

  for (int k = 1; k <= model.order; ++k) {
    out << "\n\\" << k << "-grams:\n";
    // Deterministic order: sort by the n-gram's token strings.
    std::vector<std::pair<std::string, const NGramModel::Entry*>> rows;
    rows.reserve(model.tables[k - 1].size());
    for (const auto& [gram, entry] : model.tables[k - 1]) {
      std::string text;
      for (std::size_t i = 0; i < gram.size(); ++i) {
        if (i) text += ' ';
        text += model.id_to_word[gram[i]];
      }
      rows.emplace_back(std::move(text), &entry);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [text, entry] : rows) {
      out << format_logprob(entry->logprob) << '\t' << text;
      if (k < model.order) out << '\t' << format_logprob(entry->backoff);
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

NGramModel load_arpa(const std::filesystem::path& file) {
  std::vector<std::string> lines = read_lines(file);
  std::size_t i = 0;
  auto fail = [&](const std::string& what) -> MalformedArpa {
    return MalformedArpa(i + 1, what);
  };

  while (i < lines.size() && trim(lines[i]) != "\\data\\") ++i;
  if (i == lines.size()) throw fail("missing \\data\\ header");
  ++i;

  std::vector<std::size_t> counts;
  for (; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty()) break;
    if (line.rfind("ngram ", 0) != 0) throw fail("expected 'ngram n=count'");
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected '=' in ngram line");
    int k = std::stoi(line.substr(6, eq - 6));
    if (k != static_cast<int>(counts.size()) + 1) throw fail("out-of-order ngram counts");
    counts.push_back(std::stoul(line.substr(eq + 1)));
  }
  if (counts.empty()) throw fail("no ngram counts");

  NGramModel model;
  model.order = static_cast<int>(counts.size());
  model.tables.resize(model.order);
  auto intern = [&model](const std::string& w) -> WordId {
    auto it = model.word_to_id.find(w);
    if (it != model.word_to_id.end()) return it->second;
    WordId id = static_cast<WordId>(model.id_to_word.size());
    model.id_to_word.push_back(w);
    model.word_to_id.emplace(w, id);
    return id;
  };

  for (int k = 1; k <= model.order; ++k) {
    const std::string header = "\\" + std::to_string(k) + "-grams:";
    while (i < lines.size() && trim(lines[i]) != header) {
      if (!trim(lines[i]).empty()) throw fail("expected '" + header + "'");
      ++i;
    }
    if (i == lines.size()) throw fail("missing section '" + header + "'");
    ++i;
    std::size_t seen = 0;
    for (; i < lines.size(); ++i) {
      std::string line = lines[i];
      if (trim(line).empty()) break;
      std::vector<std::string> fields = split_on(line, '\t');
      if (fields.size() < 2) throw fail("expected logprob<TAB>ngram");
      double logprob = 0.0, backoff = 0.0;
      try {
        logprob = std::stod(fields[0]);
        if (fields.size() >= 3 && !trim(fields[2]).empty()) backoff = std::stod(fields[2]);
      } catch (...) {
        throw fail("bad number");
      }
      std::vector<std::string> words = split_ws(fields[1]);
      if (static_cast<int>(words.size()) != k) throw fail("wrong n-gram length");
      std::vector<WordId> gram;
      gram.reserve(words.size());
      for (const auto& w : words) gram.push_back(intern(w));
      model.tables[k - 1][gram] = {logprob, backoff};
      ++seen;
    }
    if (seen != counts[k - 1])
      throw fail("section " + std::to_string(k) + " has " + std::to_string(seen) +
                 " entries, header says " + std::to_string(counts[k - 1]));
  }

  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size() || trim(lines[i]) != "\\end\\") throw fail("missing \\end\\");

  auto find_id = [&model](const char* w) -> WordId {
    auto it = model.word_to_id.find(w);
    return it == model.word_to_id.end() ? -1 : it->second;
  };
  model.bos = find_id(kBos);
  model.eos = find_id(kEos);
  model.unk = find_id(kUnk);
  return model;
}

}  // namespace smt
