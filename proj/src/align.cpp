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

#include "smt/align.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace smt {

double TranslationTable::prob(const std::string& src, const std::string& tgt) const {
  auto row = t.find(src);
  if (row == t.end()) return 0.0;
  auto cell = row->second.find(tgt);
  return cell == row->second.end() ? 0.0 : cell->second;
}

Symmetrization symmetrization_from_string(const std::string& name) {
  if (name == "intersection") return Symmetrization::Intersection;
  if (name == "union") return Symmetrization::Union;
  if (name == "grow-diag") return Symmetrization::GrowDiag;
  if (name == "grow-diag-final") return Symmetrization::GrowDiagFinal;
  if (name == "grow-diag-final-and") return Symmetrization::GrowDiagFinalAnd;
  throw Error("unknown symmetrization heuristic '" + name + "'");
}

const char* to_string(Symmetrization h) {
  switch (h) {
    case Symmetrization::Intersection: return "intersection";
    case Symmetrization::Union: return "union";
    case Symmetrization::GrowDiag: return "grow-diag";
    case Symmetrization::GrowDiagFinal: return "grow-diag-final";
    case Symmetrization::GrowDiagFinalAnd: return "grow-diag-final-and";
  }
  return "?";
}

std::unordered_map<std::string, std::unordered_map<std::string, double>>
expected_counts(const TranslationTable& table, const SentencePair& pair, bool use_null) {
  std::unordered_map<std::string, std::unordered_map<std::string, double>> counts;
  std::vector<std::string> sources = pair.src;
  if (use_null) sources.insert(sources.begin(), kNullWord);
  for (const auto& tgt : pair.tgt) {
    double denom = 0.0;
    for (const auto& src : sources) denom += table.prob(src, tgt);
    if (denom <= 0.0) continue;
    for (const auto& src : sources) {
      double p = table.prob(src, tgt);
      if (p > 0.0) counts[src][tgt] += p / denom;
    }
  }
  return counts;
}

TranslationTable train_ibm1(const ParallelCorpus& corpus, const Ibm1Config& cfg,
                            std::vector<double>* loglik) {
  if (corpus.pairs.empty()) throw EmptyCorpus();
  if (cfg.iterations < 1) throw Error("iterations must be >= 1");

  TranslationTable table;
  table.direction = corpus.src_lang + "-" + corpus.tgt_lang;

  // Uniform initialization over co-occurring word pairs. Ordered rows keep
  // floating-point reductions in a fixed order, so training is
  // deterministic bit for bit.
  std::map<std::string, std::map<std::string, double>> t;
  for (const auto& pair : corpus.pairs) {
    for (const auto& tgt : pair.tgt) {
      for (const auto& src : pair.src) t[src][tgt] = 1.0;
      if (cfg.use_null) t[kNullWord][tgt] = 1.0;
    }
  }
  for (auto& [src, row] : t) {
    double norm = static_cast<double>(row.size());
    for (auto& [tgt, p] : row) p = 1.0 / norm;
  }

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    std::map<std::string, std::map<std::string, double>> counts;
    std::map<std::string, double> totals;
    double ll = 0.0;

    for (const auto& pair : corpus.pairs) {
      std::vector<const std::string*> sources;
      sources.reserve(pair.src.size() + 1);
      static const std::string null_word = kNullWord;
      if (cfg.use_null) sources.push_back(&null_word);
      for (const auto& s : pair.src) sources.push_back(&s);

      for (const auto& tgt : pair.tgt) {
        double denom = 0.0;
        for (const auto* src : sources) denom += t[*src][tgt];
        ll += std::log(denom) - std::log(static_cast<double>(sources.size()));
        for (const auto* src : sources) {
          double c = t[*src][tgt] / denom;
          counts[*src][tgt] += c;
          totals[*src] += c;
        }
      }
    }

    if (loglik) loglik->push_back(ll);
    for (auto& [src, row] : counts)
      for (auto& [tgt, c] : row) t[src][tgt] = c / totals[src];
  }

  for (const auto& [src, row] : t)
    for (const auto& [tgt, p] : row) table.t[src][tgt] = p;
  return table;
}

AlignmentMatrix viterbi_align(const TranslationTable& table, const SentencePair& pair) {
  AlignmentMatrix out;
  out.src_len = static_cast<int>(pair.src.size());
  out.tgt_len = static_cast<int>(pair.tgt.size());
  for (int j = 0; j < out.tgt_len; ++j) {
    const std::string& tgt = pair.tgt[j];
    int best = -1;
    double best_p = -1.0;
    for (int i = 0; i < out.src_len; ++i) {
      double p = table.prob(pair.src[i], tgt);
      if (p > best_p) {
        best_p = p;
        best = i;
      }
    }
    // NULL absorbs the word only when strictly better than every source.
    if (best >= 0 && table.prob(kNullWord, tgt) <= best_p)
      out.links.insert({best, j});
  }
  return out;
}

namespace {

struct Coverage {
  std::vector<bool> src, tgt;
  explicit Coverage(const AlignmentMatrix& a)
      : src(static_cast<std::size_t>(a.src_len), false),
        tgt(static_cast<std::size_t>(a.tgt_len), false) {
    for (const auto& [i, j] : a.links) {
      src[static_cast<std::size_t>(i)] = true;
      tgt[static_cast<std::size_t>(j)] = true;
    }
  }
  void add(int i, int j) {
    src[static_cast<std::size_t>(i)] = true;
    tgt[static_cast<std::size_t>(j)] = true;
  }
};

bool neighbors(const std::pair<int, int>& a, const std::pair<int, int>& b) {
  return std::abs(a.first - b.first) <= 1 && std::abs(a.second - b.second) <= 1 &&
         !(a == b);
}

// Row-major (or column-major) scan over the union, repeated until no
// point can be added: a union point next to an existing point joins when
// its source or target word is still unaligned.
void grow_diag(AlignmentMatrix& a, const std::set<std::pair<int, int>>& union_links,
               bool column_major) {
  std::vector<std::pair<int, int>> candidates(union_links.begin(), union_links.end());
  if (column_major)
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
      return std::pair(x.second, x.first) < std::pair(y.second, y.first);
    });

  Coverage cover(a);
  bool added = true;
  while (added) {
    added = false;
    for (const auto& cand : candidates) {
      if (a.links.count(cand)) continue;
      bool src_free = !cover.src[static_cast<std::size_t>(cand.first)];
      bool tgt_free = !cover.tgt[static_cast<std::size_t>(cand.second)];
      if (!src_free && !tgt_free) continue;
      bool adjacent = false;
      for (const auto& link : a.links)
        if (neighbors(link, cand)) {
          adjacent = true;
          break;
        }
      if (!adjacent) continue;
      a.links.insert(cand);
      cover.add(cand.first, cand.second);
      added = true;
    }
  }
}

// Final step evaluated against the post-grow coverage snapshot: all
// qualifying union points are added at once. require_both selects the
// "-and" variant.
void add_final(AlignmentMatrix& a, const std::set<std::pair<int, int>>& union_links,
               bool require_both) {
  Coverage cover(a);
  std::vector<std::pair<int, int>> to_add;
  for (const auto& cand : union_links) {
    if (a.links.count(cand)) continue;
    bool src_free = !cover.src[static_cast<std::size_t>(cand.first)];
    bool tgt_free = !cover.tgt[static_cast<std::size_t>(cand.second)];
    bool ok = require_both ? (src_free && tgt_free) : (src_free || tgt_free);
    if (ok) to_add.push_back(cand);
  }
  a.links.insert(to_add.begin(), to_add.end());
}

}  // namespace

namespace detail {

AlignmentMatrix grow_diag_scan(const AlignmentMatrix& fwd, const AlignmentMatrix& bwd,
                               bool column_major) {
  AlignmentMatrix out;
  out.src_len = fwd.src_len;
  out.tgt_len = fwd.tgt_len;
  std::set<std::pair<int, int>> union_links = fwd.links;
  union_links.insert(bwd.links.begin(), bwd.links.end());
  std::set_intersection(fwd.links.begin(), fwd.links.end(), bwd.links.begin(),
                        bwd.links.end(), std::inserter(out.links, out.links.begin()));
  grow_diag(out, union_links, column_major);
  return out;
}

}  // namespace detail

AlignmentMatrix symmetrize(const AlignmentMatrix& fwd, const AlignmentMatrix& bwd,
                           Symmetrization heuristic) {
  if (fwd.src_len != bwd.src_len || fwd.tgt_len != bwd.tgt_len)
    throw DimensionMismatch();

  AlignmentMatrix out;
  out.src_len = fwd.src_len;
  out.tgt_len = fwd.tgt_len;

  std::set<std::pair<int, int>> union_links = fwd.links;
  union_links.insert(bwd.links.begin(), bwd.links.end());

  switch (heuristic) {
    case Symmetrization::Intersection:
    case Symmetrization::GrowDiag:
    case Symmetrization::GrowDiagFinal:
    case Symmetrization::GrowDiagFinalAnd:
      std::set_intersection(fwd.links.begin(), fwd.links.end(), bwd.links.begin(),
                            bwd.links.end(), std::inserter(out.links, out.links.begin()));
      break;
    case Symmetrization::Union:
      out.links = union_links;
      return out;
  }
  if (heuristic == Symmetrization::Intersection) return out;

  grow_diag(out, union_links, /*column_major=*/false);
  if (heuristic == Symmetrization::GrowDiagFinal)
    add_final(out, union_links, /*require_both=*/false);
  else if (heuristic == Symmetrization::GrowDiagFinalAnd)
    add_final(out, union_links, /*require_both=*/true);
  return out;
}

std::string format_pharaoh(const AlignmentMatrix& a) {
  std::string out;
  for (const auto& [i, j] : a.links) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i) + "-" + std::to_string(j);
  }
  return out;
}

AlignmentMatrix parse_pharaoh(const std::string& line, int src_len, int tgt_len) {
  AlignmentMatrix a;
  a.src_len = src_len;
  a.tgt_len = tgt_len;
  for (const auto& tok : split_ws(line)) {
    std::size_t dash = tok.find('-');
    if (dash == std::string::npos) throw Error("bad alignment token '" + tok + "'");
    int i = std::stoi(tok.substr(0, dash));
    int j = std::stoi(tok.substr(dash + 1));
    if (i < 0 || i >= src_len || j < 0 || j >= tgt_len)
      throw Error("alignment point " + tok + " out of bounds");
    a.links.insert({i, j});
  }
  return a;
}

void save_alignments(const std::vector<AlignmentMatrix>& alignments,
                     const std::filesystem::path& file) {
  std::vector<std::string> lines;
  lines.reserve(alignments.size());
  for (const auto& a : alignments) lines.push_back(format_pharaoh(a));
  write_lines(file, lines);
}

}  // namespace smt
