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

#ifndef SMT_MORPHO_HPP
#define SMT_MORPHO_HPP

#include <string>
#include <string_view>
#include <vector>

#include "smt/util.hpp"

namespace smt {

// Reserved end-of-line marker appended to variant output when requested.
inline constexpr const char* kMarkerToken = "_EOL_";

struct Analysis {
  std::string base;
  std::string ctag;
  bool disamb = false;
};

struct AnnotatedToken {
  std::string orth;
  std::vector<Analysis> analyses;

  std::size_t disamb_count() const;
};

// Colon-separated morphosyntactic tag: grammatical class followed by
// attribute values, e.g. "subst:pl:gen:m1".
struct CTag {
  std::string word_class;
  std::vector<std::string> attributes;

  static CTag parse(std::string_view tag);
  std::string str() const;
};

struct AnnotatedSentence {
  std::vector<AnnotatedToken> tokens;
  bool end_marker = false;
};

struct MalformedXml : Error {
  std::size_t position;
  MalformedXml(std::size_t pos, const std::string& what);
};

struct MissingField : Error {
  std::size_t tok_index;
  std::string field;
  MissingField(std::size_t tok, const std::string& f);
};

struct UnmappableChar : Error {
  std::size_t offset;
  char32_t codepoint;
  UnmappableChar(std::size_t off, char32_t cp);
};

// Parses tagger XML output (tok / orth / lex disamb / base / ctag).
// Sentence boundaries come from <sentence> or <chunk> elements; bare
// top-level toks separated by blank lines form sentences as well.
std::vector<AnnotatedSentence> parse_annotations(std::string_view xml);

// First disambiguated analysis wins; without disamb marks, the first
// analysis listed.
const std::string& select_stem(const AnnotatedToken& tok);

enum class VariantKind { Inf, Svo, InfSvo };

struct VariantConfig {
  VariantKind kind = VariantKind::Inf;
  bool verbs_only = false;  // restrict lemma substitution to verb classes
  bool marker = false;      // append kMarkerToken when sentence.end_marker
};

// Renders one plain-text line per sentence.
std::vector<std::string> make_variant(const std::vector<AnnotatedSentence>& sentences,
                                      const VariantConfig& cfg);

// Reorders one annotated sentence into subject-verb-object buckets.
// Exposed for tests; make_variant applies it per clause.
std::vector<std::size_t> svo_order(const AnnotatedSentence& sentence);

std::string cp1250_to_utf8(std::string_view bytes);
std::string utf8_to_cp1250(std::string_view utf8);

}  // namespace smt

#endif  // SMT_MORPHO_HPP
