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

#include "smt/morpho.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace smt {

std::size_t AnnotatedToken::disamb_count() const {
  std::size_t n = 0;
  for (const auto& a : analyses)
    if (a.disamb) ++n;
  return n;
}

CTag CTag::parse(std::string_view tag) {
  CTag out;
  std::vector<std::string> parts = split_on(tag, ':');
  if (parts.empty() || parts[0].empty())
    throw Error("empty grammatical class in ctag '" + std::string(tag) + "'");
  out.word_class = parts[0];
  out.attributes.assign(parts.begin() + 1, parts.end());
  return out;
}

std::string CTag::str() const {
  std::string s = word_class;
  for (const auto& a : attributes) {
    s += ':';
    s += a;
  }
  return s;
}

MalformedXml::MalformedXml(std::size_t pos, const std::string& what)
    : Error("malformed XML at offset " + std::to_string(pos) + ": " + what),
      position(pos) {}

MissingField::MissingField(std::size_t tok, const std::string& f)
    : Error("tok " + std::to_string(tok) + " is missing field '" + f + "'"),
      tok_index(tok),
      field(f) {}

UnmappableChar::UnmappableChar(std::size_t off, char32_t cp)
    : Error("unmappable character U+" + [](char32_t c) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04X", static_cast<unsigned>(c));
        return std::string(buf);
      }(cp) + " at offset " + std::to_string(off)),
      offset(off),
      codepoint(cp) {}

namespace {

// Minimal XML reader for the tagger's element vocabulary. Handles
// attributes, self-closing tags, comments, processing instructions and
// the five predefined entities plus numeric references.
class XmlReader {
 public:
  explicit XmlReader(std::string_view input) : in_(input) {}

  struct Tag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool closing = false;
    bool self_closing = false;
  };

  enum class EventKind { Tag, Text, End };

  struct Event {
    EventKind kind;
    Tag tag;          // when kind == Tag
    std::string text; // when kind == Text (entity-decoded)
  };

  std::size_t pos() const { return pos_; }

  Event next() {
    if (pos_ >= in_.size()) return {EventKind::End, {}, {}};
    if (in_[pos_] != '<') return {EventKind::Text, {}, read_text()};
    if (starts_with("<!--")) {
      skip_until("-->");
      return next();
    }
    if (starts_with("<?")) {
      skip_until("?>");
      return next();
    }
    if (starts_with("<!")) {  // DOCTYPE and friends
      skip_until(">");
      return next();
    }
    return {EventKind::Tag, read_tag(), {}};
  }

 private:
  bool starts_with(std::string_view s) const {
    return in_.substr(pos_, s.size()) == s;
  }

  void skip_until(std::string_view end) {
    std::size_t found = in_.find(end, pos_);
    if (found == std::string_view::npos)
      throw MalformedXml(pos_, "unterminated '" + std::string(in_.substr(pos_, 2)) + "'");
    pos_ = found + end.size();
  }

  std::string read_text() {
    std::size_t start = pos_;
    while (pos_ < in_.size() && in_[pos_] != '<') ++pos_;
    return decode_entities(in_.substr(start, pos_ - start), start);
  }

  std::string decode_entities(std::string_view raw, std::size_t base) {
    std::string out;
    for (std::size_t i = 0; i < raw.size();) {
      if (raw[i] != '&') {
        out.push_back(raw[i++]);
        continue;
      }
      std::size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) throw MalformedXml(base + i, "unterminated entity");
      std::string_view name = raw.substr(i + 1, semi - i - 1);
      if (name == "lt")
        out.push_back('<');
      else if (name == "gt")
        out.push_back('>');
      else if (name == "amp")
        out.push_back('&');
      else if (name == "quot")
        out.push_back('"');
      else if (name == "apos")
        out.push_back('\'');
      else if (!name.empty() && name[0] == '#') {
        bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
        char32_t cp = 0;
        try {
          cp = static_cast<char32_t>(
              std::stoul(std::string(name.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10));
        } catch (...) {
          throw MalformedXml(base + i, "bad numeric entity");
        }
        utf8_append(out, cp);
      } else {
        throw MalformedXml(base + i, "unknown entity '&" + std::string(name) + ";'");
      }
      i = semi + 1;
    }
    return out;
  }

  Tag read_tag() {
    std::size_t tag_start = pos_;
    ++pos_;  // consume '<'
    Tag tag;
    if (pos_ < in_.size() && in_[pos_] == '/') {
      tag.closing = true;
      ++pos_;
    }
    tag.name = read_name(tag_start);
    for (;;) {
      skip_ws();
      if (pos_ >= in_.size()) throw MalformedXml(tag_start, "unterminated tag");
      if (in_[pos_] == '>') {
        ++pos_;
        return tag;
      }
      if (in_[pos_] == '/') {
        ++pos_;
        if (pos_ >= in_.size() || in_[pos_] != '>')
          throw MalformedXml(pos_, "expected '>' after '/'");
        ++pos_;
        tag.self_closing = true;
        return tag;
      }
      if (tag.closing) throw MalformedXml(pos_, "attribute in closing tag");
      std::string key = read_name(pos_);
      skip_ws();
      if (pos_ >= in_.size() || in_[pos_] != '=')
        throw MalformedXml(pos_, "expected '=' in attribute");
      ++pos_;
      skip_ws();
      if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\''))
        throw MalformedXml(pos_, "expected quoted attribute value");
      char quote = in_[pos_++];
      std::size_t vstart = pos_;
      while (pos_ < in_.size() && in_[pos_] != quote) ++pos_;
      if (pos_ >= in_.size()) throw MalformedXml(vstart, "unterminated attribute value");
      tag.attrs[key] = decode_entities(in_.substr(vstart, pos_ - vstart), vstart);
      ++pos_;  // closing quote
    }
  }

  std::string read_name(std::size_t err_pos) {
    std::size_t start = pos_;
    while (pos_ < in_.size() &&
           (std::isalnum(static_cast<unsigned char>(in_[pos_])) || in_[pos_] == '_' ||
            in_[pos_] == '-' || in_[pos_] == '.'))
      ++pos_;
    if (pos_ == start) throw MalformedXml(err_pos, "expected name");
    return std::string(in_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

bool is_sentence_element(const std::string& name) {
  return name == "sentence" || name == "chunk" || name == "s";
}

}  // namespace

std::vector<AnnotatedSentence> parse_annotations(std::string_view xml) {
  XmlReader reader(xml);
  std::vector<AnnotatedSentence> sentences;
  AnnotatedSentence current;
  std::vector<std::string> stack;
  std::size_t tok_count = 0;

  AnnotatedToken tok;
  Analysis lex;
  bool in_tok = false, in_lex = false;
  bool saw_orth = false, saw_base = false, saw_ctag = false;
  std::string* text_sink = nullptr;

  auto flush_sentence = [&]() {
    if (!current.tokens.empty()) {
      sentences.push_back(std::move(current));
      current = AnnotatedSentence{};
    }
  };

  for (;;) {
    XmlReader::Event ev = reader.next();
    if (ev.kind == XmlReader::EventKind::End) break;

    if (ev.kind == XmlReader::EventKind::Text) {
      if (text_sink) {
        *text_sink += ev.text;
      } else if (!in_tok && stack.empty()) {
        // Bare top-level toks: a blank line separates sentences.
        if (std::count(ev.text.begin(), ev.text.end(), '\n') >= 2) flush_sentence();
      }
      continue;
    }

    const auto& tag = ev.tag;
    if (!tag.closing) {
      if (tag.name == "tok") {
        in_tok = true;
        tok = AnnotatedToken{};
        saw_orth = false;
        if (tag.self_closing) throw MissingField(tok_count, "orth");
      } else if (tag.name == "orth" && in_tok) {
        saw_orth = true;
        text_sink = &tok.orth;
      } else if (tag.name == "lex" && in_tok) {
        in_lex = true;
        lex = Analysis{};
        auto it = tag.attrs.find("disamb");
        lex.disamb = it != tag.attrs.end() && it->second == "1";
        saw_base = saw_ctag = false;
        if (tag.self_closing) throw MissingField(tok_count, "base");
      } else if (tag.name == "base" && in_lex) {
        saw_base = true;
        text_sink = &lex.base;
      } else if (tag.name == "ctag" && in_lex) {
        saw_ctag = true;
        text_sink = &lex.ctag;
      }
      if (!tag.self_closing) stack.push_back(tag.name);
      continue;
    }

    // Closing tag.
    if (stack.empty() || stack.back() != tag.name)
      throw MalformedXml(reader.pos(), "unbalanced </" + tag.name + ">");
    stack.pop_back();
    text_sink = nullptr;

    if (tag.name == "lex") {
      if (!saw_base) throw MissingField(tok_count, "base");
      if (!saw_ctag) throw MissingField(tok_count, "ctag");
      tok.analyses.push_back(std::move(lex));
      in_lex = false;
    } else if (tag.name == "tok") {
      if (!saw_orth || tok.orth.empty()) throw MissingField(tok_count, "orth");
      if (tok.analyses.empty()) throw MissingField(tok_count, "lex");
      current.tokens.push_back(std::move(tok));
      in_tok = false;
      ++tok_count;
    } else if (is_sentence_element(tag.name)) {
      flush_sentence();
    }
  }
  if (!stack.empty())
    throw MalformedXml(xml.size(), "unclosed <" + stack.back() + ">");
  flush_sentence();
  return sentences;
}

const std::string& select_stem(const AnnotatedToken& tok) {
  for (const auto& a : tok.analyses)
    if (a.disamb) return a.base;
  return tok.analyses.front().base;
}

namespace {

const Analysis& selected_analysis(const AnnotatedToken& tok) {
  for (const auto& a : tok.analyses)
    if (a.disamb) return a;
  return tok.analyses.front();
}

const std::set<std::string>& finite_verb_classes() {
  static const std::set<std::string> classes = {"fin",  "praet", "bedzie",
                                                "impt", "imps",  "winien"};
  return classes;
}

const std::set<std::string>& verb_lemma_classes() {
  static const std::set<std::string> classes = {
      "fin",  "praet", "bedzie", "impt", "imps", "winien",
      "inf",  "pcon",  "pant",   "ger",  "aglt"};
  return classes;
}

const std::set<std::string>& noun_classes() {
  static const std::set<std::string> classes = {"subst", "depr", "ppron12", "ppron3"};
  return classes;
}

const std::set<std::string>& adjective_classes() {
  static const std::set<std::string> classes = {"adj", "adja", "adjp", "pact", "ppas",
                                                "num"};
  return classes;
}

bool has_case(const CTag& tag, const std::set<std::string>& cases) {
  for (const auto& attr : tag.attributes)
    if (cases.count(attr)) return true;
  return false;
}

struct TokenInfo {
  CTag tag;
  bool verb = false;
  bool noun = false;
  bool adjish = false;
  bool nom = false;
  bool acc_gen = false;
  bool clause_break = false;
};

TokenInfo analyze_token(const AnnotatedToken& tok) {
  TokenInfo info;
  info.tag = CTag::parse(selected_analysis(tok).ctag);
  static const std::set<std::string> nom_case = {"nom"};
  static const std::set<std::string> obj_case = {"acc", "gen"};
  info.verb = finite_verb_classes().count(info.tag.word_class) > 0;
  info.noun = noun_classes().count(info.tag.word_class) > 0;
  info.adjish = adjective_classes().count(info.tag.word_class) > 0;
  info.nom = has_case(info.tag, nom_case);
  info.acc_gen = has_case(info.tag, obj_case);
  info.clause_break = info.tag.word_class == "interp" &&
                      (tok.orth == "," || tok.orth == ";" || tok.orth == ":");
  return info;
}

enum class Bucket { None, Subject, Verb, Object };

// Three-bucket stable reorder of one clause. Unclassified tokens keep
// their relative order, attached to the following classified bucket.
void reorder_clause(const std::vector<TokenInfo>& info, std::size_t begin, std::size_t end,
                    std::vector<std::size_t>& out) {
  bool has_verb = false;
  for (std::size_t i = begin; i < end; ++i)
    if (info[i].verb) has_verb = true;
  if (!has_verb) {
    for (std::size_t i = begin; i < end; ++i) out.push_back(i);
    return;
  }

  std::vector<Bucket> bucket(end - begin, Bucket::None);
  auto at = [&](std::size_t i) -> Bucket& { return bucket[i - begin]; };

  for (std::size_t i = begin; i < end; ++i)
    if (info[i].verb) at(i) = Bucket::Verb;

  // Subject: first nominative noun plus adjacent nominative adjectives.
  for (std::size_t i = begin; i < end; ++i) {
    if (at(i) == Bucket::None && info[i].noun && info[i].nom) {
      at(i) = Bucket::Subject;
      for (std::size_t j = i; j-- > begin && at(j) == Bucket::None &&
                              info[j].adjish && info[j].nom;)
        at(j) = Bucket::Subject;
      for (std::size_t j = i + 1;
           j < end && at(j) == Bucket::None && info[j].adjish && info[j].nom; ++j)
        at(j) = Bucket::Subject;
      break;
    }
  }

  // Object: first accusative/genitive noun plus adjacent matching adjectives.
  for (std::size_t i = begin; i < end; ++i) {
    if (at(i) == Bucket::None && info[i].noun && info[i].acc_gen) {
      at(i) = Bucket::Object;
      for (std::size_t j = i; j-- > begin && at(j) == Bucket::None &&
                              info[j].adjish && info[j].acc_gen;)
        at(j) = Bucket::Object;
      for (std::size_t j = i + 1;
           j < end && at(j) == Bucket::None && info[j].adjish && info[j].acc_gen; ++j)
        at(j) = Bucket::Object;
      break;
    }
  }

  std::vector<std::size_t> subj, verb, obj, pending, trailing;
  for (std::size_t i = begin; i < end; ++i) {
    std::vector<std::size_t>* dest = nullptr;
    switch (at(i)) {
      case Bucket::Subject: dest = &subj; break;
      case Bucket::Verb: dest = &verb; break;
      case Bucket::Object: dest = &obj; break;
      case Bucket::None: pending.push_back(i); continue;
    }
    dest->insert(dest->end(), pending.begin(), pending.end());
    pending.clear();
    dest->push_back(i);
  }
  trailing = std::move(pending);

  for (const auto* part : {&subj, &verb, &obj, &trailing})
    out.insert(out.end(), part->begin(), part->end());
}

}  // namespace

std::vector<std::size_t> svo_order(const AnnotatedSentence& sentence) {
  std::vector<TokenInfo> info;
  info.reserve(sentence.tokens.size());
  for (const auto& tok : sentence.tokens) info.push_back(analyze_token(tok));

  std::vector<std::size_t> order;
  order.reserve(info.size());
  std::size_t clause_start = 0;
  for (std::size_t i = 0; i <= info.size(); ++i) {
    if (i == info.size() || info[i].clause_break) {
      if (i > clause_start) reorder_clause(info, clause_start, i, order);
      if (i < info.size()) order.push_back(i);  // the delimiter itself
      clause_start = i + 1;
    }
  }
  return order;
}

std::vector<std::string> make_variant(const std::vector<AnnotatedSentence>& sentences,
                                      const VariantConfig& cfg) {
  const bool want_inf = cfg.kind == VariantKind::Inf || cfg.kind == VariantKind::InfSvo;
  const bool want_svo = cfg.kind == VariantKind::Svo || cfg.kind == VariantKind::InfSvo;

  std::vector<std::string> lines;
  lines.reserve(sentences.size());
  for (const auto& sentence : sentences) {
    std::vector<std::size_t> order;
    if (want_svo) {
      order = svo_order(sentence);
    } else {
      order.resize(sentence.tokens.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    }

    std::vector<std::string> words;
    words.reserve(order.size() + 1);
    for (std::size_t idx : order) {
      const AnnotatedToken& tok = sentence.tokens[idx];
      bool substitute = want_inf;
      if (substitute && cfg.verbs_only) {
        CTag tag = CTag::parse(selected_analysis(tok).ctag);
        substitute = verb_lemma_classes().count(tag.word_class) > 0;
      }
      words.push_back(substitute ? select_stem(tok) : tok.orth);
    }
    if (cfg.marker && sentence.end_marker) words.push_back(kMarkerToken);
    lines.push_back(join(words, " "));
  }
  return lines;
}

namespace {

// Windows-1250 high half (0x80..0xFF); 0xFFFF marks undefined bytes.
constexpr std::array<char16_t, 128> kCp1250High = {
    0x20AC, 0xFFFF, 0x201A, 0xFFFF, 0x201E, 0x2026, 0x2020, 0x2021,
    0xFFFF, 0x2030, 0x0160, 0x2039, 0x015A, 0x0164, 0x017D, 0x0179,
    0xFFFF, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0xFFFF, 0x2122, 0x0161, 0x203A, 0x015B, 0x0165, 0x017E, 0x017A,
    0x00A0, 0x02C7, 0x02D8, 0x0141, 0x00A4, 0x0104, 0x00A6, 0x00A7,
    0x00A8, 0x00A9, 0x015E, 0x00AB, 0x00AC, 0x00AD, 0x00AE, 0x017B,
    0x00B0, 0x00B1, 0x02DB, 0x0142, 0x00B4, 0x00B5, 0x00B6, 0x00B7,
    0x00B8, 0x0105, 0x015F, 0x00BB, 0x013D, 0x02DD, 0x013E, 0x017C,
    0x0154, 0x00C1, 0x00C2, 0x0102, 0x00C4, 0x0139, 0x0106, 0x00C7,
    0x010C, 0x00C9, 0x0118, 0x00CB, 0x011A, 0x00CD, 0x00CE, 0x010E,
    0x0110, 0x0143, 0x0147, 0x00D3, 0x00D4, 0x0150, 0x00D6, 0x00D7,
    0x0158, 0x016E, 0x00DA, 0x0170, 0x00DC, 0x00DD, 0x0162, 0x00DF,
    0x0155, 0x00E1, 0x00E2, 0x0103, 0x00E4, 0x013A, 0x0107, 0x00E7,
    0x010D, 0x00E9, 0x0119, 0x00EB, 0x011B, 0x00ED, 0x00EE, 0x010F,
    0x0111, 0x0144, 0x0148, 0x00F3, 0x00F4, 0x0151, 0x00F6, 0x00F7,
    0x0159, 0x016F, 0x00FA, 0x0171, 0x00FC, 0x00FD, 0x0163, 0x02D9,
};

const std::map<char32_t, unsigned char>& cp1250_reverse() {
  static const std::map<char32_t, unsigned char> rev = [] {
    std::map<char32_t, unsigned char> m;
    for (std::size_t i = 0; i < kCp1250High.size(); ++i)
      if (kCp1250High[i] != 0xFFFF)
        m[kCp1250High[i]] = static_cast<unsigned char>(0x80 + i);
    return m;
  }();
  return rev;
}

}  // namespace

std::string cp1250_to_utf8(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    unsigned char b = static_cast<unsigned char>(bytes[i]);
    if (b < 0x80) {
      out.push_back(static_cast<char>(b));
      continue;
    }
    char16_t cp = kCp1250High[b - 0x80];
    if (cp == 0xFFFF) throw UnmappableChar(i, b);
    utf8_append(out, cp);
  }
  return out;
}

std::string utf8_to_cp1250(std::string_view utf8) {
  std::string out;
  std::size_t offset = 0;
  for (char32_t cp : utf8_decode(utf8)) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else {
      auto it = cp1250_reverse().find(cp);
      if (it == cp1250_reverse().end()) throw UnmappableChar(offset, cp);
      out.push_back(static_cast<char>(it->second));
    }
    ++offset;
  }
  return out;
}

}  // namespace smt
