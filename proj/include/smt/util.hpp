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

#ifndef SMT_UTIL_HPP
#define SMT_UTIL_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smt {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_ws(std::string_view line);
std::vector<std::string> split_on(std::string_view text, char sep);
std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");
std::string trim(std::string_view s);

// UTF-8 helpers. Decoding rejects overlong forms, surrogates and
// codepoints above U+10FFFF.
bool valid_utf8(std::string_view bytes, std::size_t* bad_offset = nullptr);
std::vector<char32_t> utf8_decode(std::string_view bytes);
void utf8_append(std::string& out, char32_t cp);
std::string utf8_encode(const std::vector<char32_t>& cps);

// Lowercases ASCII, Latin-1 Supplement and Latin Extended-A letters
// (covers Polish diacritics). Other codepoints pass through.
char32_t latin_lower(char32_t cp);
std::string latin_lower(std::string_view utf8);

// True for codepoints we accept as "language" characters: Latin letters
// including the Latin-1 and Extended-A blocks, digits, and ASCII
// punctuation. Used by the non-language-symbol filter.
bool latin_alphabet_char(char32_t cp);

// Deterministic RNG (splitmix64). Shuffling and sampling are hand-rolled
// so results are identical across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform integer in [0, n), n >= 1. Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n);
  double unit();  // uniform in [0,1)

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

std::vector<std::string> read_lines(const std::filesystem::path& file);
void write_lines(const std::filesystem::path& file, const std::vector<std::string>& lines);
std::string read_file(const std::filesystem::path& file);
void write_file(const std::filesystem::path& file, std::string_view content);

// Formats a double with a fixed number of decimals (C locale, no
// locale-dependent separators).
std::string format_fixed(double value, int decimals);

}  // namespace smt

#endif  // SMT_UTIL_HPP
