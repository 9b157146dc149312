#pragma once

// Shared text statistics: NFC normalisation, word tokens, sentence spans,
// letter counts and syllable estimates. Everything the readability indices
// consume comes from here so that all metrics agree on their counts.

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "laysumm/error.hpp"
#include "laysumm/resources.hpp"

namespace laysumm {

struct Token {
  std::string text;   // original case, NFC
  std::string lower;  // lowercased form
};

/// Half-open range [begin, end) of token indices.
struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool operator==(const SentenceSpan&) const = default;
};

struct TokenizedText {
  std::vector<Token> tokens;
  std::vector<SentenceSpan> sentences;
  std::size_t letter_count = 0;

  std::size_t word_count() const { return tokens.size(); }
  std::size_t sentence_count() const { return sentences.size(); }
};

namespace detail {

struct CodePoint {
  UChar32 value;
  std::size_t offset;  // byte offset of the first code unit
};

inline std::vector<CodePoint> decode_utf8(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const auto start = static_cast<std::size_t>(i);
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) throw Error(ErrorKind::InvalidParameter, "text is not valid UTF-8");
    out.push_back({c, start});
  }
  return out;
}

inline void append_utf8(std::string& out, UChar32 c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, c);
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

inline bool is_word_char(UChar32 c) { return u_isalpha(c) || u_isdigit(c); }
inline bool is_apostrophe(UChar32 c) { return c == U'\'' || c == 0x2019; }
inline bool is_hyphen(UChar32 c) { return c == U'-' || c == 0x2010 || c == 0x2011; }
inline bool is_joiner(UChar32 c) { return is_apostrophe(c) || is_hyphen(c); }
inline bool is_terminal(UChar32 c) { return c == U'.' || c == U'!' || c == U'?'; }
inline bool is_space(UChar32 c) { return u_isUWhiteSpace(c); }

inline bool is_closer(UChar32 c) {
  return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == 0x201D || c == 0x2019 ||
         c == 0x00BB;
}

inline bool is_opener(UChar32 c) {
  return c == U'"' || c == U'\'' || c == U'(' || c == U'[' || c == 0x201C || c == 0x2018 ||
         c == 0x00AB;
}

}  // namespace detail

inline std::string normalize_nfc(std::string_view text) {
  detail::decode_utf8(text);  // rejects malformed input before ICU substitutes U+FFFD
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorKind::InvalidParameter, "NFC normaliser unavailable");
  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw Error(ErrorKind::InvalidParameter, "NFC normalisation failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

inline std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const auto& cp : detail::decode_utf8(text)) detail::append_utf8(out, u_tolower(cp.value));
  return out;
}

/// Abbreviations whose trailing period must not end a sentence ("et al.",
/// "Fig.", "e.g."). Matching is case-sensitive and anchored at a word start.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  explicit AbbreviationList(std::vector<std::string> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
  }

  static AbbreviationList load(const std::filesystem::path& path) {
    return AbbreviationList(read_data_lines(path));
  }

  /// True when `prefix` (text up to and including a period) ends with a
  /// listed abbreviation that starts at a word boundary.
  bool ends_with_abbreviation(std::string_view prefix) const {
    for (const auto& entry : entries_) {
      if (prefix.size() < entry.size() || !prefix.ends_with(entry)) continue;
      if (prefix.size() == entry.size()) return true;
      const auto before = static_cast<unsigned char>(prefix[prefix.size() - entry.size() - 1]);
      if (before < 0x80 && !std::isalnum(before)) return true;
    }
    return false;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::string> entries_;
};

/// Tokenises NFC-normalised text into words and sentences.
///
/// Words are maximal runs of letters and digits, allowing apostrophes and
/// hyphens between two word characters. A run of `.`, `!`, `?` ends a
/// sentence when it is followed (after optional closing quotes/brackets) by
/// end of text, or by whitespace and an uppercase letter, unless it is a
/// single period closing a listed abbreviation.
inline TokenizedText tokenize(std::string_view raw, const AbbreviationList& abbreviations = {}) {
  const std::string text = normalize_nfc(raw);
  const auto cps = detail::decode_utf8(text);
  const std::size_t n = cps.size();
  auto byte_at = [&](std::size_t i) { return i < n ? cps[i].offset : text.size(); };

  TokenizedText out;
  std::size_t sentence_start = 0;
  auto close_sentence = [&] {
    if (out.tokens.size() > sentence_start) {
      out.sentences.push_back({sentence_start, out.tokens.size()});
      sentence_start = out.tokens.size();
    }
  };

  std::size_t i = 0;
  while (i < n) {
    const UChar32 c = cps[i].value;
    if (detail::is_word_char(c)) {
      std::size_t j = i + 1;
      while (j < n) {
        if (detail::is_word_char(cps[j].value)) {
          ++j;
        } else if (detail::is_joiner(cps[j].value) && j + 1 < n &&
                   detail::is_word_char(cps[j + 1].value)) {
          j += 2;
        } else {
          break;
        }
      }
      Token token;
      token.text = text.substr(byte_at(i), byte_at(j) - byte_at(i));
      token.lower = to_lower(token.text);
      for (std::size_t k = i; k < j; ++k)
        if (u_isalpha(cps[k].value)) ++out.letter_count;
      out.tokens.push_back(std::move(token));
      i = j;
      continue;
    }
    if (detail::is_terminal(c)) {
      std::size_t j = i;
      while (j < n && detail::is_terminal(cps[j].value)) ++j;
      std::size_t k = j;
      while (k < n && detail::is_closer(cps[k].value)) ++k;
      bool boundary = false;
      if (k == n) {
        boundary = true;
      } else if (detail::is_space(cps[k].value)) {
        std::size_t m = k;
        while (m < n && detail::is_space(cps[m].value)) ++m;
        while (m < n && detail::is_opener(cps[m].value)) ++m;
        boundary = m == n || u_isupper(cps[m].value);
      }
      if (boundary && j == i + 1 && c == U'.' &&
          abbreviations.ends_with_abbreviation(std::string_view(text).substr(0, byte_at(i) + 1))) {
        boundary = false;
      }
      if (boundary) close_sentence();
      i = j;
      continue;
    }
    ++i;
  }
  close_sentence();

  if (out.tokens.empty()) throw Error(ErrorKind::EmptyText, "text contains no words");
  return out;
}

/// Per-word syllable overrides, one "word count" pair per line.
class SyllableTable {
 public:
  SyllableTable() = default;
  explicit SyllableTable(std::unordered_map<std::string, int> entries) : entries_(std::move(entries)) {}

  static SyllableTable load(const std::filesystem::path& path) {
    std::unordered_map<std::string, int> entries;
    for (const auto& line : read_data_lines(path)) {
      const auto space = line.find_last_of(" \t");
      if (space == std::string::npos)
        throw Error(ErrorKind::MalformedRecord, "bad syllable entry '" + line + "'", path.string());
      const std::string word = line.substr(0, line.find_first_of(" \t"));
      int count = 0;
      try {
        count = std::stoi(line.substr(space + 1));
      } catch (const std::exception&) {
        throw Error(ErrorKind::MalformedRecord, "bad syllable count '" + line + "'", path.string());
      }
      if (count < 1) throw Error(ErrorKind::MalformedRecord, "syllable count < 1 for " + word);
      entries[to_lower(word)] = count;
    }
    return SyllableTable(std::move(entries));
  }

  const int* find(const std::string& lower_word) const {
    auto it = entries_.find(lower_word);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, int> entries_;
};

namespace detail {

inline bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

// Vowel groups minus a silent final "e" (kept for consonant + "le").
inline int vowel_group_estimate(std::string_view w) {
  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  if (w.ends_with('e')) {
    const bool consonant_le = w.size() > 2 && w.ends_with("le") && !is_vowel(w[w.size() - 3]);
    if (!consonant_le) --groups;
  }
  return std::max(groups, 1);
}

inline bool has_letter(std::string_view word) {
  for (const auto& cp : decode_utf8(word))
    if (u_isalpha(cp.value)) return true;
  return false;
}

}  // namespace detail

/// Estimated syllables of one word token. Hyphenated compounds sum their
/// parts; digit-only parts count as one syllable each.
inline int count_syllables(std::string_view word, const SyllableTable& table = {}) {
  if (!detail::has_letter(word))
    throw Error(ErrorKind::InvalidWord, "word has no letters: '" + std::string(word) + "'");
  const std::string lower = to_lower(word);
  if (const int* hit = table.find(lower)) return *hit;

  std::vector<std::string> parts(1);
  for (const auto& cp : detail::decode_utf8(lower)) {
    if (detail::is_hyphen(cp.value)) {
      parts.emplace_back();
    } else if (!detail::is_apostrophe(cp.value)) {
      detail::append_utf8(parts.back(), cp.value);
    }
  }
  int total = 0;
  for (const auto& part : parts) {
    if (part.empty()) continue;
    if (const int* hit = table.find(part)) {
      total += *hit;
    } else if (detail::has_letter(part)) {
      total += detail::vowel_group_estimate(part);
    } else {
      total += 1;
    }
  }
  return std::max(total, 1);
}

/// Syllables for any token, including digit-only tokens (one per group).
inline int token_syllables(const Token& token, const SyllableTable& table = {}) {
  if (!detail::has_letter(token.text)) return 1;
  return count_syllables(token.text, table);
}

/// Abbreviation list and syllable overrides loaded from a data directory.
struct TextRules {
  AbbreviationList abbreviations;
  SyllableTable syllables;

  static TextRules load(const std::filesystem::path& dir) {
    return {AbbreviationList::load(dir / "abbreviations.txt"),
            SyllableTable::load(dir / "syllable_exceptions.txt")};
  }
};

}  // namespace laysumm
