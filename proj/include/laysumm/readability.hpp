#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "laysumm/error.hpp"
#include "laysumm/resources.hpp"
#include "laysumm/text.hpp"

namespace laysumm {

struct ReadabilityScores {
  double fkgl = 0.0;
  double dcrs = 0.0;
  double cli = 0.0;
};

/// The Dale-Chall list of words familiar to fourth graders.
class FamiliarWordList {
 public:
  explicit FamiliarWordList(const std::vector<std::string>& entries) {
    if (entries.empty()) throw Error(ErrorKind::InvalidWordList, "familiar word list is empty");
    for (const auto& word : entries) {
      if (word.empty() || to_lower(word) != word)
        throw Error(ErrorKind::InvalidWordList, "entry is not a lowercase word: '" + word + "'", word);
      if (!words_.insert(word).second)
        throw Error(ErrorKind::InvalidWordList, "duplicate entry '" + word + "'", word);
    }
  }

  static FamiliarWordList load(const std::filesystem::path& path) {
    return FamiliarWordList(read_data_lines(path));
  }

  bool contains(const std::string& lower_word) const { return words_.count(lower_word) > 0; }

  // Regular inflections (-s, -es, -ed, -ing, -d) of listed words are familiar,
  // with doubled consonants undone (stopped -> stop) and a final e restored
  // (making -> make).
  bool is_familiar(const std::string& lower_word) const {
    if (contains(lower_word)) return true;
    static constexpr std::string_view suffixes[] = {"s", "es", "ed", "ing", "d"};
    for (std::string_view suffix : suffixes) {
      if (lower_word.size() <= suffix.size() + 1 || !std::string_view(lower_word).ends_with(suffix))
        continue;
      const std::string stem = lower_word.substr(0, lower_word.size() - suffix.size());
      if (contains(stem) || contains(stem + "e")) return true;
      const auto len = stem.size();
      if (len >= 2 && stem[len - 1] == stem[len - 2] && !detail::is_vowel(stem[len - 1]) &&
          contains(stem.substr(0, len - 1)))
        return true;
    }
    return false;
  }

  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

namespace detail {

inline void require_words(const TokenizedText& text) {
  if (text.word_count() == 0 || text.sentence_count() == 0)
    throw Error(ErrorKind::EmptyText, "readability needs at least one word");
}

}  // namespace detail

/// Flesch-Kincaid grade level:
/// 0.39 * words/sentences + 11.8 * syllables/words - 15.59
inline double fkgl(const TokenizedText& text, const SyllableTable& syllables = {}) {
  detail::require_words(text);
  std::size_t syllable_total = 0;
  for (const auto& token : text.tokens) syllable_total += token_syllables(token, syllables);
  const double words = static_cast<double>(text.word_count());
  const double sentences = static_cast<double>(text.sentence_count());
  return 0.39 * (words / sentences) + 11.8 * (static_cast<double>(syllable_total) / words) - 15.59;
}

/// Percentage of words that are not familiar.
inline double percent_difficult_words(const TokenizedText& text, const FamiliarWordList& list) {
  detail::require_words(text);
  std::size_t difficult = 0;
  for (const auto& token : text.tokens)
    if (!list.is_familiar(token.lower)) ++difficult;
  return 100.0 * static_cast<double>(difficult) / static_cast<double>(text.word_count());
}

/// Dale-Chall raw score: 0.1579 * PDW + 0.0496 * words/sentences, plus
/// 3.6365 when more than 5% of the words are difficult.
inline double dcrs(const TokenizedText& text, const FamiliarWordList& list) {
  const double pdw = percent_difficult_words(text, list);
  const double words_per_sentence =
      static_cast<double>(text.word_count()) / static_cast<double>(text.sentence_count());
  double score = 0.1579 * pdw + 0.0496 * words_per_sentence;
  if (pdw > 5.0) score += 3.6365;
  return score;
}

/// Coleman-Liau index: 0.0588 * L - 0.296 * S - 15.8 with L letters and S
/// sentences per 100 words.
inline double cli(const TokenizedText& text) {
  detail::require_words(text);
  const double words = static_cast<double>(text.word_count());
  const double letters_per_100 = 100.0 * static_cast<double>(text.letter_count) / words;
  const double sentences_per_100 = 100.0 * static_cast<double>(text.sentence_count()) / words;
  return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8;
}

inline ReadabilityScores readability_all(std::string_view text, const FamiliarWordList& list,
                                         const TextRules& rules = {}) {
  const TokenizedText tokens = tokenize(text, rules.abbreviations);
  return {fkgl(tokens, rules.syllables), dcrs(tokens, list), cli(tokens)};
}

}  // namespace laysumm
