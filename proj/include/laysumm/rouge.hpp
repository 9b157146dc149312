#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laysumm/error.hpp"
#include "laysumm/porter.hpp"
#include "laysumm/text.hpp"

namespace laysumm {

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool operator==(const PrecisionRecallF1&) const = default;
};

struct RougeScores {
  PrecisionRecallF1 r1;
  PrecisionRecallF1 r2;
  PrecisionRecallF1 rl;
  bool operator==(const RougeScores&) const = default;
};

inline PrecisionRecallF1 make_prf(std::size_t overlap, std::size_t candidate_total,
                                  std::size_t reference_total) {
  if (candidate_total == 0 || reference_total == 0) return {};
  PrecisionRecallF1 out;
  out.precision = static_cast<double>(overlap) / static_cast<double>(candidate_total);
  out.recall = static_cast<double>(overlap) / static_cast<double>(reference_total);
  if (out.precision + out.recall > 0.0)
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

/// Lowercased alphanumeric runs (ASCII and Unicode letters/digits); every
/// other character separates tokens. Optionally Porter-stemmed.
inline std::vector<std::string> rouge_tokens(std::string_view text, bool stem = false) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    tokens.push_back(stem ? porter_stem(current) : current);
    current.clear();
  };
  for (const auto& cp : detail::decode_utf8(text)) {
    if (detail::is_word_char(cp.value)) {
      detail::append_utf8(current, u_tolower(cp.value));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

/// ROUGE-N: clipped n-gram overlap over candidate and reference n-gram counts.
template <typename T>
PrecisionRecallF1 rouge_n(std::span<const T> candidate, std::span<const T> reference, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "ROUGE-N needs n >= 1");
  auto count_ngrams = [n](std::span<const T> seq) {
    std::map<std::vector<T>, std::size_t> counts;
    if (seq.size() >= n)
      for (std::size_t i = 0; i + n <= seq.size(); ++i)
        ++counts[std::vector<T>(seq.begin() + static_cast<std::ptrdiff_t>(i),
                                seq.begin() + static_cast<std::ptrdiff_t>(i + n))];
    return counts;
  };
  const auto cand = count_ngrams(candidate);
  const auto ref = count_ngrams(reference);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand)
    if (auto it = ref.find(gram); it != ref.end()) overlap += std::min(count, it->second);
  const std::size_t cand_total = candidate.size() >= n ? candidate.size() - n + 1 : 0;
  const std::size_t ref_total = reference.size() >= n ? reference.size() - n + 1 : 0;
  return make_prf(overlap, cand_total, ref_total);
}

/// Length of the longest common subsequence (two-row dynamic programme).
template <typename T>
std::size_t lcs_length(std::span<const T> a, std::span<const T> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Sentence-level ROUGE-L.
template <typename T>
PrecisionRecallF1 rouge_l(std::span<const T> candidate, std::span<const T> reference) {
  return make_prf(lcs_length(candidate, reference), candidate.size(), reference.size());
}

template <typename T>
PrecisionRecallF1 rouge_n(const std::vector<T>& candidate, const std::vector<T>& reference,
                          std::size_t n) {
  return rouge_n(std::span<const T>(candidate), std::span<const T>(reference), n);
}

template <typename T>
PrecisionRecallF1 rouge_l(const std::vector<T>& candidate, const std::vector<T>& reference) {
  return rouge_l(std::span<const T>(candidate), std::span<const T>(reference));
}

inline RougeScores rouge_all(std::string_view candidate, std::string_view reference,
                             bool stem = false) {
  const auto c = rouge_tokens(candidate, stem);
  const auto r = rouge_tokens(reference, stem);
  const std::span<const std::string> cs(c), rs(r);
  return {rouge_n(cs, rs, 1), rouge_n(cs, rs, 2), rouge_l(cs, rs)};
}

}  // namespace laysumm
