#pragma once

// Dynamic Expert Selection: pick the best of several candidate summaries for
// one document from reference-free readability and factuality metrics.
//
//   1. readability values are negated so that larger means easier to read;
//   2. every metric is min-max normalised across the candidate pool;
//   3. R and F are the means of the normalised readability and factuality
//      metrics, S = w_r * R + w_f * F;
//   4. the candidate with the largest S wins, earliest candidate on ties.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laysumm/error.hpp"

namespace laysumm {

using MetricMap = std::map<std::string, double>;

struct MetricVector {
  std::string candidate_id;
  MetricMap readability;  // e.g. fkgl, dcrs, cli (raw, lower = easier)
  MetricMap factuality;   // e.g. alignscore, summac (raw, higher = better)
};

enum class TieBreak { LowestIndex };

struct SelectionConfig {
  double w_readability = 0.5;
  double w_factuality = 0.5;
  bool negate_readability = true;
  TieBreak tie_break = TieBreak::LowestIndex;
  double degenerate_norm_value = 0.5;

  void validate() const {
    auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!in_unit(w_readability) || !in_unit(w_factuality))
      throw Error(ErrorKind::InvalidParameter, "weights must lie in [0, 1]");
    if (std::abs(w_readability + w_factuality - 1.0) > 1e-12)
      throw Error(ErrorKind::InvalidParameter, "weights must sum to 1");
    if (!in_unit(degenerate_norm_value))
      throw Error(ErrorKind::InvalidParameter, "degenerate normalisation value must lie in [0, 1]");
  }
};

struct CandidateScore {
  std::string candidate_id;
  MetricMap normalized_readability;
  MetricMap normalized_factuality;
  double readability_mean = 0.0;  // R
  double factuality_mean = 0.0;   // F
  double overall = 0.0;           // S
};

struct SelectionResult {
  std::string chosen_candidate_id;
  std::size_t chosen_index = 0;
  std::vector<CandidateScore> per_candidate;
};

/// (v - min) / (max - min) elementwise; a constant list maps every entry to
/// `degenerate_value`.
inline std::vector<double> normalize_minmax(std::span<const double> values,
                                            double degenerate_value = 0.5) {
  if (values.empty()) throw Error(ErrorKind::InvalidParameter, "cannot normalise an empty list");
  double lo = values.front();
  double hi = values.front();
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParameter, "non-finite metric value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> out(values.size(), degenerate_value);
  if (hi > lo) {
    const double range = hi - lo;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / range;
  }
  return out;
}

namespace detail {

inline bool same_keys(const MetricMap& a, const MetricMap& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
    if (ia->first != ib->first) return false;
  return true;
}

// Normalises each metric column of `group` across the pool.
inline std::vector<MetricMap> normalize_group(std::span<const MetricVector> pool,
                                              MetricMap MetricVector::*group, bool negate,
                                              double degenerate) {
  std::vector<MetricMap> out(pool.size());
  for (const auto& [name, unused] : pool.front().*group) {
    std::vector<double> column;
    column.reserve(pool.size());
    for (const auto& candidate : pool) {
      const double raw = (candidate.*group).at(name);
      column.push_back(negate ? -raw : raw);
    }
    const auto normalized = normalize_minmax(column, degenerate);
    for (std::size_t i = 0; i < pool.size(); ++i) out[i][name] = normalized[i];
  }
  return out;
}

inline double mean_or(const MetricMap& values, double fallback) {
  if (values.empty()) return fallback;
  double sum = 0.0;
  for (const auto& [name, v] : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace detail

/// Throws InvalidPool unless every candidate carries the same metric names
/// in both groups.
inline void check_pool(std::span<const MetricVector> pool) {
  if (pool.empty()) throw Error(ErrorKind::InvalidParameter, "candidate pool is empty");
  const auto& first = pool.front();
  for (const auto& candidate : pool) {
    if (!detail::same_keys(candidate.readability, first.readability) ||
        !detail::same_keys(candidate.factuality, first.factuality))
      throw Error(ErrorKind::InvalidPool,
                  "candidate '" + candidate.candidate_id + "' has a different metric set than '" +
                      first.candidate_id + "'",
                  candidate.candidate_id);
  }
}

/// Scores every candidate of one document's pool and picks the winner.
/// A metric group with no metrics contributes the degenerate value.
inline SelectionResult select(std::span<const MetricVector> pool, const SelectionConfig& config) {
  config.validate();
  check_pool(pool);

  const auto readability = detail::normalize_group(pool, &MetricVector::readability,
                                                   config.negate_readability,
                                                   config.degenerate_norm_value);
  const auto factuality = detail::normalize_group(pool, &MetricVector::factuality, false,
                                                  config.degenerate_norm_value);

  SelectionResult result;
  result.per_candidate.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    CandidateScore score;
    score.candidate_id = pool[i].candidate_id;
    score.normalized_readability = readability[i];
    score.normalized_factuality = factuality[i];
    score.readability_mean = detail::mean_or(readability[i], config.degenerate_norm_value);
    score.factuality_mean = detail::mean_or(factuality[i], config.degenerate_norm_value);
    score.overall =
        config.w_readability * score.readability_mean + config.w_factuality * score.factuality_mean;
    result.per_candidate.push_back(std::move(score));
  }

  // TieBreak::LowestIndex: strict comparison keeps the earliest maximum.
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.per_candidate.size(); ++i)
    if (result.per_candidate[i].overall > result.per_candidate[best].overall) best = i;
  result.chosen_index = best;
  result.chosen_candidate_id = result.per_candidate[best].candidate_id;
  return result;
}

inline const std::map<std::string, SelectionConfig>& selection_presets() {
  static const std::map<std::string, SelectionConfig> presets = [] {
    std::map<std::string, SelectionConfig> m;
    SelectionConfig elife;
    elife.w_readability = 0.675;
    elife.w_factuality = 0.325;
    SelectionConfig plos;
    plos.w_readability = 0.25;
    plos.w_factuality = 0.75;
    m.emplace("elife", elife);
    m.emplace("plos", plos);
    return m;
  }();
  return presets;
}

inline SelectionConfig selection_preset(std::string_view dataset) {
  const auto& presets = selection_presets();
  auto it = presets.find(std::string(dataset));
  if (it == presets.end())
    throw Error(ErrorKind::InvalidParameter, "unknown selection preset '" + std::string(dataset) + "'",
                std::string(dataset));
  return it->second;
}

}  // namespace laysumm
