#pragma once

// Ranks corpus examples by the average normalised readability and
// factuality of their reference lay summaries; the best k become few-shot
// exemplars.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laysumm/des.hpp"
#include "laysumm/error.hpp"
#include "laysumm/readability.hpp"
#include "laysumm/scorer.hpp"

namespace laysumm {

struct RankedExample {
  std::string document_id;
  double rank_score = 0.0;
  std::size_t rank = 0;  // 1 = best
};

struct FewShotConfig {
  std::size_t k = 1;
  std::string dataset;
};

inline FewShotConfig fewshot_preset(std::string_view dataset) {
  if (dataset == "elife") return {2, "elife"};
  if (dataset == "plos") return {3, "plos"};
  throw Error(ErrorKind::InvalidParameter, "unknown few-shot preset '" + std::string(dataset) + "'",
              std::string(dataset));
}

enum class RankMean {
  Flat,     // mean over every normalised metric
  Grouped,  // (mean readability + mean factuality) / 2
};

/// One ranking input: `candidate_id` of each vector is the document id.
/// Metrics are normalised across the whole corpus, readability negated.
inline std::vector<RankedExample> rank_metric_vectors(std::span<const MetricVector> corpus,
                                                      RankMean mean = RankMean::Flat,
                                                      double degenerate_value = 0.5) {
  if (corpus.empty()) throw Error(ErrorKind::InvalidParameter, "cannot rank an empty corpus");
  SelectionConfig config;
  config.degenerate_norm_value = degenerate_value;
  const SelectionResult scored = select(corpus, config);

  std::vector<RankedExample> out;
  out.reserve(corpus.size());
  for (const auto& c : scored.per_candidate) {
    RankedExample example;
    example.document_id = c.candidate_id;
    if (mean == RankMean::Grouped) {
      example.rank_score = (c.readability_mean + c.factuality_mean) / 2.0;
    } else {
      double sum = 0.0;
      for (const auto& [name, v] : c.normalized_readability) sum += v;
      for (const auto& [name, v] : c.normalized_factuality) sum += v;
      const std::size_t count = c.normalized_readability.size() + c.normalized_factuality.size();
      example.rank_score = count == 0 ? degenerate_value : sum / static_cast<double>(count);
    }
    out.push_back(std::move(example));
  }
  std::sort(out.begin(), out.end(), [](const RankedExample& a, const RankedExample& b) {
    if (a.rank_score != b.rank_score) return a.rank_score > b.rank_score;
    return a.document_id < b.document_id;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

struct ExampleInput {
  std::string document_id;
  std::string lay_summary;
  std::string source;  // abstract or full article, scored against the summary
};

/// Computes FKGL/DCRS/CLI of every lay summary and the factuality of each
/// summary against its source through `scorers`, then ranks the corpus.
/// A per-example scorer error aborts the ranking with ScorerError.
inline std::vector<RankedExample> rank_examples(std::span<const ExampleInput> corpus,
                                                std::span<ScorerConnection* const> scorers,
                                                const FamiliarWordList& list,
                                                const TextRules& rules = {},
                                                RankMean mean = RankMean::Flat) {
  if (corpus.empty()) throw Error(ErrorKind::InvalidParameter, "cannot rank an empty corpus");
  std::vector<MetricVector> vectors(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto scores = readability_all(corpus[i].lay_summary, list, rules);
    vectors[i].candidate_id = corpus[i].document_id;
    vectors[i].readability = {{"cli", scores.cli}, {"dcrs", scores.dcrs}, {"fkgl", scores.fkgl}};
  }
  for (ScorerConnection* scorer : scorers) {
    std::vector<ScoreRequest> requests;
    requests.reserve(corpus.size());
    for (const auto& example : corpus)
      requests.push_back({example.document_id, example.lay_summary, example.source, std::nullopt});
    const auto responses = score_batch(*scorer, requests);
    const std::string& name = scorer->endpoint().name;
    for (std::size_t i = 0; i < responses.size(); ++i) {
      if (!responses[i].ok())
        throw Error(ErrorKind::ScorerError,
                    "scorer '" + name + "' failed on '" + corpus[i].document_id +
                        "': " + responses[i].error.value_or("?"),
                    corpus[i].document_id);
      vectors[i].factuality[name] = *responses[i].score;
    }
  }
  return rank_metric_vectors(vectors, mean);
}

/// Ids of ranks 1..k in rank order.
inline std::vector<std::string> top_k(std::span<const RankedExample> ranked, const FewShotConfig& config) {
  if (config.k < 1) throw Error(ErrorKind::InvalidParameter, "k must be at least 1");
  if (config.k > ranked.size())
    throw Error(ErrorKind::InvalidParameter, "k = " + std::to_string(config.k) + " exceeds the " +
                                                 std::to_string(ranked.size()) + " ranked examples");
  std::vector<const RankedExample*> ordered;
  for (const auto& r : ranked) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->rank < b->rank; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < config.k; ++i) out.push_back(ordered[i]->document_id);
  return out;
}

}  // namespace laysumm
