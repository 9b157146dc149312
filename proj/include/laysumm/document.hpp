#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laysumm/error.hpp"

namespace laysumm {

enum class Dataset { Plos, Elife };

inline std::string_view dataset_name(Dataset d) { return d == Dataset::Plos ? "plos" : "elife"; }

inline Dataset parse_dataset(std::string_view name) {
  if (name == "plos") return Dataset::Plos;
  if (name == "elife") return Dataset::Elife;
  throw Error(ErrorKind::InvalidParameter, "unknown dataset '" + std::string(name) + "'",
              std::string(name));
}

/// One scientific article.
struct Document {
  std::string id;
  std::string abstract;
  std::optional<std::string> introduction;
  std::optional<std::string> article;
  std::optional<std::string> lay_summary;  // absent on the test split
  std::vector<std::string> headings;
  std::vector<std::string> keywords;
  Dataset dataset = Dataset::Elife;

  bool operator==(const Document&) const = default;
};

/// One generated lay summary for a document, labelled with the prompt
/// variant or decoding preset that produced it.
struct CandidateSummary {
  std::string document_id;
  std::string candidate_id;
  std::string strategy;
  std::string text;

  bool operator==(const CandidateSummary&) const = default;
};

}  // namespace laysumm
