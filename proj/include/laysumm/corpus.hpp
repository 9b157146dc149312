#pragma once

// JSONL ingestion of article corpora and candidate summaries, and JSONL
// persistence of metric vectors, selections, rankings and prompts.
//
// Two article layouts are accepted, one JSON object per line:
//
//   shared-task  {"id", "article", "headings", "keywords"?, "lay_summary"?}
//                where `article` holds one section per heading, separated
//                by the section delimiter (default "\n"). The first section
//                is the abstract; the section headed "Introduction" (case
//                insensitive) is the introduction.
//   explicit     {"id", "abstract", "introduction"?, "article"?,
//                 "lay_summary"?, "headings"?, "keywords"?}

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "laysumm/des.hpp"
#include "laysumm/document.hpp"
#include "laysumm/error.hpp"
#include "laysumm/resources.hpp"
#include "laysumm/rouge.hpp"

namespace laysumm {

using json = nlohmann::ordered_json;

struct LoadOptions {
  bool lenient = false;  // skip bad records with a warning instead of failing
  std::string section_delimiter = "\n";
};

template <typename T>
struct Loaded {
  std::vector<T> records;
  std::vector<std::string> warnings;  // one per skipped record

  std::size_t skipped() const { return warnings.size(); }
};

namespace detail {

inline std::vector<std::pair<std::size_t, std::string>> jsonl_lines(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.emplace_back(number, line);
  }
  return out;
}

inline json parse_object(const std::string& line, std::size_t number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedRecord, std::string("invalid JSON: ") + e.what(), {}, number);
  }
  if (!j.is_object()) throw Error(ErrorKind::MalformedRecord, "record is not a JSON object", {}, number);
  return j;
}

inline std::optional<std::string> optional_string(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string())
    throw Error(ErrorKind::MalformedRecord, std::string("field '") + key + "' must be a string", key, line);
  return it->get<std::string>();
}

inline std::string required_string(const json& j, const char* key, std::size_t line) {
  auto value = optional_string(j, key, line);
  if (!value) throw Error(ErrorKind::MalformedRecord, std::string("missing field '") + key + "'", key, line);
  return *value;
}

inline std::vector<std::string> string_list(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_array())
    throw Error(ErrorKind::MalformedRecord, std::string("field '") + key + "' must be a list", key, line);
  std::vector<std::string> out;
  for (const auto& item : *it) {
    if (!item.is_string())
      throw Error(ErrorKind::MalformedRecord, std::string("field '") + key + "' must hold strings", key, line);
    out.push_back(item.get<std::string>());
  }
  return out;
}

inline std::vector<std::string> split(const std::string& text, const std::string& delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(delimiter, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + delimiter.size();
  }
}

inline bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

inline bool heading_is_introduction(std::string heading) {
  std::transform(heading.begin(), heading.end(), heading.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return heading.find("introduction") != std::string::npos;
}

inline Document parse_document(const json& j, std::size_t line, Dataset dataset,
                               const LoadOptions& options) {
  Document doc;
  doc.id = required_string(j, "id", line);
  if (doc.id.empty()) throw Error(ErrorKind::MalformedRecord, "empty id", "id", line);
  doc.dataset = dataset;
  doc.article = optional_string(j, "article", line);
  doc.lay_summary = optional_string(j, "lay_summary", line);
  doc.introduction = optional_string(j, "introduction", line);
  doc.headings = string_list(j, "headings", line);
  doc.keywords = string_list(j, "keywords", line);

  std::optional<std::string> abstract = optional_string(j, "abstract", line);
  if (!abstract && doc.article && !doc.headings.empty()) {
    const auto sections = split(*doc.article, options.section_delimiter);
    if (sections.size() != doc.headings.size())
      throw Error(ErrorKind::MalformedRecord,
                  "article has " + std::to_string(sections.size()) + " sections but " +
                      std::to_string(doc.headings.size()) + " headings",
                  doc.id, line);
    abstract = sections.front();
    if (!doc.introduction) {
      for (std::size_t i = 1; i < sections.size(); ++i) {
        if (heading_is_introduction(doc.headings[i])) {
          doc.introduction = sections[i];
          break;
        }
      }
    }
  }
  if (!abstract || is_blank(*abstract))
    throw Error(ErrorKind::MissingAbstract, "record '" + doc.id + "' has no abstract", doc.id, line);
  doc.abstract = *abstract;
  return doc;
}

template <typename T, typename Parse>
Loaded<T> load_records(const std::filesystem::path& path, const LoadOptions& options, Parse parse) {
  Loaded<T> out;
  for (const auto& [number, line] : jsonl_lines(path)) {
    try {
      out.records.push_back(parse(parse_object(line, number), number));
    } catch (const Error& e) {
      const bool record_level = e.kind() != ErrorKind::IoError;
      if (!options.lenient || !record_level) throw;
      out.warnings.push_back(e.what());
    }
  }
  return out;
}

}  // namespace detail

/// Loads an article corpus. In strict mode the first bad record aborts the
/// whole load; in lenient mode bad records are skipped and reported.
inline Loaded<Document> load_corpus(const std::filesystem::path& path, Dataset dataset,
                                    const LoadOptions& options = {}) {
  std::set<std::string> seen;
  return detail::load_records<Document>(path, options, [&](const json& j, std::size_t line) {
    Document doc = detail::parse_document(j, line, dataset, options);
    if (!seen.insert(doc.id).second)
      throw Error(ErrorKind::DuplicateId, "duplicate document id '" + doc.id + "'", doc.id, line);
    return doc;
  });
}

inline Loaded<CandidateSummary> load_candidates(const std::filesystem::path& path,
                                                const LoadOptions& options = {}) {
  std::set<std::pair<std::string, std::string>> seen;
  return detail::load_records<CandidateSummary>(path, options, [&](const json& j, std::size_t line) {
    CandidateSummary c;
    c.document_id = detail::required_string(j, "document_id", line);
    c.candidate_id = detail::required_string(j, "candidate_id", line);
    c.strategy = detail::required_string(j, "strategy", line);
    c.text = detail::required_string(j, "text", line);
    if (detail::is_blank(c.text))
      throw Error(ErrorKind::EmptyText, "candidate '" + c.candidate_id + "' has empty text",
                  c.candidate_id, line);
    if (!seen.emplace(c.document_id, c.candidate_id).second)
      throw Error(ErrorKind::DuplicateId,
                  "duplicate candidate '" + c.document_id + "/" + c.candidate_id + "'", c.candidate_id,
                  line);
    return c;
  });
}

inline void save_candidates(const std::filesystem::path& path, std::span<const CandidateSummary> candidates) {
  std::string out;
  for (const auto& c : candidates) {
    json j;
    j["document_id"] = c.document_id;
    j["candidate_id"] = c.candidate_id;
    j["strategy"] = c.strategy;
    j["text"] = c.text;
    out += j.dump() + "\n";
  }
  write_file(path, out);
}

/// Candidates grouped by document id; input order is kept within a group.
inline std::map<std::string, std::vector<CandidateSummary>> group_by_document(
    std::span<const CandidateSummary> candidates) {
  std::map<std::string, std::vector<CandidateSummary>> groups;
  for (const auto& c : candidates) groups[c.document_id].push_back(c);
  return groups;
}

// ---------------------------------------------------------------------------
// Result records

struct HeaderRecord {
  int schema_version = 1;
  std::string tool_version;
  std::string command;
  json effective_config = json::object();
  std::string effective_config_digest;
  bool operator==(const HeaderRecord&) const = default;
};

struct MetricRecord {
  std::string document_id;
  std::string candidate_id;
  std::string strategy;
  MetricMap readability;
  MetricMap factuality;
  std::optional<RougeScores> rouge;  // present when the document has a reference
  MetricMap other;                   // scorer metrics outside both DES groups
  bool operator==(const MetricRecord&) const = default;
};

struct SelectionRecord {
  std::string document_id;
  std::string candidate_id;
  std::string strategy;
  MetricMap raw_readability;
  MetricMap raw_factuality;
  MetricMap normalized_readability;
  MetricMap normalized_factuality;
  double readability_mean = 0.0;
  double factuality_mean = 0.0;
  double overall = 0.0;
  bool chosen = false;
  bool operator==(const SelectionRecord&) const = default;
};

struct RankingRecord {
  std::string document_id;
  std::size_t rank = 0;
  double rank_score = 0.0;
  bool operator==(const RankingRecord&) const = default;
};

struct TopKRecord {
  std::string dataset;
  std::size_t k = 0;
  std::vector<std::string> document_ids;
  bool operator==(const TopKRecord&) const = default;
};

struct PromptRecord {
  std::string document_id;
  std::string prompt_text;
  bool operator==(const PromptRecord&) const = default;
};

using ResultRecord =
    std::variant<HeaderRecord, MetricRecord, SelectionRecord, RankingRecord, TopKRecord, PromptRecord>;

namespace detail {

inline json metric_map_json(const MetricMap& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

inline MetricMap metric_map_from(const json& j, const char* key, std::size_t line) {
  MetricMap m;
  auto it = j.find(key);
  if (it == j.end()) return m;
  if (!it->is_object())
    throw Error(ErrorKind::MalformedRecord, std::string("field '") + key + "' must be an object", key, line);
  for (const auto& [k, v] : it->items()) {
    if (!v.is_number())
      throw Error(ErrorKind::MalformedRecord, "metric '" + k + "' must be a number", k, line);
    m[k] = v.get<double>();
  }
  return m;
}

inline json prf_json(const PrecisionRecallF1& p) {
  return json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

inline PrecisionRecallF1 prf_from(const json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(), j.at("f1").get<double>()};
}

inline json record_json(const HeaderRecord& r) {
  return json{{"record", "header"},
              {"schema_version", r.schema_version},
              {"tool_version", r.tool_version},
              {"command", r.command},
              {"effective_config", r.effective_config},
              {"effective_config_digest", r.effective_config_digest}};
}

inline json record_json(const MetricRecord& r) {
  json j{{"record", "metrics"},
         {"document_id", r.document_id},
         {"candidate_id", r.candidate_id},
         {"strategy", r.strategy},
         {"readability", metric_map_json(r.readability)},
         {"factuality", metric_map_json(r.factuality)}};
  if (r.rouge) {
    j["rouge"] = json{{"rouge1", prf_json(r.rouge->r1)},
                      {"rouge2", prf_json(r.rouge->r2)},
                      {"rougeL", prf_json(r.rouge->rl)}};
  }
  j["other"] = metric_map_json(r.other);
  return j;
}

inline json record_json(const SelectionRecord& r) {
  return json{{"record", "selection"},
              {"document_id", r.document_id},
              {"candidate_id", r.candidate_id},
              {"strategy", r.strategy},
              {"raw", {{"readability", metric_map_json(r.raw_readability)},
                       {"factuality", metric_map_json(r.raw_factuality)}}},
              {"normalized", {{"readability", metric_map_json(r.normalized_readability)},
                              {"factuality", metric_map_json(r.normalized_factuality)}}},
              {"R", r.readability_mean},
              {"F", r.factuality_mean},
              {"S", r.overall},
              {"chosen", r.chosen}};
}

inline json record_json(const RankingRecord& r) {
  return json{{"record", "ranking"},
              {"document_id", r.document_id},
              {"rank", r.rank},
              {"rank_score", r.rank_score}};
}

inline json record_json(const TopKRecord& r) {
  return json{{"record", "topk"}, {"dataset", r.dataset}, {"k", r.k}, {"document_ids", r.document_ids}};
}

inline json record_json(const PromptRecord& r) {
  return json{{"record", "prompt"}, {"document_id", r.document_id}, {"prompt_text", r.prompt_text}};
}

inline ResultRecord parse_result(const json& j, std::size_t line) {
  const std::string type = required_string(j, "record", line);
  try {
    if (type == "header") {
      HeaderRecord r;
      r.schema_version = j.at("schema_version").get<int>();
      r.tool_version = j.at("tool_version").get<std::string>();
      r.command = j.at("command").get<std::string>();
      r.effective_config = j.at("effective_config");
      r.effective_config_digest = j.at("effective_config_digest").get<std::string>();
      return r;
    }
    if (type == "metrics") {
      MetricRecord r;
      r.document_id = required_string(j, "document_id", line);
      r.candidate_id = required_string(j, "candidate_id", line);
      r.strategy = required_string(j, "strategy", line);
      r.readability = metric_map_from(j, "readability", line);
      r.factuality = metric_map_from(j, "factuality", line);
      if (auto it = j.find("rouge"); it != j.end())
        r.rouge = RougeScores{prf_from(it->at("rouge1")), prf_from(it->at("rouge2")),
                              prf_from(it->at("rougeL"))};
      r.other = metric_map_from(j, "other", line);
      return r;
    }
    if (type == "selection") {
      SelectionRecord r;
      r.document_id = required_string(j, "document_id", line);
      r.candidate_id = required_string(j, "candidate_id", line);
      r.strategy = required_string(j, "strategy", line);
      r.raw_readability = metric_map_from(j.at("raw"), "readability", line);
      r.raw_factuality = metric_map_from(j.at("raw"), "factuality", line);
      r.normalized_readability = metric_map_from(j.at("normalized"), "readability", line);
      r.normalized_factuality = metric_map_from(j.at("normalized"), "factuality", line);
      r.readability_mean = j.at("R").get<double>();
      r.factuality_mean = j.at("F").get<double>();
      r.overall = j.at("S").get<double>();
      r.chosen = j.at("chosen").get<bool>();
      return r;
    }
    if (type == "ranking") {
      return RankingRecord{required_string(j, "document_id", line), j.at("rank").get<std::size_t>(),
                           j.at("rank_score").get<double>()};
    }
    if (type == "topk") {
      return TopKRecord{j.at("dataset").get<std::string>(), j.at("k").get<std::size_t>(),
                        j.at("document_ids").get<std::vector<std::string>>()};
    }
    if (type == "prompt") {
      return PromptRecord{required_string(j, "document_id", line), required_string(j, "prompt_text", line)};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedRecord, std::string("bad ") + type + " record: " + e.what(), type, line);
  }
  throw Error(ErrorKind::MalformedRecord, "unknown record type '" + type + "'", type, line);
}

}  // namespace detail

inline std::string to_jsonl_line(const ResultRecord& record) {
  return std::visit([](const auto& r) { return detail::record_json(r).dump(); }, record) + "\n";
}

/// Writes one JSON object per record, keys in a fixed order.
inline void save_results(const std::filesystem::path& path, std::span<const ResultRecord> records) {
  std::string out;
  for (const auto& r : records) out += to_jsonl_line(r);
  write_file(path, out);
}

inline std::vector<ResultRecord> load_results(const std::filesystem::path& path) {
  std::vector<ResultRecord> out;
  for (const auto& [number, line] : detail::jsonl_lines(path))
    out.push_back(detail::parse_result(detail::parse_object(line, number), number));
  return out;
}

/// Records of one type, in file order.
template <typename T>
std::vector<T> records_of(std::span<const ResultRecord> records) {
  std::vector<T> out;
  for (const auto& r : records)
    if (const T* p = std::get_if<T>(&r)) out.push_back(*p);
  return out;
}

}  // namespace laysumm
