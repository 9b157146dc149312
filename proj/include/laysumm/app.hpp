#pragma once

// The `laysumm` command line: score, select, rank-examples, build-prompt,
// presets. `run` is the whole program minus process entry, so tests drive
// it in-process.
//
// Exit codes: 0 success, 1 validation error, 2 transport/scorer error,
// 3 I/O error. Failures also print one JSON line on stderr:
//   {"error": "<Kind>", "message": "...", "detail": "...", "exit_code": N}

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "laysumm/corpus.hpp"
#include "laysumm/des.hpp"
#include "laysumm/document.hpp"
#include "laysumm/error.hpp"
#include "laysumm/fewshot.hpp"
#include "laysumm/prompt.hpp"
#include "laysumm/readability.hpp"
#include "laysumm/resources.hpp"
#include "laysumm/rouge.hpp"
#include "laysumm/scorer.hpp"

namespace laysumm::app {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Everything one invocation needs, after flags, config file and presets
/// have been merged.
struct RunConfig {
  std::string command;
  std::string corpus;
  std::string candidates;
  std::string metrics;
  std::string ranking;
  std::string exemplar_corpus;
  std::string out;
  std::string dataset;
  std::string preset;
  std::string scorers;
  std::string data_dir;
  std::string word_list;
  std::string template_name = "initial";
  std::string chat_format = "mistral-instruct";
  std::string fact_source = "abstract";
  std::string k_from_preset;
  std::optional<double> w_readability;
  std::optional<double> w_factuality;
  std::optional<std::size_t> k;
  double degenerate = 0.5;
  bool no_negate = false;
  bool skip_missing = false;
  bool lenient = false;
  bool stemming = false;
  bool grouped_mean = false;
  bool zero_shot = false;
  bool few_shot = false;
  std::size_t jobs = 1;
};

/// Options that determine output content. `jobs` is left out: parallelism
/// never changes what is written.
inline json effective_config(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) j[key] = v;
  };
  put("corpus", c.corpus);
  put("candidates", c.candidates);
  put("metrics", c.metrics);
  put("ranking", c.ranking);
  put("exemplar_corpus", c.exemplar_corpus);
  put("dataset", c.dataset);
  put("preset", c.preset);
  put("scorers", c.scorers);
  put("word_list", c.word_list);
  if (c.command == "build-prompt") {
    j["template"] = c.template_name;
    j["format"] = c.chat_format;
    j["mode"] = c.few_shot ? "few-shot" : "zero-shot";
    put("k_from_preset", c.k_from_preset);
  }
  if (c.command == "score" || c.command == "rank-examples" || c.command == "select")
    j["fact_source"] = c.fact_source;
  if (c.w_readability) j["w_readability"] = *c.w_readability;
  if (c.w_factuality) j["w_factuality"] = *c.w_factuality;
  if (c.k) j["k"] = *c.k;
  j["degenerate_norm_value"] = c.degenerate;
  j["negate_readability"] = !c.no_negate;
  j["skip_missing"] = c.skip_missing;
  j["lenient"] = c.lenient;
  j["stemming"] = c.stemming;
  j["grouped_mean"] = c.grouped_mean;
  return j;
}

// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

inline HeaderRecord make_header(const RunConfig& config) {
  HeaderRecord h;
  h.schema_version = kSchemaVersion;
  h.tool_version = std::string(kToolVersion);
  h.command = config.command;
  h.effective_config = effective_config(config);
  h.effective_config_digest = "fnv1a64:" + fnv1a_hex(h.effective_config.dump());
  return h;
}

namespace detail {

struct Streams {
  std::ostream& out;
  std::ostream& err;
  void warn(const std::string& message) const { err << "warning: " << message << "\n"; }
};

struct Resources {
  TextRules rules;
  FamiliarWordList familiar;
  std::filesystem::path dir;
};

inline Resources load_resources(const RunConfig& c) {
  const auto dir = data_dir(c.data_dir);
  const std::filesystem::path list = c.word_list.empty() ? dir / "dale_chall_words.txt"
                                                         : std::filesystem::path(c.word_list);
  return {TextRules::load(dir), FamiliarWordList::load(list), dir};
}

inline void require(const std::string& value, const char* flag) {
  if (value.empty())
    throw Error(ErrorKind::InvalidParameter, std::string("missing required option ") + flag, flag);
}

inline ScorerRegistry load_registry(const RunConfig& c) {
  if (c.scorers.empty()) return {};
  return ScorerRegistry::load(c.scorers);
}

inline Dataset dataset_of(const RunConfig& c) {
  require(c.dataset, "--dataset");
  return parse_dataset(c.dataset);
}

inline std::vector<Document> load_documents(const RunConfig& c, const std::string& path, const Streams& io) {
  auto loaded = load_corpus(path, dataset_of(c), {c.lenient, "\n"});
  for (const auto& w : loaded.warnings) io.warn("skipped corpus record: " + w);
  return std::move(loaded.records);
}

inline const std::string& factuality_source(const Document& doc, const RunConfig& c) {
  if (c.fact_source == "abstract") return doc.abstract;
  if (c.fact_source == "article") {
    if (!doc.article || doc.article->empty())
      throw Error(ErrorKind::MissingField, "document '" + doc.id + "' has no article text", "article");
    return *doc.article;
  }
  throw Error(ErrorKind::InvalidParameter, "--fact-source must be 'abstract' or 'article'", c.fact_source);
}

/// Scorers that answered a one-request probe. With --skip-missing an
/// unreachable scorer is dropped with a warning; otherwise the run fails.
inline std::vector<RegisteredScorer> available_scorers(const ScorerRegistry& registry,
                                                       const ScoreRequest& probe, const RunConfig& c,
                                                       const Streams& io) {
  std::vector<RegisteredScorer> out;
  for (const auto& s : registry.entries()) {
    ScoreRequest request = probe;
    request.request_id = "probe";
    if (s.endpoint.needs_reference && !request.reference) {
      out.push_back(s);
      continue;
    }
    try {
      const std::vector<ScoreRequest> one{request};
      score_batch(s.endpoint, one);
      out.push_back(s);
    } catch (const Error& e) {
      const bool unreachable = e.kind() == ErrorKind::TransportError || e.kind() == ErrorKind::TimeoutError;
      if (!unreachable || !c.skip_missing) throw;
      io.warn("dropping unavailable scorer '" + s.endpoint.name + "': " + e.what());
    }
  }
  return out;
}

/// Runs `work(worker, item)` for every item on up to `jobs` threads and
/// rethrows the first failure.
template <typename Work>
void parallel_for(std::size_t items, std::size_t jobs, Work work) {
  jobs = std::max<std::size_t>(1, std::min(jobs, std::max<std::size_t>(items, 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&](std::size_t worker) {
    while (!stop) {
      const std::size_t i = next++;
      if (i >= items) return;
      try {
        work(worker, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };
  if (jobs == 1) {
    loop(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < jobs; ++w) threads.emplace_back(loop, w);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

inline std::vector<MetricRecord> compute_metrics(const RunConfig& c, const Streams& io) {
  require(c.corpus, "--corpus");
  require(c.candidates, "--candidates");
  const Resources res = load_resources(c);
  const auto documents = load_documents(c, c.corpus, io);
  std::map<std::string, const Document*> by_id;
  for (const auto& d : documents) by_id[d.id] = &d;

  auto loaded = load_candidates(c.candidates, {c.lenient, "\n"});
  for (const auto& w : loaded.warnings) io.warn("skipped candidate record: " + w);
  std::vector<std::pair<const Document*, std::vector<CandidateSummary>>> work;
  for (auto& [doc_id, group] : group_by_document(loaded.records)) {
    auto it = by_id.find(doc_id);
    if (it == by_id.end()) {
      Error e(ErrorKind::InvalidParameter, "candidates reference unknown document '" + doc_id + "'", doc_id);
      if (!c.lenient) throw e;
      io.warn(e.what());
      continue;
    }
    std::sort(group.begin(), group.end(),
              [](const auto& a, const auto& b) { return a.candidate_id < b.candidate_id; });
    work.emplace_back(it->second, std::move(group));
  }

  const ScorerRegistry registry = load_registry(c);
  std::vector<RegisteredScorer> scorers;
  if (!registry.empty() && !work.empty()) {
    const Document& doc = *work.front().first;
    ScoreRequest probe{"probe", work.front().second.front().text, factuality_source(doc, c), doc.lay_summary};
    for (const auto& [d, group] : work)
      if (!probe.reference && d->lay_summary) probe.reference = d->lay_summary;
    scorers = available_scorers(registry, probe, c, io);
  }

  const std::size_t workers = std::max<std::size_t>(c.jobs, 1);
  std::vector<std::vector<std::unique_ptr<ScorerConnection>>> connections(workers);
  std::vector<std::vector<MetricRecord>> per_document(work.size());

  parallel_for(work.size(), workers, [&](std::size_t worker, std::size_t item) {
    auto& conns = connections[worker];
    if (conns.empty())
      for (const auto& s : scorers) conns.push_back(connect(s.endpoint));
    const Document& doc = *work[item].first;
    const auto& group = work[item].second;

    std::vector<MetricRecord> records;
    for (const auto& cand : group) {
      MetricRecord r;
      r.document_id = doc.id;
      r.candidate_id = cand.candidate_id;
      r.strategy = cand.strategy;
      const auto scores = readability_all(cand.text, res.familiar, res.rules);
      r.readability = {{"cli", scores.cli}, {"dcrs", scores.dcrs}, {"fkgl", scores.fkgl}};
      if (doc.lay_summary) r.rouge = rouge_all(cand.text, *doc.lay_summary, c.stemming);
      records.push_back(std::move(r));
    }
    for (std::size_t s = 0; s < scorers.size(); ++s) {
      const auto& endpoint = scorers[s].endpoint;
      if (endpoint.needs_reference && !doc.lay_summary) {
        if (scorers[s].group == MetricGroup::Factuality)
          throw Error(ErrorKind::MissingField,
                      "scorer '" + endpoint.name + "' needs a reference but document '" + doc.id +
                          "' has no lay summary",
                      "lay_summary");
        continue;
      }
      std::vector<ScoreRequest> requests;
      for (const auto& cand : group)
        requests.push_back({cand.candidate_id, cand.text, factuality_source(doc, c), doc.lay_summary});
      const auto responses = score_batch(*conns[s], requests);
      for (std::size_t i = 0; i < responses.size(); ++i) {
        if (!responses[i].ok())
          throw Error(ErrorKind::ScorerError,
                      "scorer '" + endpoint.name + "' failed on " + doc.id + "/" + group[i].candidate_id +
                          ": " + responses[i].error.value_or("?"),
                      endpoint.name);
        auto& target = scorers[s].group == MetricGroup::Factuality ? records[i].factuality : records[i].other;
        target[endpoint.name] = *responses[i].score;
      }
    }
    per_document[item] = std::move(records);
  });

  std::vector<MetricRecord> out;
  for (auto& records : per_document)
    for (auto& r : records) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.document_id, a.candidate_id) < std::tie(b.document_id, b.candidate_id);
  });
  return out;
}

inline void write_records(const RunConfig& c, std::vector<ResultRecord> records) {
  require(c.out, "--out");
  records.insert(records.begin(), make_header(c));
  save_results(c.out, records);
}

inline int cmd_score(const RunConfig& c, const Streams& io) {
  const auto metrics = compute_metrics(c, io);
  std::vector<ResultRecord> records(metrics.begin(), metrics.end());
  write_records(c, std::move(records));
  std::set<std::string> docs;
  for (const auto& m : metrics) docs.insert(m.document_id);
  io.out << "scored " << metrics.size() << " candidates across " << docs.size() << " documents\n";
  return 0;
}

inline SelectionConfig selection_config(const RunConfig& c) {
  SelectionConfig config;
  const std::string preset = !c.preset.empty() ? c.preset : c.dataset;
  if (!preset.empty()) {
    config = selection_preset(preset);
  } else if (!c.w_readability && !c.w_factuality) {
    throw Error(ErrorKind::InvalidParameter, "give --preset elife|plos or --w-readability/--w-factuality");
  }
  if (c.w_readability || c.w_factuality) {
    config.w_readability = c.w_readability.value_or(1.0 - c.w_factuality.value_or(0.0));
    config.w_factuality = c.w_factuality.value_or(1.0 - config.w_readability);
  }
  config.negate_readability = !c.no_negate;
  config.degenerate_norm_value = c.degenerate;
  config.validate();
  return config;
}

inline int cmd_select(const RunConfig& c, const Streams& io) {
  const SelectionConfig config = selection_config(c);
  std::vector<MetricRecord> metrics;
  if (!c.metrics.empty()) {
    const auto loaded = load_results(c.metrics);
    metrics = records_of<MetricRecord>(loaded);
  } else {
    metrics = compute_metrics(c, io);
  }

  std::map<std::string, std::vector<const MetricRecord*>> pools;
  for (const auto& m : metrics) pools[m.document_id].push_back(&m);

  std::vector<ResultRecord> records;
  std::map<std::string, std::size_t> wins;
  std::size_t selected = 0;
  for (auto& [doc_id, pool] : pools) {
    std::sort(pool.begin(), pool.end(), [](auto* a, auto* b) { return a->candidate_id < b->candidate_id; });
    std::vector<MetricVector> vectors;
    for (const auto* m : pool) vectors.push_back({m->candidate_id, m->readability, m->factuality});
    SelectionResult result;
    try {
      result = select(vectors, config);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidPool) throw;
      Error tagged(ErrorKind::InvalidPool, "document '" + doc_id + "': " + e.what(), doc_id);
      if (!c.lenient) throw tagged;
      io.warn(tagged.what());
      continue;
    }
    if (pool.size() == 1) io.err << "info: document '" << doc_id << "' has a single candidate (trivial pool)\n";
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto& score = result.per_candidate[i];
      SelectionRecord r;
      r.document_id = doc_id;
      r.candidate_id = pool[i]->candidate_id;
      r.strategy = pool[i]->strategy;
      r.raw_readability = pool[i]->readability;
      r.raw_factuality = pool[i]->factuality;
      r.normalized_readability = score.normalized_readability;
      r.normalized_factuality = score.normalized_factuality;
      r.readability_mean = score.readability_mean;
      r.factuality_mean = score.factuality_mean;
      r.overall = score.overall;
      r.chosen = i == result.chosen_index;
      records.push_back(std::move(r));
    }
    ++wins[pool[result.chosen_index]->strategy];
    ++selected;
  }
  write_records(c, std::move(records));

  io.out << "selected " << selected << " documents; wins by strategy:";
  for (const auto& [strategy, n] : wins) io.out << " " << strategy << "=" << n;
  io.out << "\n";
  return 0;
}

inline int cmd_rank_examples(const RunConfig& c, const Streams& io) {
  require(c.corpus, "--corpus");
  const Resources res = load_resources(c);
  const auto documents = load_documents(c, c.corpus, io);

  std::vector<ExampleInput> inputs;
  for (const auto& doc : documents) {
    if (!doc.lay_summary || doc.lay_summary->empty()) {
      Error e(ErrorKind::MissingField, "document '" + doc.id + "' has no lay summary", "lay_summary");
      if (!c.lenient) throw e;
      io.warn(e.what());
      continue;
    }
    inputs.push_back({doc.id, *doc.lay_summary, factuality_source(doc, c)});
  }
  if (inputs.empty()) throw Error(ErrorKind::InvalidParameter, "no rankable examples in " + c.corpus);

  const FewShotConfig few = c.k ? FewShotConfig{*c.k, c.dataset} : fewshot_preset(c.dataset);
  if (few.k > inputs.size())
    throw Error(ErrorKind::InvalidParameter, "k = " + std::to_string(few.k) + " exceeds the corpus size " +
                                                 std::to_string(inputs.size()));

  std::vector<RegisteredScorer> scorers;
  const ScorerRegistry registry = load_registry(c);
  if (!registry.empty()) {
    const ScoreRequest probe{"probe", inputs.front().lay_summary, inputs.front().source, std::nullopt};
    for (auto& s : available_scorers(registry, probe, c, io))
      if (s.group == MetricGroup::Factuality) scorers.push_back(std::move(s));
  }
  std::vector<std::unique_ptr<ScorerConnection>> owned;
  std::vector<ScorerConnection*> conns;
  for (const auto& s : scorers) {
    owned.push_back(connect(s.endpoint));
    conns.push_back(owned.back().get());
  }

  const auto ranked = rank_examples(inputs, conns, res.familiar, res.rules,
                                    c.grouped_mean ? RankMean::Grouped : RankMean::Flat);
  const auto top = top_k(ranked, few);

  std::vector<ResultRecord> records;
  for (const auto& r : ranked) records.push_back(RankingRecord{r.document_id, r.rank, r.rank_score});
  records.push_back(TopKRecord{c.dataset, few.k, top});
  write_records(c, std::move(records));

  io.out << "top-" << few.k << " exemplars (" << c.dataset << "):";
  for (const auto& id : top) io.out << " " << id;
  io.out << "\n";
  return 0;
}

inline int cmd_build_prompt(const RunConfig& c, const Streams& io) {
  require(c.corpus, "--corpus");
  if (c.zero_shot && c.few_shot)
    throw Error(ErrorKind::InvalidParameter, "--zero-shot and --few-shot are exclusive");
  const auto dir = data_dir(c.data_dir);
  const PromptTemplate prompt = PromptTemplate::load(dir / "templates", c.template_name);
  const auto documents = load_documents(c, c.corpus, io);

  std::vector<Exemplar> exemplars;
  std::optional<ChatTurnFormat> format;
  if (c.few_shot) {
    require(c.ranking, "--ranking");
    const auto formats = load_chat_formats(dir / "chat_formats.json");
    auto it = formats.find(c.chat_format);
    if (it == formats.end())
      throw Error(ErrorKind::InvalidParameter, "unknown chat format '" + c.chat_format + "'", c.chat_format);
    format = it->second;

    std::size_t k = 0;
    if (c.k) {
      k = *c.k;
    } else {
      k = fewshot_preset(!c.k_from_preset.empty() ? c.k_from_preset : c.dataset).k;
    }
    auto ranking = records_of<RankingRecord>(load_results(c.ranking));
    std::vector<RankedExample> ranked;
    for (const auto& r : ranking) ranked.push_back({r.document_id, r.rank_score, r.rank});
    const auto ids = top_k(ranked, FewShotConfig{k, c.dataset});

    const std::string pool_path = c.exemplar_corpus.empty() ? c.corpus : c.exemplar_corpus;
    const auto pool = load_documents(c, pool_path, io);
    for (const auto& id : ids) {
      auto doc = std::find_if(pool.begin(), pool.end(), [&](const Document& d) { return d.id == id; });
      if (doc == pool.end())
        throw Error(ErrorKind::MissingField, "exemplar '" + id + "' is not in " + pool_path, id);
      if (!doc->lay_summary || doc->lay_summary->empty())
        throw Error(ErrorKind::MissingField, "exemplar '" + id + "' has no lay summary", "lay_summary");
      exemplars.push_back({*doc, *doc->lay_summary});
    }
  }

  std::vector<ResultRecord> records;
  std::vector<const Document*> ordered;
  for (const auto& d : documents) ordered.push_back(&d);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const Document* doc : ordered) {
    try {
      std::string text = format ? assemble_fewshot(prompt, exemplars, *doc, *format) : render(prompt, *doc);
      records.push_back(PromptRecord{doc->id, std::move(text)});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MissingField) throw;
      Error tagged(ErrorKind::MissingField, "document '" + doc->id + "': " + e.what(), e.detail());
      if (!c.lenient) throw tagged;
      io.warn(tagged.what());
    }
  }
  const std::size_t count = records.size();
  write_records(c, std::move(records));
  io.out << "wrote " << count << " " << (format ? "few-shot conversations" : "zero-shot prompts") << " ("
         << exemplars.size() << " exemplars each)\n";
  return 0;
}

inline json presets_json() {
  json j;
  for (const auto& [name, cfg] : selection_presets())
    j["selection"][name] = {{"w_readability", cfg.w_readability},
                            {"w_factuality", cfg.w_factuality},
                            {"negate_readability", cfg.negate_readability},
                            {"tie_break", "lowest-index"},
                            {"degenerate_norm_value", cfg.degenerate_norm_value}};
  for (auto name : {"elife", "plos"}) j["fewshot"][name] = {{"k", fewshot_preset(name).k}};
  for (const auto& [name, p] : inference_presets())
    j["inference"][name] = {{"strategy", p.strategy},
                            {"max_new_tokens", p.max_new_tokens},
                            {"repetition_penalty", p.repetition_penalty}};
  return j;
}

inline int cmd_presets(const RunConfig& c, const Streams& io) {
  const std::string text = presets_json().dump(2) + "\n";
  if (c.out.empty()) {
    io.out << text;
  } else {
    write_file(c.out, text);
  }
  return 0;
}

inline void report(const Streams& io, std::string_view kind, const std::string& message,
                   const std::string& detail, int code) {
  json j{{"error", kind}, {"message", message}, {"detail", detail}, {"exit_code", code}};
  io.err << j.dump() << "\n";
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  const detail::Streams io{out, err};
  RunConfig c;

  CLI::App app{"Lay-summary evaluation and candidate selection"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "TOML/INI file with option defaults; command-line flags win");
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--data-dir", c.data_dir, "Directory with word lists, templates and chat formats");
    sub->add_option("--word-list", c.word_list, "Familiar-word list (default: <data-dir>/dale_chall_words.txt)");
    sub->add_flag("--lenient", c.lenient, "Skip bad records with a warning instead of failing");
    sub->add_option("-j,--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto scoring = [&](CLI::App* sub) {
    sub->add_option("--scorers", c.scorers, "Scorer registry JSON")->envname("LAYSUMM_SCORERS");
    sub->add_flag("--skip-missing", c.skip_missing, "Drop unreachable scorers instead of failing");
    sub->add_flag("--stemming", c.stemming, "Porter-stem tokens before ROUGE");
    sub->add_option("--fact-source", c.fact_source, "Text factuality is judged against")
        ->check(CLI::IsMember({"abstract", "article"}));
  };

  auto* score = app.add_subcommand("score", "Compute the metric battery for candidate summaries");
  common(score);
  scoring(score);
  score->add_option("--corpus", c.corpus, "Article corpus (JSONL)")->required();
  score->add_option("--dataset", c.dataset, "elife or plos")->required()->check(CLI::IsMember({"elife", "plos"}));
  score->add_option("--candidates", c.candidates, "Candidate summaries (JSONL)")->required();
  score->add_option("-o,--out", c.out, "Metric records (JSONL)")->required();

  auto* sel = app.add_subcommand("select", "Pick the best candidate per document");
  common(sel);
  scoring(sel);
  sel->add_option("--metrics", c.metrics, "Metric records from `score`");
  sel->add_option("--corpus", c.corpus, "Article corpus, to score inline");
  sel->add_option("--candidates", c.candidates, "Candidates, to score inline");
  sel->add_option("--dataset", c.dataset, "elife or plos")->check(CLI::IsMember({"elife", "plos"}));
  sel->add_option("--preset", c.preset, "Weight preset")->check(CLI::IsMember({"elife", "plos"}));
  sel->add_option("--w-readability", c.w_readability, "Readability weight")->check(CLI::Range(0.0, 1.0));
  sel->add_option("--w-factuality", c.w_factuality, "Factuality weight")->check(CLI::Range(0.0, 1.0));
  sel->add_option("--degenerate-value", c.degenerate, "Normalised value when a metric is constant")
      ->check(CLI::Range(0.0, 1.0));
  sel->add_flag("--no-negate-readability", c.no_negate, "Treat larger readability values as better");
  sel->add_option("-o,--out", c.out, "Selection records (JSONL)")->required();

  auto* rank = app.add_subcommand("rank-examples", "Rank training examples for few-shot prompting");
  common(rank);
  scoring(rank);
  rank->add_option("--corpus", c.corpus, "Training corpus with lay summaries")->required();
  rank->add_option("--dataset", c.dataset, "elife or plos")->required()->check(CLI::IsMember({"elife", "plos"}));
  rank->add_option("--k", c.k, "Number of exemplars (default: dataset preset)")->check(CLI::PositiveNumber);
  rank->add_flag("--grouped-mean", c.grouped_mean, "Score = (mean readability + mean factuality) / 2");
  rank->add_option("-o,--out", c.out, "Ranking records (JSONL)")->required();

  auto* build = app.add_subcommand("build-prompt", "Render prompts or few-shot conversations");
  common(build);
  build->add_option("--corpus", c.corpus, "Documents to prompt for")->required();
  build->add_option("--dataset", c.dataset, "elife or plos")->required()->check(CLI::IsMember({"elife", "plos"}));
  build->add_option("--template", c.template_name, "initial, article_llama, persona, intro or guide")
      ->check(CLI::IsMember({"initial", "article_llama", "persona", "intro", "guide"}));
  build->add_flag("--zero-shot", c.zero_shot, "Plain rendered prompts (default)");
  build->add_flag("--few-shot", c.few_shot, "Conversations with ranked exemplars");
  build->add_option("--ranking", c.ranking, "Ranking file from `rank-examples`");
  build->add_option("--exemplar-corpus", c.exemplar_corpus, "Corpus holding the exemplars (default: --corpus)");
  build->add_option("--k", c.k, "Number of exemplars")->check(CLI::PositiveNumber);
  build->add_option("--k-from-preset", c.k_from_preset, "Take k from a dataset preset")
      ->check(CLI::IsMember({"elife", "plos"}));
  build->add_option("--format", c.chat_format, "Chat turn format name");
  build->add_option("-o,--out", c.out, "Prompt records (JSONL)")->required();

  auto* presets = app.add_subcommand("presets", "Print selection, few-shot and decoding presets");
  presets->add_option("-o,--out", c.out, "Write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    std::ostringstream msg;
    app.exit(e, msg, msg);
    detail::report(io, "UsageError", msg.str(), {}, 1);
    return 1;
  }

  try {
    if (*score) {
      c.command = "score";
      return detail::cmd_score(c, io);
    }
    if (*sel) {
      c.command = "select";
      return detail::cmd_select(c, io);
    }
    if (*rank) {
      c.command = "rank-examples";
      return detail::cmd_rank_examples(c, io);
    }
    if (*build) {
      c.command = "build-prompt";
      return detail::cmd_build_prompt(c, io);
    }
    c.command = "presets";
    return detail::cmd_presets(c, io);
  } catch (const Error& e) {
    detail::report(io, e.kind_name(), e.what(), e.detail(), e.exit_code());
    return e.exit_code();
  } catch (const std::exception& e) {
    detail::report(io, "InternalError", e.what(), {}, 1);
    return 1;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  std::vector<const char*> argv;
  argv.push_back("laysumm");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace laysumm::app
