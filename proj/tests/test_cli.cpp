#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "laysumm/app.hpp"
#include "test_support.hpp"

using namespace laysumm;
using testing_support::TempDir;
using testing_support::slurp;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = app::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const std::string& name) { return (testing_support::fixtures_dir() / "cli" / name).string(); }

std::vector<std::string> score_args(const std::string& out, int jobs) {
  return {"score", "--corpus", fixture("corpus.jsonl"), "--dataset", "elife", "--candidates", fixture("candidates.jsonl"),
          "--scorers", fixture("scorers.json"), "--jobs", std::to_string(jobs), "--out", out};
}

nlohmann::json error_line(const Run& r) {
  const auto last = r.err.rfind('{');
  return nlohmann::json::parse(r.err.substr(last));
}

std::string chosen_in(const std::string& path, const std::string& doc) {
  for (const auto& s : records_of<SelectionRecord>(load_results(path)))
    if (s.document_id == doc && s.chosen) return s.candidate_id;
  return "";
}

std::string subprocess_registry(const TempDir& dir, const std::string& extra_args = "") {
  nlohmann::json j;
  j["scorers"] = nlohmann::json::array({{{"name", "align-proc"},
                                         {"transport", "subprocess"},
                                         {"address", testing_support::mock_scorer_binary() + " --formula token-overlap " + extra_args},
                                         {"needs_source", true},
                                         {"timeout_ms", 2000},
                                         {"group", "factuality"}}});
  return dir.write("registry.json", j.dump()).string();
}

}  // namespace

TEST(CliScore, WritesHeaderAndSortedRecords) {
  TempDir dir;
  const auto r = run(score_args((dir / "m.jsonl").string(), 2));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "scored 20 candidates across 5 documents\n");
  const auto records = load_results(dir / "m.jsonl");
  ASSERT_EQ(records.size(), 21u);
  const auto& header = std::get<HeaderRecord>(records[0]);
  EXPECT_EQ(header.command, "score");
  EXPECT_EQ(header.schema_version, app::kSchemaVersion);
  EXPECT_EQ(header.effective_config_digest, "fnv1a64:" + app::fnv1a_hex(header.effective_config.dump()));
  EXPECT_FALSE(header.effective_config.contains("jobs"));
  const auto metrics = records_of<MetricRecord>(records);
  EXPECT_EQ(metrics.front().document_id, "elife-001");
  EXPECT_EQ(metrics.front().candidate_id, "c1");
  EXPECT_EQ(metrics.back().document_id, "elife-005");
  for (const auto& m : metrics) {
    EXPECT_EQ(m.readability.size(), 3u);
    EXPECT_EQ(m.factuality.size(), 2u);
    EXPECT_EQ(m.other.at("lens-mock"), 0.5);
    EXPECT_TRUE(m.rouge.has_value());
  }
}

TEST(CliScore, DeterministicAcrossRunsAndJobs) {
  TempDir dir;
  for (const auto& [name, jobs] : std::vector<std::pair<std::string, int>>{{"a", 1}, {"b", 1}, {"c", 8}})
    ASSERT_EQ(run(score_args((dir / (name + ".jsonl")).string(), jobs)).code, 0);
  EXPECT_EQ(slurp(dir / "a.jsonl"), slurp(dir / "b.jsonl"));
  EXPECT_EQ(slurp(dir / "a.jsonl"), slurp(dir / "c.jsonl"));
}

TEST(CliScore, SubprocessScorerMatchesInProcessFormula) {
  TempDir dir;
  auto args = score_args((dir / "p.jsonl").string(), 4);
  args[8] = subprocess_registry(dir);
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(run(score_args((dir / "m.jsonl").string(), 1)).code, 0);
  const auto proc = records_of<MetricRecord>(load_results(dir / "p.jsonl"));
  const auto mock = records_of<MetricRecord>(load_results(dir / "m.jsonl"));
  ASSERT_EQ(proc.size(), mock.size());
  for (std::size_t i = 0; i < proc.size(); ++i)
    EXPECT_EQ(proc[i].factuality.at("align-proc"), mock[i].factuality.at("align-mock"));
}

TEST(CliScore, ScorersFromEnvironment) {
  TempDir dir;
  auto args = score_args((dir / "m.jsonl").string(), 1);
  args.erase(args.begin() + 7, args.begin() + 9);
  ::setenv("LAYSUMM_SCORERS", fixture("scorers.json").c_str(), 1);
  const auto r = run(args);
  ::unsetenv("LAYSUMM_SCORERS");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(records_of<MetricRecord>(load_results(dir / "m.jsonl"))[0].factuality.size(), 2u);
}

TEST(CliScore, UnavailableScorer) {
  TempDir dir;
  nlohmann::json reg = nlohmann::json::parse(slurp(fixture("scorers.json")));
  reg["scorers"].push_back({{"name", "gone"}, {"transport", "subprocess"}, {"address", "exit 0"}, {"group", "factuality"}});
  const auto registry = dir.write("reg.json", reg.dump()).string();
  auto args = score_args((dir / "m.jsonl").string(), 1);
  args[8] = registry;

  const auto strict = run(args);
  EXPECT_EQ(strict.code, 2);
  EXPECT_EQ(error_line(strict)["error"], "TransportError");
  EXPECT_EQ(error_line(strict)["exit_code"], 2);

  args.push_back("--skip-missing");
  const auto skipped = run(args);
  ASSERT_EQ(skipped.code, 0) << skipped.err;
  EXPECT_NE(skipped.err.find("dropping unavailable scorer 'gone'"), std::string::npos);
  EXPECT_EQ(records_of<MetricRecord>(load_results(dir / "m.jsonl"))[0].factuality.size(), 2u);
}

TEST(CliScore, ScorerErrorExitsTwo) {
  TempDir dir;
  const auto cands = dir.write("c.jsonl", R"({"document_id":"elife-001","candidate_id":"x","strategy":"s","text":"ok text."})" "\n"
                                          R"({"document_id":"elife-002","candidate_id":"x","strategy":"s","text":"bad <<fail>> text."})" "\n");
  auto args = score_args((dir / "m.jsonl").string(), 1);
  args[6] = cands.string();
  const auto r = run(args);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_line(r)["error"], "ScorerError");
}

TEST(CliScore, InputErrors) {
  TempDir dir;
  auto args = score_args((dir / "m.jsonl").string(), 1);
  args[2] = (dir / "missing.jsonl").string();
  const auto io = run(args);
  EXPECT_EQ(io.code, 3);
  EXPECT_EQ(error_line(io)["error"], "IoError");

  const auto orphan = dir.write("c.jsonl", R"({"document_id":"nope","candidate_id":"x","strategy":"s","text":"Hi."})" "\n");
  args = score_args((dir / "m.jsonl").string(), 1);
  args[6] = orphan.string();
  EXPECT_EQ(run(args).code, 1);
  args.push_back("--lenient");
  const auto lenient = run(args);
  EXPECT_EQ(lenient.code, 0);
  EXPECT_NE(lenient.err.find("warning"), std::string::npos);

  const auto usage = run({"score", "--corpus", fixture("corpus.jsonl")});
  EXPECT_EQ(usage.code, 1);
  EXPECT_EQ(error_line(usage)["error"], "UsageError");
}

TEST(CliSelect, WorkedExamplePresets) {
  TempDir dir;
  const auto elife = run({"select", "--metrics", fixture("worked_metrics.jsonl"), "--preset", "elife", "--out", (dir / "e.jsonl").string()});
  ASSERT_EQ(elife.code, 0) << elife.err;
  EXPECT_EQ(chosen_in((dir / "e.jsonl").string(), "worked"), "C1");
  EXPECT_EQ(chosen_in((dir / "e.jsonl").string(), "alone"), "C1");
  EXPECT_NE(elife.err.find("'alone' has a single candidate"), std::string::npos);
  EXPECT_NE(elife.out.find("s1=2"), std::string::npos);

  ASSERT_EQ(run({"select", "--metrics", fixture("worked_metrics.jsonl"), "--preset", "plos", "--out", (dir / "p.jsonl").string()}).code, 0);
  EXPECT_EQ(chosen_in((dir / "p.jsonl").string(), "worked"), "C2");
  const auto sel = records_of<SelectionRecord>(load_results(dir / "p.jsonl"));
  // Sorted by (document, candidate): alone/C1, worked/C1, worked/C2, ...
  ASSERT_EQ(sel[2].candidate_id, "C2");
  EXPECT_NEAR(sel[2].overall, 0.25 / 3 + 0.75, 1e-12);
}

TEST(CliSelect, ExplicitWeightsOverridePreset) {
  TempDir dir;
  const auto r = run({"select", "--metrics", fixture("worked_metrics.jsonl"), "--preset", "elife", "--w-readability", "0.25",
                      "--out", (dir / "s.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(chosen_in((dir / "s.jsonl").string(), "worked"), "C2");
  const auto header = std::get<HeaderRecord>(load_results(dir / "s.jsonl")[0]);
  EXPECT_EQ(header.effective_config["w_readability"], 0.25);
}

TEST(CliSelect, ConfigFileBelowFlags) {
  TempDir dir;
  const auto cfg = dir.write("laysumm.toml", "[select]\npreset = \"plos\"\n");
  const auto metrics = fixture("worked_metrics.jsonl");
  ASSERT_EQ(run({"--config", cfg.string(), "select", "--metrics", metrics, "--out", (dir / "a.jsonl").string()}).code, 0);
  EXPECT_EQ(chosen_in((dir / "a.jsonl").string(), "worked"), "C2");
  ASSERT_EQ(run({"--config", cfg.string(), "select", "--metrics", metrics, "--preset", "elife", "--out", (dir / "b.jsonl").string()}).code, 0);
  EXPECT_EQ(chosen_in((dir / "b.jsonl").string(), "worked"), "C1");
}

TEST(CliSelect, InlineScoringEqualsTwoStep) {
  TempDir dir;
  ASSERT_EQ(run(score_args((dir / "m.jsonl").string(), 1)).code, 0);
  ASSERT_EQ(run({"select", "--metrics", (dir / "m.jsonl").string(), "--preset", "elife", "--out", (dir / "a.jsonl").string()}).code, 0);
  const auto inline_run = run({"select", "--corpus", fixture("corpus.jsonl"), "--dataset", "elife", "--candidates",
                               fixture("candidates.jsonl"), "--scorers", fixture("scorers.json"), "--out",
                               (dir / "b.jsonl").string()});
  ASSERT_EQ(inline_run.code, 0) << inline_run.err;
  const auto a = records_of<SelectionRecord>(load_results(dir / "a.jsonl"));
  const auto b = records_of<SelectionRecord>(load_results(dir / "b.jsonl"));
  EXPECT_EQ(a, b);
}

TEST(CliSelect, HeterogeneousPool) {
  TempDir dir;
  const auto metrics = dir.write("m.jsonl",
      R"({"record":"metrics","document_id":"d","candidate_id":"a","strategy":"s","readability":{"fkgl":1},"factuality":{}})" "\n"
      R"({"record":"metrics","document_id":"d","candidate_id":"b","strategy":"s","readability":{"cli":1},"factuality":{}})" "\n"
      R"({"record":"metrics","document_id":"e","candidate_id":"a","strategy":"s","readability":{"cli":1},"factuality":{}})" "\n");
  const auto strict = run({"select", "--metrics", metrics.string(), "--preset", "elife", "--out", (dir / "s.jsonl").string()});
  EXPECT_EQ(strict.code, 1);
  EXPECT_EQ(error_line(strict)["error"], "InvalidPool");
  EXPECT_EQ(error_line(strict)["detail"], "d");
  const auto lenient = run({"select", "--metrics", metrics.string(), "--preset", "elife", "--lenient", "--out", (dir / "s.jsonl").string()});
  EXPECT_EQ(lenient.code, 0);
  EXPECT_EQ(chosen_in((dir / "s.jsonl").string(), "e"), "a");
}

TEST(CliSelect, NeedsWeights) {
  TempDir dir;
  EXPECT_EQ(run({"select", "--metrics", fixture("worked_metrics.jsonl"), "--out", (dir / "s.jsonl").string()}).code, 1);
  EXPECT_EQ(run({"select", "--metrics", fixture("worked_metrics.jsonl"), "--w-readability", "1.5", "--out", (dir / "s.jsonl").string()}).code, 1);
}

TEST(CliRank, PresetK) {
  TempDir dir;
  for (const auto& [dataset, k] : std::vector<std::pair<std::string, std::size_t>>{{"elife", 2}, {"plos", 3}}) {
    const auto out = (dir / (dataset + ".jsonl")).string();
    const auto r = run({"rank-examples", "--corpus", fixture("corpus.jsonl"), "--dataset", dataset, "--scorers",
                        fixture("scorers.json"), "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto records = load_results(out);
    const auto ranking = records_of<RankingRecord>(records);
    ASSERT_EQ(ranking.size(), 5u);
    for (std::size_t i = 0; i < ranking.size(); ++i) EXPECT_EQ(ranking[i].rank, i + 1);
    const auto topk = records_of<TopKRecord>(records).at(0);
    EXPECT_EQ(topk.k, k);
    ASSERT_EQ(topk.document_ids.size(), k);
    EXPECT_EQ(topk.document_ids[0], ranking[0].document_id);
  }
}

TEST(CliRank, Errors) {
  TempDir dir;
  const auto one = dir.write("one.jsonl", R"({"id":"a","abstract":"x.","lay_summary":"Simple words."})" "\n");
  EXPECT_EQ(run({"rank-examples", "--corpus", one.string(), "--dataset", "elife", "--out", (dir / "r.jsonl").string()}).code, 1);
  const auto missing = dir.write("m.jsonl", R"({"id":"a","abstract":"x."})" "\n" R"({"id":"b","abstract":"y.","lay_summary":"Hi."})" "\n");
  const auto r = run({"rank-examples", "--corpus", missing.string(), "--dataset", "elife", "--k", "1", "--out", (dir / "r.jsonl").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(error_line(r)["error"], "MissingField");
  EXPECT_EQ(run({"rank-examples", "--corpus", missing.string(), "--dataset", "elife", "--k", "1", "--lenient", "--out",
                 (dir / "r.jsonl").string()}).code, 0);
}

TEST(CliPrompt, ZeroShot) {
  TempDir dir;
  const auto out = (dir / "p.jsonl").string();
  const auto r = run({"build-prompt", "--corpus", fixture("corpus.jsonl"), "--dataset", "elife", "--template", "intro", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto prompts = records_of<PromptRecord>(load_results(out));
  ASSERT_EQ(prompts.size(), 5u);
  EXPECT_EQ(prompts[0].document_id, "elife-001");
  EXPECT_NE(prompts[0].prompt_text.find("Dengue infects millions"), std::string::npos);
  EXPECT_TRUE(prompts[0].prompt_text.ends_with("Lay summary for this article:"));
}

TEST(CliPrompt, FewShotFromRanking) {
  TempDir dir;
  const auto ranking = (dir / "rank.jsonl").string();
  ASSERT_EQ(run({"rank-examples", "--corpus", fixture("corpus.jsonl"), "--dataset", "plos", "--scorers", fixture("scorers.json"),
                 "--out", ranking}).code, 0);
  const auto out = (dir / "p.jsonl").string();
  const auto r = run({"build-prompt", "--corpus", fixture("corpus.jsonl"), "--dataset", "plos", "--few-shot", "--ranking", ranking,
                      "--format", "llama3-instruct", "--template", "persona", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& p : records_of<PromptRecord>(load_results(out))) {
    std::size_t users = 0;
    for (auto pos = p.prompt_text.find("<|start_header_id|>user"); pos != std::string::npos;
         pos = p.prompt_text.find("<|start_header_id|>user", pos + 1))
      ++users;
    EXPECT_EQ(users, 4u);
    EXPECT_TRUE(p.prompt_text.ends_with("<|start_header_id|>assistant<|end_header_id|>\n\n"));
  }
}

TEST(CliPrompt, MissingFieldNamesDocument) {
  TempDir dir;
  const auto corpus = dir.write("c.jsonl", R"({"id":"a","abstract":"x.","introduction":"i."})" "\n" R"({"id":"b","abstract":"y."})" "\n");
  const auto r = run({"build-prompt", "--corpus", corpus.string(), "--dataset", "elife", "--template", "intro", "--out",
                      (dir / "p.jsonl").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(error_line(r)["error"], "MissingField");
  EXPECT_NE(error_line(r)["message"].get<std::string>().find("'b'"), std::string::npos);
  EXPECT_EQ(run({"build-prompt", "--corpus", corpus.string(), "--dataset", "elife", "--template", "intro", "--lenient", "--out",
                 (dir / "p.jsonl").string()}).code, 0);
  EXPECT_EQ(records_of<PromptRecord>(load_results(dir / "p.jsonl")).size(), 1u);
}

TEST(CliPresets, PrintsPublishedValues) {
  const auto r = run({"presets"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["selection"]["elife"]["w_readability"], 0.675);
  EXPECT_EQ(j["selection"]["plos"]["w_factuality"], 0.75);
  EXPECT_EQ(j["fewshot"]["elife"]["k"], 2);
  EXPECT_EQ(j["fewshot"]["plos"]["k"], 3);
  EXPECT_EQ(j["inference"]["des_alternate"]["repetition_penalty"], 1.1);
}

TEST(CliPresets, HelpAndVersion) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 1);
}
