// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if
// any fails. Tolerances are pinned here, not taken from flags.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "des_cases.hpp"
#include "laysumm/app.hpp"
#include "laysumm/des.hpp"
#include "laysumm/fewshot.hpp"
#include "laysumm/prompt.hpp"
#include "laysumm/readability.hpp"
#include "laysumm/rouge.hpp"
#include "oracles/des_oracle.hpp"
#include "oracles/rouge_oracle.hpp"

using namespace laysumm;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kRougeTol = 1e-9;
constexpr double kFixtureTol = 1e-6;
constexpr double kCliTol = 0.01;
constexpr double kInvarianceTol = 1e-9;
constexpr double kDesTol = 1e-9;

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

const std::filesystem::path kFixtures = env_or("LAYSUMM_FIXTURES", LAYSUMM_DEFAULT_FIXTURES);

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

Outcome rouge_oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> len(0, 8), sym(0, 2);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<int> a(len(rng)), b(len(rng));
    for (auto& x : a) x = sym(rng);
    for (auto& x : b) x = sym(rng);
    const double diffs[] = {
        std::abs(rouge_n<int>(a, b, 1).f1 - oracle::rouge_n(a, b, 1).f),
        std::abs(rouge_n<int>(a, b, 2).f1 - oracle::rouge_n(a, b, 2).f),
        std::abs(rouge_l<int>(a, b).f1 - oracle::rouge_l(a, b).f),
    };
    for (double d : diffs) worst = std::max(worst, d);
  }
  const double elapsed = seconds_since(start);
  o.require(worst <= kRougeTol, "max |diff| " + fmt(worst));
  o.require(elapsed < 60.0, "took " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "10000 pairs, max |diff| " + fmt(worst) + ", " + fmt(elapsed) + " s";
  return o;
}

Outcome readability_fixtures() {
  Outcome o;
  const auto dir = data_dir();
  const auto rules = TextRules::load(dir);
  const auto dale_chall = FamiliarWordList::load(dir / "dale_chall_words.txt");
  const FamiliarWordList small({"the", "dog", "saw", "and", "cat", "ran", "home", "a", "big", "red", "sun"});

  const auto cat = tokenize("The cat sat on the mat.", rules.abbreviations);
  const double f = fkgl(cat, rules.syllables);
  const double c = cli(cat);
  const double d_familiar = dcrs(tokenize("the dog saw the cat and a big red sun"), small);
  const double d_difficult = dcrs(tokenize("the dog saw quantum entanglement and the cat ran home"), small);
  o.require(std::abs(f - -1.45) <= kFixtureTol, "fkgl " + fmt(f));
  o.require(std::abs(c - -4.07) <= kCliTol, "cli " + fmt(c));
  o.require(std::abs(d_familiar - 0.496) <= kFixtureTol, "dcrs(all familiar) " + fmt(d_familiar));
  o.require(std::abs(d_difficult - 7.2905) <= kFixtureTol, "dcrs(2 difficult) " + fmt(d_difficult));

  std::mt19937 rng(1002);
  const std::vector<std::string> vocab = {"cells", "protein", "the", "researchers", "found", "that", "mosquitoes",
                                          "carry", "a", "virus", "which", "infects", "children", "in", "tropical",
                                          "regions", "genetic", "analysis", "showed", "water", "extraordinary"};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::string text;
    const int sentences = 1 + int(rng() % 5);
    for (int s = 0; s < sentences; ++s) {
      std::string sentence;
      for (int w = 0, n = 1 + int(rng() % 14); w < n; ++w) {
        std::string word = vocab[rng() % vocab.size()];
        if (w == 0) word[0] = char(std::toupper(static_cast<unsigned char>(word[0])));
        sentence += (w ? " " : "") + word;
      }
      text += (s ? " " : "") + sentence + ".";
    }
    const auto once = readability_all(text, dale_chall, rules);
    const auto twice = readability_all(text + " " + text, dale_chall, rules);
    worst = std::max({worst, std::abs(once.fkgl - twice.fkgl), std::abs(once.dcrs - twice.dcrs),
                      std::abs(once.cli - twice.cli)});
  }
  o.require(worst <= kInvarianceTol, "duplication changed an index by " + fmt(worst));
  if (o.pass)
    o.detail = "fkgl " + fmt(f) + ", cli " + fmt(c) + ", dcrs " + fmt(d_familiar) + " / " + fmt(d_difficult) +
               ", duplication max |diff| " + fmt(worst);
  return o;
}

Outcome des_worked_example() {
  Outcome o;
  const auto pool = des_cases::worked_example();
  const std::vector<std::tuple<std::string, std::vector<double>, std::string>> expected = {
      {"elife", {0.675, 0.550, 0.275}, "C1"},
      {"plos", {0.25, 0.25 / 3 + 0.75, 0.25 / 6 + 0.375}, "C2"},
  };
  for (const auto& [preset, s, winner] : expected) {
    const auto cfg = selection_preset(preset);
    const auto got = select(pool, cfg);
    const auto ref = oracle::des(des_cases::readability_table(pool), des_cases::factuality_table(pool),
                                 cfg.w_readability, cfg.w_factuality);
    for (std::size_t i = 0; i < 3; ++i) {
      o.require(std::abs(got.per_candidate[i].overall - s[i]) <= kDesTol,
                preset + " S[" + std::to_string(i) + "] = " + fmt(got.per_candidate[i].overall));
      o.require(std::abs(ref.s[i] - s[i]) <= kDesTol, preset + " oracle S[" + std::to_string(i) + "] = " + fmt(ref.s[i]));
    }
    o.require(got.chosen_candidate_id == winner, preset + " chose " + got.chosen_candidate_id);
    o.require(pool[ref.winner].candidate_id == winner, preset + " oracle chose " + pool[ref.winner].candidate_id);
  }
  if (o.pass) o.detail = "elife S=(0.675, 0.55, 0.275) -> C1; plos S=(0.25, 0.8333, 0.4167) -> C2";
  return o;
}

Outcome des_presets() {
  Outcome o;
  const auto elife = selection_preset("elife"), plos = selection_preset("plos");
  o.require(elife.w_readability == 0.675 && elife.w_factuality == 0.325, "elife weights");
  o.require(plos.w_readability == 0.25 && plos.w_factuality == 0.75, "plos weights");
  o.require(fewshot_preset("elife").k == 2, "elife k");
  o.require(fewshot_preset("plos").k == 3, "plos k");
  o.require(selection_presets().size() == 2, "unexpected extra presets");
  if (o.pass) o.detail = "elife (0.675, 0.325) k=2; plos (0.25, 0.75) k=3";
  return o;
}

Outcome des_affine_invariance() {
  Outcome o;
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  for (int i = 0; i < 1000 && o.pass; ++i) {
    const auto pool = des_cases::random_pool(rng);
    const auto moved = des_cases::affine_transform(pool, rng);
    for (const auto& [name, cfg] : selection_presets()) {
      const auto a = select(pool, cfg), b = select(moved, cfg);
      o.require(a.chosen_index == b.chosen_index, "winner changed in pool " + std::to_string(i));
      for (std::size_t c = 0; c < pool.size(); ++c) {
        for (const auto& [m, v] : a.per_candidate[c].normalized_readability)
          worst = std::max(worst, std::abs(v - b.per_candidate[c].normalized_readability.at(m)));
        for (const auto& [m, v] : a.per_candidate[c].normalized_factuality)
          worst = std::max(worst, std::abs(v - b.per_candidate[c].normalized_factuality.at(m)));
      }
    }
  }
  // Normalised vectors are equal up to floating-point rounding of the transform.
  o.require(worst <= 1e-9, "normalised values moved by " + fmt(worst));
  if (o.pass) o.detail = "1000 pools, max normalised |diff| " + fmt(worst);
  return o;
}

Outcome des_boundary_weights() {
  Outcome o;
  std::mt19937_64 rng(1006);
  SelectionConfig only_r, only_f;
  only_r.w_readability = 1;
  only_r.w_factuality = 0;
  only_f.w_readability = 0;
  only_f.w_factuality = 1;
  for (int i = 0; i < 1000 && o.pass; ++i) {
    const auto pool = des_cases::random_pool(rng);
    const auto ref_r = oracle::des(des_cases::readability_table(pool), des_cases::factuality_table(pool), 1, 0);
    std::size_t argmax_r = 0, argmax_f = 0;
    for (std::size_t c = 1; c < pool.size(); ++c) {
      if (ref_r.r[c] > ref_r.r[argmax_r]) argmax_r = c;
      if (ref_r.f[c] > ref_r.f[argmax_f]) argmax_f = c;
    }
    o.require(select(pool, only_r).chosen_index == argmax_r, "(1,0) mismatch in pool " + std::to_string(i));
    o.require(select(pool, only_f).chosen_index == argmax_f, "(0,1) mismatch in pool " + std::to_string(i));
  }
  if (o.pass) o.detail = "1000 pools, both boundary weightings";
  return o;
}

int run_cli(std::vector<std::string> args, std::string* err = nullptr) {
  std::ostringstream out, e;
  const int code = app::run(args, out, e);
  if (err) *err = e.str();
  return code;
}

Outcome end_to_end_determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("laysumm_acceptance_" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  const auto start = Clock::now();
  std::vector<std::string> scores, selections;
  for (int jobs : {1, 1, 8}) {
    // Same paths every run: they are part of the recorded configuration.
    const auto metrics = (dir / "metrics.jsonl").string();
    const auto sel = (dir / "selection.jsonl").string();
    std::string err;
    o.require(run_cli({"score", "--corpus", (kFixtures / "cli/corpus.jsonl").string(), "--dataset", "elife",
                       "--candidates", (kFixtures / "cli/candidates.jsonl").string(), "--scorers",
                       (kFixtures / "cli/scorers.json").string(), "--jobs", std::to_string(jobs), "--out", metrics},
                      &err) == 0,
              "score failed: " + err);
    o.require(run_cli({"select", "--metrics", metrics, "--preset", "elife", "--jobs", std::to_string(jobs), "--out", sel},
                      &err) == 0,
              "select failed: " + err);
    if (!o.pass) break;
    scores.push_back(read_file(metrics));
    selections.push_back(read_file(sel));
  }
  const double elapsed = seconds_since(start);
  if (o.pass) {
    o.require(scores[0] == scores[1] && selections[0] == selections[1], "two runs differ");
    o.require(scores[0] == scores[2] && selections[0] == selections[2], "jobs 1 and 8 differ");
    o.require(std::count(scores[0].begin(), scores[0].end(), '\n') == 21, "expected header + 20 metric records");
    o.require(elapsed < 10.0, "took " + fmt(elapsed) + " s");
  }
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  if (o.pass) o.detail = "5 docs x 4 candidates, 3 runs byte-identical, " + fmt(elapsed) + " s";
  return o;
}

Outcome prompt_fidelity() {
  Outcome o;
  const auto dir = data_dir() / "templates";
  Document sentinel;
  sentinel.id = "s";
  sentinel.abstract = "\x01SENTINEL-ABSTRACT\x01";
  sentinel.introduction = "\x01SENTINEL-INTRO\x01";
  sentinel.article = "\x01SENTINEL-ARTICLE\x01";
  auto restore = [](std::string s, const std::string& from, const std::string& to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) s.replace(pos, from.size(), to);
    return s;
  };
  for (const char* name : {"initial", "persona", "intro", "guide"}) {
    std::string rendered = render(PromptTemplate::load(dir, name), sentinel);
    rendered = restore(rendered, *sentinel.introduction, "{introduction}");
    rendered = restore(rendered, sentinel.abstract, "{abstract}");
    rendered = restore(rendered, *sentinel.article, "{article}");
    o.require(rendered == read_file(dir / (std::string(name) + ".txt")), std::string(name) + " differs from stored text");
  }
  const auto formats = load_chat_formats(data_dir() / "chat_formats.json");
  const auto initial = PromptTemplate::load(dir, "initial");
  for (const auto& [fname, format] : formats) {
    for (std::size_t k = 1; k <= 3; ++k) {
      std::vector<Exemplar> exemplars;
      for (std::size_t i = 0; i < k; ++i) {
        Document d;
        d.id = "e" + std::to_string(i);
        d.abstract = "Exemplar abstract " + std::to_string(i) + ".";
        exemplars.push_back({d, "Exemplar summary " + std::to_string(i) + "."});
      }
      Document query;
      query.id = "q";
      query.abstract = "Query abstract.";
      const auto text = assemble_fewshot(initial, exemplars, query, format);
      std::size_t users = 0;
      for (auto pos = text.find(format.user_open); pos != std::string::npos; pos = text.find(format.user_open, pos + 1)) ++users;
      o.require(users == k + 1, fname + " k=" + std::to_string(k) + ": " + std::to_string(users) + " user turns");
    }
  }
  if (o.pass) o.detail = "4 templates byte-identical; k+1 user turns for k=1..3 in both chat formats";
  return o;
}

Outcome mock_only(bool everything_else_passed) {
  Outcome o;
  const auto registry = ScorerRegistry::load(kFixtures / "cli/scorers.json");
  for (const auto& s : registry.entries())
    o.require(s.endpoint.transport == Transport::Mock, "fixture scorer '" + s.endpoint.name + "' is not a mock");
  // The stdio mock process stands in for an external scorer.
  ScorerEndpoint proc;
  proc.name = "mock-process";
  proc.address = env_or("LAYSUMM_MOCK_SCORER", LAYSUMM_DEFAULT_MOCK_SCORER) + " --formula 'constant(0.25)'";
  proc.timeout = std::chrono::seconds(10);
  try {
    const std::vector<ScoreRequest> one{{"x", "candidate", std::nullopt, std::nullopt}};
    o.require(score_batch(proc, one).at(0).score == 0.25, "mock process returned a wrong score");
  } catch (const Error& e) {
    o.require(false, std::string("mock process failed: ") + e.what());
  }
  o.require(everything_else_passed, "another criterion failed");
  if (o.pass) o.detail = "all criteria met with in-process and stdio mock scorers only";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"rouge-oracle-equivalence", rouge_oracle_equivalence},
      {"readability-fixtures", readability_fixtures},
      {"des-worked-example", des_worked_example},
      {"des-presets", des_presets},
      {"des-affine-invariance", des_affine_invariance},
      {"des-boundary-weights", des_boundary_weights},
      {"end-to-end-determinism", end_to_end_determinism},
      {"prompt-fidelity", prompt_fidelity},
  };
  bool all = true;
  auto report = [&](const char* id, const Outcome& o) {
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << ": " << o.detail << std::endl;
    all = all && o.pass;
  };
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    report(c.id, o);
  }
  Outcome last;
  try {
    last = mock_only(all);
  } catch (const std::exception& e) {
    last.pass = false;
    last.detail = std::string("exception: ") + e.what();
  }
  report("mock-scorers-only", last);
  return all ? 0 : 1;
}
