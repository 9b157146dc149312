// Stand-in scorer process speaking the line protocol on stdin/stdout.
// Used by the tests and handy for dry runs of scorer registries.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "laysumm/scorer.hpp"

int main(int argc, char** argv) {
  std::string formula_spec = "token-overlap";
  int delay_ms = 0;
  int exit_after = -1;
  bool emit_garbage = false;
  std::optional<double> score_override;

  CLI::App app{"Deterministic mock scorer (stdin/stdout line protocol)"};
  app.add_option("--formula", formula_spec, "constant(c), length-ratio or token-overlap");
  app.add_option("--delay-ms", delay_ms, "Sleep before every response");
  app.add_option("--exit-after", exit_after, "Exit after answering this many requests");
  app.add_flag("--emit-garbage", emit_garbage, "Answer with a line that is not JSON");
  app.add_option("--score-override", score_override, "Answer every request with this score");
  CLI11_PARSE(app, argc, argv);

  laysumm::mock::Formula formula;
  try {
    formula = laysumm::mock::Formula::parse(formula_spec);
  } catch (const laysumm::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  int answered = 0;
  for (std::string line; std::getline(std::cin, line);) {
    if (line.empty()) continue;
    if (exit_after >= 0 && answered >= exit_after) return 0;
    if (delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    if (emit_garbage) {
      std::cout << "this is not json\n" << std::flush;
      ++answered;
      continue;
    }
    laysumm::ScoreResponse response;
    try {
      const auto request = laysumm::wire::decode_request(line);
      response = laysumm::mock::respond(formula, request);
      if (score_override && response.ok()) response.score = *score_override;
    } catch (const laysumm::Error& e) {
      response.request_id = "unknown";
      response.error = e.what();
    }
    std::cout << laysumm::wire::encode_response(response) << std::flush;
    ++answered;
  }
  return 0;
}
