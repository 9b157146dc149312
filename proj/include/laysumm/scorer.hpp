#pragma once

// Client side of the external scorer protocol.
//
// Wire format: UTF-8, one JSON object per line, '\n' terminated.
//   request   {"id": str, "candidate": str, "source"?: str, "reference"?: str}
//   response  {"id": str, "score": number}  or  {"id": str, "error": str}
// Only the inputs an endpoint declares it needs are sent. Over the
// subprocess transport requests go to the child's stdin and responses come
// back on its stdout (stderr is inherited). Over HTTP a window of requests
// is POSTed as a JSON array and a JSON array of responses comes back.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "laysumm/error.hpp"
#include "laysumm/resources.hpp"
#include "laysumm/rouge.hpp"

namespace laysumm {

enum class Transport { Subprocess, Http, Mock };

inline Transport parse_transport(std::string_view name) {
  if (name == "subprocess" || name == "subprocess-stdio" || name == "stdio") return Transport::Subprocess;
  if (name == "http") return Transport::Http;
  if (name == "mock") return Transport::Mock;
  throw Error(ErrorKind::InvalidParameter, "unknown transport '" + std::string(name) + "'",
              std::string(name));
}

inline std::string_view transport_name(Transport t) {
  switch (t) {
    case Transport::Subprocess: return "subprocess";
    case Transport::Http: return "http";
    case Transport::Mock: return "mock";
  }
  return "?";
}

struct ScorerEndpoint {
  std::string name;
  Transport transport = Transport::Subprocess;
  std::string address;  // shell command, URL, or mock formula
  std::chrono::milliseconds timeout{60000};
  bool needs_reference = false;
  bool needs_source = false;
  bool unit_range = true;  // scores must lie in [0, 1]
  std::size_t window = 8;  // requests in flight before awaiting responses
};

struct ScoreRequest {
  std::string request_id;
  std::string candidate;
  std::optional<std::string> source;
  std::optional<std::string> reference;
};

struct ScoreResponse {
  std::string request_id;
  std::optional<double> score;
  std::optional<std::string> error;

  bool ok() const { return score.has_value(); }
  bool operator==(const ScoreResponse&) const = default;
};

namespace wire {

using json = nlohmann::ordered_json;

inline json request_json(const ScoreRequest& request, const ScorerEndpoint& endpoint) {
  json j{{"id", request.request_id}, {"candidate", request.candidate}};
  if (endpoint.needs_source && request.source) j["source"] = *request.source;
  if (endpoint.needs_reference && request.reference) j["reference"] = *request.reference;
  return j;
}

inline std::string encode_request(const ScoreRequest& request, const ScorerEndpoint& endpoint) {
  return request_json(request, endpoint).dump() + "\n";
}

inline ScoreRequest decode_request(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ProtocolError, std::string("request is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("candidate") ||
      !j["candidate"].is_string())
    throw Error(ErrorKind::ProtocolError, "request needs string 'id' and 'candidate'");
  ScoreRequest r;
  r.request_id = j["id"].get<std::string>();
  r.candidate = j["candidate"].get<std::string>();
  if (j.contains("source") && j["source"].is_string()) r.source = j["source"].get<std::string>();
  if (j.contains("reference") && j["reference"].is_string()) r.reference = j["reference"].get<std::string>();
  return r;
}

inline json response_json(const ScoreResponse& response) {
  json j{{"id", response.request_id}};
  if (response.score) {
    j["score"] = *response.score;
  } else {
    j["error"] = response.error.value_or("unspecified error");
  }
  return j;
}

inline std::string encode_response(const ScoreResponse& response) {
  return response_json(response).dump() + "\n";
}

inline ScoreResponse decode_response(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ProtocolError, "response is not a JSON object");
  auto id = j.find("id");
  if (id == j.end() || !id->is_string()) throw Error(ErrorKind::ProtocolError, "response lacks string 'id'");
  ScoreResponse r;
  r.request_id = id->get<std::string>();
  const bool has_score = j.contains("score");
  const bool has_error = j.contains("error");
  if (has_score == has_error)
    throw Error(ErrorKind::ProtocolError, "response '" + r.request_id + "' needs exactly one of score/error",
                r.request_id);
  if (has_score) {
    if (!j["score"].is_number())
      throw Error(ErrorKind::ProtocolError, "score of '" + r.request_id + "' is not a number", r.request_id);
    r.score = j["score"].get<double>();
  } else {
    r.error = j["error"].is_string() ? j["error"].get<std::string>() : j["error"].dump();
  }
  return r;
}

inline ScoreResponse decode_response_line(std::string_view line) {
  try {
    return decode_response(json::parse(line));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ProtocolError, "malformed response line: " + std::string(line));
  }
}

}  // namespace wire

// ---------------------------------------------------------------------------
// Deterministic mock formulas

namespace mock {

/// Candidates containing this marker get an error response.
inline constexpr std::string_view kFailMarker = "<<fail>>";

/// constant(c): c.  length-ratio: candidate words / source words, clamped
/// to [0, 1].  token-overlap: share of distinct candidate tokens that also
/// occur in the source.
struct Formula {
  enum class Kind { Constant, LengthRatio, TokenOverlap };
  Kind kind = Kind::Constant;
  double constant = 0.0;

  static Formula parse(std::string_view spec) {
    Formula f;
    if (spec == "length-ratio") {
      f.kind = Kind::LengthRatio;
    } else if (spec == "token-overlap") {
      f.kind = Kind::TokenOverlap;
    } else if (spec.starts_with("constant(") && spec.ends_with(")")) {
      f.kind = Kind::Constant;
      const std::string arg(spec.substr(9, spec.size() - 10));
      std::size_t used = 0;
      try {
        f.constant = std::stod(arg, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != arg.size() || arg.empty() || !std::isfinite(f.constant))
        throw Error(ErrorKind::InvalidParameter, "bad constant in mock spec '" + std::string(spec) + "'");
    } else {
      throw Error(ErrorKind::InvalidParameter, "unknown mock scorer '" + std::string(spec) + "'",
                  std::string(spec));
    }
    return f;
  }

  bool needs_source() const { return kind != Kind::Constant; }

  std::string_view name() const {
    switch (kind) {
      case Kind::Constant: return "constant";
      case Kind::LengthRatio: return "length-ratio";
      case Kind::TokenOverlap: return "token-overlap";
    }
    return "?";
  }

  double apply(std::string_view candidate, std::string_view source) const {
    switch (kind) {
      case Kind::Constant:
        return constant;
      case Kind::LengthRatio: {
        auto words = [](std::string_view s) {
          std::istringstream in{std::string(s)};
          std::size_t n = 0;
          for (std::string w; in >> w;) ++n;
          return n;
        };
        const std::size_t src = words(source);
        if (src == 0) return 0.0;
        return std::min(1.0, static_cast<double>(words(candidate)) / static_cast<double>(src));
      }
      case Kind::TokenOverlap: {
        const auto c = rouge_tokens(candidate);
        const auto s = rouge_tokens(source);
        const std::set<std::string> cand(c.begin(), c.end());
        const std::set<std::string> src(s.begin(), s.end());
        if (cand.empty()) return 0.0;
        std::size_t shared = 0;
        for (const auto& t : cand) shared += src.count(t);
        return static_cast<double>(shared) / static_cast<double>(cand.size());
      }
    }
    return 0.0;
  }
};

inline ScoreResponse respond(const Formula& formula, const ScoreRequest& request) {
  ScoreResponse r;
  r.request_id = request.request_id;
  if (request.candidate.find(kFailMarker) != std::string::npos) {
    r.error = "injected failure";
  } else if (formula.needs_source() && !request.source) {
    r.error = "missing source";
  } else {
    r.score = formula.apply(request.candidate, request.source.value_or(""));
  }
  return r;
}

}  // namespace mock

// ---------------------------------------------------------------------------
// Connections

/// One live channel to a scorer. Not safe for concurrent use; give each
/// worker its own connection.
class ScorerConnection {
 public:
  explicit ScorerConnection(ScorerEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  virtual ~ScorerConnection() = default;
  ScorerConnection(const ScorerConnection&) = delete;
  ScorerConnection& operator=(const ScorerConnection&) = delete;

  const ScorerEndpoint& endpoint() const { return endpoint_; }

  /// Mirrors every wire line to `out`, prefixed "> " (sent) or "< " (received).
  void set_transcript(std::ostream* out) { transcript_ = out; }

  /// Sends one window of requests and returns the raw responses in arrival order.
  virtual std::vector<ScoreResponse> exchange(std::span<const ScoreRequest> window) = 0;

 protected:
  void log(char direction, std::string_view line) {
    if (!transcript_) return;
    *transcript_ << direction << ' ' << line;
    if (!line.ends_with('\n')) *transcript_ << '\n';
  }

  [[noreturn]] void fail(ErrorKind kind, const std::string& message) const {
    throw Error(kind, "scorer '" + endpoint_.name + "': " + message, endpoint_.name);
  }

  ScorerEndpoint endpoint_;
  std::ostream* transcript_ = nullptr;
};

class MockConnection final : public ScorerConnection {
 public:
  explicit MockConnection(ScorerEndpoint endpoint)
      : ScorerConnection(std::move(endpoint)), formula_(mock::Formula::parse(endpoint_.address)) {}

  std::vector<ScoreResponse> exchange(std::span<const ScoreRequest> window) override {
    std::vector<ScoreResponse> out;
    out.reserve(window.size());
    for (const auto& request : window) {
      log('>', wire::encode_request(request, endpoint_));
      out.push_back(mock::respond(formula_, request));
      log('<', wire::encode_response(out.back()));
    }
    return out;
  }

 private:
  mock::Formula formula_;
};

/// Runs `address` through /bin/sh and talks to it over a socket pair bound
/// to the child's stdin and stdout.
class SubprocessConnection final : public ScorerConnection {
 public:
  explicit SubprocessConnection(ScorerEndpoint endpoint) : ScorerConnection(std::move(endpoint)) {
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
      fail(ErrorKind::TransportError, std::string("socketpair: ") + std::strerror(errno));
    const std::string command = endpoint_.address;
    pid_ = ::fork();
    if (pid_ < 0) {
      ::close(sv[0]);
      ::close(sv[1]);
      fail(ErrorKind::TransportError, std::string("fork: ") + std::strerror(errno));
    }
    if (pid_ == 0) {
      ::dup2(sv[1], STDIN_FILENO);
      ::dup2(sv[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(sv[1]);
    fd_ = sv[0];
    ::fcntl(fd_, F_SETFL, ::fcntl(fd_, F_GETFL) | O_NONBLOCK);
  }

  ~SubprocessConnection() override {
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_WR);
      ::close(fd_);
    }
    if (pid_ > 0) {
      const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(2);
      int status = 0;
      while (::waitpid(pid_, &status, WNOHANG) == 0) {
        if (std::chrono::steady_clock::now() > deadline) {
          ::kill(pid_, SIGKILL);
          ::waitpid(pid_, &status, 0);
          break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
    }
  }

  std::vector<ScoreResponse> exchange(std::span<const ScoreRequest> window) override {
    if (broken_) fail(ErrorKind::TransportError, "connection is no longer usable");
    std::string outgoing;
    for (const auto& request : window) {
      const std::string line = wire::encode_request(request, endpoint_);
      log('>', line);
      outgoing += line;
    }
    std::vector<ScoreResponse> responses;
    std::size_t written = 0;
    const auto deadline = std::chrono::steady_clock::now() + endpoint_.timeout;

    while (responses.size() < window.size()) {
      const auto now = std::chrono::steady_clock::now();
      if (now >= deadline) {
        broken_ = true;
        fail(ErrorKind::TimeoutError, "no response within " + std::to_string(endpoint_.timeout.count()) + " ms");
      }
      pollfd pfd{fd_, static_cast<short>(POLLIN | (written < outgoing.size() ? POLLOUT : 0)), 0};
      const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
      const int ready = ::poll(&pfd, 1, static_cast<int>(std::max<long long>(wait, 1)));
      if (ready < 0) {
        if (errno == EINTR) continue;
        broken_ = true;
        fail(ErrorKind::TransportError, std::string("poll: ") + std::strerror(errno));
      }
      if (ready == 0) continue;

      if ((pfd.revents & POLLOUT) && written < outgoing.size()) {
        const ssize_t n = ::send(fd_, outgoing.data() + written, outgoing.size() - written, MSG_NOSIGNAL);
        if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
          broken_ = true;
          fail(ErrorKind::TransportError, "scorer process stopped reading requests");
        }
        if (n > 0) written += static_cast<std::size_t>(n);
      }
      if (pfd.revents & (POLLIN | POLLHUP | POLLERR)) {
        char buf[65536];
        const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
        if (n == 0 || (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR)) {
          broken_ = true;
          fail(ErrorKind::TransportError, "scorer process exited or closed its output");
        }
        if (n > 0) buffer_.append(buf, static_cast<std::size_t>(n));
        std::size_t pos;
        while ((pos = buffer_.find('\n')) != std::string::npos) {
          std::string line = buffer_.substr(0, pos);
          buffer_.erase(0, pos + 1);
          log('<', line);
          try {
            responses.push_back(wire::decode_response_line(line));
          } catch (const Error& e) {
            broken_ = true;
            fail(ErrorKind::ProtocolError, e.what());
          }
        }
      }
    }
    return responses;
  }

 private:
  pid_t pid_ = -1;
  int fd_ = -1;
  std::string buffer_;
  bool broken_ = false;
};

/// POSTs each window as a JSON array to `http://host:port/path`.
class HttpConnection final : public ScorerConnection {
 public:
  explicit HttpConnection(ScorerEndpoint endpoint) : ScorerConnection(std::move(endpoint)) {
    const std::string& url = endpoint_.address;
    if (!url.starts_with("http://")) fail(ErrorKind::InvalidParameter, "HTTP address must start with http://");
    const auto slash = url.find('/', 7);
    base_ = slash == std::string::npos ? url : url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : url.substr(slash);
  }

  std::vector<ScoreResponse> exchange(std::span<const ScoreRequest> window) override {
    wire::json body = wire::json::array();
    for (const auto& request : window) body.push_back(wire::request_json(request, endpoint_));
    const std::string payload = body.dump();
    log('>', payload);

    httplib::Client client(base_);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());

    const auto started = std::chrono::steady_clock::now();
    auto result = client.Post(path_, payload, "application/json");
    if (!result) {
      const auto elapsed = std::chrono::steady_clock::now() - started;
      if (result.error() == httplib::Error::ConnectionTimeout ||
          (result.error() == httplib::Error::Read && elapsed >= endpoint_.timeout))
        fail(ErrorKind::TimeoutError, "no response within " + std::to_string(endpoint_.timeout.count()) + " ms");
      fail(ErrorKind::TransportError, "HTTP request failed: " + httplib::to_string(result.error()));
    }
    if (result->status != 200)
      fail(ErrorKind::TransportError, "HTTP status " + std::to_string(result->status));
    log('<', result->body);

    wire::json parsed;
    try {
      parsed = wire::json::parse(result->body);
    } catch (const wire::json::parse_error&) {
      fail(ErrorKind::ProtocolError, "response body is not JSON");
    }
    if (!parsed.is_array()) fail(ErrorKind::ProtocolError, "response body is not a JSON array");
    std::vector<ScoreResponse> out;
    for (const auto& item : parsed) {
      try {
        out.push_back(wire::decode_response(item));
      } catch (const Error& e) {
        fail(ErrorKind::ProtocolError, e.what());
      }
    }
    return out;
  }

 private:
  std::string base_;
  std::string path_;
};

inline std::unique_ptr<ScorerConnection> connect(const ScorerEndpoint& endpoint) {
  switch (endpoint.transport) {
    case Transport::Mock: return std::make_unique<MockConnection>(endpoint);
    case Transport::Subprocess: return std::make_unique<SubprocessConnection>(endpoint);
    case Transport::Http: return std::make_unique<HttpConnection>(endpoint);
  }
  throw Error(ErrorKind::InvalidParameter, "unknown transport");
}

/// Throws InvalidParameter when a request cannot be sent to `endpoint`.
inline void check_request(const ScoreRequest& request, const ScorerEndpoint& endpoint) {
  auto reject = [&](const std::string& why) {
    throw Error(ErrorKind::InvalidParameter,
                "request '" + request.request_id + "' for scorer '" + endpoint.name + "': " + why,
                request.request_id);
  };
  if (request.request_id.empty()) reject("empty request id");
  if (request.candidate.empty()) reject("empty candidate");
  if (endpoint.needs_source && !request.source) reject("scorer needs a source text");
  if (endpoint.needs_reference && !request.reference) reject("scorer needs a reference text");
}

/// Scores every request, `endpoint.window` at a time. Responses are matched
/// by id and returned in request order; per-request failures come back as
/// error responses, transport failures abort the whole batch.
inline std::vector<ScoreResponse> score_batch(ScorerConnection& connection,
                                              std::span<const ScoreRequest> requests) {
  const ScorerEndpoint& endpoint = connection.endpoint();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    check_request(requests[i], endpoint);
    if (!index.emplace(requests[i].request_id, i).second)
      throw Error(ErrorKind::InvalidParameter, "duplicate request id '" + requests[i].request_id + "'",
                  requests[i].request_id);
  }

  auto protocol_error = [&](const std::string& why) {
    throw Error(ErrorKind::ProtocolError, "scorer '" + endpoint.name + "': " + why, endpoint.name);
  };

  std::vector<std::optional<ScoreResponse>> slots(requests.size());
  const std::size_t window = std::max<std::size_t>(endpoint.window, 1);
  for (std::size_t start = 0; start < requests.size(); start += window) {
    const auto chunk = requests.subspan(start, std::min(window, requests.size() - start));
    auto responses = connection.exchange(chunk);
    if (responses.size() != chunk.size())
      protocol_error("expected " + std::to_string(chunk.size()) + " responses, got " +
                     std::to_string(responses.size()));
    for (auto& response : responses) {
      auto it = index.find(response.request_id);
      if (it == index.end() || it->second < start || it->second >= start + chunk.size())
        protocol_error("response for unknown request id '" + response.request_id + "'");
      if (slots[it->second]) protocol_error("duplicate response for '" + response.request_id + "'");
      if (response.score) {
        const double s = *response.score;
        if (!std::isfinite(s)) protocol_error("non-finite score for '" + response.request_id + "'");
        if (endpoint.unit_range && (s < 0.0 || s > 1.0))
          protocol_error("score " + std::to_string(s) + " for '" + response.request_id +
                         "' is outside the declared [0, 1] range");
      }
      slots[it->second] = std::move(response);
    }
  }

  std::vector<ScoreResponse> out;
  out.reserve(slots.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

inline std::vector<ScoreResponse> score_batch(const ScorerEndpoint& endpoint,
                                              std::span<const ScoreRequest> requests) {
  auto connection = connect(endpoint);
  return score_batch(*connection, requests);
}

/// In-process endpoint backed by one of the mock formulas.
inline ScorerEndpoint mock_scorer(std::string_view spec, std::string name = {}) {
  const auto formula = mock::Formula::parse(spec);
  ScorerEndpoint endpoint;
  endpoint.name = name.empty() ? "mock-" + std::string(formula.name()) : std::move(name);
  endpoint.transport = Transport::Mock;
  endpoint.address = std::string(spec);
  endpoint.needs_source = formula.needs_source();
  endpoint.unit_range = formula.kind != mock::Formula::Kind::Constant ||
                        (formula.constant >= 0.0 && formula.constant <= 1.0);
  return endpoint;
}

// ---------------------------------------------------------------------------
// Registry

/// Which result group a scorer's metric belongs to. Only factuality scorers
/// take part in selection and example ranking.
enum class MetricGroup { Factuality, Relevance, Other };

inline MetricGroup parse_metric_group(std::string_view name) {
  if (name == "factuality") return MetricGroup::Factuality;
  if (name == "relevance") return MetricGroup::Relevance;
  if (name == "other") return MetricGroup::Other;
  throw Error(ErrorKind::InvalidParameter, "unknown metric group '" + std::string(name) + "'",
              std::string(name));
}

struct RegisteredScorer {
  ScorerEndpoint endpoint;
  MetricGroup group = MetricGroup::Factuality;
};

/// Named scorer endpoints, loaded from JSON:
///
///   {"scorers": [{"name": "alignscore", "transport": "subprocess",
///                 "address": "python -m adapter --scorer alignscore",
///                 "needs_source": true, "needs_reference": false,
///                 "range": "unit", "timeout_ms": 60000, "window": 8,
///                 "group": "factuality"}]}
class ScorerRegistry {
 public:
  void add(RegisteredScorer scorer) {
    const std::string& name = scorer.endpoint.name;
    if (name.empty()) throw Error(ErrorKind::InvalidParameter, "scorer name is empty");
    if (find(name)) throw Error(ErrorKind::InvalidParameter, "duplicate scorer name '" + name + "'", name);
    scorers_.push_back(std::move(scorer));
  }

  const RegisteredScorer* find(std::string_view name) const {
    for (const auto& s : scorers_)
      if (s.endpoint.name == name) return &s;
    return nullptr;
  }

  const std::vector<RegisteredScorer>& entries() const { return scorers_; }
  bool empty() const { return scorers_.empty(); }

  static ScorerRegistry from_json(const nlohmann::json& j) {
    ScorerRegistry registry;
    try {
      for (const auto& item : j.at("scorers")) {
        RegisteredScorer s;
        s.endpoint.name = item.at("name").get<std::string>();
        s.endpoint.transport = parse_transport(item.at("transport").get<std::string>());
        s.endpoint.address = item.at("address").get<std::string>();
        s.endpoint.timeout = std::chrono::milliseconds(item.value("timeout_ms", 60000));
        s.endpoint.needs_source = item.value("needs_source", false);
        s.endpoint.needs_reference = item.value("needs_reference", false);
        const std::string range = item.value("range", std::string("unit"));
        if (range != "unit" && range != "unbounded")
          throw Error(ErrorKind::InvalidParameter, "range must be 'unit' or 'unbounded'");
        s.endpoint.unit_range = range == "unit";
        s.endpoint.window = item.value("window", std::size_t{8});
        s.group = parse_metric_group(item.value("group", std::string("factuality")));
        if (s.endpoint.transport == Transport::Mock) mock::Formula::parse(s.endpoint.address);
        registry.add(std::move(s));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::InvalidParameter, std::string("bad scorer registry: ") + e.what());
    }
    return registry;
  }

  static ScorerRegistry load(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::InvalidParameter, "scorer registry " + path.string() + " is not JSON: " + e.what());
    }
    return from_json(j);
  }

 private:
  std::vector<RegisteredScorer> scorers_;
};

}  // namespace laysumm
