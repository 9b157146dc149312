#pragma once

// Prompt templates and chat-style few-shot conversations. Text only; no
// model is ever called from here.

#include <nlohmann/json.hpp>

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "laysumm/document.hpp"
#include "laysumm/error.hpp"
#include "laysumm/resources.hpp"

namespace laysumm {

inline constexpr std::array<std::string_view, 5> kTemplateNames = {"initial", "article_llama", "persona",
                                                                    "intro", "guide"};
inline constexpr std::array<std::string_view, 3> kPlaceholders = {"abstract", "introduction", "article"};

/// A prompt body with `{abstract}`, `{introduction}` and `{article}`
/// placeholders; `{{` and `}}` stand for literal braces.
class PromptTemplate {
 public:
  struct Placeholder {
    std::string field;
  };
  using Segment = std::variant<std::string, Placeholder>;

  PromptTemplate(std::string name, std::string body) : name_(std::move(name)), body_(std::move(body)) {
    parse();
  }

  static PromptTemplate load(const std::filesystem::path& dir, std::string_view name) {
    return PromptTemplate(std::string(name), read_file(dir / (std::string(name) + ".txt")));
  }

  const std::string& name() const { return name_; }
  const std::string& body() const { return body_; }
  const std::vector<Segment>& segments() const { return segments_; }

  std::vector<std::string> fields() const {
    std::vector<std::string> out;
    for (const auto& s : segments_)
      if (const auto* p = std::get_if<Placeholder>(&s)) out.push_back(p->field);
    return out;
  }

 private:
  void parse() {
    std::string literal;
    auto bad = [&](const std::string& why) {
      throw Error(ErrorKind::InvalidParameter, "template '" + name_ + "': " + why, name_);
    };
    for (std::size_t i = 0; i < body_.size(); ++i) {
      const char c = body_[i];
      if (c == '{') {
        if (i + 1 < body_.size() && body_[i + 1] == '{') {
          literal += '{';
          ++i;
          continue;
        }
        const auto close = body_.find('}', i + 1);
        if (close == std::string::npos) bad("unterminated placeholder");
        std::string field = body_.substr(i + 1, close - i - 1);
        bool known = false;
        for (auto p : kPlaceholders) known = known || field == p;
        if (!known) bad("unknown placeholder {" + field + "}");
        if (!literal.empty()) segments_.emplace_back(std::move(literal));
        literal.clear();
        segments_.emplace_back(Placeholder{std::move(field)});
        i = close;
      } else if (c == '}') {
        if (i + 1 < body_.size() && body_[i + 1] == '}') {
          literal += '}';
          ++i;
          continue;
        }
        bad("stray '}'");
      } else {
        literal += c;
      }
    }
    if (!literal.empty()) segments_.emplace_back(std::move(literal));
  }

  std::string name_;
  std::string body_;
  std::vector<Segment> segments_;
};

inline std::map<std::string, PromptTemplate> load_templates(const std::filesystem::path& dir) {
  std::map<std::string, PromptTemplate> out;
  for (auto name : kTemplateNames) out.emplace(std::string(name), PromptTemplate::load(dir, name));
  return out;
}

namespace detail {

inline const std::string& document_field(const Document& doc, const std::string& field) {
  auto missing = [&]() -> const std::string& {
    throw Error(ErrorKind::MissingField, "document '" + doc.id + "' has no " + field, field);
  };
  if (field == "abstract") return doc.abstract.empty() ? missing() : doc.abstract;
  const std::optional<std::string>& value = field == "introduction" ? doc.introduction : doc.article;
  if (!value || value->empty()) return missing();
  return *value;
}

}  // namespace detail

/// Substitutes document fields verbatim into the template.
inline std::string render(const PromptTemplate& prompt, const Document& doc) {
  std::string out;
  for (const auto& segment : prompt.segments()) {
    if (const auto* text = std::get_if<std::string>(&segment)) {
      out += *text;
    } else {
      out += detail::document_field(doc, std::get<PromptTemplate::Placeholder>(segment).field);
    }
  }
  return out;
}

/// Literal delimiters of one instruction-tuned chat format. `system_slot`,
/// when set, is emitted once at the start of every conversation.
struct ChatTurnFormat {
  std::string name;
  std::string user_open;
  std::string user_close;
  std::string assistant_open;
  std::string assistant_close;
  std::optional<std::string> system_slot;

  void validate() const {
    if (user_open.empty() || user_close.empty() || assistant_close.empty())
      throw Error(ErrorKind::InvalidParameter,
                  "chat format '" + name + "' needs non-empty user_open, user_close and assistant_close", name);
  }
};

inline std::map<std::string, ChatTurnFormat> load_chat_formats(const std::filesystem::path& path) {
  std::map<std::string, ChatTurnFormat> out;
  try {
    const auto j = nlohmann::json::parse(read_file(path));
    for (const auto& item : j.at("formats")) {
      ChatTurnFormat f;
      f.name = item.at("name").get<std::string>();
      f.user_open = item.at("user_open").get<std::string>();
      f.user_close = item.at("user_close").get<std::string>();
      f.assistant_open = item.at("assistant_open").get<std::string>();
      f.assistant_close = item.at("assistant_close").get<std::string>();
      if (item.contains("system_slot") && !item["system_slot"].is_null())
        f.system_slot = item["system_slot"].get<std::string>();
      f.validate();
      if (!out.emplace(f.name, f).second)
        throw Error(ErrorKind::InvalidParameter, "duplicate chat format '" + f.name + "'", f.name);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidParameter, "bad chat format file " + path.string() + ": " + e.what());
  }
  return out;
}

struct Exemplar {
  Document document;
  std::string lay_summary;
};

/// Prior user/assistant exchanges followed by the query and an open
/// assistant turn.
inline std::string assemble_conversation(std::span<const std::pair<std::string, std::string>> history,
                                         const std::string& query_prompt, const ChatTurnFormat& format) {
  std::string out = format.system_slot.value_or("");
  for (const auto& [prompt, answer] : history) {
    out += format.user_open + prompt + format.user_close;
    out += format.assistant_open + answer + format.assistant_close;
  }
  out += format.user_open + query_prompt + format.user_close + format.assistant_open;
  return out;
}

/// Few-shot conversation: each exemplar is a user turn with its rendered
/// prompt answered by an assistant turn with its lay summary.
inline std::string assemble_fewshot(const PromptTemplate& prompt, std::span<const Exemplar> exemplars,
                                    const Document& query, const ChatTurnFormat& format) {
  if (exemplars.empty())
    throw Error(ErrorKind::InvalidParameter, "few-shot assembly needs at least one exemplar");
  std::vector<std::pair<std::string, std::string>> history;
  for (const auto& ex : exemplars) {
    if (ex.lay_summary.empty())
      throw Error(ErrorKind::InvalidParameter, "exemplar '" + ex.document.id + "' has an empty lay summary",
                  ex.document.id);
    history.emplace_back(render(prompt, ex.document), ex.lay_summary);
  }
  return assemble_conversation(history, render(prompt, query), format);
}

struct ChatTurn {
  enum class Role { User, Assistant };
  Role role = Role::User;
  std::string text;
  bool closed = true;
  bool operator==(const ChatTurn&) const = default;
};

/// Recovers turns from an assembled conversation. Assumes no turn text
/// contains the format's delimiters.
inline std::vector<ChatTurn> parse_conversation(std::string_view text, const ChatTurnFormat& format) {
  auto bad = [&](const std::string& why) -> std::vector<ChatTurn> {
    throw Error(ErrorKind::InvalidParameter, "not a '" + format.name + "' conversation: " + why, format.name);
  };
  std::vector<ChatTurn> turns;
  std::size_t pos = 0;
  if (format.system_slot && text.starts_with(*format.system_slot)) pos = format.system_slot->size();
  while (pos < text.size()) {
    if (text.substr(pos, format.user_open.size()) != format.user_open) return bad("expected a user turn");
    pos += format.user_open.size();
    const auto user_end = text.find(format.user_close, pos);
    if (user_end == std::string_view::npos) return bad("unterminated user turn");
    turns.push_back({ChatTurn::Role::User, std::string(text.substr(pos, user_end - pos)), true});
    pos = user_end + format.user_close.size();
    if (text.substr(pos, format.assistant_open.size()) != format.assistant_open)
      return bad("expected an assistant turn");
    pos += format.assistant_open.size();
    const auto assistant_end = text.find(format.assistant_close, pos);
    if (assistant_end == std::string_view::npos) {
      turns.push_back({ChatTurn::Role::Assistant, std::string(text.substr(pos)), false});
      break;
    }
    turns.push_back({ChatTurn::Role::Assistant, std::string(text.substr(pos, assistant_end - pos)), true});
    pos = assistant_end + format.assistant_close.size();
  }
  return turns;
}

/// Decoding settings for whatever system performs generation.
struct DecodingPreset {
  std::string strategy;
  int max_new_tokens = 0;
  double repetition_penalty = 1.0;
  bool operator==(const DecodingPreset&) const = default;
};

inline const std::map<std::string, DecodingPreset>& inference_presets() {
  static const std::map<std::string, DecodingPreset> presets = {
      {"standard", {"greedy", 1024, 1.0}},
      {"des_alternate", {"greedy", 1024, 1.1}},
  };
  return presets;
}

}  // namespace laysumm
