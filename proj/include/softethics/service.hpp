#pragma once

// Service configuration and the HTTP/JSON API, expressed as a transport-free
// router: handle(method, path, body) -> (status, JSON body).

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "softethics/corpus.hpp"
#include "softethics/elicitation.hpp"
#include "softethics/profile.hpp"
#include "softethics/session.hpp"
#include "softethics/soundness.hpp"
#include "softethics/store.hpp"

namespace softethics {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message, std::vector<Violation> violations = {})
      : std::runtime_error(message), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<fs::path> corpora;
  fs::path storage = "softethics-data";
  SoundnessConfig soundness;
  PoleLabelTable labels;
  bool randomize_sessions = false;
  std::uint64_t seed = 0;
};

/// "host:port" or ":port".
inline void set_listen(ServiceConfig& cfg, std::string_view listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string_view::npos) throw ConfigError("listen address must be host:port");
  const auto port_text = std::string(listen.substr(colon + 1));
  char* end = nullptr;
  const long port = std::strtol(port_text.c_str(), &end, 10);
  if (port_text.empty() || *end != '\0' || port < 0 || port > 65535) {
    throw ConfigError("invalid port in listen address '" + std::string(listen) + "'");
  }
  const auto host = listen.substr(0, colon);
  cfg.host = host.empty() ? "0.0.0.0" : std::string(host);
  cfg.port = static_cast<int>(port);
}

/// Relative paths resolve against `base_dir` (the config file's directory).
inline ServiceConfig parse_service_config(const json& j, const fs::path& base_dir = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ServiceConfig cfg;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  try {
    if (j.contains("listen")) set_listen(cfg, j.at("listen").get<std::string>());
    if (j.contains("corpora")) {
      for (const auto& c : j.at("corpora")) cfg.corpora.push_back(resolve(c.get<std::string>()));
    }
    if (j.contains("storage")) cfg.storage = resolve(j.at("storage").get<std::string>());
    if (j.contains("soundness")) cfg.soundness = soundness_config_from_json(j.at("soundness"));
    if (j.contains("labels")) cfg.labels = PoleLabelTable::from_json(j.at("labels"));
    if (j.contains("randomize_sessions")) cfg.randomize_sessions = j.at("randomize_sessions").get<bool>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

inline ServiceConfig load_service_config(const fs::path& path) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const StoreError& e) {
    throw ConfigError(e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_service_config(j, path.parent_path());
}

using EnvLookup = std::function<const char*(const char*)>;

/// SOFTETHICS_LISTEN and SOFTETHICS_STORAGE take precedence over the file.
inline void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& env = [](const char* k) { return std::getenv(k); }) {
  if (const char* v = env("SOFTETHICS_LISTEN"); v && *v) set_listen(cfg, v);
  if (const char* v = env("SOFTETHICS_STORAGE"); v && *v) cfg.storage = v;
}

/// Format by extension (.jsonl is JSON Lines); corpus id from the file stem
/// unless the document names one.
inline Validated<Corpus> load_corpus_file(const fs::path& path) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const StoreError& e) {
    Validated<Corpus> r;
    r.violations.push_back({ViolationKind::ParseError, "", e.what()});
    return r;
  }
  const auto format = path.extension() == ".jsonl" ? CorpusFormat::JsonLines : CorpusFormat::Json;
  return load_corpus(text, format, path.stem().string());
}

// ---------------------------------------------------------------------------

struct ApiResponse {
  int status = 200;
  json body;
};

class Service {
 public:
  explicit Service(const ServiceConfig& cfg) : cfg_(cfg), store_(cfg.storage) {
    check(cfg_.soundness);
    if (cfg_.corpora.empty()) throw ConfigError("no corpus configured");
    for (const auto& path : cfg_.corpora) {
      auto loaded = load_corpus_file(path);
      if (!loaded) throw ConfigError("corpus " + path.string() + " is invalid", loaded.violations);
      for (const auto& c : corpora_) {
        if (c.id == loaded->id) throw ConfigError("two corpora share the id '" + c.id + "'");
        for (const auto& s : loaded->scenarios) {
          if (c.find(s.id)) throw ConfigError("scenario id '" + s.id + "' appears in more than one corpus");
        }
      }
      corpora_.push_back(*loaded.value);
    }
  }

  const ServiceConfig& config() const { return cfg_; }
  const std::vector<Corpus>& corpora() const { return corpora_; }
  Store& store() { return store_; }

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body = {}) {
    const auto seg = split_path(path);
    try {
      if (method == "GET" && seg.size() == 1 && seg[0] == "scenarios") return list_scenarios();
      if (method == "GET" && seg.size() == 2 && seg[0] == "scenarios") return get_scenario(seg[1]);
      if (method == "POST" && seg.size() == 1 && seg[0] == "sessions") return create_session(body);
      if (method == "GET" && seg.size() == 2 && seg[0] == "sessions") return get_session(seg[1]);
      if (method == "POST" && seg.size() == 3 && seg[0] == "sessions" && seg[2] == "feedback") {
        return post_feedback(seg[1], body);
      }
      if (method == "GET" && seg.size() == 3 && seg[0] == "sessions" && seg[2] == "export") {
        return export_session_route(seg[1]);
      }
      if (method == "GET" && seg.size() == 3 && seg[0] == "agents" && seg[2] == "profile") return get_profile(seg[1]);
      if (method == "POST" && seg.size() == 3 && seg[0] == "agents" && seg[2] == "predict") {
        return post_predict(seg[1], body);
      }
      return error(404, "not_found", "no route for " + std::string(method) + " " + std::string(path));
    } catch (const BadRequest& e) {
      return {400, json{{"error", "validation"}, {"message", e.what()}, {"violations", to_json(e.violations)}}};
    } catch (const SessionError& e) {
      if (e.kind() == SessionError::Kind::AgentMismatch) {
        return {400, json{{"error", "validation"},
                          {"message", e.what()},
                          {"violations", to_json(std::vector<Violation>{
                                             {ViolationKind::TypeMismatch, "/agent", e.what()}})}}};
      }
      return error(409, std::string(to_string(e.kind())), e.what());
    } catch (const std::exception& e) {
      return error(500, "internal", e.what());
    }
  }

  /// Rendered profile: one summary per (dimension, category) with its
  /// counterfactual sentences.
  json profile_view(const Profile& p) const {
    json summaries = json::array();
    for (const auto& [key, obs] : p.repertoire) {
      auto s = *summarize(obs);
      json entry = to_json(s);
      entry["dimension"] = std::string(to_string(key.dimension));
      entry["category"] = category_to_json(key.stimulus);
      entry["label"] = s.dominant_pole == DominantPole::Tied
                           ? std::string("tied")
                           : cfg_.labels.label(key.dimension, s.dominant_pole == DominantPole::Positive
                                                                  ? Pole::Positive
                                                                  : Pole::Negative);
      json sentences = json::array();
      for (const auto& d : obs) sentences.push_back(render_counterfactual(d, cfg_.labels));
      entry["counterfactuals"] = sentences;
      summaries.push_back(entry);
    }
    return json{{"agent", p.agent}, {"summaries", summaries}, {"audit_entries", p.audit.size()}};
  }

 private:
  struct BadRequest : std::runtime_error {
    BadRequest(const std::string& msg, std::vector<Violation> v) : std::runtime_error(msg), violations(std::move(v)) {}
    std::vector<Violation> violations;
  };

  static ApiResponse error(int status, std::string code, const std::string& message) {
    return {status, json{{"error", std::move(code)}, {"message", message}}};
  }

  static std::vector<std::string> split_path(std::string_view path) {
    if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < path.size()) {
      while (i < path.size() && path[i] == '/') ++i;
      const auto j = path.find('/', i);
      const auto end = j == std::string_view::npos ? path.size() : j;
      if (end > i) out.emplace_back(path.substr(i, end - i));
      i = end;
    }
    return out;
  }

  static json parse_body(std::string_view body) {
    try {
      return json::parse(body.empty() ? std::string_view("{}") : body);
    } catch (const json::parse_error& e) {
      throw BadRequest("malformed JSON body", {{ViolationKind::ParseError, "", e.what()}});
    }
  }

  const Scenario* find_scenario(std::string_view id) const {
    for (const auto& c : corpora_) {
      if (auto* s = c.find(id)) return s;
    }
    return nullptr;
  }

  const Corpus* find_corpus(std::string_view id) const {
    for (const auto& c : corpora_) {
      if (c.id == id) return &c;
    }
    return nullptr;
  }

  json cursor_view(const Session& s) const {
    const Corpus* corpus = find_corpus(s.corpus);
    auto next = corpus ? next_scenario(s, *corpus) : std::nullopt;
    return json{{"session", s.id},
                {"agent", s.agent},
                {"corpus", s.corpus},
                {"cursor", s.cursor},
                {"total", s.order.size()},
                {"done", !next.has_value()},
                {"scenario", next ? to_json(*next) : json(nullptr)}};
  }

  ApiResponse list_scenarios() const {
    json arr = json::array();
    for (const auto& c : corpora_) {
      for (const auto& s : c.scenarios) {
        auto j = to_json(s);
        j["corpus"] = c.id;
        arr.push_back(j);
      }
    }
    return {200, json{{"scenarios", arr}}};
  }

  ApiResponse get_scenario(const std::string& id) const {
    const Scenario* s = find_scenario(id);
    if (!s) return error(404, "not_found", "unknown scenario '" + id + "'");
    return {200, to_json(*s)};
  }

  ApiResponse create_session(std::string_view body) {
    const auto req = parse_body(body);
    if (!req.is_object() || !req.contains("agent") || !req["agent"].is_string() ||
        req["agent"].get<std::string>().empty()) {
      throw BadRequest("agent is required", {{ViolationKind::MissingField, "/agent", "agent id must be a non-empty string"}});
    }
    const auto agent = req["agent"].get<std::string>();
    const Corpus* corpus = &corpora_.front();
    if (req.contains("corpus")) {
      corpus = req["corpus"].is_string() ? find_corpus(req["corpus"].get<std::string>()) : nullptr;
      if (!corpus) return error(404, "not_found", "unknown corpus " + req["corpus"].dump());
    }
    const auto id = store_.allocate_session_id();
    std::optional<std::uint64_t> seed;
    if (cfg_.randomize_sessions) seed = cfg_.seed + store_.session_number(id);
    auto session = start_session(id, agent, *corpus, cfg_.soundness, seed);
    store_.update_profile(agent, [](Profile&) {});
    store_.save_session(session);
    return {201, cursor_view(session)};
  }

  ApiResponse get_session(const std::string& id) {
    auto s = store_.load_session(id);
    if (!s) return error(404, "not_found", "unknown session '" + id + "'");
    return {200, cursor_view(*s)};
  }

  ApiResponse export_session_route(const std::string& id) {
    auto s = store_.load_session(id);
    if (!s) return error(404, "not_found", "unknown session '" + id + "'");
    return {200, to_json(*s)};
  }

  ApiResponse post_feedback(const std::string& id, std::string_view body) {
    auto existing = store_.load_session(id);
    if (!existing) return error(404, "not_found", "unknown session '" + id + "'");
    const Corpus* corpus = find_corpus(existing->corpus);
    if (!corpus) return error(404, "not_found", "corpus '" + existing->corpus + "' is no longer served");

    auto req = parse_body(body);
    if (req.is_object() && !req.contains("agent")) req["agent"] = existing->agent;
    auto fb = validate_feedback(req);
    if (!fb) throw BadRequest("invalid feedback", fb.violations);

    json out = store_.update_session(id, [&](Session& sess) {
      auto sub = store_.update_profile(sess.agent, [&](Profile& p) {
        return submit_feedback(sess, *corpus, p, *fb.value, cfg_.labels);
      });
      json dispositions = json::array();
      for (const auto& d : sub.dispositions) {
        auto j = to_json(d);
        j["counterfactual"] = render_counterfactual(d, cfg_.labels);
        dispositions.push_back(j);
      }
      json view = cursor_view(sess);
      return json{{"feedback_ref", sub.feedback_ref},
                  {"verdict", to_json(sub.verdict)},
                  {"dispositions", dispositions},
                  {"cursor", sess.cursor},
                  {"done", view["done"]},
                  {"next", view["scenario"]}};
    });
    return {200, out};
  }

  ApiResponse get_profile(const std::string& agent) {
    auto p = store_.load_profile(agent);
    if (!p) return error(404, "not_found", "unknown agent '" + agent + "'");
    return {200, profile_view(*p)};
  }

  ApiResponse post_predict(const std::string& agent, std::string_view body) {
    const auto req = parse_body(body);
    if (!req.is_object() || !req.contains("scenario")) {
      throw BadRequest("scenario is required",
                       {{ViolationKind::MissingField, "/scenario", "give a scenario id or an inline scenario"}});
    }
    std::optional<Scenario> scenario;
    const auto& sj = req["scenario"];
    if (sj.is_string()) {
      const Scenario* s = find_scenario(sj.get<std::string>());
      if (!s) return error(404, "not_found", "unknown scenario " + sj.dump());
      scenario = *s;
    } else {
      auto v = validate_scenario(sj, "/scenario");
      if (!v) throw BadRequest("invalid scenario", v.violations);
      scenario = *v.value;
    }
    auto p = store_.load_profile(agent);
    if (!p) return error(404, "not_found", "unknown agent '" + agent + "'");
    auto j = to_json(predict(*p, *scenario));
    j["agent"] = agent;
    j["scenario"] = scenario->id;
    return {200, j};
  }

  ServiceConfig cfg_;
  Store store_;
  std::vector<Corpus> corpora_;
};

}  // namespace softethics
