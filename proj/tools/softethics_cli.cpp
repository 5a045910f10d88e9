// softethics: command-line front end for corpus validation, questionnaire
// runs, one-off soundness checks, profile inspection, prediction and the
// HTTP service.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "softethics/http_server.hpp"
#include "softethics/softethics.hpp"

namespace se = softethics;

namespace {

struct GlobalOptions {
  std::string config;
  std::string store;
  std::string format = "text";

  bool json() const { return format == "json"; }
};

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

se::ServiceConfig resolve_config(const GlobalOptions& g) {
  se::ServiceConfig cfg = g.config.empty() ? se::ServiceConfig{} : se::load_service_config(g.config);
  se::apply_env_overrides(cfg);
  if (!g.store.empty()) cfg.storage = g.store;
  return cfg;
}

/// --corpus, else the first configured corpus, else the built-in reference corpus.
se::Corpus resolve_corpus(const std::string& corpus_path, const se::ServiceConfig& cfg) {
  std::optional<se::fs::path> path;
  if (!corpus_path.empty()) path = corpus_path;
  else if (!cfg.corpora.empty()) path = cfg.corpora.front();
  if (!path) return se::reference_corpus();
  auto loaded = se::load_corpus_file(*path);
  if (!loaded) {
    std::ostringstream os;
    os << "corpus " << path->string() << " is invalid:";
    for (const auto& v : loaded.violations) os << "\n  " << se::to_string(v.kind) << " " << v.path << ": " << v.message;
    throw CliError(os.str());
  }
  return *loaded.value;
}

/// "P1=1,P2=1,P3=1,P4=4" -> {"P1":1,...}; non-numeric values are kept as
/// strings so validation reports them.
se::json parse_justification(const std::string& text) {
  se::json out = se::json::object();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CliError("justification entry '" + item + "' is not of the form P<n>=<value>");
    const auto key = item.substr(0, eq);
    const auto val = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      const int n = std::stoi(val, &used);
      out[key] = used == val.size() ? se::json(n) : se::json(val);
    } catch (const std::exception&) {
      out[key] = val;
    }
  }
  return out;
}

se::Feedback build_feedback(const std::string& agent, const std::string& scenario, const std::string& response,
                            const se::json& justification) {
  auto v = se::validate_feedback(
      se::json{{"agent", agent}, {"scenario", scenario}, {"response", response}, {"justification", justification}});
  if (!v) {
    std::ostringstream os;
    os << "invalid feedback:";
    for (const auto& e : v.violations) os << "\n  " << se::to_string(e.kind) << " " << e.path << ": " << e.message;
    throw CliError(os.str());
  }
  return *v.value;
}

void print_verdict(std::ostream& os, const se::SoundnessVerdict& v) {
  os << se::to_string(v.overall) << "\n";
  for (const auto& [p, pv] : v.per_parameter) {
    os << "  " << se::to_string(p) << " value=" << pv.value.value() << " band=" << se::to_string(pv.observed)
       << " expected=" << se::to_string(pv.expected) << " verdict=" << se::to_string(pv.verdict) << "\n";
  }
}

// -- subcommands --------------------------------------------------------------

int cmd_validate(const GlobalOptions& g, const std::string& path) {
  auto loaded = se::load_corpus_file(path);
  if (g.json()) {
    se::json out{{"valid", loaded.ok()}, {"violations", se::to_json(loaded.violations)}};
    if (loaded) out["scenarios"] = loaded->size();
    std::cout << out.dump(2) << "\n";
  } else if (loaded) {
    std::cout << "valid: " << loaded->size() << " scenario(s) in " << loaded->id << "\n";
  } else {
    std::cout << "invalid: " << loaded.violations.size() << " violation(s)\n";
    for (const auto& v : loaded.violations) {
      std::cout << "  " << se::to_string(v.kind) << " " << v.path << ": " << v.message << "\n";
    }
  }
  return loaded ? 0 : 1;
}

int cmd_sound(const GlobalOptions& g, const std::string& corpus_path, const std::string& scenario_id,
              const std::string& response, const std::string& justification) {
  const auto cfg = resolve_config(g);
  const auto corpus = resolve_corpus(corpus_path, cfg);
  const se::Scenario* s = corpus.find(scenario_id);
  if (!s) throw CliError("unknown scenario '" + scenario_id + "' in corpus " + corpus.id);
  const auto f = build_feedback("cli", scenario_id, response, parse_justification(justification));
  const auto verdict = se::sound(*s, f, cfg.soundness);
  if (g.json()) {
    std::cout << se::to_json(verdict).dump(2) << "\n";
  } else {
    print_verdict(std::cout, verdict);
  }
  return 0;
}

int cmd_profile_show(const GlobalOptions& g, const std::string& agent) {
  const auto cfg = resolve_config(g);
  se::Store store(cfg.storage);
  auto p = store.load_profile(agent);
  if (!p) throw CliError("no profile for agent '" + agent + "'");
  if (g.json()) {
    std::cout << se::to_json(*p).dump(2) << "\n";
    return 0;
  }
  std::cout << "agent " << p->agent << "\n";
  for (const auto& [key, obs] : p->repertoire) {
    const auto s = *se::summarize(obs);
    const std::string label =
        s.dominant_pole == se::DominantPole::Tied
            ? "tied"
            : cfg.labels.label(key.dimension,
                               s.dominant_pole == se::DominantPole::Positive ? se::Pole::Positive : se::Pole::Negative);
    std::cout << se::to_string(key.dimension) << " " << key.stimulus.to_string() << " " << label
              << " support=" << s.support << " mean_grade=" << s.mean_grade() << " consistency=" << s.consistency()
              << "\n";
    for (const auto& d : obs) std::cout << "  " << se::render_counterfactual(d, cfg.labels) << "\n";
  }
  std::cout << "audit " << p->audit.size() << " feedback(s)\n";
  return 0;
}

int cmd_predict(const GlobalOptions& g, const std::string& corpus_path, const std::string& agent,
                const std::string& scenario_id) {
  const auto cfg = resolve_config(g);
  const auto corpus = resolve_corpus(corpus_path, cfg);
  const se::Scenario* s = corpus.find(scenario_id);
  if (!s) throw CliError("unknown scenario '" + scenario_id + "' in corpus " + corpus.id);
  se::Store store(cfg.storage);
  const auto profile = store.load_profile(agent).value_or(se::Profile{agent, {}, {}});
  const auto prediction = se::predict(profile, *s);
  if (g.json()) {
    auto j = se::to_json(prediction);
    j["agent"] = agent;
    j["scenario"] = scenario_id;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << se::to_string(prediction.response) << " confidence=" << prediction.confidence << "\n";
  for (const auto& v : prediction.rationale) {
    std::cout << "  " << se::to_string(v.parameter) << " " << se::to_string(se::dimension_of(v.parameter))
              << " polarity=" << se::to_string(v.polarity) << " pole=" << se::to_string(v.summary.dominant_pole)
              << " support=" << v.summary.support << " consistency=" << v.summary.consistency()
              << " vote=" << (v.vote ? se::to_string(*v.vote) : "none") << " weight=" << v.weight << "\n";
  }
  return 0;
}

std::optional<se::Feedback> read_answer(std::istream& in, std::ostream& prompt, bool interactive,
                                        const se::Session& sess, const se::Scenario& s) {
  static constexpr std::array<std::string_view, 4> questions = {
      "consequences of the action on others", "consequences of the action on me", "my personal experiences",
      "respect for the law"};
  while (true) {
    std::string response;
    se::json just = se::json::object();
    if (interactive) {
      prompt << "\n[" << s.id << "] " << s.setting << " " << s.problem << "\nWould you " << s.action
             << "? [yes/no] " << std::flush;
      if (!(in >> response)) return std::nullopt;
      for (auto p : se::kAllParameters) {
        prompt << "  " << se::to_string(p) << " (" << questions[se::index_of(p)] << ") 1-5: " << std::flush;
        std::string v;
        if (!(in >> v)) return std::nullopt;
        just[std::string(se::to_string(p))] = parse_justification(std::string(se::to_string(p)) + "=" + v).begin().value();
      }
    } else {
      std::string line;
      do {
        if (!std::getline(in, line)) return std::nullopt;
      } while (line.find_first_not_of(" \t\r") == std::string::npos);
      std::istringstream ls(line);
      ls >> response;
      std::string rest, tok;
      std::vector<std::string> toks;
      while (ls >> tok) toks.push_back(tok);
      if (toks.size() == 1 && toks[0].find('=') != std::string::npos) {
        just = parse_justification(toks[0]);
      } else if (toks.size() == 4) {
        for (auto p : se::kAllParameters) {
          just[std::string(se::to_string(p))] =
              parse_justification(std::string(se::to_string(p)) + "=" + toks[se::index_of(p)]).begin().value();
        }
      } else {
        throw CliError("expected '<yes|no> P1=..,P2=..,P3=..,P4=..' or '<yes|no> v1 v2 v3 v4', got '" + line + "'");
      }
    }
    try {
      return build_feedback(sess.agent, s.id, response, just);
    } catch (const CliError& e) {
      if (!interactive) throw;
      prompt << e.what() << "\n";
    }
  }
}

int cmd_run(const GlobalOptions& g, const std::string& corpus_path, const std::string& agent,
            const std::string& session_id, bool interactive) {
  const auto cfg = resolve_config(g);
  const auto corpus = resolve_corpus(corpus_path, cfg);
  se::Store store(cfg.storage);

  std::string id = session_id;
  if (id.empty()) {
    id = store.allocate_session_id();
    std::optional<std::uint64_t> seed;
    if (cfg.randomize_sessions) seed = cfg.seed + store.session_number(id);
    store.update_profile(agent, [](se::Profile&) {});
    store.save_session(se::start_session(id, agent, corpus, cfg.soundness, seed));
  } else {
    auto existing = store.load_session(id);
    if (!existing) throw CliError("unknown session '" + id + "'");
    if (existing->agent != agent) throw CliError("session " + id + " belongs to agent '" + existing->agent + "'");
  }
  if (!g.json()) std::cout << "session " << id << "\n";

  while (true) {
    const auto sess = *store.load_session(id);
    const auto next = se::next_scenario(sess, corpus);
    if (!next) break;
    const auto f = read_answer(std::cin, std::cout, interactive, sess, *next);
    if (!f) return 0;  // input exhausted; the session stays resumable
    const auto sub = store.update_session(id, [&](se::Session& s) {
      return store.update_profile(agent, [&](se::Profile& p) { return se::submit_feedback(s, corpus, p, *f, cfg.labels); });
    });
    if (g.json()) {
      se::json disp = se::json::array();
      for (const auto& d : sub.dispositions) {
        auto j = se::to_json(d);
        j["counterfactual"] = se::render_counterfactual(d, cfg.labels);
        disp.push_back(j);
      }
      std::cout << se::json{{"session", id}, {"verdict", se::to_json(sub.verdict)}, {"dispositions", disp}}.dump()
                << "\n";
    } else {
      std::cout << next->id << ": ";
      print_verdict(std::cout, sub.verdict);
      if (sub.dispositions.empty()) std::cout << "  no elicited disposition\n";
      for (const auto& d : sub.dispositions) {
        std::cout << "  " << d.label << ": " << se::render_counterfactual(d, cfg.labels) << "\n";
      }
    }
  }
  if (!g.json()) std::cout << "done\n";
  return 0;
}

int cmd_export(const GlobalOptions& g, const std::string& session_id) {
  const auto cfg = resolve_config(g);
  se::Store store(cfg.storage);
  auto s = store.load_session(session_id);
  if (!s) throw CliError("unknown session '" + session_id + "'");
  std::cout << se::export_session(*s);
  return 0;
}

int cmd_replay(const GlobalOptions& g, const std::string& corpus_path, const std::string& file) {
  const auto cfg = resolve_config(g);
  const auto corpus = resolve_corpus(corpus_path, cfg);
  const auto session = se::import_session(se::detail::read_file(file));
  se::Store store(cfg.storage);
  const auto profile = store.update_profile(session.agent, [&](se::Profile& p) {
    p = se::replay_session(session, corpus, std::move(p), cfg.labels);
    return p;
  });
  if (g.json()) {
    std::cout << se::to_json(profile).dump(2) << "\n";
  } else {
    std::cout << "replayed " << session.collected.size() << " record(s) into profile of " << session.agent << "\n";
  }
  return 0;
}

int cmd_serve(const GlobalOptions& g) {
  auto cfg = resolve_config(g);
  se::Service service(cfg);
  std::cerr << "listening on " << cfg.host << ":" << cfg.port << "\n";
  return se::serve(service) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elicit soft-ethics dispositions from questionnaire feedback"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "Service configuration file (JSON)");
  app.add_option("--store", g.store, "Profile/session storage directory (overrides config and SOFTETHICS_STORAGE)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string corpus_path, agent, scenario, response, justification, session_id, file;
  bool interactive = false;

  auto* validate = app.add_subcommand("validate", "Validate a corpus file");
  validate->add_option("corpus", file, "Corpus file (.json or .jsonl)")->required();

  auto* run = app.add_subcommand("run", "Answer a corpus as a questionnaire (answers read from stdin)");
  run->add_option("--corpus", corpus_path, "Corpus file");
  run->add_option("--agent", agent, "Agent id")->required();
  run->add_option("--session", session_id, "Resume an existing session");
  run->add_flag("--interactive", interactive, "Prompt for each answer");

  auto* sound = app.add_subcommand("sound", "Judge one feedback against a scenario");
  sound->add_option("--corpus", corpus_path, "Corpus file");
  sound->add_option("--scenario", scenario, "Scenario id")->required();
  sound->add_option("--response", response, "yes or no")->required();
  sound->add_option("--justification", justification, "P1=..,P2=..,P3=..,P4=..")->required();

  auto* profile = app.add_subcommand("profile", "Inspect agent profiles");
  profile->require_subcommand(1);
  auto* show = profile->add_subcommand("show", "Print an agent's dispositions");
  show->add_option("--agent", agent, "Agent id")->required();

  auto* predict = app.add_subcommand("predict", "Predict an agent's response to a scenario");
  predict->add_option("--corpus", corpus_path, "Corpus file");
  predict->add_option("--agent", agent, "Agent id")->required();
  predict->add_option("--scenario", scenario, "Scenario id")->required();

  auto* exp = app.add_subcommand("export", "Print a session export document");
  exp->add_option("--session", session_id, "Session id")->required();

  auto* replay = app.add_subcommand("replay", "Replay a session export into the store");
  replay->add_option("--corpus", corpus_path, "Corpus file");
  replay->add_option("file", file, "Session export document")->required();

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--config", g.config, "Service configuration file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(g, file);
    if (*run) return cmd_run(g, corpus_path, agent, session_id, interactive);
    if (*sound) return cmd_sound(g, corpus_path, scenario, response, justification);
    if (*show) return cmd_profile_show(g, agent);
    if (*predict) return cmd_predict(g, corpus_path, agent, scenario);
    if (*exp) return cmd_export(g, session_id);
    if (*replay) return cmd_replay(g, corpus_path, file);
    if (*serve) return cmd_serve(g);
  } catch (const se::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& v : e.violations()) {
      std::cerr << "  " << se::to_string(v.kind) << " " << v.path << ": " << v.message << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
