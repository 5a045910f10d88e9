#pragma once

// Questionnaire sessions: one agent answering a corpus one scenario at a time.
// A session document is also its export format; replaying it rebuilds the
// profile contributions it made.

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "softethics/corpus.hpp"
#include "softethics/elicitation.hpp"
#include "softethics/profile.hpp"
#include "softethics/schema.hpp"
#include "softethics/soundness.hpp"

namespace softethics {

struct SessionRecord {
  std::string feedback_ref;
  Feedback feedback;
  SoundnessVerdict verdict;
  std::vector<Disposition> dispositions;

  friend bool operator==(const SessionRecord&, const SessionRecord&) = default;
};

struct Session {
  std::string id;
  AgentId agent;
  std::string corpus;
  SoundnessConfig config;           // stamped at creation; all verdicts use it
  std::vector<std::size_t> order;   // presentation order over corpus indices
  std::size_t cursor = 0;
  std::vector<SessionRecord> collected;  // size() == cursor

  bool done() const { return cursor >= order.size(); }

  friend bool operator==(const Session&, const Session&) = default;
};

class SessionError : public std::runtime_error {
 public:
  enum class Kind { WrongScenario, SessionComplete, AgentMismatch, CorpusMismatch };

  SessionError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline std::string_view to_string(SessionError::Kind k) {
  switch (k) {
    case SessionError::Kind::WrongScenario: return "WrongScenario";
    case SessionError::Kind::SessionComplete: return "SessionComplete";
    case SessionError::Kind::AgentMismatch: return "AgentMismatch";
    case SessionError::Kind::CorpusMismatch: return "CorpusMismatch";
  }
  return "?";
}

/// Corpus order, or a seeded shuffle when `shuffle_seed` is set.
inline Session start_session(std::string id, AgentId agent, const Corpus& corpus, const SoundnessConfig& cfg = {},
                             std::optional<std::uint64_t> shuffle_seed = std::nullopt) {
  check(cfg);
  if (agent.empty()) throw std::invalid_argument("agent id must be non-empty");
  Session s;
  s.id = std::move(id);
  s.agent = std::move(agent);
  s.corpus = corpus.id;
  s.config = cfg;
  s.order.resize(corpus.size());
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  if (shuffle_seed) {
    std::mt19937_64 rng(*shuffle_seed);
    std::shuffle(s.order.begin(), s.order.end(), rng);
  }
  return s;
}

namespace detail {

inline void check_corpus(const Session& sess, const Corpus& corpus) {
  if (sess.corpus != corpus.id || sess.order.size() != corpus.size()) {
    throw SessionError(SessionError::Kind::CorpusMismatch,
                       "session " + sess.id + " was started on corpus '" + sess.corpus + "'");
  }
}

}  // namespace detail

/// The scenario at the cursor, or nullopt once every scenario is answered.
inline std::optional<Scenario> next_scenario(const Session& sess, const Corpus& corpus) {
  detail::check_corpus(sess, corpus);
  if (sess.done()) return std::nullopt;
  return corpus.scenarios.at(sess.order[sess.cursor]);
}

struct Submission {
  std::string feedback_ref;
  SoundnessVerdict verdict;
  std::vector<Disposition> dispositions;
};

/// Judges `f`, elicits on Sound, absorbs into `profile` and advances the
/// cursor. Either everything is applied or nothing is.
inline Submission submit_feedback(Session& sess, const Corpus& corpus, Profile& profile, const Feedback& f,
                                  const PoleLabelTable& labels = {}) {
  detail::check_corpus(sess, corpus);
  if (sess.done()) {
    throw SessionError(SessionError::Kind::SessionComplete, "session " + sess.id + " is complete");
  }
  if (f.agent != sess.agent || profile.agent != sess.agent) {
    throw SessionError(SessionError::Kind::AgentMismatch,
                       "feedback from '" + f.agent + "' submitted to session of '" + sess.agent + "'");
  }
  const Scenario& current = corpus.scenarios.at(sess.order[sess.cursor]);
  if (f.scenario != current.id) {
    throw SessionError(SessionError::Kind::WrongScenario,
                       "expected feedback on '" + current.id + "', got '" + f.scenario + "'");
  }

  Submission out;
  out.feedback_ref = sess.id + "#" + std::to_string(sess.cursor);
  out.verdict = sound(current, f, sess.config);
  out.dispositions = elicit(sess.agent, current, f, out.verdict, labels, out.feedback_ref);

  Profile updated = absorb(profile, out.feedback_ref, out.verdict, out.dispositions);
  sess.collected.push_back({out.feedback_ref, f, out.verdict, out.dispositions});
  sess.cursor += 1;
  profile = std::move(updated);
  return out;
}

// ---------------------------------------------------------------------------
// Export / import

inline constexpr std::string_view kSessionSchema = "softethics.session/1";

inline json to_json(const Session& s) {
  json records = json::array();
  for (const auto& r : s.collected) {
    json disp = json::array();
    for (const auto& d : r.dispositions) disp.push_back(to_json(d));
    records.push_back(json{{"feedback_ref", r.feedback_ref},
                           {"feedback", to_json(r.feedback)},
                           {"verdict", to_json(r.verdict)},
                           {"dispositions", disp}});
  }
  return json{{"schema", kSessionSchema}, {"id", s.id},       {"agent", s.agent},
              {"corpus", s.corpus},       {"soundness", to_json(s.config)},
              {"order", s.order},         {"cursor", s.cursor}, {"records", records}};
}

inline std::string export_session(const Session& s) { return to_json(s).dump(2) + "\n"; }

inline Session session_from_json(const json& doc) {
  const std::string root;
  if (schema::string(doc, "schema", root) != kSessionSchema) {
    throw SchemaViolation("/schema", "expected '" + std::string(kSessionSchema) + "'");
  }
  Session s;
  s.id = schema::string(doc, "id", root);
  s.agent = schema::string(doc, "agent", root);
  s.corpus = schema::string(doc, "corpus", root);
  s.config = schema::at_path("/soundness", [&] { return soundness_config_from_json(schema::field(doc, "soundness", root)); });
  const auto& order = schema::array(doc, "order", root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!order[i].is_number_unsigned()) throw SchemaViolation(schema::child("/order", i), "expected an index");
    s.order.push_back(order[i].get<std::size_t>());
  }
  auto sorted = s.order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i) throw SchemaViolation("/order", "order must be a permutation of corpus indices");
  }
  s.cursor = schema::unsigned_integer(doc, "cursor", root);
  if (s.cursor > s.order.size()) throw SchemaViolation("/cursor", "cursor beyond corpus length");

  const auto& records = schema::array(doc, "records", root);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto rpath = schema::child("/records", i);
    SessionRecord r;
    r.feedback_ref = schema::string(records[i], "feedback_ref", rpath);
    const auto fpath = schema::child(rpath, "feedback");
    auto fb = validate_feedback(schema::field(records[i], "feedback", rpath), fpath);
    if (!fb) throw SchemaViolation(fb.violations.front().path, fb.violations.front().message);
    r.feedback = *fb.value;
    const auto vpath = schema::child(rpath, "verdict");
    r.verdict = schema::at_path(vpath, [&] { return verdict_from_json(schema::field(records[i], "verdict", rpath)); });
    const auto& disp = schema::array(records[i], "dispositions", rpath);
    for (std::size_t k = 0; k < disp.size(); ++k) {
      r.dispositions.push_back(disposition_from_json(disp[k], schema::child(schema::child(rpath, "dispositions"), k)));
    }
    s.collected.push_back(std::move(r));
  }
  if (s.collected.size() != s.cursor) throw SchemaViolation("/records", "record count must equal cursor");
  return s;
}

inline Session import_session(std::string_view bytes) { return session_from_json(schema::parse(bytes)); }

class ReplayMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Re-judges every exported feedback with the session's own config and
/// absorbs the result into `base`. Throws ReplayMismatch if a recomputed
/// verdict or elicitation differs from the exported one.
inline Profile replay_session(const Session& s, const Corpus& corpus, Profile base, const PoleLabelTable& labels = {}) {
  if (base.agent != s.agent) throw AgentMismatch("replay of session for '" + s.agent + "' into '" + base.agent + "'");
  for (const auto& r : s.collected) {
    const Scenario* sc = corpus.find(r.feedback.scenario);
    if (sc == nullptr) throw ReplayMismatch("scenario '" + r.feedback.scenario + "' not in corpus " + corpus.id);
    auto verdict = sound(*sc, r.feedback, s.config);
    if (verdict != r.verdict) throw ReplayMismatch("verdict for " + r.feedback_ref + " differs on replay");
    auto elicited = elicit(s.agent, *sc, r.feedback, verdict, labels, r.feedback_ref);
    if (elicited != r.dispositions) throw ReplayMismatch("dispositions for " + r.feedback_ref + " differ on replay");
    base = absorb(std::move(base), r.feedback_ref, verdict, elicited);
  }
  return base;
}

}  // namespace softethics
