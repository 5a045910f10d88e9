#pragma once

// Per-agent repertoire of elicited dispositions, its summaries, and
// category-level prediction of the agent's choice.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "softethics/elicitation.hpp"
#include "softethics/model.hpp"
#include "softethics/schema.hpp"
#include "softethics/soundness.hpp"

namespace softethics {

struct RepertoireKey {
  Dimension dimension = Dimension::Goodwill;
  Category stimulus;

  friend auto operator<=>(const RepertoireKey&, const RepertoireKey&) = default;
};

/// One processed feedback, whatever its verdict.
struct AuditEntry {
  std::string feedback;
  std::string scenario;
  Response response = Response::Yes;
  Verdict verdict = Verdict::Sound;

  friend bool operator==(const AuditEntry&, const AuditEntry&) = default;
};

struct Profile {
  AgentId agent;
  std::map<RepertoireKey, std::vector<Disposition>> repertoire;  // observations in insertion order
  std::vector<AuditEntry> audit;

  std::size_t observation_count() const {
    std::size_t n = 0;
    for (const auto& [_, obs] : repertoire) n += obs.size();
    return n;
  }

  friend bool operator==(const Profile&, const Profile&) = default;
};

class AgentMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Appends `d` at (d.dimension, d.stimulus). The audit gains an entry for
/// d's feedback unless that feedback is already the latest audit entry.
inline Profile record(Profile p, const Disposition& d) {
  if (d.agent != p.agent) {
    throw AgentMismatch("disposition for agent '" + d.agent + "' recorded into profile of '" + p.agent + "'");
  }
  p.repertoire[{d.dimension, d.stimulus}].push_back(d);
  if (p.audit.empty() || p.audit.back().feedback != d.provenance.feedback) {
    const auto response = d.manifestation == Manifestation::WouldAct ? Response::Yes : Response::No;
    p.audit.push_back({d.provenance.feedback, d.provenance.scenario, response, Verdict::Sound});
  }
  return p;
}

/// Audits one processed feedback and records whatever it elicited.
inline Profile absorb(Profile p, const std::string& feedback_ref, const SoundnessVerdict& verdict,
                      const std::vector<Disposition>& elicited) {
  p.audit.push_back({feedback_ref, verdict.scenario, verdict.response, verdict.overall});
  for (const auto& d : elicited) {
    if (d.provenance.feedback != feedback_ref) {
      throw std::invalid_argument("disposition provenance does not reference feedback '" + feedback_ref + "'");
    }
    p = record(std::move(p), d);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Summaries

enum class DominantPole : std::uint8_t { Positive, Negative, Tied };

inline std::string_view to_string(DominantPole p) {
  switch (p) {
    case DominantPole::Positive: return "positive";
    case DominantPole::Negative: return "negative";
    case DominantPole::Tied: return "tied";
  }
  return "?";
}

struct DispositionSummary {
  DominantPole dominant_pole = DominantPole::Tied;
  int grade_sum = 0;
  std::size_t support = 0;
  std::size_t dominant_count = 0;  // observations agreeing with the dominant pole (either pole when tied)

  double mean_grade() const { return static_cast<double>(grade_sum) / static_cast<double>(support); }
  double consistency() const { return static_cast<double>(dominant_count) / static_cast<double>(support); }

  friend bool operator==(const DispositionSummary&, const DispositionSummary&) = default;
};

inline std::optional<DispositionSummary> summarize(const std::vector<Disposition>& observations) {
  if (observations.empty()) return std::nullopt;
  DispositionSummary s;
  std::size_t positive = 0, negative = 0;
  for (const auto& d : observations) {
    (d.pole == Pole::Positive ? positive : negative) += 1;
    s.grade_sum += d.grade.value();
  }
  s.support = observations.size();
  s.dominant_pole = positive > negative   ? DominantPole::Positive
                    : negative > positive ? DominantPole::Negative
                                          : DominantPole::Tied;
  s.dominant_count = std::max(positive, negative);
  return s;
}

inline std::optional<DispositionSummary> summarize(const Profile& p, Dimension dim, Category c) {
  auto it = p.repertoire.find({dim, c});
  if (it == p.repertoire.end()) return std::nullopt;
  return summarize(it->second);
}

// ---------------------------------------------------------------------------
// Prediction

enum class PredictedResponse : std::uint8_t { Yes, No, Abstain };

inline std::string_view to_string(PredictedResponse r) {
  switch (r) {
    case PredictedResponse::Yes: return "yes";
    case PredictedResponse::No: return "no";
    case PredictedResponse::Abstain: return "abstain";
  }
  return "?";
}

struct Vote {
  ParameterId parameter = ParameterId::P1;
  Polarity polarity = Polarity::Aligned;
  DispositionSummary summary;
  std::optional<Response> vote;  // empty when the summary is tied
  double weight = 0.0;           // consistency * support
};

struct Prediction {
  PredictedResponse response = PredictedResponse::Abstain;
  double confidence = 0.0;
  Category category;
  std::vector<Vote> rationale;
};

/// A Positive pole votes for the action when taking it expresses the high end.
constexpr Response vote_of(Pole pole, Polarity polarity) {
  const bool positive_act = polarity == Polarity::Aligned;
  return (pole == Pole::Positive) == positive_act ? Response::Yes : Response::No;
}

inline Prediction predict(const Profile& p, const Scenario& s) {
  Prediction out;
  out.category = category_of(s);
  double yes = 0.0, no = 0.0;
  for (auto param : s.press.parameters()) {
    auto summary = summarize(p, dimension_of(param), out.category);
    if (!summary) continue;
    Vote v;
    v.parameter = param;
    v.polarity = s.polarity_of(param);
    v.summary = *summary;
    if (summary->dominant_pole != DominantPole::Tied) {
      const auto pole = summary->dominant_pole == DominantPole::Positive ? Pole::Positive : Pole::Negative;
      v.vote = vote_of(pole, v.polarity);
      // consistency * support, taken exactly as the dominant count
      v.weight = static_cast<double>(summary->dominant_count);
      (*v.vote == Response::Yes ? yes : no) += v.weight;
    }
    out.rationale.push_back(v);
  }
  const double total = yes + no;
  if (total <= 0.0 || yes == no) {
    out.response = PredictedResponse::Abstain;
    out.confidence = 0.0;
  } else {
    out.response = yes > no ? PredictedResponse::Yes : PredictedResponse::No;
    out.confidence = std::max(yes, no) / total;
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const DispositionSummary& s) {
  return json{{"dominant_pole", std::string(to_string(s.dominant_pole))},
              {"mean_grade", s.mean_grade()},
              {"support", s.support},
              {"consistency", s.consistency()}};
}

inline json to_json(const Prediction& pr) {
  json votes = json::array();
  for (const auto& v : pr.rationale) {
    votes.push_back(json{{"parameter", std::string(to_string(v.parameter))},
                         {"dimension", std::string(to_string(dimension_of(v.parameter)))},
                         {"polarity", std::string(to_string(v.polarity))},
                         {"summary", to_json(v.summary)},
                         {"vote", v.vote ? json(std::string(to_string(*v.vote))) : json(nullptr)},
                         {"weight", v.weight}});
  }
  return json{{"response", std::string(to_string(pr.response))},
              {"confidence", pr.confidence},
              {"category", category_to_json(pr.category)},
              {"rationale", votes}};
}

inline constexpr std::string_view kProfileSchema = "softethics.profile/1";

inline json to_json(const Profile& p) {
  json rep = json::array();
  for (const auto& [key, obs] : p.repertoire) {
    json arr = json::array();
    for (const auto& d : obs) arr.push_back(to_json(d));
    rep.push_back(json{{"dimension", std::string(to_string(key.dimension))},
                       {"category", category_to_json(key.stimulus)},
                       {"observations", arr}});
  }
  json audit = json::array();
  for (const auto& a : p.audit) {
    audit.push_back(json{{"feedback", a.feedback},
                         {"scenario", a.scenario},
                         {"response", std::string(to_string(a.response))},
                         {"verdict", std::string(to_string(a.verdict))}});
  }
  return json{{"schema", kProfileSchema}, {"agent", p.agent}, {"repertoire", rep}, {"audit", audit}};
}

inline Disposition disposition_from_json(const json& j, const std::string& path) {
  Disposition d;
  d.agent = schema::string(j, "agent", path);
  d.dimension = schema::enumerated(j, "dimension", path, parse_dimension);
  d.stimulus = schema::category(j, "stimulus", path);
  d.pole = schema::enumerated(j, "pole", path, parse_pole);
  d.label = schema::string(j, "label", path);
  d.grade = schema::scale(j, "grade", path);
  d.manifestation = schema::enumerated(j, "manifestation", path, parse_manifestation);
  const auto& prov = schema::field(j, "provenance", path);
  const auto prov_path = schema::child(path, "provenance");
  d.provenance.scenario = schema::string(prov, "scenario", prov_path);
  d.provenance.feedback = schema::string(prov, "feedback", prov_path);
  return d;
}

inline Profile profile_from_json(const json& doc) {
  const std::string root;
  if (schema::string(doc, "schema", root) != kProfileSchema) {
    throw SchemaViolation("/schema", "expected '" + std::string(kProfileSchema) + "'");
  }
  Profile p;
  p.agent = schema::string(doc, "agent", root);
  if (p.agent.empty()) throw SchemaViolation("/agent", "agent id must be non-empty");

  const auto& rep = schema::array(doc, "repertoire", root);
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const auto entry_path = schema::child("/repertoire", i);
    RepertoireKey key{schema::enumerated(rep[i], "dimension", entry_path, parse_dimension),
                      schema::category(rep[i], "category", entry_path)};
    if (p.repertoire.count(key) != 0) throw SchemaViolation(entry_path, "duplicate repertoire key");
    if (!p.repertoire.empty() && !(p.repertoire.rbegin()->first < key)) {
      throw SchemaViolation(entry_path, "repertoire entries must be sorted by (dimension, category)");
    }
    const auto& obs = schema::array(rep[i], "observations", entry_path);
    const auto obs_path = schema::child(entry_path, "observations");
    if (obs.empty()) throw SchemaViolation(obs_path, "repertoire entry has no observations");
    auto& out = p.repertoire[key];
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const auto dpath = schema::child(obs_path, k);
      auto d = disposition_from_json(obs[k], dpath);
      if (d.agent != p.agent) throw SchemaViolation(schema::child(dpath, "agent"), "agent differs from profile");
      if (d.dimension != key.dimension) {
        throw SchemaViolation(schema::child(dpath, "dimension"), "dimension differs from repertoire key");
      }
      if (d.stimulus != key.stimulus) {
        throw SchemaViolation(schema::child(dpath, "stimulus"), "stimulus differs from repertoire key");
      }
      out.push_back(std::move(d));
    }
  }

  const auto& audit = schema::array(doc, "audit", root);
  for (std::size_t i = 0; i < audit.size(); ++i) {
    const auto apath = schema::child("/audit", i);
    p.audit.push_back({schema::string(audit[i], "feedback", apath), schema::string(audit[i], "scenario", apath),
                       schema::enumerated(audit[i], "response", apath, parse_response),
                       schema::enumerated(audit[i], "verdict", apath, parse_verdict)});
  }
  return p;
}

inline std::string serialize_profile(const Profile& p) { return to_json(p).dump(2) + "\n"; }

/// Throws SchemaViolation naming the offending element.
inline Profile deserialize_profile(std::string_view bytes) { return profile_from_json(schema::parse(bytes)); }

}  // namespace softethics
