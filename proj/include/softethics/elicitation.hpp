#pragma once

// Turns sound feedback into graded stimulus/manifestation rules.

#include <array>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "softethics/model.hpp"
#include "softethics/soundness.hpp"

namespace softethics {

enum class Pole : std::uint8_t { Positive, Negative };

inline std::string_view to_string(Pole p) { return p == Pole::Positive ? "positive" : "negative"; }

inline std::optional<Pole> parse_pole(std::string_view s) {
  if (s == "positive") return Pole::Positive;
  if (s == "negative") return Pole::Negative;
  return std::nullopt;
}

enum class Manifestation : std::uint8_t { WouldAct, WouldRefrain };

inline std::string_view to_string(Manifestation m) {
  return m == Manifestation::WouldAct ? "would_act" : "would_refrain";
}

inline std::optional<Manifestation> parse_manifestation(std::string_view s) {
  if (s == "would_act") return Manifestation::WouldAct;
  if (s == "would_refrain") return Manifestation::WouldRefrain;
  return std::nullopt;
}

constexpr Manifestation manifestation_of(Response r) {
  return r == Response::Yes ? Manifestation::WouldAct : Manifestation::WouldRefrain;
}

/// Positive iff the response expresses the high end of the parameter.
constexpr Pole pole_of(Response r, Polarity p) {
  return expected_band(r, p) == ValueBand::High ? Pole::Positive : Pole::Negative;
}

struct Provenance {
  std::string scenario;
  std::string feedback;  // feedback reference, e.g. "<session>#<index>"

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Disposition {
  AgentId agent;
  Dimension dimension = Dimension::Goodwill;
  Category stimulus;
  Pole pole = Pole::Positive;
  std::string label;
  ScaleValue grade{1};
  Manifestation manifestation = Manifestation::WouldAct;
  Provenance provenance;

  friend bool operator==(const Disposition&, const Disposition&) = default;
};

class PoleLabelTable {
 public:
  PoleLabelTable() {
    set(Dimension::Goodwill, Pole::Positive, "altruistic");
    set(Dimension::Goodwill, Pole::Negative, "non-altruistic");
    set(Dimension::SelfServingness, Pole::Positive, "egoistic");
    set(Dimension::SelfServingness, Pole::Negative, "non-egoistic");
    set(Dimension::Pragmatism, Pole::Positive, "experience-driven");
    set(Dimension::Pragmatism, Pole::Negative, "experience-indifferent");
    set(Dimension::Legality, Pole::Positive, "law abiding");
    set(Dimension::Legality, Pole::Negative, "law defying");
  }

  const std::string& label(Dimension d, Pole p) const { return labels_[slot(d, p)]; }
  void set(Dimension d, Pole p, std::string text) { labels_[slot(d, p)] = std::move(text); }

  /// Overrides from {"legality": {"positive": "...", "negative": "..."}, ...}.
  static PoleLabelTable from_json(const json& j) {
    PoleLabelTable t;
    if (!j.is_object()) throw std::invalid_argument("labels must be an object");
    for (const auto& [dim_name, poles] : j.items()) {
      auto d = parse_dimension(dim_name);
      if (!d) throw std::invalid_argument("labels: unknown dimension '" + dim_name + "'");
      for (const auto& [pole_name, text] : poles.items()) {
        auto p = parse_pole(pole_name);
        if (!p || !text.is_string()) {
          throw std::invalid_argument("labels." + dim_name + ": expected positive/negative strings");
        }
        t.set(*d, *p, text.get<std::string>());
      }
    }
    return t;
  }

  friend bool operator==(const PoleLabelTable&, const PoleLabelTable&) = default;

 private:
  static std::size_t slot(Dimension d, Pole p) {
    return static_cast<std::size_t>(d) * 2 + (p == Pole::Positive ? 0 : 1);
  }
  std::array<std::string, 8> labels_;
};

class VerdictMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline void check_verdict_matches(const Scenario& s, const Feedback& f, const SoundnessVerdict& v) {
  if (v.scenario != s.id || f.scenario != s.id) {
    throw VerdictMismatch("verdict was computed for scenario '" + v.scenario + "', not '" + s.id + "'");
  }
  if (v.response != f.response) throw VerdictMismatch("verdict response differs from feedback response");
  if (v.per_parameter.size() != s.press.size()) throw VerdictMismatch("verdict does not cover press(s)");
  for (const auto& [p, pv] : v.per_parameter) {
    if (!s.press.contains(p)) throw VerdictMismatch("verdict covers a parameter outside press(s)");
    if (pv.value != value_at(f.justification, p)) {
      throw VerdictMismatch("verdict value for " + std::string(to_string(p)) + " differs from the justification");
    }
    if (pv.expected != expected_band(f.response, s.polarity_of(p))) {
      throw VerdictMismatch("verdict expected band for " + std::string(to_string(p)) + " is inconsistent");
    }
  }
}

}  // namespace detail

/// One disposition per pressed parameter when the verdict is Sound; none otherwise.
/// Throws VerdictMismatch when `verdict` was not computed for (s, f).
inline std::vector<Disposition> elicit(const AgentId& agent, const Scenario& s, const Feedback& f,
                                       const SoundnessVerdict& verdict, const PoleLabelTable& labels = {},
                                       std::string feedback_ref = {}) {
  detail::check_verdict_matches(s, f, verdict);
  if (verdict.overall != Verdict::Sound) return {};
  if (feedback_ref.empty()) feedback_ref = agent + ":" + s.id;

  std::vector<Disposition> out;
  out.reserve(s.press.size());
  for (auto p : s.press.parameters()) {
    Disposition d;
    d.agent = agent;
    d.dimension = dimension_of(p);
    d.stimulus = category_of(s);
    d.pole = pole_of(f.response, s.polarity_of(p));
    d.label = labels.label(d.dimension, d.pole);
    d.grade = value_at(f.justification, p);
    d.manifestation = manifestation_of(f.response);
    d.provenance = {s.id, feedback_ref};
    out.push_back(std::move(d));
  }
  return out;
}

/// "if a were in a scenario of category {P4}, a would take the action (law defying, grade 1/5)"
inline std::string render_counterfactual(const Disposition& d, const PoleLabelTable& labels = {}) {
  std::ostringstream os;
  os << "if " << d.agent << " were in a scenario of category " << d.stimulus.to_string() << ", " << d.agent
     << " would " << (d.manifestation == Manifestation::WouldAct ? "take" : "refrain from") << " the action ("
     << labels.label(d.dimension, d.pole) << ", grade " << d.grade.value() << "/5)";
  return os.str();
}

inline json to_json(const Disposition& d) {
  return json{{"agent", d.agent},
              {"dimension", std::string(to_string(d.dimension))},
              {"stimulus", category_to_json(d.stimulus)},
              {"pole", std::string(to_string(d.pole))},
              {"label", d.label},
              {"grade", d.grade.value()},
              {"manifestation", std::string(to_string(d.manifestation))},
              {"provenance", json{{"scenario", d.provenance.scenario}, {"feedback", d.provenance.feedback}}}};
}

}  // namespace softethics
