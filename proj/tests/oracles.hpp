#pragma once

// Test-only reference evaluators. None of these call into the soundness,
// elicitation or prediction code they are used to check.

#include <array>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "softethics/softethics.hpp"

namespace oracle {

using namespace softethics;

// ---------------------------------------------------------------------------
// Soundness

enum class Case { Sound, Unsound, Indeterminate };

/// Frozen per-parameter truth table for the default configuration
/// (1,2 low; 3 neutral; 4,5 high). Row = (response, polarity), column = value-1.
///   yes + aligned : taking a high-end action needs a high weight
///   no  + aligned : refusing it needs a low weight
///   yes + opposed : taking a low-end action needs a low weight
///   no  + opposed : refusing it needs a high weight
inline Case default_table(Response r, Polarity pol, int value) {
  static const std::map<std::pair<Response, Polarity>, std::string> table = {
      {{Response::Yes, Polarity::Aligned}, "UUISS"},
      {{Response::No, Polarity::Aligned}, "SSIUU"},
      {{Response::Yes, Polarity::Opposed}, "SSIUU"},
      {{Response::No, Polarity::Opposed}, "UUISS"},
  };
  const char c = table.at({r, pol}).at(static_cast<std::size_t>(value - 1));
  return c == 'S' ? Case::Sound : c == 'U' ? Case::Unsound : Case::Indeterminate;
}

/// Per-parameter case for an arbitrary band configuration, by explicit
/// case analysis on the four (response, polarity) combinations.
inline Case config_case(Response r, Polarity pol, int value, int low_max, int high_min, bool neutral_unsound) {
  const bool is_low = value <= low_max;
  const bool is_high = value >= high_min;
  bool wants_high = false;
  if (r == Response::Yes && pol == Polarity::Aligned) wants_high = true;
  if (r == Response::Yes && pol == Polarity::Opposed) wants_high = false;
  if (r == Response::No && pol == Polarity::Aligned) wants_high = false;
  if (r == Response::No && pol == Polarity::Opposed) wants_high = true;
  if (!is_low && !is_high) return neutral_unsound ? Case::Unsound : Case::Indeterminate;
  return (wants_high ? is_high : is_low) ? Case::Sound : Case::Unsound;
}

/// Folds per-parameter cases by counting.
inline Case fold(const std::vector<Case>& cases, bool any_combinator) {
  if (cases.empty()) return Case::Sound;
  int sound = 0, unsound = 0, indet = 0;
  for (auto c : cases) {
    sound += c == Case::Sound;
    unsound += c == Case::Unsound;
    indet += c == Case::Indeterminate;
  }
  if (!any_combinator) {
    if (unsound > 0) return Case::Unsound;
    if (indet > 0) return Case::Indeterminate;
    return Case::Sound;
  }
  if (sound > 0) return Case::Sound;
  if (indet > 0) return Case::Indeterminate;
  return Case::Unsound;
}

inline Verdict to_verdict(Case c) {
  return c == Case::Sound ? Verdict::Sound : c == Case::Unsound ? Verdict::Unsound : Verdict::Indeterminate;
}

struct EquivalenceReport {
  std::size_t cases = 0;
  std::size_t agreements = 0;
};

/// Enumerates, for every press set of the given size, every response,
/// polarity assignment and pressed-value assignment (non-pressed values fixed
/// at `filler`), and compares sound() with the oracle.
inline EquivalenceReport enumerate_press_size(std::size_t press_size, const SoundnessConfig& cfg, int filler = 1) {
  EquivalenceReport rep;
  const bool neutral_unsound = cfg.neutral_policy == NeutralPolicy::TreatAsUnsound;
  const bool any = cfg.combinator == Combinator::Any;
  const bool is_default = cfg == SoundnessConfig{};
  for (unsigned bits = 0; bits < 16; ++bits) {
    std::vector<ParameterId> pressed;
    for (auto p : kAllParameters) {
      if (bits & (1u << index_of(p))) pressed.push_back(p);
    }
    if (pressed.size() != press_size) continue;
    const std::size_t k = pressed.size();
    std::size_t value_combos = 1;
    for (std::size_t i = 0; i < k; ++i) value_combos *= 5;
    for (Response r : {Response::Yes, Response::No}) {
      for (unsigned polmask = 0; polmask < (1u << k); ++polmask) {
        Scenario s;
        s.id = "enum";
        s.setting = s.problem = s.action = "x";
        s.press = Category::of(pressed);
        for (std::size_t i = 0; i < k; ++i) {
          s.polarity[pressed[i]] = (polmask >> i) & 1u ? Polarity::Opposed : Polarity::Aligned;
        }
        for (std::size_t combo = 0; combo < value_combos; ++combo) {
          std::array<int, 4> values{filler, filler, filler, filler};
          std::size_t rest = combo;
          for (std::size_t i = 0; i < k; ++i) {
            values[index_of(pressed[i])] = static_cast<int>(rest % 5) + 1;
            rest /= 5;
          }
          std::vector<Case> cases;
          for (std::size_t i = 0; i < k; ++i) {
            const auto pol = s.polarity[pressed[i]];
            const int v = values[index_of(pressed[i])];
            cases.push_back(is_default ? default_table(r, pol, v)
                                       : config_case(r, pol, v, cfg.low_max.value(), cfg.high_min.value(),
                                                     neutral_unsound));
          }
          const auto expected = to_verdict(fold(cases, any));
          const auto got = sound(s, r, make_justification(values[0], values[1], values[2], values[3]), cfg).overall;
          ++rep.cases;
          rep.agreements += expected == got;
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Prediction: votes counted straight from raw observations.

inline PredictedResponse predict_by_enumeration(const std::vector<Disposition>& all_observations, const Scenario& s,
                                                double* confidence = nullptr) {
  double yes = 0, no = 0;
  for (auto p : s.press.parameters()) {
    int takes = 0, refrains = 0;
    for (const auto& d : all_observations) {
      if (d.stimulus != s.press || static_cast<int>(d.dimension) != static_cast<int>(index_of(p))) continue;
      // would this observation's agent take the action of s?
      const bool high_end_action = s.polarity.at(p) == Polarity::Aligned;
      const bool positive = d.pole == Pole::Positive;
      (positive == high_end_action ? takes : refrains) += 1;
    }
    if (takes > refrains) yes += takes;
    if (refrains > takes) no += refrains;
  }
  if (confidence) *confidence = (yes + no) > 0 && yes != no ? std::max(yes, no) / (yes + no) : 0.0;
  if (yes + no == 0 || yes == no) return PredictedResponse::Abstain;
  return yes > no ? PredictedResponse::Yes : PredictedResponse::No;
}

// ---------------------------------------------------------------------------
// Random generators

inline Scenario random_scenario(std::mt19937_64& rng, const std::string& id, bool nonempty_press = false) {
  Scenario s;
  s.id = id;
  s.setting = "setting of " + id;
  s.problem = "problem of " + id;
  s.action = "action of " + id;
  std::uniform_int_distribution<unsigned> bits(nonempty_press ? 1u : 0u, 15u);
  std::bernoulli_distribution coin(0.5);
  s.press = Category::from_bits(static_cast<std::uint8_t>(bits(rng)));
  for (auto p : s.press.parameters()) s.polarity[p] = coin(rng) ? Polarity::Aligned : Polarity::Opposed;
  return s;
}

/// A justification that the oracle table deems sound for every pressed parameter.
inline Feedback random_sound_feedback(std::mt19937_64& rng, const Scenario& s, const AgentId& agent) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> any(1, 5);
  Feedback f;
  f.agent = agent;
  f.scenario = s.id;
  f.response = coin(rng) ? Response::Yes : Response::No;
  std::array<int, 4> v{any(rng), any(rng), any(rng), any(rng)};
  for (auto p : s.press.parameters()) {
    std::vector<int> sound_values;
    for (int x = 1; x <= 5; ++x) {
      if (default_table(f.response, s.polarity.at(p), x) == Case::Sound) sound_values.push_back(x);
    }
    std::uniform_int_distribution<std::size_t> pick(0, sound_values.size() - 1);
    v[index_of(p)] = sound_values[pick(rng)];
  }
  f.justification = make_justification(v[0], v[1], v[2], v[3]);
  return f;
}

inline Disposition random_disposition(std::mt19937_64& rng, const AgentId& agent, int serial) {
  std::uniform_int_distribution<int> dim(0, 3), grade(1, 5);
  std::uniform_int_distribution<unsigned> bits(0, 15);
  std::bernoulli_distribution coin(0.5);
  Disposition d;
  d.agent = agent;
  d.dimension = static_cast<Dimension>(dim(rng));
  d.stimulus = Category::from_bits(static_cast<std::uint8_t>(bits(rng)));
  d.pole = coin(rng) ? Pole::Positive : Pole::Negative;
  d.label = PoleLabelTable{}.label(d.dimension, d.pole);
  d.grade = ScaleValue(grade(rng));
  d.manifestation = coin(rng) ? Manifestation::WouldAct : Manifestation::WouldRefrain;
  d.provenance = {"scenario-" + std::to_string(serial % 7), "sess#" + std::to_string(serial)};
  return d;
}

inline Profile random_profile(std::mt19937_64& rng, const AgentId& agent) {
  std::uniform_int_distribution<int> count(0, 12);
  std::bernoulli_distribution coin(0.3);
  Profile p{agent, {}, {}};
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    if (coin(rng)) {
      p.audit.push_back({"sess#u" + std::to_string(i), "scenario-x", coin(rng) ? Response::Yes : Response::No,
                         coin(rng) ? Verdict::Unsound : Verdict::Indeterminate});
    }
    p = record(std::move(p), random_disposition(rng, agent, i));
  }
  return p;
}

inline Corpus random_corpus(std::mt19937_64& rng, const std::string& id) {
  std::uniform_int_distribution<int> count(0, 10);
  Corpus c{id, {}};
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    auto s = random_scenario(rng, id + "-s" + std::to_string(i));
    s.setting += " \"quoted\" \\ \xC3\xA9";  // escapes and UTF-8 survive
    c.scenarios.push_back(std::move(s));
  }
  return c;
}

}  // namespace oracle
