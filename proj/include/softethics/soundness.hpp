#pragma once

// The sound-justification oracle. A justification value is classified into a
// band; each pressed parameter's band is compared with the band implied by the
// response and the scenario's polarity; per-parameter verdicts are folded.

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "softethics/model.hpp"

namespace softethics {

enum class ValueBand : std::uint8_t { Low, Neutral, High };

inline std::string_view to_string(ValueBand b) {
  switch (b) {
    case ValueBand::Low: return "low";
    case ValueBand::Neutral: return "neutral";
    case ValueBand::High: return "high";
  }
  return "?";
}

enum class NeutralPolicy : std::uint8_t { Indeterminate, TreatAsUnsound };
enum class Combinator : std::uint8_t { All, Any };

struct SoundnessConfig {
  ScaleValue low_max{2};
  ScaleValue high_min{4};
  NeutralPolicy neutral_policy = NeutralPolicy::Indeterminate;
  Combinator combinator = Combinator::All;

  friend bool operator==(const SoundnessConfig&, const SoundnessConfig&) = default;
};

/// Throws std::invalid_argument unless low_max < high_min.
inline void check(const SoundnessConfig& cfg) {
  if (!(cfg.low_max < cfg.high_min)) {
    throw std::invalid_argument("soundness config requires low_max < high_min");
  }
}

enum class Verdict : std::uint8_t { Sound, Unsound, Indeterminate };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Sound: return "sound";
    case Verdict::Unsound: return "unsound";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

inline std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "sound") return Verdict::Sound;
  if (s == "unsound") return Verdict::Unsound;
  if (s == "indeterminate") return Verdict::Indeterminate;
  return std::nullopt;
}

struct ParameterVerdict {
  ScaleValue value{1};
  ValueBand observed = ValueBand::Low;
  ValueBand expected = ValueBand::Low;
  Verdict verdict = Verdict::Unsound;

  friend bool operator==(const ParameterVerdict&, const ParameterVerdict&) = default;
};

struct SoundnessVerdict {
  std::string scenario;
  Response response = Response::Yes;
  Verdict overall = Verdict::Sound;
  std::map<ParameterId, ParameterVerdict> per_parameter;  // keys == press(s)

  friend bool operator==(const SoundnessVerdict&, const SoundnessVerdict&) = default;
};

inline ValueBand band_of(ScaleValue v, const SoundnessConfig& cfg = {}) {
  if (v <= cfg.low_max) return ValueBand::Low;
  if (v >= cfg.high_min) return ValueBand::High;
  return ValueBand::Neutral;
}

/// Band a consistent justification must fall in. Never Neutral.
constexpr ValueBand expected_band(Response response, Polarity polarity) {
  const bool expresses_high = (response == Response::Yes) == (polarity == Polarity::Aligned);
  return expresses_high ? ValueBand::High : ValueBand::Low;
}

inline Verdict parameter_verdict(ValueBand observed, ValueBand expected, const SoundnessConfig& cfg) {
  if (observed == expected) return Verdict::Sound;
  if (observed == ValueBand::Neutral && cfg.neutral_policy == NeutralPolicy::Indeterminate) {
    return Verdict::Indeterminate;
  }
  return Verdict::Unsound;
}

inline SoundnessVerdict sound(const Scenario& s, Response response, const Justification& j,
                              const SoundnessConfig& cfg = {}) {
  SoundnessVerdict out;
  out.scenario = s.id;
  out.response = response;

  bool any_sound = false, any_unsound = false, any_indeterminate = false;
  for (auto p : s.press.parameters()) {
    ParameterVerdict pv;
    pv.value = value_at(j, p);
    pv.observed = band_of(pv.value, cfg);
    pv.expected = expected_band(response, s.polarity_of(p));
    pv.verdict = parameter_verdict(pv.observed, pv.expected, cfg);
    any_sound |= pv.verdict == Verdict::Sound;
    any_unsound |= pv.verdict == Verdict::Unsound;
    any_indeterminate |= pv.verdict == Verdict::Indeterminate;
    out.per_parameter.emplace(p, pv);
  }

  if (out.per_parameter.empty()) {
    out.overall = Verdict::Sound;  // vacuous
  } else if (cfg.combinator == Combinator::All) {
    out.overall = any_unsound ? Verdict::Unsound : any_indeterminate ? Verdict::Indeterminate : Verdict::Sound;
  } else {
    out.overall = any_sound ? Verdict::Sound : any_indeterminate ? Verdict::Indeterminate : Verdict::Unsound;
  }
  return out;
}

inline SoundnessVerdict sound(const Scenario& s, const Feedback& f, const SoundnessConfig& cfg = {}) {
  return sound(s, f.response, f.justification, cfg);
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const SoundnessVerdict& v) {
  json params = json::array();
  for (const auto& [p, pv] : v.per_parameter) {
    params.push_back(json{{"parameter", std::string(to_string(p))},
                          {"value", pv.value.value()},
                          {"observed", std::string(to_string(pv.observed))},
                          {"expected", std::string(to_string(pv.expected))},
                          {"verdict", std::string(to_string(pv.verdict))}});
  }
  return json{{"scenario", v.scenario},
              {"response", std::string(to_string(v.response))},
              {"overall", std::string(to_string(v.overall))},
              {"parameters", params}};
}

inline json to_json(const SoundnessConfig& cfg) {
  return json{{"low_max", cfg.low_max.value()},
              {"high_min", cfg.high_min.value()},
              {"neutral_policy", cfg.neutral_policy == NeutralPolicy::Indeterminate ? "indeterminate" : "unsound"},
              {"combinator", cfg.combinator == Combinator::All ? "all" : "any"}};
}

/// Inverse of to_json(SoundnessVerdict). Throws std::invalid_argument.
inline SoundnessVerdict verdict_from_json(const json& j) {
  auto band = [](const std::string& s) {
    if (s == "low") return ValueBand::Low;
    if (s == "neutral") return ValueBand::Neutral;
    if (s == "high") return ValueBand::High;
    throw std::invalid_argument("unknown band '" + s + "'");
  };
  auto verdict = [](const std::string& s) {
    auto v = parse_verdict(s);
    if (!v) throw std::invalid_argument("unknown verdict '" + s + "'");
    return *v;
  };
  SoundnessVerdict out;
  out.scenario = j.at("scenario").get<std::string>();
  auto r = parse_response(j.at("response").get<std::string>());
  if (!r) throw std::invalid_argument("unknown response");
  out.response = *r;
  out.overall = verdict(j.at("overall").get<std::string>());
  for (const auto& e : j.at("parameters")) {
    auto p = parse_parameter(e.at("parameter").get<std::string>());
    if (!p) throw std::invalid_argument("unknown parameter");
    auto v = ScaleValue::make(e.at("value").get<int>());
    if (!v) throw std::invalid_argument("verdict value outside 1..5");
    out.per_parameter.emplace(*p, ParameterVerdict{*v, band(e.at("observed").get<std::string>()),
                                                   band(e.at("expected").get<std::string>()),
                                                   verdict(e.at("verdict").get<std::string>())});
  }
  return out;
}

/// Missing keys keep their defaults. Throws std::invalid_argument on bad values.
inline SoundnessConfig soundness_config_from_json(const json& j) {
  SoundnessConfig cfg;
  if (!j.is_object()) throw std::invalid_argument("soundness config must be an object");
  auto scale = [&](const char* key, ScaleValue& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    auto sv = v.is_number_integer() ? ScaleValue::make(v.get<int>()) : std::nullopt;
    if (!sv) throw std::invalid_argument(std::string("soundness.") + key + " must be an integer in 1..5");
    out = *sv;
  };
  scale("low_max", cfg.low_max);
  scale("high_min", cfg.high_min);
  if (j.contains("neutral_policy")) {
    const auto s = j.at("neutral_policy").get<std::string>();
    if (s == "indeterminate") cfg.neutral_policy = NeutralPolicy::Indeterminate;
    else if (s == "unsound") cfg.neutral_policy = NeutralPolicy::TreatAsUnsound;
    else throw std::invalid_argument("soundness.neutral_policy must be \"indeterminate\" or \"unsound\"");
  }
  if (j.contains("combinator")) {
    const auto s = j.at("combinator").get<std::string>();
    if (s == "all") cfg.combinator = Combinator::All;
    else if (s == "any") cfg.combinator = Combinator::Any;
    else throw std::invalid_argument("soundness.combinator must be \"all\" or \"any\"");
  }
  check(cfg);
  return cfg;
}

}  // namespace softethics
