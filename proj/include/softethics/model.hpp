#pragma once

// Questionnaire ontology: parameters, the 1..5 scale, scenarios, feedback and
// the 16 press-set categories. Everything here is an immutable value type.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace softethics {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Parameters and dimensions

enum class ParameterId : std::uint8_t { P1 = 0, P2 = 1, P3 = 2, P4 = 3 };

inline constexpr std::array<ParameterId, 4> kAllParameters = {
    ParameterId::P1, ParameterId::P2, ParameterId::P3, ParameterId::P4};

constexpr std::size_t index_of(ParameterId p) { return static_cast<std::size_t>(p); }

inline std::string_view to_string(ParameterId p) {
  static constexpr std::array<std::string_view, 4> names = {"P1", "P2", "P3", "P4"};
  return names[index_of(p)];
}

inline std::optional<ParameterId> parse_parameter(std::string_view s) {
  for (auto p : kAllParameters) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

// One dimension per parameter; the pairing is fixed.
enum class Dimension : std::uint8_t { Goodwill = 0, SelfServingness = 1, Pragmatism = 2, Legality = 3 };

inline constexpr std::array<Dimension, 4> kAllDimensions = {
    Dimension::Goodwill, Dimension::SelfServingness, Dimension::Pragmatism, Dimension::Legality};

constexpr Dimension dimension_of(ParameterId p) { return static_cast<Dimension>(index_of(p)); }
constexpr ParameterId parameter_of(Dimension d) { return static_cast<ParameterId>(static_cast<std::uint8_t>(d)); }

/// The determinable (the dimension itself) name, used as the wire identifier.
inline std::string_view determinable_name(Dimension d) {
  static constexpr std::array<std::string_view, 4> names = {"goodwill", "self-servingness", "pragmatism",
                                                            "legality"};
  return names[static_cast<std::size_t>(d)];
}

/// The determinate expression measured along the dimension.
inline std::string_view determinate_name(Dimension d) {
  static constexpr std::array<std::string_view, 4> names = {"altruism", "egoism", "expertness", "obedience"};
  return names[static_cast<std::size_t>(d)];
}

inline std::string_view to_string(Dimension d) { return determinable_name(d); }

inline std::optional<Dimension> parse_dimension(std::string_view s) {
  for (auto d : kAllDimensions) {
    if (determinable_name(d) == s) return d;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Scale

class ScaleValue {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 5;

  explicit ScaleValue(int v) : value_(v) {
    if (v < kMin || v > kMax) {
      throw std::out_of_range("scale value " + std::to_string(v) + " outside 1..5");
    }
  }

  static std::optional<ScaleValue> make(int v) {
    if (v < kMin || v > kMax) return std::nullopt;
    return ScaleValue(v);
  }

  constexpr int value() const { return value_; }
  friend constexpr auto operator<=>(ScaleValue, ScaleValue) = default;

 private:
  int value_;
};

// ---------------------------------------------------------------------------
// Responses and polarity

enum class Response : std::uint8_t { Yes, No };

inline std::string_view to_string(Response r) { return r == Response::Yes ? "yes" : "no"; }

inline std::optional<Response> parse_response(std::string_view s) {
  if (s == "yes") return Response::Yes;
  if (s == "no") return Response::No;
  return std::nullopt;
}

constexpr Response flip(Response r) { return r == Response::Yes ? Response::No : Response::Yes; }

// Whether taking the action expresses the high (Aligned) or low (Opposed)
// end of a pressed parameter.
enum class Polarity : std::uint8_t { Aligned, Opposed };

inline std::string_view to_string(Polarity p) { return p == Polarity::Aligned ? "aligned" : "opposed"; }

inline std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "aligned") return Polarity::Aligned;
  if (s == "opposed") return Polarity::Opposed;
  return std::nullopt;
}

constexpr Polarity flip(Polarity p) { return p == Polarity::Aligned ? Polarity::Opposed : Polarity::Aligned; }

// ---------------------------------------------------------------------------
// Category: a subset of {P1..P4}, stored as a 4-bit mask.

class Category {
 public:
  constexpr Category() = default;

  template <typename Range>
  static Category of(const Range& params) {
    Category c;
    for (ParameterId p : params) c.bits_ |= bit(p);
    return c;
  }
  static Category of(std::initializer_list<ParameterId> params) {
    return of<std::initializer_list<ParameterId>>(params);
  }
  static constexpr Category from_bits(std::uint8_t bits) {
    Category c;
    c.bits_ = static_cast<std::uint8_t>(bits & 0x0F);
    return c;
  }

  constexpr bool contains(ParameterId p) const { return (bits_ & bit(p)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr std::size_t size() const {
    std::size_t n = 0;
    for (auto p : kAllParameters) n += contains(p) ? 1 : 0;
    return n;
  }

  /// Members in P1 < P2 < P3 < P4 order.
  std::vector<ParameterId> parameters() const {
    std::vector<ParameterId> out;
    for (auto p : kAllParameters) {
      if (contains(p)) out.push_back(p);
    }
    return out;
  }

  /// "{P1,P4}", "{}" for the empty category.
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto p : parameters()) {
      if (!first) s += ",";
      s += softethics::to_string(p);
      first = false;
    }
    return s + "}";
  }

  friend constexpr auto operator<=>(Category, Category) = default;

  static constexpr std::size_t kCount = 16;

 private:
  static constexpr std::uint8_t bit(ParameterId p) { return static_cast<std::uint8_t>(1u << index_of(p)); }
  std::uint8_t bits_ = 0;
};

// ---------------------------------------------------------------------------
// Scenario and feedback

using AgentId = std::string;

struct Scenario {
  std::string id;
  std::string setting;
  std::string problem;
  std::string action;
  Category press;
  std::map<ParameterId, Polarity> polarity;  // keys == press

  Polarity polarity_of(ParameterId p) const { return polarity.at(p); }
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline Category category_of(const Scenario& s) { return s.press; }

/// Justification is total over the four parameters.
using Justification = std::array<ScaleValue, 4>;

inline Justification make_justification(int p1, int p2, int p3, int p4) {
  return {ScaleValue(p1), ScaleValue(p2), ScaleValue(p3), ScaleValue(p4)};
}

inline ScaleValue value_at(const Justification& j, ParameterId p) { return j[index_of(p)]; }

struct Feedback {
  AgentId agent;
  std::string scenario;
  Response response = Response::Yes;
  Justification justification = make_justification(1, 1, 1, 1);

  friend bool operator==(const Feedback&, const Feedback&) = default;
};

// ---------------------------------------------------------------------------
// Violations: structured validation errors with a JSON-pointer style path.

enum class ViolationKind {
  ParseError,
  MissingField,
  TypeMismatch,
  EmptyText,
  UnknownParameter,
  PolarityPressMismatch,
  UnknownPolarity,
  ValueOutOfRange,
  MissingParameter,
  UnknownResponse,
  DuplicateScenarioId,
};

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::ParseError: return "ParseError";
    case ViolationKind::MissingField: return "MissingField";
    case ViolationKind::TypeMismatch: return "TypeMismatch";
    case ViolationKind::EmptyText: return "EmptyText";
    case ViolationKind::UnknownParameter: return "UnknownParameter";
    case ViolationKind::PolarityPressMismatch: return "PolarityPressMismatch";
    case ViolationKind::UnknownPolarity: return "UnknownPolarity";
    case ViolationKind::ValueOutOfRange: return "ValueOutOfRange";
    case ViolationKind::MissingParameter: return "MissingParameter";
    case ViolationKind::UnknownResponse: return "UnknownResponse";
    case ViolationKind::DuplicateScenarioId: return "DuplicateScenarioId";
  }
  return "Unknown";
}

struct Violation {
  ViolationKind kind;
  std::string path;  // e.g. "/1/polarity/P4"
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline json to_json(const Violation& v) {
  return json{{"kind", std::string(to_string(v.kind))}, {"path", v.path}, {"message", v.message}};
}

inline json to_json(const std::vector<Violation>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

/// Either a value or the complete list of violations found while building it.
template <typename T>
struct Validated {
  std::optional<T> value;
  std::vector<Violation> violations;

  bool ok() const { return value.has_value(); }
  explicit operator bool() const { return ok(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

// ---------------------------------------------------------------------------
// Validation of raw JSON records

namespace detail {

inline std::string join_path(std::string_view base, std::string_view key) {
  std::string out(base);
  out += '/';
  out += key;
  return out;
}

inline void require_text(const json& rec, std::string_view field, std::string_view base, std::string& out,
                         std::vector<Violation>& errs) {
  const auto path = join_path(base, field);
  auto it = rec.find(std::string(field));
  if (it == rec.end()) {
    errs.push_back({ViolationKind::MissingField, path, "missing field '" + std::string(field) + "'"});
    return;
  }
  if (!it->is_string()) {
    errs.push_back({ViolationKind::TypeMismatch, path, "'" + std::string(field) + "' must be a string"});
    return;
  }
  out = it->get<std::string>();
  if (out.find_first_not_of(" \t\r\n") == std::string::npos) {
    errs.push_back({ViolationKind::EmptyText, path, "'" + std::string(field) + "' must not be empty"});
  }
}

}  // namespace detail

/// Builds a Scenario from a raw record, collecting every violation.
/// `base` prefixes reported paths (e.g. "/3" for the fourth corpus entry).
inline Validated<Scenario> validate_scenario(const json& rec, std::string_view base = "") {
  using detail::join_path;
  Validated<Scenario> result;
  auto& errs = result.violations;

  if (!rec.is_object()) {
    errs.push_back({ViolationKind::TypeMismatch, std::string(base), "scenario record must be an object"});
    return result;
  }

  Scenario s;
  detail::require_text(rec, "id", base, s.id, errs);
  detail::require_text(rec, "setting", base, s.setting, errs);
  detail::require_text(rec, "problem", base, s.problem, errs);
  detail::require_text(rec, "action", base, s.action, errs);

  bool press_ok = true;
  std::vector<ParameterId> pressed;
  const auto press_path = join_path(base, "press");
  if (auto it = rec.find("press"); it == rec.end()) {
    errs.push_back({ViolationKind::MissingField, press_path, "missing field 'press'"});
    press_ok = false;
  } else if (!it->is_array()) {
    errs.push_back({ViolationKind::TypeMismatch, press_path, "'press' must be an array of parameter ids"});
    press_ok = false;
  } else {
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& e = (*it)[i];
      const auto elem_path = join_path(press_path, std::to_string(i));
      std::optional<ParameterId> p;
      if (e.is_string()) p = parse_parameter(e.get<std::string>());
      if (!p) {
        errs.push_back({ViolationKind::UnknownParameter, elem_path, "unknown parameter " + e.dump()});
        press_ok = false;
        continue;
      }
      pressed.push_back(*p);
    }
  }
  s.press = Category::of(pressed);

  const auto pol_path = join_path(base, "polarity");
  if (auto it = rec.find("polarity"); it == rec.end()) {
    errs.push_back({ViolationKind::MissingField, pol_path, "missing field 'polarity'"});
  } else if (!it->is_object()) {
    errs.push_back({ViolationKind::TypeMismatch, pol_path, "'polarity' must be an object"});
  } else {
    for (const auto& [key, val] : it->items()) {
      const auto entry_path = join_path(pol_path, key);
      auto p = parse_parameter(key);
      if (!p) {
        errs.push_back({ViolationKind::UnknownParameter, entry_path, "unknown parameter '" + key + "'"});
        continue;
      }
      std::optional<Polarity> pol;
      if (val.is_string()) pol = parse_polarity(val.get<std::string>());
      if (!pol) {
        errs.push_back({ViolationKind::UnknownPolarity, entry_path,
                        "polarity must be \"aligned\" or \"opposed\", got " + val.dump()});
        continue;
      }
      s.polarity.emplace(*p, *pol);
    }
    if (press_ok) {
      for (auto p : kAllParameters) {
        const bool in_press = s.press.contains(p);
        const bool annotated = it->contains(std::string(to_string(p)));
        if (in_press && !annotated) {
          errs.push_back({ViolationKind::PolarityPressMismatch, join_path(pol_path, to_string(p)),
                          std::string(to_string(p)) + " is pressed but has no polarity"});
        } else if (!in_press && annotated) {
          errs.push_back({ViolationKind::PolarityPressMismatch, join_path(pol_path, to_string(p)),
                          std::string(to_string(p)) + " has a polarity but is not pressed"});
        }
      }
    }
  }

  if (errs.empty()) result.value = std::move(s);
  return result;
}

/// Builds a Feedback from {agent, scenario, response, justification{P1..P4}}.
inline Validated<Feedback> validate_feedback(const json& rec, std::string_view base = "") {
  using detail::join_path;
  Validated<Feedback> result;
  auto& errs = result.violations;

  if (!rec.is_object()) {
    errs.push_back({ViolationKind::TypeMismatch, std::string(base), "feedback record must be an object"});
    return result;
  }

  Feedback f;
  detail::require_text(rec, "agent", base, f.agent, errs);
  detail::require_text(rec, "scenario", base, f.scenario, errs);

  const auto resp_path = join_path(base, "response");
  if (auto it = rec.find("response"); it == rec.end()) {
    errs.push_back({ViolationKind::MissingField, resp_path, "missing field 'response'"});
  } else {
    std::optional<Response> r;
    if (it->is_string()) r = parse_response(it->get<std::string>());
    if (!r) {
      errs.push_back({ViolationKind::UnknownResponse, resp_path, "response must be \"yes\" or \"no\", got " + it->dump()});
    } else {
      f.response = *r;
    }
  }

  const auto just_path = join_path(base, "justification");
  if (auto it = rec.find("justification"); it == rec.end()) {
    errs.push_back({ViolationKind::MissingField, just_path, "missing field 'justification'"});
  } else if (!it->is_object()) {
    errs.push_back({ViolationKind::TypeMismatch, just_path, "'justification' must be an object keyed P1..P4"});
  } else {
    for (const auto& [key, val] : it->items()) {
      if (!parse_parameter(key)) {
        errs.push_back({ViolationKind::UnknownParameter, join_path(just_path, key), "unknown parameter '" + key + "'"});
      }
    }
    for (auto p : kAllParameters) {
      const auto name = std::string(to_string(p));
      const auto path = join_path(just_path, name);
      auto v = it->find(name);
      if (v == it->end()) {
        errs.push_back({ViolationKind::MissingParameter, path, "justification has no value for " + name});
        continue;
      }
      if (!v->is_number_integer()) {
        errs.push_back({ViolationKind::TypeMismatch, path, name + " must be an integer"});
        continue;
      }
      auto sv = ScaleValue::make(v->get<int>());
      if (!sv) {
        errs.push_back({ViolationKind::ValueOutOfRange, path, name + " = " + v->dump() + " is outside 1..5"});
        continue;
      }
      f.justification[index_of(p)] = *sv;
    }
  }

  if (errs.empty()) result.value = std::move(f);
  return result;
}

// ---------------------------------------------------------------------------
// Canonical JSON encodings

inline json category_to_json(Category c) {
  json out = json::array();
  for (auto p : c.parameters()) out.push_back(std::string(to_string(p)));
  return out;
}

inline json to_json(const Scenario& s) {
  json pol = json::object();
  for (const auto& [p, v] : s.polarity) pol[std::string(to_string(p))] = std::string(to_string(v));
  return json{{"id", s.id},
              {"setting", s.setting},
              {"problem", s.problem},
              {"action", s.action},
              {"press", category_to_json(s.press)},
              {"polarity", pol}};
}

inline json justification_to_json(const Justification& j) {
  json out = json::object();
  for (auto p : kAllParameters) out[std::string(to_string(p))] = value_at(j, p).value();
  return out;
}

inline json to_json(const Feedback& f) {
  return json{{"agent", f.agent},
              {"scenario", f.scenario},
              {"response", std::string(to_string(f.response))},
              {"justification", justification_to_json(f.justification)}};
}

}  // namespace softethics
