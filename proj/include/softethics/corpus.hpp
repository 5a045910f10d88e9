#pragma once

// Scenario corpora: loading, validation and canonical serialization.

#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "softethics/model.hpp"

namespace softethics {

struct Corpus {
  std::string id;
  std::vector<Scenario> scenarios;

  const Scenario* find(std::string_view scenario_id) const {
    for (const auto& s : scenarios) {
      if (s.id == scenario_id) return &s;
    }
    return nullptr;
  }
  std::size_t size() const { return scenarios.size(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

enum class CorpusFormat {
  Json,       // array of scenario records, or {"id": ..., "scenarios": [...]}
  JsonLines,  // one scenario record per non-blank line
};

/// Parses and validates a corpus. On failure every violation is reported,
/// with paths relative to the document ("/2/polarity/P4").
inline Validated<Corpus> load_corpus(std::string_view bytes, CorpusFormat format, std::string corpus_id = "corpus") {
  Validated<Corpus> result;
  auto& errs = result.violations;

  std::vector<std::pair<std::string, json>> records;  // (path, record)
  if (format == CorpusFormat::Json) {
    json doc;
    try {
      doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
      errs.push_back({ViolationKind::ParseError, "", e.what()});
      return result;
    }
    std::string base;
    const json* list = &doc;
    if (doc.is_object()) {
      if (auto id = doc.find("id"); id != doc.end() && id->is_string()) corpus_id = id->get<std::string>();
      auto it = doc.find("scenarios");
      if (it == doc.end()) {
        errs.push_back({ViolationKind::MissingField, "/scenarios", "missing field 'scenarios'"});
        return result;
      }
      list = &*it;
      base = "/scenarios";
    }
    if (!list->is_array()) {
      errs.push_back({ViolationKind::TypeMismatch, base, "expected an array of scenario records"});
      return result;
    }
    for (std::size_t i = 0; i < list->size(); ++i) records.emplace_back(base + "/" + std::to_string(i), (*list)[i]);
  } else {
    std::istringstream in{std::string(bytes)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto path = "/" + std::to_string(lineno);
      try {
        records.emplace_back(path, json::parse(line));
      } catch (const json::parse_error& e) {
        errs.push_back({ViolationKind::ParseError, path, e.what()});
      }
    }
  }

  Corpus corpus;
  corpus.id = std::move(corpus_id);
  std::set<std::string> seen;
  for (const auto& [path, rec] : records) {
    auto v = validate_scenario(rec, path);
    if (!v) {
      errs.insert(errs.end(), v.violations.begin(), v.violations.end());
      continue;
    }
    if (!seen.insert(v->id).second) {
      errs.push_back({ViolationKind::DuplicateScenarioId, path + "/id", "duplicate scenario id '" + v->id + "'"});
      continue;
    }
    corpus.scenarios.push_back(*v.value);
  }

  if (errs.empty()) result.value = std::move(corpus);
  return result;
}

/// Canonical form: a JSON array of scenario records in corpus order.
inline std::string serialize_corpus(const Corpus& c) {
  json arr = json::array();
  for (const auto& s : c.scenarios) arr.push_back(to_json(s));
  return arr.dump(2) + "\n";
}

}  // namespace softethics
