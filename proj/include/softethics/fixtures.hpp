#pragma once

// Built-in reference corpus (same content as fixtures/reference-corpus.json), used
// by the CLI when no corpus is given.

#include <string_view>

#include "softethics/corpus.hpp"

namespace softethics {

inline constexpr std::string_view kReferenceCorpusId = "reference-corpus";

inline constexpr std::string_view kReferenceCorpusJson = R"json([
  {
    "id": "postoffice",
    "setting": "As I am about to leave the post office, the queue-eliminating machine breaks down.",
    "problem": "A messy line is forming and a clerk starts hand-writing numbered cards for people coming in.",
    "action": "stop and help him",
    "press": ["P1"],
    "polarity": {"P1": "aligned"}
  },
  {
    "id": "fruits",
    "setting": "There are trees with ripe fruit in a private park with private access.",
    "problem": "The gate is open and there are no people around.",
    "action": "go in and steal some",
    "press": ["P4"],
    "polarity": {"P4": "opposed"}
  }
])json";

inline const Corpus& reference_corpus() {
  static const Corpus corpus = [] {
    auto loaded = load_corpus(kReferenceCorpusJson, CorpusFormat::Json, std::string(kReferenceCorpusId));
    return *loaded.value;
  }();
  return corpus;
}

}  // namespace softethics
