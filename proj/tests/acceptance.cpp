// Acceptance suite. One line per criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "oracles.hpp"
#include "softethics/fixtures.hpp"
#include "softethics/service.hpp"
#include "temp_dir.hpp"

using namespace softethics;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kTruthTableBudgetMs = 1.0;
constexpr double kOracleBudgetMs = 1000.0;
constexpr std::size_t kOracleCasesPerSizeMax = 20000;
constexpr double kRoundTripBudgetMs = 5000.0;
constexpr int kRoundTripPairs = 1000;
constexpr int kPersistenceInstances = 1000;

struct Outcome {
  bool pass;
  std::string detail;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Outcome truth_table() {
  const auto corpus = reference_corpus();
  const auto& po = *corpus.find("postoffice");
  const auto j = [](int p1) { return make_justification(p1, 1, 1, 1); };
  const auto t0 = Clock::now();
  const Verdict got[4] = {sound(po, Response::Yes, j(4)).overall, sound(po, Response::No, j(1)).overall,
                          sound(po, Response::Yes, j(1)).overall, sound(po, Response::No, j(4)).overall};
  const double ms = ms_since(t0);
  const Verdict want[4] = {Verdict::Sound, Verdict::Sound, Verdict::Unsound, Verdict::Unsound};
  int hits = 0;
  for (int i = 0; i < 4; ++i) hits += got[i] == want[i];
  return {hits == 4 && ms < kTruthTableBudgetMs, std::to_string(hits) + "/4 in " + std::to_string(ms) + " ms"};
}

Outcome fruits_flow() {
  const auto corpus = reference_corpus();
  const auto& fr = *corpus.find("fruits");
  const auto branch = [&](Response r, int p4, Verdict want_v, const char* want_label) {
    const Feedback f{"a", "fruits", r, make_justification(1, 1, 1, p4)};
    const auto v = sound(fr, f);
    const auto ds = elicit("a", fr, f, v);
    if (v.overall != want_v) return false;
    if (!want_label) return ds.empty();
    return ds.size() == 1 && ds[0].label == want_label;
  };
  int hits = branch(Response::Yes, 4, Verdict::Unsound, nullptr) +
             branch(Response::Yes, 1, Verdict::Sound, "law defying") +
             branch(Response::No, 4, Verdict::Sound, "law abiding");
  return {hits == 3, std::to_string(hits) + "/3 branches"};
}

Outcome categories() {
  Corpus generated{"all-subsets", {}};
  for (unsigned bits = 0; bits < 16; ++bits) {
    Scenario s;
    s.id = "subset-" + std::to_string(bits);
    s.setting = s.problem = s.action = "x";
    s.press = Category::from_bits(static_cast<std::uint8_t>(bits));
    for (auto p : s.press.parameters()) s.polarity[p] = Polarity::Aligned;
    generated.scenarios.push_back(s);
  }
  const auto loaded = load_corpus(serialize_corpus(generated), CorpusFormat::Json, generated.id);
  std::set<Category> seen;
  if (loaded.ok()) {
    for (const auto& s : loaded->scenarios) seen.insert(category_of(s));
  }
  const auto ref = reference_corpus();
  const bool po = category_of(*ref.find("postoffice")) == Category::of({ParameterId::P1});
  const bool fr = category_of(*ref.find("fruits")) == Category::of({ParameterId::P4});
  return {seen.size() == Category::kCount && po && fr,
          std::to_string(seen.size()) + " categories, postoffice " + (po ? "{P1}" : "wrong") + ", fruits " +
              (fr ? "{P4}" : "wrong")};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::size_t cases = 0, agreements = 0;
  bool within_cap = true;
  for (std::size_t k = 0; k <= 4; ++k) {
    const auto rep = oracle::enumerate_press_size(k, SoundnessConfig{});
    within_cap = within_cap && rep.cases <= kOracleCasesPerSizeMax;
    cases += rep.cases;
    agreements += rep.agreements;
  }
  const double ms = ms_since(t0);
  return {cases > 0 && agreements == cases && within_cap && ms < kOracleBudgetMs,
          std::to_string(agreements) + "/" + std::to_string(cases) + " in " + std::to_string(ms) + " ms"};
}

Outcome neutral_counts() {
  bool ok = true;
  for (auto p : kAllParameters) {
    for (auto pol : {Polarity::Aligned, Polarity::Opposed}) {
      Scenario s{"one", "x", "x", "x", Category::of({p}), {{p, pol}}};
      int oracle_counts[3] = {0, 0, 0}, got_counts[3] = {0, 0, 0};
      for (Response r : {Response::Yes, Response::No}) {
        for (int v = 1; v <= 5; ++v) {
          oracle_counts[static_cast<int>(oracle::default_table(r, pol, v))] += 1;
          std::array<int, 4> vals{1, 1, 1, 1};
          vals[index_of(p)] = v;
          const auto got = sound(s, r, make_justification(vals[0], vals[1], vals[2], vals[3])).overall;
          got_counts[got == Verdict::Sound ? 0 : got == Verdict::Unsound ? 1 : 2] += 1;
        }
      }
      for (int i = 0; i < 3; ++i) ok = ok && got_counts[i] == oracle_counts[i];
      ok = ok && oracle_counts[0] == 4 && oracle_counts[1] == 4 && oracle_counts[2] == 2;
    }
  }
  return {ok, ok ? "4/4/2 for 8 (parameter, polarity) pairs" : "count mismatch"};
}

Outcome behaviourist_round_trip() {
  std::mt19937_64 rng(2024);
  int hits = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < kRoundTripPairs; ++i) {
    const auto s = oracle::random_scenario(rng, "s" + std::to_string(i), /*nonempty_press=*/true);
    const auto f = oracle::random_sound_feedback(rng, s, "a");
    const auto v = sound(s, f);
    Profile p{"a", {}, {}};
    p = absorb(std::move(p), "r", v, elicit("a", s, f, v, {}, "r"));
    Scenario fresh = s;
    fresh.id = "fresh-" + std::to_string(i);
    const auto want = f.response == Response::Yes ? PredictedResponse::Yes : PredictedResponse::No;
    hits += predict(p, fresh).response == want;
  }
  const double ms = ms_since(t0);
  return {hits == kRoundTripPairs && ms < kRoundTripBudgetMs,
          std::to_string(hits) + "/" + std::to_string(kRoundTripPairs) + " in " + std::to_string(ms) + " ms"};
}

Outcome persistence() {
  std::mt19937_64 rng(77);
  int profiles = 0, corpora = 0;
  for (int i = 0; i < kPersistenceInstances; ++i) {
    const auto p = oracle::random_profile(rng, "agent-" + std::to_string(i));
    try {
      profiles += deserialize_profile(serialize_profile(p)) == p;
    } catch (const std::exception&) {
    }
    const auto c = oracle::random_corpus(rng, "corpus-" + std::to_string(i));
    const auto back = load_corpus(serialize_corpus(c), CorpusFormat::Json, c.id);
    corpora += back.ok() && *back.value == c;
  }
  return {profiles == kPersistenceInstances && corpora == kPersistenceInstances,
          "profiles " + std::to_string(profiles) + "/" + std::to_string(kPersistenceInstances) + ", corpora " +
              std::to_string(corpora) + "/" + std::to_string(kPersistenceInstances)};
}

Outcome replay_into_fresh_store() {
  testing_support::TempDir original_dir, fresh_dir;
  ServiceConfig cfg;
  cfg.corpora = {SOFTETHICS_FIXTURES_DIR "/reference-corpus.json"};
  cfg.storage = original_dir.path();
  Service service(cfg);

  const auto created = service.handle("POST", "/sessions", json{{"agent", "a"}}.dump());
  const auto sess = created.body.value("session", std::string{});
  const auto submit = [&](const char* scenario, const char* response, int p1, int p4) {
    json body{{"scenario", scenario},
              {"response", response},
              {"justification", {{"P1", p1}, {"P2", 2}, {"P3", 3}, {"P4", p4}}}};
    return service.handle("POST", "/sessions/" + sess + "/feedback", body.dump()).status == 200;
  };
  if (!submit("postoffice", "yes", 5, 1) || !submit("fruits", "yes", 1, 1)) return {false, "session flow failed"};
  const auto exported = service.handle("GET", "/sessions/" + sess + "/export");
  const auto original = service.store().load_profile("a");
  if (exported.status != 200 || !original) return {false, "export failed"};

  const auto corpus = load_corpus_file(SOFTETHICS_FIXTURES_DIR "/reference-corpus.json");
  Store fresh(fresh_dir.path());
  const auto imported = import_session(exported.body.dump());
  fresh.save_session(imported);
  fresh.update_profile("a", [&](Profile& p) { p = replay_session(imported, *corpus.value, std::move(p)); });
  const auto rebuilt = fresh.load_profile("a");
  const bool equal = rebuilt && *rebuilt == *original;
  return {equal, equal ? "profile equal after " + std::to_string(imported.collected.size()) + " records"
                       : "profiles differ"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"truth-table", truth_table},
      {"fruits-flow", fruits_flow},
      {"category-enumeration", categories},
      {"oracle-equivalence", oracle_equivalence},
      {"neutral-counts", neutral_counts},
      {"behaviourist-round-trip", behaviourist_round_trip},
      {"persistence", persistence},
      {"replay", replay_into_fresh_store},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %-24s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
