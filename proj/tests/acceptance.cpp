// One pass/fail line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "auter/checks.hpp"
#include "auter/fixtures.hpp"

using namespace auter;
using checks::Instance;
using checks::Tally;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr int kHorizon = 4;
constexpr int kNormHorizon = 5;
constexpr double kNormSeconds = 60.0;
constexpr double kStarSeconds = 120.0;
constexpr int kDraws = 1000;
constexpr int kMaxSteps = 500;
const char* kWitnessDir = "witnesses";

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, const std::string& title, bool ok, const std::string& detail) {
  std::printf("criterion %d %s: %s (%s)\n", n, title.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  if (!ok) ++failures;
  std::fflush(stdout);
}

bool clean(const std::vector<const Tally*>& ts, std::string& detail) {
  bool ok = true;
  for (const auto* t : ts) {
    if (!detail.empty()) detail += "; ";
    detail += t->summary();
    ok = ok && t->ok() && t->checked > 0;
  }
  for (const auto* t : ts) {
    for (const auto& m : t->messages) std::printf("    %s\n", m.c_str());
  }
  return ok;
}

std::vector<Instance> with_fixtures(std::vector<Instance> extra, bool reduce) {
  std::vector<Instance> out;
  for (const auto& in : checks::fixture_instances()) {
    out.push_back({in.name, reduce ? checks::reduced_form(in.marked) : in.marked});
  }
  for (auto& in : extra) out.push_back(std::move(in));
  return out;
}

}  // namespace

int main() {
  const auto unreduced100 = with_fixtures(checks::random_instances(kSeed, 100, false), false);
  const auto unreduced50 = with_fixtures(checks::random_instances(kSeed + 1, 50, false), false);
  const auto reduced50 = with_fixtures(checks::random_instances(kSeed + 2, 50, true), true);
  const auto reduced100 = with_fixtures(checks::random_instances(kSeed + 3, 100, true), true);

  {
    Tally t("norm-consistency", kWitnessDir);
    auto t0 = Clock::now();
    for (const auto& in : unreduced100) checks::norm_consistency(in, NormContext(in.marked, kNormHorizon), t);
    double s = since(t0);
    std::string d;
    bool ok = clean({&t}, d);
    report(1, "norm consistency", ok && s < kNormSeconds,
           d + ", H=" + std::to_string(kNormHorizon) + ", " + std::to_string(unreduced100.size()) + " instances, " +
               std::to_string(s) + " s");
  }

  {
    Tally ie("inclusion-exclusion", kWitnessDir), oo("out-only-identity", kWitnessDir);
    long aut_ce = 0;
    std::mt19937_64 rng(kSeed);
    const int per = (kDraws + static_cast<int>(unreduced100.size()) - 1) / static_cast<int>(unreduced100.size());
    for (const auto& in : unreduced100) {
      NormContext ctx(in.marked, kHorizon);
      checks::inclusion_exclusion(in, ctx, rng, per, ie, oo, aut_ce);
    }
    std::string d;
    bool ok = clean({&ie, &oo}, d) && ie.checked >= kDraws && aut_ce > 0;
    report(2, "inclusion-exclusion", ok, d + ", aut counterexamples " + std::to_string(aut_ce));
  }

  {
    Tally t("coset-identity", kWitnessDir);
    std::mt19937_64 rng(kSeed + 3);
    for (const auto& in : checks::fixture_instances()) checks::coset_identity(in, NormContext(in.marked, kHorizon), t, rng);
    std::string d;
    report(3, "coset identity", clean({&t}, d), d);
  }

  {
    Tally t("norm-change-law", kWitnessDir);
    for (const auto& in : unreduced50) checks::norm_change_law(in, NormContext(in.marked, kHorizon), t);
    std::string d;
    report(4, "norm-change law", clean({&t}, d), d);
  }

  {
    Tally t("blow-up-correspondence", kWitnessDir);
    for (const auto& in : checks::fixture_instances()) {
      checks::blowup_correspondence(in, NormContext(in.marked, kHorizon), t);
    }
    std::string d;
    report(5, "blow-up correspondence", clean({&t}, d), d);
  }

  {
    Tally t21("t21", kWitnessDir), t22("t22", kWitnessDir);
    for (const auto& in : unreduced50) checks::crossing_inequalities(in, NormContext(in.marked, kHorizon), t21, t22);
    std::string d;
    report(6, "crossing inequalities", clean({&t21, &t22}, d), d);
  }

  {
    Tally push("pushing", kWitnessDir), shrink("shrinking", kWitnessDir), literal("shrinking-literal");
    for (const auto& in : reduced50) {
      NormContext ctx(in.marked, kHorizon);
      for (auto kind : {NormKind::Aut, NormKind::Tot}) checks::pushing_shrinking(in, ctx, kind, push, shrink, literal);
    }
    std::string d;
    bool ok = clean({&push, &shrink}, d);
    report(7, "pushing and shrinking", ok,
           d + "; without the reductive hypothesis " + std::to_string(literal.violations) + " of " +
               std::to_string(literal.checked) + " fail");
  }

  {
    Tally t17("inverse-reductive", kWitnessDir), t18("out-change", kWitnessDir), t25("conjugating-edge", kWitnessDir);
    for (const auto& in : reduced50) checks::inverse_and_gamma(in, NormContext(in.marked, kHorizon), t17, t18, t25);
    std::string d;
    bool ok = t17.ok() && t18.ok() && t25.ok() && t17.checked + t25.checked > 0;
    clean({&t17, &t18, &t25}, d);
    report(8, "inverse and conjugating edge", ok, d);
  }

  {
    Tally t("descent", kWitnessDir);
    for (const auto& in : unreduced100) checks::descent(in, kHorizon, kMaxSteps, t);
    Tally w("word-rose");
    auto r = checks::descent({"FIX-R2W", fixtures::fix_r2w()}, kHorizon, kMaxSteps, w);
    bool rose = r && r->marked.graph().vertex_count() == 1 &&
                norm(r->marked, NormKind::Out, 1).coords() == std::vector<std::int64_t>{1, 1, 1, 1};
    std::string d;
    bool ok = clean({&t}, d) && rose;
    report(9, "descent and termination", ok,
           d + "; FIX-R2W ends at " + (r ? norm(r->marked, NormKind::Out, 1).to_string() : std::string("nothing")));
  }

  {
    Tally nesting("family-nesting", kWitnessDir), star("star-contractible", kWitnessDir);
    int in_scope = 0;
    double worst = 0;
    for (const auto& in : reduced100) {
      auto o = checks::star_contractibility(in, kHorizon, nesting, star);
      if (o.in_scope) ++in_scope;
      worst = std::max(worst, o.seconds);
    }
    std::string d;
    bool ok = clean({&nesting, &star}, d) && in_scope > 0 && worst < kStarSeconds;
    report(10, "star contractibility", ok,
           d + ", " + std::to_string(in_scope) + " in scope, slowest " + std::to_string(worst) + " s");
  }

  return failures == 0 ? 0 : 1;
}
