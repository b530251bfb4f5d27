#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cra/engine.hpp"
#include "cra/units.hpp"

using namespace cra;
using Catch::Approx;

namespace {

RadioParams small_params() {
  RadioParams p;
  p.area_side = 40.0;
  p.lambda_p = 0.003;
  p.lambda_s = 0.02;
  return p;
}

std::vector<PolicyKind> all_policies() { return {CognitiveCid{}, Aloha{}, HardThreshold{}}; }

bool same(const SnapshotRecord& a, const SnapshotRecord& b) {
  return a.index == b.index && a.n_pt == b.n_pt && a.n_st == b.n_st && a.primary_links == b.primary_links &&
         a.primary_failures == b.primary_failures && a.secondary_attempts == b.secondary_attempts &&
         a.secondary_successes == b.secondary_successes && a.sum_assigned_p == b.sum_assigned_p &&
         a.clipped == b.clipped && a.uniform_fallback == b.uniform_fallback;
}

}  // namespace

TEST_CASE("no primaries: no outage and every reading gives full weight", "[engine]") {
  RadioParams p = small_params();
  p.lambda_p = 0.0;
  p.lambda_s = 0.005;
  const auto policies = all_policies();
  const auto recs = run_policies(p, policies, {200, 3, 1});
  for (const auto& stream : recs)
    for (const auto& r : stream) {
      CHECK(r.primary_links == 0);
      CHECK(r.primary_failures == 0);
    }
  // Weights are all 1, so the cognitive policy degenerates to ALOHA at p*.
  for (std::size_t i = 0; i < recs[0].size(); ++i) {
    CHECK(recs[0][i].secondary_attempts == recs[1][i].secondary_attempts);
    CHECK(recs[0][i].secondary_successes == recs[1][i].secondary_successes);
  }
  // Nothing is sensed, so the threshold policy sends every ST.
  std::size_t sts = 0, attempts = 0;
  for (const auto& r : recs[2]) {
    sts += r.n_st;
    attempts += r.secondary_attempts;
  }
  CHECK(attempts == sts);
  const MetricsEstimate m = estimate_metrics(recs[0], p);
  CHECK(m.primary_outage.value == 0.0);
  CHECK(m.ase.value > 0.0);
}

TEST_CASE("threshold below every reading silences the threshold policy", "[engine]") {
  RadioParams p = small_params();
  const auto recs = run_policies(p, std::vector<PolicyKind>{HardThreshold{0.0}, CognitiveCid{}}, {100, 5, 1});
  for (const auto& r : recs[0]) {
    CHECK(r.secondary_attempts == 0);
    CHECK(r.secondary_successes == 0);
  }
  CHECK(estimate_metrics(recs[0], p).ase.value == 0.0);
}

TEST_CASE("results do not depend on the worker count", "[engine][determinism]") {
  const RadioParams p = small_params();
  const auto policies = all_policies();
  const auto one = run_policies(p, policies, {60, 11, 1});
  for (unsigned workers : {2u, 8u}) {
    const auto many = run_policies(p, policies, {60, 11, workers});
    for (std::size_t k = 0; k < policies.size(); ++k)
      for (std::size_t i = 0; i < one[k].size(); ++i) REQUIRE(same(one[k][i], many[k][i]));
  }
  const auto other = run_policies(p, policies, {60, 12, 1});
  bool differs = false;
  for (std::size_t i = 0; i < one[1].size(); ++i) differs = differs || !same(one[1][i], other[1][i]);
  CHECK(differs);
}

TEST_CASE("policies share snapshots and coins", "[engine][crn]") {
  RadioParams p = small_params();
  const auto recs = run_policies(p, std::vector<PolicyKind>{Aloha{0.4}, Aloha{0.4}, Aloha{1.0}}, {50, 2, 1});
  for (std::size_t i = 0; i < recs[0].size(); ++i) {
    CHECK(same(recs[0][i], recs[1][i]));
    CHECK(recs[0][i].n_st == recs[2][i].n_st);
    CHECK(recs[2][i].secondary_attempts == recs[2][i].n_st);
    CHECK(recs[0][i].secondary_attempts <= recs[2][i].secondary_attempts);
  }
}

TEST_CASE("estimate_metrics arithmetic", "[engine][metrics]") {
  RadioParams p;
  SnapshotRecord r;
  r.secondary_attempts = 3;
  r.secondary_successes = 2;
  r.primary_links = 4;
  r.primary_failures = 3;
  r.n_st = 4;
  r.sum_assigned_p = 2.0;
  const std::vector<SnapshotRecord> recs{r};
  const MetricsEstimate m = estimate_metrics(recs, p);
  CHECK(m.ase.value == Approx(3.16536470982311e-4).epsilon(1e-12));
  CHECK(m.primary_outage.value == Approx(0.75).epsilon(1e-15));
  CHECK(m.secondary_success.value == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m.mean_assigned_p == Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(estimate_metrics(std::vector<SnapshotRecord>{}, p), std::invalid_argument);
}

TEST_CASE("standard error shrinks like one over root n", "[engine][metrics]") {
  const RadioParams p = small_params();
  const std::vector<PolicyKind> policy{Aloha{0.5}};
  const auto a = estimate_metrics(run_policies(p, policy, {400, 21, 1})[0], p);
  const auto b = estimate_metrics(run_policies(p, policy, {1600, 21, 1})[0], p);
  const double ratio = a.ase.se / b.ase.se;
  CHECK(ratio > 1.3);
  CHECK(ratio < 3.0);
}

TEST_CASE("cognitive policy spends the target on average", "[engine][policy]") {
  RadioParams p = small_params();
  p.lambda_p = 0.001;
  p.lambda_s = 0.01;
  p.area_side = 60.0;
  const double target = expected_p_star(p);
  const auto m = estimate_metrics(run_policies(p, std::vector<PolicyKind>{CognitiveCid{}}, {300, 4, 1})[0], p);
  CHECK(m.mean_assigned_p <= target + 1e-12);
  CHECK(m.mean_assigned_p > target * (1.0 - 2.0 * m.clip_fraction) - 0.01);
}

TEST_CASE("Monte Carlo E[w] lies in (0, 1) and drives the distributed variant", "[engine][policy]") {
  RadioParams p = small_params();
  const double ew = estimate_mean_weight(p, 50, 8);
  CHECK(ew > 0.0);
  CHECK(ew < 1.0);
  const auto recs = run_policies(p, std::vector<PolicyKind>{CognitiveCid{ew}}, {20, 1, 1});
  CHECK(recs[0].size() == 20);
}

TEST_CASE("empirical CID validation argument checks", "[engine][validation]") {
  RadioParams p;
  p.power_p = 1.0;
  p.lambda_p = 0.003;
  Rng rng(1);
  CHECK_THROWS_AS(validate_cid_empirical(0.01, 0.0, p, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(validate_cid_empirical(0.01, 0.025, p, 0, rng), std::invalid_argument);
  CidValidationOptions strict;
  strict.min_trials_before_abort = 1000;
  strict.min_acceptance_rate = 0.9;
  CHECK_THROWS_AS(validate_cid_empirical(0.01, 0.025, p, 100, rng, strict), std::runtime_error);
}

TEST_CASE("empirical CID with a single primary matches the analytic law", "[engine][validation]") {
  RadioParams p;
  p.power_p = 1.0;
  p.lambda_p = 0.0;
  p.d = 1.0;
  Rng rng(5);
  const auto v = validate_cid_empirical(0.01, 0.01, p, 3000, rng);
  CHECK(v.accepted == 3000);
  CHECK(v.model.t_resid == 0.0);
  CHECK(v.model.r1_hat == Approx(std::sqrt(10.0)).epsilon(1e-10));
  // Band smearing adds a small bias on top of the sampling error.
  CHECK(v.ks < 1.63 / std::sqrt(3000.0) + 0.02);
  CHECK(v.histogram.total == 3000);
  CHECK(v.analytic_density.size() == v.histogram.counts.size());
}
