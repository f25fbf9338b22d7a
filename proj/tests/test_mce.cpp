#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "test_support.hpp"
#include "tunebench/errors.hpp"
#include "tunebench/mce.hpp"
#include "tunebench/sampler.hpp"

using namespace tunebench;

namespace {

double max_cell_gap(const JointTable::Cells& a, const JointTable::Cells& b) {
  double gap = 0.0;
  for (int i = 0; i < 8; ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

double evidence_odds_ratio(const JointTable& t) {
  return t.slice_mass(1, 1) * t.slice_mass(0, 0) / (t.slice_mass(1, 0) * t.slice_mass(0, 1));
}

}  // namespace

TEST_SUITE("mce") {
  TEST_CASE("probe grid is the 5x5 product, E1 slowest") {
    const auto probes = probe_grid(kDefaultGrid);
    REQUIRE(probes.size() == 25);
    CHECK(probes[0] == EvidenceProbe{0.999, 0.999});
    CHECK(probes[1] == EvidenceProbe{0.999, 0.75});
    CHECK(probes[5] == EvidenceProbe{0.75, 0.999});
    CHECK(probes[24] == EvidenceProbe{0.001, 0.001});
  }

  TEST_CASE("constraints already met leave the prior unchanged") {
    for (std::size_t i = 0; i < 20; ++i) {
      const auto t = sample_table(5, i);
      const auto s = mce_update(t, {marginal(t, Variable::E1), marginal(t, Variable::E2)});
      CHECK(s.iterations <= 1);
      CHECK(max_cell_gap(s.posterior_table.cells(), t.cells()) < 1e-15);
    }
  }

  TEST_CASE("uniform prior keeps independence and symmetry") {
    const auto s = mce_update(JointTable::uniform(), {0.25, 0.75});
    for (int e1 = 0; e1 < 2; ++e1)
      for (int e2 = 0; e2 < 2; ++e2)
        for (int c = 0; c < 2; ++c) {
          const double want = (e1 ? 0.25 : 0.75) * (e2 ? 0.75 : 0.25) * 0.5;
          CHECK(std::abs(s.posterior_table.at(e1, e2, c) - want) < 1e-12);
        }
    CHECK(std::abs(s.posterior_c - 0.5) < 1e-15);
    CHECK(s.posterior_c == marginal(s.posterior_table, Variable::C));
  }

  TEST_CASE("near-certain evidence on the example table") {
    const auto t = testing::example_table();
    const auto s = mce_update(t, {0.999, 0.999});
    CHECK(std::abs(s.posterior_c - 4.0 / 7.0) < 5e-3);
    const auto brute = oracle::min_cross_entropy(t.cells(), 0.999, 0.999);
    CHECK(max_cell_gap(s.posterior_table.cells(), brute) < 1e-6);
  }

  TEST_CASE("conditional and odds-ratio preservation, oracle agreement") {
    std::mt19937_64 engine(77);
    std::uniform_real_distribution<double> u(0.001, 0.999);
    for (std::size_t i = 0; i < 60; ++i) {
      const auto prior = sample_table(123, i);
      const EvidenceProbe probe{u(engine), u(engine)};
      const auto s = mce_update(prior, probe);
      CHECK(s.residual < 1e-10);
      CHECK(std::abs(marginal(s.posterior_table, Variable::E1) - probe.p1) < 1e-10);
      CHECK(std::abs(marginal(s.posterior_table, Variable::E2) - probe.p2) < 1e-10);
      double mixed = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          CHECK(std::abs(conditional_c(s.posterior_table, a, b) - conditional_c(prior, a, b)) < 1e-9);
          mixed += s.posterior_table.slice_mass(a, b) * conditional_c(prior, a, b);
        }
      CHECK(std::abs(s.posterior_c - mixed) < 1e-9);
      CHECK(std::abs(evidence_odds_ratio(s.posterior_table) / evidence_odds_ratio(prior) - 1.0) < 1e-6);

      const auto brute = oracle::min_cross_entropy(prior.cells(), probe.p1, probe.p2);
      CHECK(max_cell_gap(s.posterior_table.cells(), brute) < 1e-6);
      const double x = oracle::fitted_joint_evidence(prior.cells(), probe.p1, probe.p2);
      CHECK(std::abs(s.posterior_table.slice_mass(1, 1) - x) < 1e-8);

      // Idempotence.
      const auto again = mce_update(s.posterior_table, probe);
      CHECK(max_cell_gap(again.posterior_table.cells(), s.posterior_table.cells()) <= 1e-10);
    }
  }

  TEST_CASE("certain-evidence limit") {
    for (std::size_t i = 0; i < 50; ++i) {
      const auto t = sample_table(8, i);
      const auto s = mce_update(t, {1.0 - 1e-6, 1.0 - 1e-6});
      CHECK(std::abs(s.posterior_c - conditional_c(t, 1, 1)) < 1e-4);
    }
  }

  TEST_CASE("probes of exactly 0 or 1") {
    const auto t = testing::example_table();
    const auto s = mce_update(t, {1.0, 0.0});
    for (int e2 = 0; e2 < 2; ++e2)
      for (int c = 0; c < 2; ++c) CHECK(s.posterior_table.at(0, e2, c) == 0.0);
    for (int c = 0; c < 2; ++c) CHECK(s.posterior_table.at(1, 1, c) == 0.0);
    CHECK(std::abs(s.posterior_c - conditional_c(t, 1, 0)) < 1e-15);
  }

  TEST_CASE("error paths") {
    const auto t = testing::example_table();
    CHECK_THROWS_AS(mce_update(t, {1.2, 0.5}), InvalidProbe);
    CHECK_THROWS_AS(mce_update(t, {0.5, std::nan("")}), InvalidProbe);
    // No mass with E1 = 1.
    const JointTable no_e1({0.25, 0.25, 0.25, 0.25, 0.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(mce_update(no_e1, {0.5, 0.5}), InvalidProbe);
    CHECK_NOTHROW(mce_update(no_e1, {0.0, 0.5}));
    // Mass only where exactly one evidence holds: both-certain is unreachable.
    const JointTable exclusive({0.0, 0.0, 0.25, 0.25, 0.25, 0.25, 0.0, 0.0});
    CHECK_THROWS_AS(mce_update(exclusive, {1.0, 1.0}), NoConvergence);
    // Infeasible: Q(E1) + Q(E2) <= 1 on this support; the sweep oscillates.
    CHECK_THROWS_AS(mce_update(exclusive, {0.6, 0.6}, {1e-10, 1000}), NoConvergence);
  }

  TEST_CASE("norms CSV round trip") {
    const auto probes = probe_grid(kDefaultGrid);
    const auto records = solve_norms("n7", testing::example_table(), probes);
    std::stringstream buf;
    write_norms_csv(buf, records);
    CHECK(buf.str().rfind("network_id,p1,p2,posterior_c,iterations,residual\n", 0) == 0);
    const auto back = read_norms_csv(buf);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].probe == records[i].probe);
      CHECK(back[i].posterior_c == records[i].posterior_c);
      CHECK(back[i].iterations == records[i].iterations);
    }
    std::istringstream bad("n,0.5,0.5,1.5,3,0\n");
    CHECK_THROWS_AS(read_norms_csv(bad), FormatError);
  }
}
