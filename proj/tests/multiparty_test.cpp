#include <gtest/gtest.h>

#include <cmath>

#include "ewgame/multiparty.hpp"
#include "oracle.hpp"

using namespace ewgame;

TEST(Ghz, state_and_correlations) {
  const DensityMatrix g = ghz_state();
  EXPECT_NEAR(g.purity(), 1.0, 1e-12);
  const CorrelationTable r = pauli_coefficients(g);
  EXPECT_NEAR(r.at({3, 3, 0}), 1.0, 1e-12);
  EXPECT_NEAR(r.at({1, 1, 1}), 1.0, 1e-12);
  EXPECT_NEAR(r.at({0, 0, 3}), 0.0, 1e-12);
}

TEST(GhzWitness, payoffs) {
  const Witness w = ghz_witness();
  EXPECT_TRUE(w.op().is_hermitian(1e-15));
  EXPECT_LE(max_abs_diff(w.op(), pauli_sum(w.weights())), 1e-12);
  EXPECT_NEAR(trace_product(w.op(), ghz_state().op()).real(), -0.5, 1e-12);
  EXPECT_NEAR(expected_payoff3(ghz_state(), w.weights()), 0.5, 1e-12);
  EXPECT_NEAR(expected_payoff3(maximally_mixed(8), w.weights()), -0.375, 1e-12);
  EXPECT_NEAR(expected_payoff3(maximally_mixed(8), w.weights()), -w.weights().at({0, 0, 0}), 1e-15);
}

TEST(GhzWitness, fully_separable_floor) {
  Rng rng(1);
  const Witness w = ghz_witness();
  double best = -1.0;
  for (int k = 0; k < 10000; ++k) {
    const double p = expected_payoff3(random_separable(rng, 1 + k % 2, 3), w.weights());
    ASSERT_LE(p, 1e-9);
    best = std::max(best, p);
  }
  // |000> reaches fidelity 1/2, the separable bound.
  EXPECT_NEAR(expected_payoff3(computational_state("000"), w.weights()), 0.0, 1e-12);
}

TEST(ExpectedPayoff3, linearity_and_errors) {
  Rng rng(2);
  const auto w = ghz_witness().weights();
  for (int k = 0; k < 50; ++k) {
    const DensityMatrix a = random_density_matrix(rng, 8);
    const DensityMatrix b = random_density_matrix(rng, 8);
    EXPECT_NEAR(expected_payoff3(mix(a, b, 0.3), w), 0.3 * expected_payoff3(a, w) + 0.7 * expected_payoff3(b, w), 1e-12);
  }
  EXPECT_THROW(expected_payoff3(bell_psi_plus(), w), Error);
  EXPECT_THROW(expected_payoff3(ghz_state(), werner_witness().weights()), Error);
}

TEST(RunGame3, honest_ghz) {
  GameConfig3 c;
  c.rounds = 1000000;
  c.seed = 3;
  const Transcript3 tr = run_game3(c, honest_strategy<3>(ghz_state()), ghz_witness().weights());
  const PayoffEstimate e = empirical_payoff(tr);
  EXPECT_LE(std::abs(e.mean - 0.5), 3.0 * e.std_error);
}

TEST(RunGame3, enumeration_matches_trace) {
  Rng rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const DensityMatrix rho = random_density_matrix(rng, 8);
    Weights3 w(3);
    for (int i = 0; i < 64; ++i) w[i] = u(rng) > 0.2 ? u(rng) : 0.0;
    w[0] = 0.5;
    const auto pi = LabelDistribution<3>::support_only(w);
    const double exact = expected_payoff3(rho, w);
    EXPECT_NEAR(exact_average_payoff(pi, honest_strategy<3>(rho), w), exact, 1e-12);
    EXPECT_NEAR(oracle::enumerate_payoff(oracle::to_eigen(rho.op()), {pi.p.begin(), pi.p.end()}, w.values, 3), exact,
                1e-12);
  }
}

TEST(RunGame3, support_violation_and_csv_shape) {
  GameConfig3 c;
  c.rounds = 100;
  c.pi = LabelDistribution<3>{};
  c.pi.p[0] = 1.0;
  EXPECT_THROW(run_game3(c, honest_strategy<3>(ghz_state()), ghz_witness().weights()), ConfigError);
  EXPECT_THROW(run_game3(GameConfig3{}, honest_strategy<3>(ghz_state()), werner_witness().weights()), Error);
  EXPECT_THROW(honest_strategy<3>(bell_psi_plus()), Error);
}

TEST(Pauli3, round_trip) {
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const DensityMatrix rho = random_density_matrix(rng, 8);
    EXPECT_LT(max_abs_diff(from_pauli_coefficients(pauli_coefficients(rho)), rho.op()), 1e-12);
  }
}
