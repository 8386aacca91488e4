#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "random_quantum.hpp"
#include "steerwork/bounds.hpp"
#include "steerwork/game.hpp"

using namespace steerwork;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// mpmath, 30 digits: 1 - e/(e+1) and 1 - e/(e+2).
constexpr double kQuantumQubit = 0.268941421369995120748840758;
constexpr double kQuantumQutrit = 0.423883115234171;
// mpmath: 1/2 - e/(e+1).
constexpr double kMixedQubit = -0.231058578630004879251159241822;

double ceiling(std::size_t d, double omega, double beta) {
  const double g = std::exp(beta * omega);
  return omega - omega * g / (g + d - 1.0);
}

}  // namespace

TEST_CASE("maximally_entangled") {
  const DensityMatrix bell = maximally_entangled(2);
  CHECK(std::abs(bell.matrix()(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(bell.matrix()(0, 3) - 0.5) < 1e-15);
  CHECK(std::abs(bell.matrix()(3, 0) - 0.5) < 1e-15);
  CHECK(std::abs(bell.matrix()(3, 3) - 0.5) < 1e-15);
  CHECK(bell.matrix().cwiseAbs().sum() == doctest::Approx(2.0));
  for (std::size_t d : {2u, 3u, 5u}) {
    const DensityMatrix rho = maximally_entangled(d);
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(approx_equal(partial_trace_a(rho, d, d).matrix(), identity(d) / double(d)));
  }
}

TEST_CASE("measure_assemblage") {
  std::mt19937_64 rng(21);

  SUBCASE("product state gives identical conditional states") {
    const DensityMatrix ra = testing::random_density(2, rng);
    const DensityMatrix rb = testing::random_density(3, rng);
    const DensityMatrix rho(tensor_product(ra.matrix(), rb.matrix()));
    const std::vector<Povm> povms = {testing::random_povm(2, 2, rng),
                                     testing::random_projective(2, rng)};
    const Assemblage asmb = measure_assemblage(rho, povms);
    CHECK(asmb.d() == 3);
    CHECK(asmb.outcomes() == 2);
    for (std::size_t x = 0; x < povms.size(); ++x) {
      for (std::size_t a = 0; a < povms[x].outcomes(); ++a) {
        const double p = (povms[x].effect(a) * ra.matrix()).trace().real();
        CHECK(asmb.p(x, a) == doctest::Approx(p).epsilon(1e-12));
        CHECK(approx_equal(asmb.sigma(x, a), p * rb.matrix(), 1e-12));
      }
    }
  }

  SUBCASE("maximally entangled qubits with conjugated Pauli bases") {
    const MubSet set = build_mub(2, 3);
    const Assemblage asmb = measure_assemblage(maximally_entangled(2), alice_measurements(set));
    for (std::size_t x = 0; x < 3; ++x) {
      for (std::size_t a = 0; a < 2; ++a) {
        CHECK(asmb.p(x, a) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(fidelity(asmb.conditional_state(x, a), set.state(x, a)) ==
              doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  SUBCASE("no-signaling on random two-qubit states") {
    for (int trial = 0; trial < 50; ++trial) {
      const DensityMatrix rho = testing::random_density(4, rng);
      const std::vector<Povm> povms = {testing::random_povm(2, 2, rng),
                                       testing::random_povm(2, 2, rng),
                                       testing::random_projective(2, rng)};
      const Assemblage asmb = measure_assemblage(rho, povms);
      const ComplexMatrix reduced = partial_trace_a(rho.matrix(), 2, 2);
      for (std::size_t x = 0; x < povms.size(); ++x) {
        ComplexMatrix total = ComplexMatrix::Zero(2, 2);
        for (std::size_t a = 0; a < povms[x].outcomes(); ++a) total += asmb.sigma(x, a);
        CHECK(approx_equal(total, reduced, 1e-10));
      }
    }
  }

  SUBCASE("dimension mismatch") {
    const DensityMatrix rho = testing::random_density(6, rng);
    CHECK_THROWS_AS(measure_assemblage(rho, {testing::random_projective(4, rng)}),
                    DimensionMismatch);
    CHECK_THROWS_AS(measure_assemblage(rho, {testing::random_projective(2, rng),
                                             testing::random_projective(3, rng)}),
                    DimensionMismatch);
  }
}

TEST_CASE("Assemblage rejects signaling families") {
  const ComplexMatrix half = identity(2) / 2.0;
  ComplexMatrix up = ComplexMatrix::Zero(2, 2);
  up(0, 0) = 1.0;
  CHECK_NOTHROW(Assemblage(2, {{half, ComplexMatrix::Zero(2, 2)}, {half / 2.0, half / 2.0}}));
  CHECK_THROWS_AS(Assemblage(2, {{half, ComplexMatrix::Zero(2, 2)}, {up, ComplexMatrix::Zero(2, 2)}}),
                  InvalidOperator);
  CHECK_THROWS_AS(Assemblage(2, {{half, half}}), InvalidOperator);  // p sums to 2
}

TEST_CASE("hamiltonian") {
  const MubSet set = build_mub(2, 3);
  const ComplexMatrix h = hamiltonian(set, 0, 0, 1.7);
  CHECK(approx_equal(h, ComplexMatrix{{-1.7, 0.0}, {0.0, 0.0}}));
  const MubSet big = build_mub(5, 6);
  for (std::size_t x = 0; x < big.n(); ++x) {
    for (std::size_t a = 0; a < big.d(); ++a) {
      const ComplexMatrix hx = hamiltonian(big, a, x, 2.0);
      CHECK(min_eigenvalue(hx) == doctest::Approx(-2.0).epsilon(1e-12));
      CHECK(hx.trace().real() == doctest::Approx(-2.0).epsilon(1e-12));
      const Eigensystem es = hermitian_eigensystem(hx);
      for (Eigen::Index k = 1; k < es.values.size(); ++k) CHECK(std::abs(es.values(k)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(hamiltonian(set, 2, 0, 1.0), std::out_of_range);
  CHECK_THROWS_AS(hamiltonian(set, 0, 3, 1.0), std::out_of_range);
}

TEST_CASE("thermal_state") {
  std::mt19937_64 rng(4);

  SUBCASE("infinite temperature is maximally mixed") {
    const ComplexMatrix h = testing::random_hermitian(4, rng);
    CHECK(approx_equal(thermal_state(h, 0.0).matrix(), identity(4) / 4.0));
  }

  SUBCASE("rank-one quench Hamiltonian populations") {
    for (std::size_t d : {2u, 3u, 6u}) {
      for (double beta : {0.3, 1.0, 4.0}) {
        const double omega = 1.3;
        const PureState phi = testing::random_state(d, rng);
        const ComplexMatrix h = -omega * phi.projector();
        const DensityMatrix gamma = thermal_state(h, beta);
        const double g = std::exp(beta * omega);
        CHECK(fidelity(gamma, phi) == doctest::Approx(g / (g + d - 1.0)).epsilon(1e-12));
        // Orthogonal complement is uniform.
        const ComplexMatrix rest = gamma.matrix() - (g / (g + d - 1.0)) * phi.projector();
        CHECK(approx_equal(rest, (identity(d) - phi.projector()) / (g + d - 1.0), 1e-12));
        CHECK((h * gamma.matrix()).trace().real() ==
              doctest::Approx(-omega * g / (g + d - 1.0)).epsilon(1e-12));
      }
    }
  }

  SUBCASE("zero temperature is the ground state") {
    const PureState phi = testing::random_state(3, rng);
    CHECK(approx_equal(thermal_state(-1.0 * phi.projector(), kInf).matrix(), phi.projector(),
                       1e-12));
    // Degenerate ground space gives the uniform mixture on it.
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = h(1, 1) = -1.0;
    ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
    expected(0, 0) = expected(1, 1) = 0.5;
    CHECK(approx_equal(thermal_state(h, kInf).matrix(), expected, 1e-12));
  }

  SUBCASE("large beta omega does not overflow") {
    const ComplexMatrix h = -50.0 * PureState::basis(3, 1).projector();
    const DensityMatrix gamma = thermal_state(h, 100.0);
    CHECK(gamma.matrix()(1, 1).real() == doctest::Approx(1.0));
  }

  CHECK_THROWS_AS(thermal_state(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}, 1.0), InvalidOperator);
}

TEST_CASE("work_term") {
  std::mt19937_64 rng(8);
  const MubSet set = build_mub(2, 3);
  const ComplexMatrix h = hamiltonian(set, 1, 2, 1.0);

  CHECK(std::abs(work_term(thermal_state(h, 1.0), h, 1.0)) < 1e-12);
  CHECK(work_term(DensityMatrix::from_pure(set.state(2, 1)), h, 1.0) ==
        doctest::Approx(kQuantumQubit).epsilon(1e-14));
  CHECK(work_term(DensityMatrix::maximally_mixed(2), h, 1.0) ==
        doctest::Approx(kMixedQubit).epsilon(1e-14));

  SUBCASE("maximally mixed input, general d") {
    for (std::size_t d : {3u, 5u}) {
      const PureState phi = testing::random_state(d, rng);
      const double omega = 0.8, beta = 2.0;
      const double g = std::exp(beta * omega);
      CHECK(work_term(DensityMatrix::maximally_mixed(d), -omega * phi.projector(), beta) ==
            doctest::Approx(omega / d - omega * g / (g + d - 1.0)).epsilon(1e-12));
    }
  }

  SUBCASE("thermal fixed point for random rank-one Hamiltonians") {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t d = 2 + trial % 5;
      const ComplexMatrix hr = -(0.1 + trial * 0.05) * testing::random_state(d, rng).projector();
      const double beta = 0.01 * trial;
      CHECK(std::abs(work_term(thermal_state(hr, beta), hr, beta)) < 1e-12);
    }
  }

  CHECK_THROWS_AS(work_term(DensityMatrix::maximally_mixed(3), h, 1.0), DimensionMismatch);
}

TEST_CASE("average_work") {
  std::mt19937_64 rng(12);

  SUBCASE("product of maximally mixed states") {
    for (std::size_t d : {2u, 3u, 5u}) {
      const MubSet set = build_mub(d, d + 1);
      const DensityMatrix rho = DensityMatrix::maximally_mixed(d * d);
      const Assemblage asmb = measure_assemblage(rho, alice_measurements(set));
      const WorkReport r = average_work(asmb, set, 1.0, 1.0);
      const double g = std::exp(1.0);
      CHECK(r.average == doctest::Approx(1.0 / d - g / (g + d - 1.0)).epsilon(1e-12));
      CHECK(r.average <= w_classical(d, d + 1, 1.0, 1.0));
    }
  }

  SUBCASE("report average is the weighted per-round sum") {
    const MubSet set = build_mub(3, 4);
    const Assemblage asmb =
        measure_assemblage(testing::random_density(9, rng), alice_measurements(set));
    const WorkReport r = average_work(asmb, set, 1.5, 0.7);
    double total = 0.0;
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t a = 0; a < 3; ++a) total += asmb.p(x, a) * r.per_round[x][a];
    CHECK(std::abs(r.average - total / 4.0) < 1e-12);
  }

  SUBCASE("zero-probability outcomes contribute nothing") {
    const MubSet set = build_mub(2, 2);
    // Alice's qubit is |0>, so outcome 1 of the computational basis never occurs.
    const DensityMatrix rho(tensor_product(PureState::basis(2, 0).projector(), identity(2) / 2.0));
    const Assemblage asmb = measure_assemblage(rho, alice_measurements(set));
    REQUIRE(asmb.p(0, 1) < kNegligibleProbability);
    const WorkReport r = average_work(asmb, set, 1.0, 1.0);
    CHECK(r.per_round[0][1] == 0.0);
    CHECK(std::isfinite(r.average));
  }

  SUBCASE("generic ceiling on random assemblages") {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t d = 2 + trial % 2;
      const MubSet set = build_mub(d, d + 1);
      std::vector<Povm> povms;
      for (std::size_t x = 0; x < set.n(); ++x) povms.push_back(testing::random_projective(d, rng));
      const Assemblage asmb = measure_assemblage(testing::random_density(d * d, rng, 1), povms);
      const double beta = 0.25 * (trial % 9);
      CHECK(average_work(asmb, set, 1.0, beta).average <= ceiling(d, 1.0, beta) + 1e-10);
    }
  }

  SUBCASE("shape mismatch") {
    const MubSet set = build_mub(3, 4);
    const Assemblage asmb =
        measure_assemblage(maximally_entangled(3), alice_measurements(build_mub(3, 2)));
    CHECK_THROWS_AS(average_work(asmb, set, 1.0, 1.0), DimensionMismatch);
  }
}

TEST_CASE("run_exact_quantum") {
  GameConfig config;
  config.d = 2;
  config.n = 3;
  CHECK(run_exact_quantum(config).average == doctest::Approx(kQuantumQubit).epsilon(1e-12));
  config.d = 3;
  config.n = 4;
  const WorkReport r = run_exact_quantum(config);
  CHECK(std::abs(r.average - kQuantumQutrit) < 1e-12);
  CHECK(r.mode == ReportMode::kExact);
  REQUIRE(r.xi.has_value());

  SUBCASE("beta = 0 yields omega (1 - 1/d)") {
    for (std::size_t d : {2u, 3u, 5u, 7u}) {
      GameConfig c{d, d + 1, 2.0, 0.0, 0, 0};
      CHECK(run_exact_quantum(c).average == doctest::Approx(2.0 * (1.0 - 1.0 / d)).epsilon(1e-12));
    }
  }

  SUBCASE("matches w_quantum for all supported families") {
    for (std::size_t d : {2u, 3u, 4u, 5u, 6u, 7u}) {
      const std::size_t max_n = d == 2 ? 3 : (is_prime(d) ? d + 1 : 2);
      for (std::size_t n = 2; n <= max_n; ++n) {
        for (double beta : {0.0, 0.5, 1.0, kInf}) {
          GameConfig c{d, n, 1.0, beta, 0, 0};
          CHECK(std::abs(run_exact_quantum(c).average - w_quantum(d, 1.0, beta)) < 1e-10);
        }
      }
    }
  }

  SUBCASE("invalid configurations") {
    CHECK_THROWS_AS(run_exact_quantum(GameConfig{1, 2, 1.0, 1.0, 0, 0}), DomainError);
    CHECK_THROWS_AS(run_exact_quantum(GameConfig{2, 3, -1.0, 1.0, 0, 0}), DomainError);
    CHECK_THROWS_AS(run_exact_quantum(GameConfig{2, 3, 1.0, -1.0, 0, 0}), DomainError);
    CHECK_THROWS_AS(run_exact_quantum(GameConfig{6, 7, 1.0, 1.0, 0, 0}), UnsupportedConstruction);
  }
}

TEST_CASE("run_monte_carlo") {
  GameConfig config{2, 3, 1.0, 1.0, 100000, 7};
  const WorkReport r = run_monte_carlo(config);
  CHECK(r.mode == ReportMode::kMonteCarlo);
  CHECK(std::abs(r.average - kQuantumQubit) <= 5.0 * r.standard_error + 1e-12);

  SUBCASE("single shot equals one per-round value") {
    GameConfig one{3, 4, 1.0, 0.5, 1, 99};
    const WorkReport s = run_monte_carlo(one);
    bool found = false;
    for (const auto& row : s.per_round)
      for (double w : row) found = found || (w == s.average);
    CHECK(found);
  }

  SUBCASE("same seed, same report") {
    const nlohmann::json a = run_monte_carlo(config);
    const nlohmann::json b = run_monte_carlo(config);
    CHECK(a.dump() == b.dump());
    config.seed = 8;
    const nlohmann::json c = run_monte_carlo(config);
    CHECK(a.dump() != c.dump());
  }

  SUBCASE("steering protocol has no per-round spread") {
    for (const auto& row : r.per_round)
      for (double w : row) CHECK(w == doctest::Approx(kQuantumQubit).epsilon(1e-14));
    CHECK(r.standard_error < 1e-15);
  }

  CHECK_THROWS_AS(run_monte_carlo(GameConfig{2, 3, 1.0, 1.0, 0, 0}), DomainError);
}

TEST_CASE("WorkReport JSON fields") {
  const nlohmann::json j = run_exact_quantum(GameConfig{2, 3, 1.0, 1.0, 0, 5});
  for (const char* key : {"d", "n", "omega", "beta", "mode", "shots", "seed", "average", "stderr",
                          "w_classical", "w_quantum", "xi", "per_round"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["mode"] == "exact");
  CHECK(j["stderr"].is_null());
  CHECK(j["per_round"].size() == 3);
}

TEST_CASE("sample_work statistics on a non-degenerate assemblage") {
  std::mt19937_64 rng(31);
  const MubSet set = build_mub(3, 4);
  const Assemblage asmb =
      measure_assemblage(testing::random_density(9, rng), alice_measurements(set));
  const double exact = average_work(asmb, set, 1.0, 1.0).average;

  int covered = 0;
  constexpr int kRuns = 40;
  for (int seed = 0; seed < kRuns; ++seed) {
    const WorkReport r = sample_work(asmb, set, 1.0, 1.0, 20000, static_cast<std::uint64_t>(seed));
    CHECK(r.standard_error > 0.0);
    if (std::abs(r.average - exact) < 5.0 * r.standard_error) ++covered;
  }
  CHECK(covered >= kRuns - 1);

  // Standard error shrinks like 1/sqrt(shots).
  const double small = sample_work(asmb, set, 1.0, 1.0, 2500, 1).standard_error;
  const double large = sample_work(asmb, set, 1.0, 1.0, 250000, 1).standard_error;
  CHECK(small / large == doctest::Approx(10.0).epsilon(0.1));

  CHECK_THROWS_AS(sample_work(asmb, set, 1.0, 1.0, 0, 1), DomainError);
}
