#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "steerwork/mub.hpp"
#include "steerwork/qmath.hpp"

// The bipartite work extraction game. Alice measures her half of a shared
// state in basis x and announces (a, x); Bob quenches his half to
// H_{a|x} = -omega |phi_x^a><phi_x^a|, lets it thermalize at inverse
// temperature beta, and books the energy difference as work.
namespace steerwork {

inline constexpr double kZeroTemperature = std::numeric_limits<double>::infinity();

struct GameConfig {
  std::size_t d = 2;
  std::size_t n = 2;
  double omega = 1.0;
  double beta = 1.0;        // kZeroTemperature for beta = +inf
  std::uint64_t shots = 0;  // 0 selects exact mode
  std::uint64_t seed = 0;

  // Throws DomainError on d < 2, n < 2, omega <= 0 or beta < 0.
  void validate() const;
};

// Bob's unnormalized conditional states sigma_{a|x} and outcome probabilities
// p(a|x), indexed [x][a].
class Assemblage {
 public:
  // Fills p(a|x) = Tr sigma_{a|x} and checks the assemblage invariants:
  // p >= -1e-12, sum_a p(a|x) = 1 and sum_a sigma_{a|x} independent of x,
  // all within 1e-10.
  Assemblage(std::size_t d, std::vector<std::vector<ComplexMatrix>> sigma);

  std::size_t d() const { return d_; }
  std::size_t n() const { return sigma_.size(); }
  std::size_t outcomes() const { return sigma_.front().size(); }

  const ComplexMatrix& sigma(std::size_t x, std::size_t a) const { return sigma_.at(x).at(a); }
  double p(std::size_t x, std::size_t a) const { return p_.at(x).at(a); }

  // sigma_{a|x} / p(a|x); requires p(a|x) >= 1e-14.
  DensityMatrix conditional_state(std::size_t x, std::size_t a) const;

  // sum_a sigma_{a|x} for x = 0.
  ComplexMatrix reduced_state() const;

 private:
  std::size_t d_;
  std::vector<std::vector<ComplexMatrix>> sigma_;
  std::vector<std::vector<double>> p_;
};

// Probabilities below this are outcomes that never occur; they contribute
// no work and their conditional state is never formed.
inline constexpr double kNegligibleProbability = 1e-14;

enum class ReportMode { kExact, kMonteCarlo };

const char* to_string(ReportMode mode);

struct WorkReport {
  std::size_t d = 0;
  std::size_t n = 0;
  double omega = 0.0;
  double beta = 0.0;
  ReportMode mode = ReportMode::kExact;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  // per_round[x][a] = W(rho_{a|x}, H_{a|x}); 0 for outcomes that never occur.
  std::vector<std::vector<double>> per_round;
  double average = 0.0;
  double standard_error = 0.0;  // Monte Carlo only

  double w_classical = 0.0;
  double w_quantum = 0.0;
  std::optional<double> xi;  // empty when w_classical <= 0
};

// |psi> = d^{-1/2} sum_i |ii> as a density matrix on C^d (x) C^d.
DensityMatrix maximally_entangled(std::size_t d);

// sigma_{a|x} = Tr_A[(M_x^a (x) I_B) rho_AB]. The split d_A * d_B is taken
// from the POVM dimension.
Assemblage measure_assemblage(const DensityMatrix& rho_ab, const std::vector<Povm>& povms);

// -omega |phi_x^a><phi_x^a|
ComplexMatrix hamiltonian(const MubSet& set, std::size_t a, std::size_t x, double omega);

// e^{-beta H} / Tr e^{-beta H} through the eigendecomposition of H, with the
// exponents shifted by their maximum. At beta = +inf, the uniform mixture
// over the ground eigenspace.
DensityMatrix thermal_state(const ComplexMatrix& h, double beta);

// -Tr(H rho) + Tr(H gamma(H, beta)).
double work_term(const DensityMatrix& rho_hat, const ComplexMatrix& h, double beta);

// (1/n) sum_{a,x} p(a|x) W(rho_{a|x}, H_{a|x}); exact mode report.
WorkReport average_work(const Assemblage& assemblage, const MubSet& set, double omega,
                        double beta);

// Projective measurements in the conjugate MUB bases, one per x.
std::vector<Povm> alice_measurements(const MubSet& set);

// Maximally entangled state measured in the conjugate bases. Checks that
// every conditional state is |phi_x^a> and every p(a|x) is 1/d (within
// 1e-10) and throws std::logic_error otherwise.
WorkReport run_exact_quantum(const GameConfig& config);

// Plays `shots` rounds on a fixed assemblage: x uniform, a ~ p(a|x), work
// W(rho_{a|x}, H_{a|x}). Reports the sample mean and the standard error
// (sample standard deviation / sqrt(shots); 0 for a single shot). Shot i
// draws from stream derive_seed(seed, i), so the report depends only on the
// inputs and never on thread scheduling.
WorkReport sample_work(const Assemblage& assemblage, const MubSet& set, double omega, double beta,
                       std::uint64_t shots, std::uint64_t seed);

// sample_work() on the assemblage of run_exact_quantum().
WorkReport run_monte_carlo(const GameConfig& config);

void to_json(nlohmann::json& j, const WorkReport& report);

}  // namespace steerwork
