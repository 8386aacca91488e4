#include "steerwork/game.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "parallel.hpp"
#include "steerwork/bounds.hpp"
#include "steerwork/random.hpp"

namespace steerwork {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

constexpr double kAssemblageTol = 1e-10;

void fill_bounds(WorkReport& report) {
  const BoundSet b = compute_bounds(report.d, report.n, report.omega, report.beta);
  report.w_classical = b.w_classical;
  report.w_quantum = b.w_quantum;
  report.xi = b.xi;
}

}  // namespace

void GameConfig::validate() const {
  if (d < 2) throw DomainError("GameConfig: d must be at least 2");
  if (n < 2) throw DomainError("GameConfig: n must be at least 2");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("GameConfig: omega must be positive");
  if (std::isnan(beta) || beta < 0.0) throw DomainError("GameConfig: beta must be non-negative");
}

// ---------------------------------------------------------------------------
// Assemblage

Assemblage::Assemblage(std::size_t d, std::vector<std::vector<ComplexMatrix>> sigma)
    : d_(d), sigma_(std::move(sigma)) {
  if (sigma_.empty() || sigma_.front().empty()) {
    throw DimensionMismatch("Assemblage: needs at least one input and one outcome");
  }
  const std::size_t outcomes = sigma_.front().size();
  p_.assign(sigma_.size(), std::vector<double>(outcomes, 0.0));

  ComplexMatrix reference;
  for (std::size_t x = 0; x < sigma_.size(); ++x) {
    if (sigma_[x].size() != outcomes) {
      throw DimensionMismatch("Assemblage: inputs have different outcome counts");
    }
    ComplexMatrix marginal = ComplexMatrix::Zero(idx(d_), idx(d_));
    double total = 0.0;
    for (std::size_t a = 0; a < outcomes; ++a) {
      const ComplexMatrix& s = sigma_[x][a];
      if (s.rows() != idx(d_) || s.cols() != idx(d_)) {
        throw DimensionMismatch("Assemblage: sigma has the wrong dimension");
      }
      const Complex tr = s.trace();
      if (std::abs(tr.imag()) > kAssemblageTol || tr.real() < -1e-12) {
        std::ostringstream os;
        os << "Assemblage: invalid probability p(" << a << "|" << x << ") = " << tr;
        throw InvalidOperator(os.str());
      }
      p_[x][a] = tr.real();
      total += tr.real();
      marginal += s;
    }
    if (std::abs(total - 1.0) > kAssemblageTol) {
      std::ostringstream os;
      os << "Assemblage: probabilities for input " << x << " sum to " << total;
      throw InvalidOperator(os.str());
    }
    if (x == 0) {
      reference = std::move(marginal);
    } else if (!approx_equal(marginal, reference, kAssemblageTol)) {
      std::ostringstream os;
      os << "Assemblage: no-signaling violated, marginal for input " << x
         << " differs from input 0";
      throw InvalidOperator(os.str());
    }
  }
}

DensityMatrix Assemblage::conditional_state(std::size_t x, std::size_t a) const {
  const double prob = p(x, a);
  if (prob < kNegligibleProbability) {
    throw DomainError("Assemblage: conditional state of an outcome with zero probability");
  }
  ComplexMatrix rho = sigma(x, a) / prob;
  // Remove rounding-level asymmetry and trace error before validation.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

ComplexMatrix Assemblage::reduced_state() const {
  ComplexMatrix total = ComplexMatrix::Zero(idx(d_), idx(d_));
  for (const auto& s : sigma_.front()) total += s;
  return total;
}

const char* to_string(ReportMode mode) {
  return mode == ReportMode::kExact ? "exact" : "monte_carlo";
}

// ---------------------------------------------------------------------------
// Game pieces

DensityMatrix maximally_entangled(std::size_t d) {
  if (d < 2) throw DomainError("maximally_entangled: d must be at least 2");
  ComplexVector psi = ComplexVector::Zero(idx(d * d));
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) psi(idx(i * d + i)) = amp;
  return DensityMatrix(psi * psi.adjoint());
}

Assemblage measure_assemblage(const DensityMatrix& rho_ab, const std::vector<Povm>& povms) {
  if (povms.empty()) throw DimensionMismatch("measure_assemblage: no measurements");
  const std::size_t dim_a = povms.front().dim();
  const std::size_t dim = rho_ab.dim();
  if (dim_a == 0 || dim % dim_a != 0) {
    std::ostringstream os;
    os << "measure_assemblage: state dimension " << dim << " is not a multiple of "
       << dim_a;
    throw DimensionMismatch(os.str());
  }
  const std::size_t dim_b = dim / dim_a;
  const ComplexMatrix id_b = identity(dim_b);

  std::vector<std::vector<ComplexMatrix>> sigma;
  sigma.reserve(povms.size());
  for (const Povm& povm : povms) {
    if (povm.dim() != dim_a) throw DimensionMismatch("measure_assemblage: POVM dimensions differ");
    std::vector<ComplexMatrix> row;
    row.reserve(povm.outcomes());
    for (const ComplexMatrix& effect : povm.effects()) {
      row.push_back(partial_trace_a(tensor_product(effect, id_b) * rho_ab.matrix(), dim_a, dim_b));
    }
    sigma.push_back(std::move(row));
  }
  return Assemblage(dim_b, std::move(sigma));
}

ComplexMatrix hamiltonian(const MubSet& set, std::size_t a, std::size_t x, double omega) {
  if (!(omega > 0.0)) throw DomainError("hamiltonian: omega must be positive");
  const ComplexVector& phi = set.vector(x, a);
  return -omega * (phi * phi.adjoint());
}

DensityMatrix thermal_state(const ComplexMatrix& h, double beta) {
  if (std::isnan(beta) || beta < 0.0) throw DomainError("thermal_state: beta must be non-negative");
  const Eigensystem es = hermitian_eigensystem(h);
  const Eigen::Index dim = es.values.size();
  RealVector weights(dim);

  if (std::isinf(beta)) {
    const double ground = es.values(0);
    const double scale = std::max(1.0, es.values.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < dim; ++k) {
      weights(k) = es.values(k) <= ground + 1e-10 * scale ? 1.0 : 0.0;
    }
  } else {
    // Largest exponent -beta*lambda belongs to the ground state.
    const double shift = -beta * es.values(0);
    for (Eigen::Index k = 0; k < dim; ++k) weights(k) = std::exp(-beta * es.values(k) - shift);
  }
  weights /= weights.sum();

  ComplexMatrix gamma = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    gamma += weights(k) * es.vectors[static_cast<std::size_t>(k)].projector();
  }
  gamma = 0.5 * (gamma + gamma.adjoint()).eval();
  return DensityMatrix(std::move(gamma));
}

double work_term(const DensityMatrix& rho_hat, const ComplexMatrix& h, double beta) {
  if (h.rows() != idx(rho_hat.dim()) || h.cols() != idx(rho_hat.dim())) {
    throw DimensionMismatch("work_term: state and Hamiltonian dimensions differ");
  }
  const DensityMatrix gamma = thermal_state(h, beta);
  const Complex initial = (h * rho_hat.matrix()).trace();
  const Complex final_energy = (h * gamma.matrix()).trace();
  if (std::abs(initial.imag()) > 1e-10 || std::abs(final_energy.imag()) > 1e-10) {
    throw InvalidOperator("work_term: complex energy, inputs are not Hermitian");
  }
  return -initial.real() + final_energy.real();
}

WorkReport average_work(const Assemblage& assemblage, const MubSet& set, double omega,
                        double beta) {
  if (assemblage.d() != set.d() || assemblage.n() != set.n() ||
      assemblage.outcomes() != set.d()) {
    throw DimensionMismatch("average_work: assemblage and MUB set shapes differ");
  }
  WorkReport report;
  report.d = set.d();
  report.n = set.n();
  report.omega = omega;
  report.beta = beta;
  report.mode = ReportMode::kExact;
  report.per_round.assign(set.n(), std::vector<double>(set.d(), 0.0));

  double total = 0.0;
  for (std::size_t x = 0; x < set.n(); ++x) {
    for (std::size_t a = 0; a < set.d(); ++a) {
      const double prob = assemblage.p(x, a);
      if (prob < kNegligibleProbability) continue;
      const double w =
          work_term(assemblage.conditional_state(x, a), hamiltonian(set, a, x, omega), beta);
      report.per_round[x][a] = w;
      total += prob * w;
    }
  }
  report.average = total / static_cast<double>(set.n());
  fill_bounds(report);
  return report;
}

std::vector<Povm> alice_measurements(const MubSet& set) {
  std::vector<Povm> povms;
  povms.reserve(set.n());
  for (std::size_t x = 0; x < set.n(); ++x) povms.push_back(Povm::projective(conjugate_basis(set, x)));
  return povms;
}

namespace {

struct QuantumProtocol {
  MubSet set;
  Assemblage assemblage;
};

QuantumProtocol play_quantum_protocol(const GameConfig& config) {
  config.validate();
  MubSet set = build_mub(config.d, config.n);
  Assemblage assemblage = measure_assemblage(maximally_entangled(config.d), alice_measurements(set));

  const double uniform = 1.0 / static_cast<double>(config.d);
  for (std::size_t x = 0; x < set.n(); ++x) {
    for (std::size_t a = 0; a < set.d(); ++a) {
      const double prob = assemblage.p(x, a);
      if (std::abs(prob - uniform) > 1e-10) {
        std::ostringstream os;
        os << "quantum protocol: p(" << a << "|" << x << ") = " << prob << ", expected 1/d";
        throw std::logic_error(os.str());
      }
      const double f = fidelity(assemblage.conditional_state(x, a), set.state(x, a));
      if (std::abs(f - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "quantum protocol: conditional state (" << a << "|" << x << ") has fidelity " << f
           << " with |phi_x^a>";
        throw std::logic_error(os.str());
      }
    }
  }
  return {std::move(set), std::move(assemblage)};
}

}  // namespace

WorkReport run_exact_quantum(const GameConfig& config) {
  const QuantumProtocol protocol = play_quantum_protocol(config);
  WorkReport report = average_work(protocol.assemblage, protocol.set, config.omega, config.beta);
  report.shots = 0;
  report.seed = config.seed;
  return report;
}

WorkReport sample_work(const Assemblage& assemblage, const MubSet& set, double omega, double beta,
                       std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw DomainError("sample_work: shots must be at least 1");
  const std::size_t n = set.n();
  const std::size_t d = set.d();

  // Exact per-round values; each shot only selects one of them.
  WorkReport report = average_work(assemblage, set, omega, beta);

  std::vector<std::vector<double>> cdf(n, std::vector<double>(d, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    double acc = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      if (assemblage.p(x, a) >= kNegligibleProbability) acc += assemblage.p(x, a);
      cdf[x][a] = acc;
    }
  }
  auto draw_outcome = [&](std::size_t x, double u) {
    const double target = u * cdf[x][d - 1];
    for (std::size_t a = 0; a < d; ++a) {
      if (target < cdf[x][a]) return a;
    }
    std::size_t a = d - 1;
    while (a > 0 && assemblage.p(x, a) < kNegligibleProbability) --a;
    return a;
  };

  // Shots are tallied per (x, a) in fixed chunks; integer tallies make the
  // reduction exact and independent of thread scheduling.
  constexpr std::uint64_t kChunk = 1 << 14;
  const std::size_t chunks = static_cast<std::size_t>((shots + kChunk - 1) / kChunk);
  std::vector<std::vector<std::uint64_t>> tallies(chunks, std::vector<std::uint64_t>(n * d, 0));
  detail::parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(shots, begin + kChunk);
    auto& tally = tallies[c];
    for (std::uint64_t shot = begin; shot < end; ++shot) {
      SplitMix64 rng(derive_seed(seed, shot));
      const auto x = std::min<std::size_t>(n - 1, static_cast<std::size_t>(rng.uniform() * n));
      ++tally[x * d + draw_outcome(x, rng.uniform())];
    }
  });
  std::vector<std::uint64_t> counts(n * d, 0);
  for (const auto& tally : tallies) {
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += tally[k];
  }

  const double total = static_cast<double>(shots);
  double sum = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    sum += static_cast<double>(counts[k]) * report.per_round[k / d][k % d];
  }
  const double mean = sum / total;
  double sq = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double dev = report.per_round[k / d][k % d] - mean;
    sq += static_cast<double>(counts[k]) * dev * dev;
  }
  report.mode = ReportMode::kMonteCarlo;
  report.shots = shots;
  report.seed = seed;
  report.average = mean;
  report.standard_error = shots > 1 ? std::sqrt(sq / (total - 1.0) / total) : 0.0;
  return report;
}

WorkReport run_monte_carlo(const GameConfig& config) {
  if (config.shots < 1) throw DomainError("run_monte_carlo: shots must be at least 1");
  const QuantumProtocol protocol = play_quantum_protocol(config);
  return sample_work(protocol.assemblage, protocol.set, config.omega, config.beta, config.shots,
                     config.seed);
}

void to_json(nlohmann::json& j, const WorkReport& r) {
  j = nlohmann::json{{"d", r.d},
                     {"n", r.n},
                     {"omega", r.omega},
                     {"beta", detail::beta_json(r.beta)},
                     {"mode", to_string(r.mode)},
                     {"shots", r.shots},
                     {"seed", r.seed},
                     {"average", r.average},
                     {"stderr", r.mode == ReportMode::kMonteCarlo ? nlohmann::json(r.standard_error)
                                                                  : nlohmann::json(nullptr)},
                     {"w_classical", r.w_classical},
                     {"w_quantum", r.w_quantum},
                     {"xi", r.xi ? nlohmann::json(*r.xi) : nlohmann::json(nullptr)},
                     {"per_round", r.per_round}};
}

}  // namespace steerwork
