#include "steerwork/lhs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "steerwork/bounds.hpp"
#include "steerwork/random.hpp"

namespace steerwork {

namespace {

constexpr double kProbabilityTol = 1e-12;

void require_distribution(const std::vector<double>& p, const char* what) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= -kProbabilityTol)) throw InvalidOperator(std::string(what) + ": negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > kProbabilityTol) {
    std::ostringstream os;
    os << what << ": entries sum to " << total;
    throw InvalidOperator(os.str());
  }
}

}  // namespace

LhsModel::LhsModel(std::size_t d, std::size_t n, std::vector<DensityMatrix> states,
                   std::vector<double> weights, std::vector<ResponseTable> response)
    : d_(d), n_(n), states_(std::move(states)), weights_(std::move(weights)),
      response_(std::move(response)) {
  if (states_.empty()) throw DimensionMismatch("LhsModel: no hidden states");
  if (weights_.size() != states_.size() || response_.size() != states_.size()) {
    throw DimensionMismatch("LhsModel: states, weights and responses differ in length");
  }
  require_distribution(weights_, "LhsModel weights");
  for (std::size_t l = 0; l < states_.size(); ++l) {
    if (states_[l].dim() != d_) throw DimensionMismatch("LhsModel: hidden state dimension");
    if (response_[l].size() != n_) throw DimensionMismatch("LhsModel: response needs n rows");
    for (const auto& row : response_[l]) {
      if (row.size() != d_) throw DimensionMismatch("LhsModel: response row needs d entries");
      require_distribution(row, "LhsModel response row");
    }
  }
}

LhsModel LhsModel::deterministic(const PureState& state, const std::vector<std::size_t>& choice) {
  const std::size_t d = state.dim();
  ResponseTable table(choice.size(), std::vector<double>(d, 0.0));
  for (std::size_t x = 0; x < choice.size(); ++x) table[x].at(choice[x]) = 1.0;
  return LhsModel(d, choice.size(), {DensityMatrix::from_pure(state)}, {1.0}, {std::move(table)});
}

Assemblage assemblage_from_model(const LhsModel& model) {
  const auto d = static_cast<Eigen::Index>(model.d());
  std::vector<std::vector<ComplexMatrix>> sigma(
      model.n(), std::vector<ComplexMatrix>(model.d(), ComplexMatrix::Zero(d, d)));
  for (std::size_t l = 0; l < model.size(); ++l) {
    const ComplexMatrix& rho = model.state(l).matrix();
    for (std::size_t x = 0; x < model.n(); ++x) {
      for (std::size_t a = 0; a < model.d(); ++a) {
        const double w = model.weight(l) * model.response(l, x, a);
        if (w != 0.0) sigma[x][a] += w * rho;
      }
    }
  }
  return Assemblage(model.d(), std::move(sigma));
}

double lhs_work(const LhsModel& model, const MubSet& set, double omega, double beta) {
  if (model.d() != set.d() || model.n() != set.n()) {
    throw DimensionMismatch("lhs_work: model and MUB set shapes differ");
  }
  return average_work(assemblage_from_model(model), set, omega, beta).average;
}

// ---------------------------------------------------------------------------
// Objective

namespace {

// |<phi_x^a|psi>|^2 for every (x, a).
std::vector<std::vector<double>> overlaps(const MubSet& set, const ComplexVector& psi) {
  std::vector<std::vector<double>> out(set.n(), std::vector<double>(set.d()));
  for (std::size_t x = 0; x < set.n(); ++x) {
    for (std::size_t a = 0; a < set.d(); ++a) out[x][a] = std::norm(set.vector(x, a).dot(psi));
  }
  return out;
}

std::size_t argmax_first(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

double alignment(const MubSet& set, const ComplexVector& psi) {
  double total = 0.0;
  for (const auto& row : overlaps(set, psi)) total += *std::max_element(row.begin(), row.end());
  return total / static_cast<double>(set.n());
}

}  // namespace

double mub_alignment(const MubSet& set, const PureState& psi) {
  if (psi.dim() != set.d()) throw DimensionMismatch("mub_alignment: state dimension");
  return alignment(set, psi.amplitudes());
}

std::vector<std::size_t> best_outcomes(const MubSet& set, const PureState& psi) {
  if (psi.dim() != set.d()) throw DimensionMismatch("best_outcomes: state dimension");
  std::vector<std::size_t> choice;
  for (const auto& row : overlaps(set, psi.amplitudes())) choice.push_back(argmax_first(row));
  return choice;
}

// ---------------------------------------------------------------------------
// Alternating maximization

namespace {

struct RestartOutcome {
  ComplexVector state;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

RestartOutcome run_restart(const MubSet& set, const OptimizerSettings& settings,
                           std::uint64_t stream) {
  SplitMix64 rng(derive_seed(settings.seed, stream));
  PureState psi = random_pure_state(set.d(), rng);
  double value = mub_alignment(set, psi);
  const double inv_n = 1.0 / static_cast<double>(set.n());

  RestartOutcome out;
  for (std::size_t it = 0; it < settings.max_iter; ++it) {
    const std::vector<std::size_t> choice = best_outcomes(set, psi);
    ComplexMatrix averaged = ComplexMatrix::Zero(static_cast<Eigen::Index>(set.d()),
                                                 static_cast<Eigen::Index>(set.d()));
    for (std::size_t x = 0; x < set.n(); ++x) {
      const ComplexVector& phi = set.vector(x, choice[x]);
      averaged += inv_n * (phi * phi.adjoint());
    }
    PureState next = principal_eigenvector(averaged);
    const double next_value = mub_alignment(set, next);
    const double gain = next_value - value;
    if (gain < -1e-12) {
      std::ostringstream os;
      os << "optimize_single_state: objective decreased by " << -gain << " at iteration " << it;
      throw std::logic_error(os.str());
    }
    out.iterations = it + 1;
    if (gain >= 0.0) {
      psi = std::move(next);
      value = next_value;
    }
    if (gain < settings.tol) {
      out.converged = true;
      break;
    }
  }
  out.state = psi.amplitudes();
  out.objective = value;
  return out;
}

}  // namespace

OptimizerResult optimize_single_state(const MubSet& set, const OptimizerSettings& settings) {
  if (settings.restarts < 1) throw DomainError("optimize_single_state: restarts must be >= 1");
  std::vector<RestartOutcome> outcomes(settings.restarts);
  detail::parallel_for(settings.restarts,
                       [&](std::size_t r) { outcomes[r] = run_restart(set, settings, r); });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].objective > outcomes[best].objective) best = r;
  }
  OptimizerResult result;
  result.best_state = PureState(outcomes[best].state);
  result.objective = outcomes[best].objective;
  result.restarts_used = settings.restarts;
  result.iterations = outcomes[best].iterations;
  result.converged = outcomes[best].converged;
  result.best_restart = best;
  return result;
}

// ---------------------------------------------------------------------------
// Bloch-sphere oracle

namespace {

ComplexVector bloch_state(double theta, double phi) {
  return ComplexVector{{Complex(std::cos(0.5 * theta)),
                        std::polar(std::sin(0.5 * theta), phi)}};
}

}  // namespace

OptimizerResult bloch_grid_search(const MubSet& set, std::size_t resolution) {
  if (set.d() != 2) throw DimensionMismatch("bloch_grid_search: requires d = 2");
  if (resolution < 2) throw DomainError("bloch_grid_search: resolution must be at least 2");
  constexpr double kPi = std::numbers::pi;

  const std::size_t n_theta = resolution;
  const std::size_t n_phi = 2 * resolution;
  const double d_theta = kPi / static_cast<double>(n_theta - 1);
  const double d_phi = 2.0 * kPi / static_cast<double>(n_phi);

  double best_theta = 0.0, best_phi = 0.0;
  double best = -1.0;
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double theta = static_cast<double>(i) * d_theta;
    for (std::size_t k = 0; k < n_phi; ++k) {
      const double phi = static_cast<double>(k) * d_phi;
      const double v = alignment(set, bloch_state(theta, phi));
      if (v > best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  // Compass search: try +-step along each coordinate, halve the step when
  // no move improves.
  double step_theta = d_theta;
  double step_phi = d_phi;
  std::size_t iterations = 0;
  while (step_theta > 1e-13 || step_phi > 1e-13) {
    ++iterations;
    bool moved = false;
    const double candidates[4][2] = {{best_theta + step_theta, best_phi},
                                     {best_theta - step_theta, best_phi},
                                     {best_theta, best_phi + step_phi},
                                     {best_theta, best_phi - step_phi}};
    for (const auto& c : candidates) {
      const double v = alignment(set, bloch_state(c[0], c[1]));
      if (v > best) {
        best = v;
        best_theta = c[0];
        best_phi = c[1];
        moved = true;
      }
    }
    if (!moved) {
      step_theta *= 0.5;
      step_phi *= 0.5;
    }
    if (iterations > 100000) break;
  }

  OptimizerResult result;
  result.best_state = PureState::normalized(bloch_state(best_theta, best_phi));
  result.objective = best;
  result.restarts_used = 1;
  result.iterations = iterations;
  result.converged = true;
  return result;
}

LhsSupremum lhs_sup_work(std::size_t d, std::size_t n, double omega, double beta,
                         const OptimizerSettings& settings) {
  const MubSet set = build_mub(d, n);
  LhsSupremum out;
  out.optimizer = optimize_single_state(set, settings);
  out.response = best_outcomes(set, out.optimizer.best_state);
  const LhsModel model = LhsModel::deterministic(out.optimizer.best_state, out.response);
  out.achievable = lhs_work(model, set, omega, beta);
  out.bound = w_classical(d, n, omega, beta);
  out.gap = out.bound - out.achievable;
  return out;
}

void to_json(nlohmann::json& j, const OptimizerResult& r) {
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index k = 0; k < r.best_state.amplitudes().size(); ++k) {
    const Complex c = r.best_state.amplitudes()(k);
    amps.push_back({c.real(), c.imag()});
  }
  j = nlohmann::json{{"objective", r.objective},
                     {"restarts_used", r.restarts_used},
                     {"iterations", r.iterations},
                     {"converged", r.converged},
                     {"best_restart", r.best_restart},
                     {"best_state", std::move(amps)}};
}

}  // namespace steerwork
