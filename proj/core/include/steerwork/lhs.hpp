#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "steerwork/game.hpp"
#include "steerwork/mub.hpp"
#include "steerwork/qmath.hpp"

// Local hidden state (unsteerable) models and the numerical supremum of the
// work they can deliver in the MUB game.
namespace steerwork {

// Finite hidden-variable ensemble {p(lambda), rho_lambda} with response
// p(a|x, lambda). response[lambda][x][a].
class LhsModel {
 public:
  using ResponseTable = std::vector<std::vector<double>>;

  // Checks that weights and every response row are probability vectors
  // within 1e-12 and that all shapes agree.
  LhsModel(std::size_t d, std::size_t n, std::vector<DensityMatrix> states,
           std::vector<double> weights, std::vector<ResponseTable> response);

  // One hidden state, answer a_x = choice[x] with certainty.
  static LhsModel deterministic(const PureState& state, const std::vector<std::size_t>& choice);

  std::size_t d() const { return d_; }
  std::size_t n() const { return n_; }
  std::size_t size() const { return states_.size(); }
  const DensityMatrix& state(std::size_t lambda) const { return states_.at(lambda); }
  double weight(std::size_t lambda) const { return weights_.at(lambda); }
  double response(std::size_t lambda, std::size_t x, std::size_t a) const {
    return response_.at(lambda).at(x).at(a);
  }

 private:
  std::size_t d_;
  std::size_t n_;
  std::vector<DensityMatrix> states_;
  std::vector<double> weights_;
  std::vector<ResponseTable> response_;
};

// sigma_{a|x} = sum_lambda p(lambda) p(a|x,lambda) rho_lambda
Assemblage assemblage_from_model(const LhsModel& model);

// Average work of the model's assemblage in the game built on `set`.
double lhs_work(const LhsModel& model, const MubSet& set, double omega, double beta);

// (1/n) sum_x max_a |<phi_x^a|psi>|^2
double mub_alignment(const MubSet& set, const PureState& psi);

// a_x = argmax_a |<phi_x^a|psi>|^2, ties to the smallest a.
std::vector<std::size_t> best_outcomes(const MubSet& set, const PureState& psi);

struct OptimizerSettings {
  std::size_t restarts = 32;
  double tol = 1e-12;
  std::size_t max_iter = 500;
  std::uint64_t seed = 0;
};

struct OptimizerResult {
  PureState best_state = PureState::basis(1, 0);
  double objective = 0.0;
  std::size_t restarts_used = 0;
  std::size_t iterations = 0;  // of the winning restart
  bool converged = false;      // winning restart stopped on tol, not max_iter
  std::size_t best_restart = 0;
};

// Alternating maximization of mub_alignment over pure states. Each iteration
// fixes the best outcome per basis, then moves to the principal eigenvector
// of the averaged projectors; both half-steps are exact, so the objective
// never decreases (a decrease beyond rounding throws std::logic_error).
// Restart r starts from a Haar-random state drawn from derive_seed(seed, r);
// the best restart wins, ties to the lowest index.
OptimizerResult optimize_single_state(const MubSet& set, const OptimizerSettings& settings = {});

// Brute-force oracle for d = 2: the objective on a theta x phi grid over the
// Bloch sphere (resolution x 2*resolution points) followed by a shrinking
// pattern search around the best grid point. Throws DimensionMismatch unless
// set.d() == 2.
OptimizerResult bloch_grid_search(const MubSet& set, std::size_t resolution);

struct LhsSupremum {
  double achievable = 0.0;  // work of the best deterministic single-state model
  double bound = 0.0;       // w_classical
  double gap = 0.0;         // bound - achievable
  OptimizerResult optimizer;
  std::vector<std::size_t> response;  // a_x of the realizing model
};

LhsSupremum lhs_sup_work(std::size_t d, std::size_t n, double omega, double beta,
                         const OptimizerSettings& settings = {});

void to_json(nlohmann::json& j, const OptimizerResult& result);

}  // namespace steerwork
