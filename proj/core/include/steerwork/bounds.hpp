#pragma once

#include <cstddef>
#include <optional>

#include <nlohmann/json_fwd.hpp>

// Closed-form work bounds for the MUB quench game. Units: k_B = hbar = 1,
// omega in arbitrary energy units, beta in inverse energy units. beta may be
// +infinity (zero temperature).
namespace steerwork {

// Ground-state population of the thermal state of H = -omega |phi><phi| on
// C^d: e^{beta omega} / (e^{beta omega} + d - 1). Evaluated as
// 1 / (1 + (d-1) e^{-beta omega}) so large beta*omega cannot overflow.
double thermal_ground_population(std::size_t d, double omega, double beta);

// Maximum average overlap of any state with one vector from each of n MUBs:
// (1/d)(1 + (d-1)/sqrt(n)).
double rastegin_bound(std::size_t d, std::size_t n);

// Upper bound on the average work for unsteerable assemblages.
double w_classical(std::size_t d, std::size_t n, double omega, double beta);

// Upper bound on the average work for any assemblage; attained with the
// maximally entangled state.
double w_quantum(std::size_t d, double omega, double beta);

// w_quantum / w_classical. Throws DomainError when w_classical <= 0.
double xi(std::size_t d, std::size_t n, double omega, double beta);

// d sqrt(n) / (sqrt(n) + d - 1) > 1.
bool advantage_condition(std::size_t d, std::size_t n);

struct BoundSet {
  std::size_t d = 0;
  std::size_t n = 0;
  double omega = 0.0;
  double beta = 0.0;
  double w_classical = 0.0;
  double w_quantum = 0.0;
  std::optional<double> xi;  // empty when w_classical <= 0
  double rastegin = 0.0;
  bool advantage = false;
};

BoundSet compute_bounds(std::size_t d, std::size_t n, double omega, double beta);

void to_json(nlohmann::json& j, const BoundSet& bounds);

}  // namespace steerwork
