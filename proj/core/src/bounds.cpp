#include "steerwork/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "steerwork/errors.hpp"

namespace steerwork {

namespace {

void require_dim(std::size_t d) {
  if (d < 2) throw DomainError("dimension must be at least 2");
}

void require_energy(double omega, double beta) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("omega must be positive and finite");
  if (std::isnan(beta) || beta < 0.0) throw DomainError("beta must be non-negative");
}

}  // namespace

double thermal_ground_population(std::size_t d, double omega, double beta) {
  require_dim(d);
  require_energy(omega, beta);
  if (std::isinf(beta)) return 1.0;
  return 1.0 / (1.0 + static_cast<double>(d - 1) * std::exp(-beta * omega));
}

double rastegin_bound(std::size_t d, std::size_t n) {
  require_dim(d);
  if (n < 1) throw DomainError("basis count must be at least 1");
  const double dd = static_cast<double>(d);
  return (1.0 + (dd - 1.0) / std::sqrt(static_cast<double>(n))) / dd;
}

double w_classical(std::size_t d, std::size_t n, double omega, double beta) {
  return omega * rastegin_bound(d, n) - omega * thermal_ground_population(d, omega, beta);
}

double w_quantum(std::size_t d, double omega, double beta) {
  return omega - omega * thermal_ground_population(d, omega, beta);
}

double xi(std::size_t d, std::size_t n, double omega, double beta) {
  const double classical = w_classical(d, n, omega, beta);
  if (!(classical > 0.0)) {
    std::ostringstream os;
    os << "advantage ratio undefined: w_classical = " << classical
       << (classical < 0.0 ? " is negative" : " is zero");
    throw DomainError(os.str());
  }
  return w_quantum(d, omega, beta) / classical;
}

bool advantage_condition(std::size_t d, std::size_t n) {
  if (d < 1 || n < 1) return false;
  const double dd = static_cast<double>(d);
  const double root_n = std::sqrt(static_cast<double>(n));
  return dd * root_n / (root_n + dd - 1.0) > 1.0;
}

BoundSet compute_bounds(std::size_t d, std::size_t n, double omega, double beta) {
  BoundSet b;
  b.d = d;
  b.n = n;
  b.omega = omega;
  b.beta = beta;
  b.w_classical = w_classical(d, n, omega, beta);
  b.w_quantum = w_quantum(d, omega, beta);
  if (b.w_classical > 0.0) b.xi = b.w_quantum / b.w_classical;
  b.rastegin = rastegin_bound(d, n);
  b.advantage = advantage_condition(d, n);
  return b;
}

void to_json(nlohmann::json& j, const BoundSet& b) {
  j = nlohmann::json{{"d", b.d},
                     {"n", b.n},
                     {"omega", b.omega},
                     {"beta", detail::beta_json(b.beta)},
                     {"w_classical", b.w_classical},
                     {"w_quantum", b.w_quantum},
                     {"xi", b.xi ? nlohmann::json(*b.xi) : nlohmann::json(nullptr)},
                     {"rastegin", b.rastegin},
                     {"advantage", b.advantage}};
}

}  // namespace steerwork
