#include "steerwork/mub.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace steerwork {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MubSet::Basis computational_basis(std::size_t d) {
  MubSet::Basis basis;
  for (std::size_t a = 0; a < d; ++a) {
    ComplexVector v = ComplexVector::Zero(idx(d));
    v(idx(a)) = 1.0;
    basis.push_back(std::move(v));
  }
  return basis;
}

// <j|phi^a> = exp(2 pi i (q j^2 + a j) / d) / sqrt(d). q = 0 is the Fourier
// basis. Exponents are reduced mod d in integer arithmetic before the
// trigonometric call.
MubSet::Basis quadratic_phase_basis(std::size_t d, std::size_t q) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  MubSet::Basis basis;
  for (std::size_t a = 0; a < d; ++a) {
    ComplexVector v(idx(d));
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t k = (q * ((j * j) % d) + a * j) % d;
      const double angle = kTwoPi * static_cast<double>(k) / static_cast<double>(d);
      v(idx(j)) = scale * Complex(std::cos(angle), std::sin(angle));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<MubSet::Basis> pauli_bases(std::size_t n) {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  std::vector<MubSet::Basis> all(3);
  all[0] = computational_basis(2);
  all[1] = {ComplexVector{{h, h}}, ComplexVector{{h, -h}}};
  all[2] = {ComplexVector{{Complex(h), i * h}}, ComplexVector{{Complex(h), -i * h}}};
  all.resize(n);
  return all;
}

}  // namespace

MubSet::MubSet(std::size_t d, std::vector<Basis> bases) : d_(d), bases_(std::move(bases)) {
  if (d_ < 1) throw DimensionMismatch("MubSet: dimension must be positive");
  if (bases_.empty()) throw DimensionMismatch("MubSet: at least one basis required");
  for (const auto& basis : bases_) {
    if (basis.size() != d_) throw DimensionMismatch("MubSet: each basis needs d vectors");
    for (const auto& v : basis) {
      if (v.size() != idx(d_)) throw DimensionMismatch("MubSet: vector length differs from d");
    }
  }
}

const ComplexVector& MubSet::vector(std::size_t x, std::size_t a) const {
  if (x >= n() || a >= d_) throw std::out_of_range("MubSet: index out of range");
  return bases_[x][a];
}

PureState MubSet::state(std::size_t x, std::size_t a) const { return PureState(vector(x, a)); }

std::vector<PureState> MubSet::basis(std::size_t x) const {
  if (x >= n()) throw std::out_of_range("MubSet: basis index out of range");
  std::vector<PureState> out;
  out.reserve(d_);
  for (const auto& v : bases_[x]) out.emplace_back(v);
  return out;
}

bool is_prime(std::size_t d) {
  if (d < 2) return false;
  for (std::size_t p = 2; p * p <= d; ++p) {
    if (d % p == 0) return false;
  }
  return true;
}

bool mub_supported(std::size_t d, std::size_t n) {
  if (d < 2 || n < 2) return false;
  if (n == 2) return true;
  if (d == 2) return n <= 3;
  return is_prime(d) && n <= d + 1;
}

std::string mub_supported_families() {
  return "any d >= 2 with n = 2; d = 2 with n <= 3; odd prime d with n <= d + 1";
}

MubSet build_mub(std::size_t d, std::size_t n) {
  if (!mub_supported(d, n)) {
    std::ostringstream os;
    os << "MUB construction not available for d = " << d << ", n = " << n
       << "; supported families: " << mub_supported_families();
    throw UnsupportedConstruction(os.str());
  }
  if (d == 2) return MubSet(2, pauli_bases(n));

  std::vector<MubSet::Basis> bases;
  bases.reserve(n);
  bases.push_back(computational_basis(d));
  for (std::size_t x = 1; x < n; ++x) bases.push_back(quadratic_phase_basis(d, x - 1));
  return MubSet(d, std::move(bases));
}

const char* to_string(MubVerification::Branch branch) {
  switch (branch) {
    case MubVerification::Branch::kNone: return "none";
    case MubVerification::Branch::kNormalization: return "normalization";
    case MubVerification::Branch::kOrthogonality: return "orthogonality";
    case MubVerification::Branch::kUnbiasedness: return "unbiasedness";
  }
  return "unknown";
}

MubVerification verify_mub(const MubSet& set, double tol) {
  MubVerification report;
  const std::size_t d = set.d();
  const std::size_t n = set.n();
  const double unbiased = 1.0 / std::sqrt(static_cast<double>(d));

  auto consider = [&](double deviation, MubVerification::Branch branch, std::size_t x,
                      std::size_t a, std::size_t y, std::size_t b) {
    if (deviation > report.worst_deviation) {
      report.worst_deviation = deviation;
      report.worst_branch = branch;
      report.x = x;
      report.a = a;
      report.y = y;
      report.b = b;
    }
  };

  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t a = 0; a < d; ++a) {
      const ComplexVector& u = set.vector(x, a);
      for (std::size_t y = x; y < n; ++y) {
        for (std::size_t b = (y == x ? a : 0); b < d; ++b) {
          const double overlap = std::abs(u.dot(set.vector(y, b)));
          if (y == x && b == a) {
            consider(std::abs(overlap - 1.0), MubVerification::Branch::kNormalization, x, a, y, b);
          } else if (y == x) {
            consider(overlap, MubVerification::Branch::kOrthogonality, x, a, y, b);
          } else {
            consider(std::abs(overlap - unbiased), MubVerification::Branch::kUnbiasedness, x, a,
                     y, b);
          }
        }
      }
    }
  }
  report.passed = report.worst_deviation <= tol;
  return report;
}

std::vector<PureState> conjugate_basis(const MubSet& set, std::size_t x) {
  if (x >= set.n()) throw std::out_of_range("conjugate_basis: basis index out of range");
  std::vector<PureState> out;
  out.reserve(set.d());
  for (std::size_t a = 0; a < set.d(); ++a) out.emplace_back(set.vector(x, a).conjugate());
  return out;
}

void to_json(nlohmann::json& j, const MubSet& set) {
  nlohmann::json bases = nlohmann::json::array();
  for (const auto& basis : set.bases()) {
    nlohmann::json vectors = nlohmann::json::array();
    for (const auto& v : basis) {
      nlohmann::json amps = nlohmann::json::array();
      for (Eigen::Index k = 0; k < v.size(); ++k) amps.push_back({v(k).real(), v(k).imag()});
      vectors.push_back(std::move(amps));
    }
    bases.push_back(std::move(vectors));
  }
  j = nlohmann::json{{"d", set.d()}, {"n", set.n()}, {"bases", std::move(bases)}};
}

void to_json(nlohmann::json& j, const MubVerification& report) {
  j = nlohmann::json{{"passed", report.passed},
                     {"worst_deviation", report.worst_deviation},
                     {"worst_branch", to_string(report.worst_branch)},
                     {"x", report.x},
                     {"a", report.a},
                     {"y", report.y},
                     {"b", report.b}};
}

}  // namespace steerwork
