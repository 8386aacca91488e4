#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "steerwork/qmath.hpp"

namespace steerwork {

// n orthonormal bases of C^d. Basis x, vector a is |phi_x^a>; both indices
// are 0-based and basis 0 of every built set is the computational basis.
//
// Vectors are stored raw so that corrupted families can be represented and
// rejected by verify_mub(); sets returned by build_mub() always verify.
class MubSet {
 public:
  using Basis = std::vector<ComplexVector>;

  // Checks shape only: n >= 1 bases, each of d vectors of length d.
  MubSet(std::size_t d, std::vector<Basis> bases);

  std::size_t d() const { return d_; }
  std::size_t n() const { return bases_.size(); }

  const ComplexVector& vector(std::size_t x, std::size_t a) const;
  PureState state(std::size_t x, std::size_t a) const;
  std::vector<PureState> basis(std::size_t x) const;
  const std::vector<Basis>& bases() const { return bases_; }

 private:
  std::size_t d_;
  std::vector<Basis> bases_;
};

bool is_prime(std::size_t d);

// Supported families: any d >= 2 with n = 2 (computational + Fourier),
// d = 2 with n <= 3 (Z, X, Y eigenbases), odd prime d with n <= d + 1
// (computational + quadratic-phase bases, basis 1 being the Fourier basis).
// Throws UnsupportedConstruction for anything else.
MubSet build_mub(std::size_t d, std::size_t n);

bool mub_supported(std::size_t d, std::size_t n);

// Human-readable list of supported (d, n) families.
std::string mub_supported_families();

struct MubVerification {
  enum class Branch { kNone, kNormalization, kOrthogonality, kUnbiasedness };

  bool passed = true;
  double worst_deviation = 0.0;
  Branch worst_branch = Branch::kNone;
  // Offending pair <phi_x^a | phi_y^b> of the worst deviation.
  std::size_t x = 0, a = 0, y = 0, b = 0;
};

const char* to_string(MubVerification::Branch branch);

// Checks |<phi_x^a|phi_x^b>| = delta_ab and |<phi_x^a|phi_y^b>| = 1/sqrt(d)
// for x != y, over every pair.
MubVerification verify_mub(const MubSet& set, double tol);

// Component-wise complex conjugate of basis x in the computational basis.
std::vector<PureState> conjugate_basis(const MubSet& set, std::size_t x);

void to_json(nlohmann::json& j, const MubSet& set);
void to_json(nlohmann::json& j, const MubVerification& report);

}  // namespace steerwork
