#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "steerwork/errors.hpp"

// Dense complex linear algebra for the small Hilbert spaces used by the work
// extraction game: a single system of dimension d <= 64 and bipartite systems
// of dimension d*d.
namespace steerwork {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kConstruction = 1e-12;
inline constexpr double kPsd = 1e-10;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kReconstruction = 1e-9;
inline constexpr double kMinEigenvalue = -1e-10;
}  // namespace tol

// Entry-wise absolute comparison.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                  double eps = tol::kConstruction);

// Largest |m(i,j) - conj(m(j,i))|; infinity for non-square input.
double hermiticity_defect(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double eps = tol::kHermitian);

ComplexMatrix identity(std::size_t dim);

// Normalized state vector. Global phase is not meaningful; compare states
// with fidelity(), never by amplitudes.
class PureState {
 public:
  // Throws InvalidOperator unless the squared norm is 1 within 1e-12.
  explicit PureState(ComplexVector amplitudes);

  // Rescales a nonzero vector to unit norm.
  static PureState normalized(const ComplexVector& v);

  // Computational basis vector |index>.
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  // |psi><psi|
  ComplexMatrix projector() const;

 private:
  ComplexVector amps_;
};

// <u|v>
Complex inner(const PureState& u, const PureState& v);

// |<u|v>|^2
double fidelity(const PureState& u, const PureState& v);

// <psi|m|psi>, real part; m is expected Hermitian.
double expectation(const ComplexMatrix& m, const PureState& psi);

class DensityMatrix {
 public:
  // Validates Hermiticity and unit trace (1e-12) and a smallest eigenvalue
  // of at least -1e-10.
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

  double purity() const;

 private:
  ComplexMatrix m_;
};

// <u|rho|u>
double fidelity(const DensityMatrix& rho, const PureState& u);

// Measurement on a single system. Effects are Hermitian, PSD and complete
// within 1e-10.
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> effects);

  // Rank-1 projective measurement onto an orthonormal basis.
  static Povm projective(const std::vector<PureState>& basis);

  std::size_t dim() const { return dim_; }
  std::size_t outcomes() const { return effects_.size(); }
  const ComplexMatrix& effect(std::size_t a) const { return effects_.at(a); }
  const std::vector<ComplexMatrix>& effects() const { return effects_; }

 private:
  std::size_t dim_ = 0;
  std::vector<ComplexMatrix> effects_;
};

// Kronecker product; entry (i*rb + k, j*cb + l) = a(i,j) * b(k,l).
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Traces out the first factor of a (dim_a*dim_b)-square operator. Works on
// unnormalized operators; the DensityMatrix overload re-validates the result.
ComplexMatrix partial_trace_a(const ComplexMatrix& m, std::size_t dim_a,
                              std::size_t dim_b);
DensityMatrix partial_trace_a(const DensityMatrix& rho, std::size_t dim_a,
                              std::size_t dim_b);

struct Eigensystem {
  RealVector values;                 // ascending
  std::vector<PureState> vectors;    // vectors[k] pairs with values[k]
};

// Throws InvalidOperator if m is not Hermitian within 1e-10.
Eigensystem hermitian_eigensystem(const ComplexMatrix& m);

double min_eigenvalue(const ComplexMatrix& m);

// Eigenvector of the largest eigenvalue. Among eigenvalues within 1e-12 of
// the maximum, the one with the lowest index in the ascending ordering wins.
PureState principal_eigenvector(const ComplexMatrix& m);

}  // namespace steerwork
