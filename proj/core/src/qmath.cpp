#include "steerwork/qmath.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

namespace steerwork {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
  require_square(m, what);
  const double defect = hermiticity_defect(m);
  if (!(defect <= tol::kHermitian)) {
    std::ostringstream os;
    os << what << ": matrix is not Hermitian (defect " << defect << ")";
    throw InvalidOperator(os.str());
  }
}

}  // namespace

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double eps) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a - b).cwiseAbs().maxCoeff() <= eps;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double eps) {
  return hermiticity_defect(m) <= eps;
}

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(idx(dim), idx(dim));
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw DimensionMismatch("PureState: empty amplitude vector");
  const double norm2 = amps_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol::kConstruction) {
    std::ostringstream os;
    os << "PureState: squared norm " << norm2 << " differs from 1";
    throw InvalidOperator(os.str());
  }
}

PureState PureState::normalized(const ComplexVector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw InvalidOperator("PureState::normalized: zero vector");
  return PureState(v / norm);
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::out_of_range("PureState::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(idx(dim));
  v(idx(index)) = 1.0;
  return PureState(std::move(v));
}

ComplexMatrix PureState::projector() const { return amps_ * amps_.adjoint(); }

Complex inner(const PureState& u, const PureState& v) {
  if (u.dim() != v.dim()) throw DimensionMismatch("inner: dimension mismatch");
  return u.amplitudes().dot(v.amplitudes());  // conjugates the left operand
}

double fidelity(const PureState& u, const PureState& v) { return std::norm(inner(u, v)); }

double expectation(const ComplexMatrix& m, const PureState& psi) {
  if (m.rows() != idx(psi.dim()) || m.cols() != idx(psi.dim())) {
    throw DimensionMismatch("expectation: operator and state dimensions differ");
  }
  return psi.amplitudes().dot(m * psi.amplitudes()).real();
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "DensityMatrix");
  if (m_.rows() == 0) throw DimensionMismatch("DensityMatrix: empty matrix");
  const double defect = hermiticity_defect(m_);
  if (defect > tol::kConstruction) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (defect " << defect << ")";
    throw InvalidOperator(os.str());
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol::kConstruction) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr.real() << "+" << tr.imag() << "i differs from 1";
    throw InvalidOperator(os.str());
  }
  const ComplexMatrix herm = 0.5 * (m_ + m_.adjoint());
  const double lowest =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(herm, Eigen::EigenvaluesOnly)
          .eigenvalues()(0);
  if (lowest < tol::kMinEigenvalue) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << lowest;
    throw InvalidOperator(os.str());
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double fidelity(const DensityMatrix& rho, const PureState& u) {
  return expectation(rho.matrix(), u);
}

// ---------------------------------------------------------------------------
// Povm

Povm::Povm(std::vector<ComplexMatrix> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw DimensionMismatch("Povm: no effects");
  dim_ = static_cast<std::size_t>(effects_.front().rows());
  ComplexMatrix total = ComplexMatrix::Zero(idx(dim_), idx(dim_));
  for (std::size_t a = 0; a < effects_.size(); ++a) {
    const ComplexMatrix& e = effects_[a];
    if (e.rows() != idx(dim_) || e.cols() != idx(dim_)) {
      throw DimensionMismatch("Povm: effects have inconsistent dimensions");
    }
    if (hermiticity_defect(e) > tol::kPsd) {
      throw InvalidOperator("Povm: effect " + std::to_string(a) + " is not Hermitian");
    }
    const ComplexMatrix herm = 0.5 * (e + e.adjoint());
    const double lowest =
        Eigen::SelfAdjointEigenSolver<ComplexMatrix>(herm, Eigen::EigenvaluesOnly)
            .eigenvalues()(0);
    if (lowest < -tol::kPsd) {
      throw InvalidOperator("Povm: effect " + std::to_string(a) + " is not positive");
    }
    total += e;
  }
  if (!approx_equal(total, identity(dim_), tol::kPsd)) {
    throw InvalidOperator("Povm: effects do not sum to the identity");
  }
}

Povm Povm::projective(const std::vector<PureState>& basis) {
  std::vector<ComplexMatrix> effects;
  effects.reserve(basis.size());
  for (const auto& v : basis) effects.push_back(v.projector());
  return Povm(std::move(effects));
}

// ---------------------------------------------------------------------------
// Tensor structure

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rb = b.rows();
  const Eigen::Index cb = b.cols();
  ComplexMatrix out(a.rows() * rb, a.cols() * cb);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace_a(const ComplexMatrix& m, std::size_t dim_a,
                              std::size_t dim_b) {
  const auto da = idx(dim_a);
  const auto db = idx(dim_b);
  if (m.rows() != da * db || m.cols() != da * db) {
    std::ostringstream os;
    os << "partial_trace_a: operator is " << m.rows() << "x" << m.cols()
       << ", expected " << da * db << " = " << dim_a << "*" << dim_b;
    throw DimensionMismatch(os.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Eigen::Index i = 0; i < da; ++i) out += m.block(i * db, i * db, db, db);
  return out;
}

DensityMatrix partial_trace_a(const DensityMatrix& rho, std::size_t dim_a,
                              std::size_t dim_b) {
  return DensityMatrix(partial_trace_a(rho.matrix(), dim_a, dim_b));
}

// ---------------------------------------------------------------------------
// Eigensystems

Eigensystem hermitian_eigensystem(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eigensystem");
  // Symmetrize so the solver only sees rounding-level asymmetry removed.
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw InvalidOperator("hermitian_eigensystem: eigensolver did not converge");
  }
  Eigensystem out;
  out.values = solver.eigenvalues();
  out.vectors.reserve(static_cast<std::size_t>(herm.rows()));
  for (Eigen::Index k = 0; k < herm.rows(); ++k) {
    out.vectors.push_back(PureState::normalized(solver.eigenvectors().col(k)));
  }
  return out;
}

double min_eigenvalue(const ComplexMatrix& m) {
  require_hermitian(m, "min_eigenvalue");
  if (m.rows() == 0) throw DimensionMismatch("min_eigenvalue: empty matrix");
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(herm, Eigen::EigenvaluesOnly)
      .eigenvalues()(0);
}

PureState principal_eigenvector(const ComplexMatrix& m) {
  Eigensystem es = hermitian_eigensystem(m);
  const Eigen::Index last = es.values.size() - 1;
  const double top = es.values(last);
  Eigen::Index pick = last;
  while (pick > 0 && es.values(pick - 1) >= top - 1e-12) --pick;
  return es.vectors[static_cast<std::size_t>(pick)];
}

}  // namespace steerwork
