#pragma once

// Small dense complex matrices (2x2 .. 4x4) and the predicates the rest of
// the library relies on. Storage and eigensolves are Eigen; everything here
// is a pure function of its inputs.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinchannel {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;

inline bool is_finite(const CMatrix& m) { return m.allFinite(); }

/// Hermiticity within an absolute entrywise tolerance.
inline bool is_hermitian(const CMatrix& m, double tol = 1e-12) {
  if (m.rows() != m.cols() || m.size() == 0 || !is_finite(m)) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Positive semi-definite: Hermitian (to 1e-10) with every eigenvalue >= -tol.
inline bool is_psd(const CMatrix& m, double tol = 1e-10) {
  if (!is_hermitian(m, 1e-10)) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(0.5 * (m + m.adjoint())),
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

/// Standard Pauli matrix for axis 'x', 'y' or 'z'.
inline CMatrix pauli(char axis) {
  CMatrix s(2, 2);
  switch (axis) {
    case 'x':
      s << 0, 1, 1, 0;
      break;
    case 'y':
      s << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case 'z':
      s << 1, 0, 0, -1;
      break;
    default:
      throw std::domain_error(std::string("pauli: unknown axis '") + axis + "'");
  }
  return s;
}

/// Kronecker product with row-of-a-major ordering. This library only ever
/// forms two-qubit products, so results larger than 4x4 are rejected.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  if (a.rows() * b.rows() > 4 || a.cols() * b.cols() > 4)
    throw std::length_error("kron: result dimension exceeds 4");
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace spinchannel
