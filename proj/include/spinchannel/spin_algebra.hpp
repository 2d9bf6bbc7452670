#pragma once

// Angular-momentum kernel: Clebsch-Gordan coefficients (Racah closed form,
// Condon-Shortley phases), irreducible tensor operators normalized to the
// Madison convention Tr(tau^k_q^dag tau^k'_q') = (2j+1) delta delta,
// spherical vector components, rank-2 vector coupling, Hermitian
// eigendecomposition with a fixed phase convention, and complex polynomial
// roots with explicit degree-drop accounting.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "spinchannel/cmatrix.hpp"

namespace spinchannel {

namespace detail {

inline constexpr int kMaxFactorial = 24;

inline constexpr std::array<double, kMaxFactorial + 1> kFactorial = [] {
  std::array<double, kMaxFactorial + 1> f{};
  f[0] = 1.0;
  for (int i = 1; i <= kMaxFactorial; ++i) f[i] = f[i - 1] * static_cast<double>(i);
  return f;
}();

inline double fact(int n) { return kFactorial[static_cast<std::size_t>(n)]; }

// Doubled representation: 2j must be a non-negative integer.
inline int doubled(double j, const char* what) {
  const double t = 2.0 * j;
  const int ti = static_cast<int>(std::lround(t));
  if (std::abs(t - ti) > 1e-9)
    throw std::domain_error(std::string("clebsch_gordan: ") + what + " is not half-integer");
  return ti;
}

}  // namespace detail

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> by Racah's closed form.
/// Exact to machine precision for the small spins used here (each j <= 5).
/// Returns 0 when M != m1 + m2; invalid quantum numbers (non-half-integer,
/// |m| > j, mismatched integrality, triangle violation) raise a domain error
/// rather than silently returning 0.
inline double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
  using detail::fact;
  const int tj1 = detail::doubled(j1, "j1"), tm1 = detail::doubled(m1, "m1");
  const int tj2 = detail::doubled(j2, "j2"), tm2 = detail::doubled(m2, "m2");
  const int tJ = detail::doubled(J, "J"), tM = detail::doubled(M, "M");

  if (tj1 < 0 || tj2 < 0 || tJ < 0)
    throw std::domain_error("clebsch_gordan: negative spin");
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ)
    throw std::domain_error("clebsch_gordan: |m| exceeds j");
  if ((tj1 - tm1) % 2 != 0 || (tj2 - tm2) % 2 != 0 || (tJ - tM) % 2 != 0)
    throw std::domain_error("clebsch_gordan: m has wrong integrality for its j");
  if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2 || (tj1 + tj2 + tJ) % 2 != 0)
    throw std::domain_error("clebsch_gordan: (j1, j2, J) violates the triangle rule");
  if ((tj1 + tj2 + tJ) / 2 + 1 > detail::kMaxFactorial)
    throw std::domain_error("clebsch_gordan: spins too large for this kernel");

  if (tM != tm1 + tm2) return 0.0;

  const int g1 = (tj1 + tj2 - tJ) / 2;
  const int g2 = (tj1 - tj2 + tJ) / 2;
  const int g3 = (-tj1 + tj2 + tJ) / 2;
  const int g4 = (tj1 + tj2 + tJ) / 2 + 1;
  const int a1 = (tj1 + tm1) / 2, a2 = (tj1 - tm1) / 2;
  const int b1 = (tj2 + tm2) / 2, b2 = (tj2 - tm2) / 2;
  const int c1 = (tJ + tM) / 2, c2 = (tJ - tM) / 2;
  // The two summand offsets below can be negative; the sum range clips them.
  const int d1 = (tJ - tj2 + tm1) / 2;
  const int d2 = (tJ - tj1 - tm2) / 2;

  const double prefactor =
      std::sqrt((tJ + 1.0) * fact(g1) * fact(g2) * fact(g3) / fact(g4)) *
      std::sqrt(fact(a1) * fact(a2) * fact(b1) * fact(b2) * fact(c1) * fact(c2));

  const int t_lo = std::max({0, -d1, -d2});
  const int t_hi = std::min({g1, a2, b1});
  double sum = 0.0;
  for (int t = t_lo; t <= t_hi; ++t) {
    const double denom = fact(t) * fact(g1 - t) * fact(a2 - t) * fact(b1 - t) *
                         fact(d1 + t) * fact(d2 + t);
    sum += ((t % 2 == 0) ? 1.0 : -1.0) / denom;
  }
  return prefactor * sum;
}

/// The full set of irreducible tensor operators tau^k_q for one spin,
/// 0 <= k <= 2j, -k <= q <= k, in the basis |j,j>, |j,j-1>, ..., |j,-j>.
class TensorOperatorSet {
 public:
  double j() const { return 0.5 * two_j_; }
  int dim() const { return two_j_ + 1; }
  int max_rank() const { return two_j_; }

  const CMatrix& op(int k, int q) const {
    if (k < 0 || k > two_j_ || std::abs(q) > k)
      throw std::out_of_range("TensorOperatorSet::op: (k, q) out of range");
    return ops_[static_cast<std::size_t>(k * k + k + q)];
  }

 private:
  friend TensorOperatorSet tensor_ops(double j);
  int two_j_ = 0;
  std::vector<CMatrix> ops_;
};

/// Build the tensor operators for j = 1/2 or j = 1 from Clebsch-Gordan matrix
/// elements, <j m'|tau^k_q|j m> = sqrt(2k+1) <j m; k q|j m'>. This scale
/// satisfies the Madison normalization, gives tau^0_0 = I, and for j = 1/2
/// reproduces the spherical Pauli components exactly.
inline TensorOperatorSet tensor_ops(double j) {
  const bool supported = std::abs(j - 0.5) < 1e-12 || std::abs(j - 1.0) < 1e-12;
  if (!supported) throw std::domain_error("tensor_ops: only j = 1/2 and j = 1 are supported");

  TensorOperatorSet set;
  set.two_j_ = static_cast<int>(std::lround(2.0 * j));
  const int dim = set.two_j_ + 1;
  const double scale_j = 0.5 * set.two_j_;

  for (int k = 0; k <= set.two_j_; ++k) {
    for (int q = -k; q <= k; ++q) {
      CMatrix T = CMatrix::Zero(dim, dim);
      for (int col = 0; col < dim; ++col) {
        const double m = scale_j - col;   // basis index col holds |j, m>
        const double mp = m + q;
        if (std::abs(mp) > scale_j + 1e-9) continue;
        const int row = static_cast<int>(std::lround(scale_j - mp));
        T(row, col) = std::sqrt(2.0 * k + 1.0) * clebsch_gordan(j, m, k, q, j, mp);
      }
      set.ops_.push_back(std::move(T));
    }
  }
  return set;
}

/// Spherical components of a real 3-vector:
/// v_0 = v_z, v_{+-1} = -+(v_x +- i v_y)/sqrt(2). Satisfies v_q^* = (-1)^q v_{-q}.
struct SphericalComponents {
  std::array<Complex, 3> c;  // index q + 1 for q in {-1, 0, +1}

  Complex operator()(int q) const {
    if (q < -1 || q > 1) throw std::out_of_range("SphericalComponents: q out of range");
    return c[static_cast<std::size_t>(q + 1)];
  }
};

inline SphericalComponents spherical_components(const Vec3& v) {
  const double s = 1.0 / std::sqrt(2.0);
  return {{{Complex(v.x() * s, -v.y() * s), Complex(v.z(), 0.0),
            Complex(-v.x() * s, -v.y() * s)}}};
}

/// Rank-2 spherical coupling (a (x) b)^2_q = sum_{mu nu} <1 mu; 1 nu|2 q> a_mu b_nu.
inline Complex rank2_product(const Vec3& a, const Vec3& b, int q) {
  if (q < -2 || q > 2) throw std::domain_error("rank2_product: q out of range");
  const SphericalComponents sa = spherical_components(a);
  const SphericalComponents sb = spherical_components(b);
  Complex total = 0.0;
  for (int mu = -1; mu <= 1; ++mu) {
    const int nu = q - mu;
    if (nu < -1 || nu > 1) continue;
    total += clebsch_gordan(1, mu, 1, nu, 2, q) * sa(mu) * sb(nu);
  }
  return total;
}

struct HermitianEigen {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // orthonormal columns, same order as values
};

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are returned in
/// descending order; each eigenvector's phase is fixed so its
/// largest-magnitude component is real and positive.
inline HermitianEigen eig_hermitian(const CMatrix& m) {
  if (!is_hermitian(m, 1e-10))
    throw std::invalid_argument("eig_hermitian: input is not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(0.5 * (m + m.adjoint())));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");

  const Eigen::Index n = m.rows();
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = n - 1 - i;  // Eigen sorts ascending
    out.values(i) = es.eigenvalues()(src);
    Eigen::VectorXcd v = es.eigenvectors().col(src);
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(v(r)) > best) {
        best = std::abs(v(r));
        imax = r;
      }
    }
    if (best > 0.0) v *= std::conj(v(imax)) / std::abs(v(imax));
    out.vectors.col(i) = v;
  }
  return out;
}

/// Coefficients indexed by power of Z; the length fixes the nominal degree.
/// Leading coefficients may be zero: for Majorana use a vanishing leading
/// coefficient is a root at infinity, not noise.
struct ComplexPolynomial {
  std::vector<Complex> coeffs;

  int nominal_degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct PolyRoots {
  std::vector<Complex> finite_roots;  // sorted by real part, then imaginary
  int roots_at_infinity = 0;
};

namespace detail {

// Roots of a*z^2 + b*z + c with the sign-matched quadratic formula: the
// larger-magnitude half -(b +- r)/2 is computed first, the companion root
// follows from the product c/a, avoiding cancellation. A vanishing linear
// coefficient gets the exactly symmetric +-sqrt(-c/a) pair.
inline std::array<Complex, 2> quadratic_roots(Complex a, Complex b, Complex c) {
  if (std::abs(b) == 0.0) {
    const Complex r = std::sqrt(-c / a);
    return {r, -r};
  }
  const Complex disc = b * b - 4.0 * a * c;
  Complex r = std::sqrt(disc);
  if (std::real(std::conj(b) * r) < 0.0) r = -r;
  const Complex q = -0.5 * (b + r);
  if (std::abs(q) == 0.0) return {Complex(0.0), -b / a};  // implies c == 0
  return {q / a, c / q};
}

inline bool root_less(const Complex& lhs, const Complex& rhs) {
  if (lhs.real() != rhs.real()) return lhs.real() < rhs.real();
  return lhs.imag() < rhs.imag();
}

}  // namespace detail

/// All roots of a complex polynomial, split into finite roots and a count of
/// roots at infinity (the nominal-vs-actual degree gap). Degrees 1 and 2 use
/// closed forms; higher degrees fall back to a companion-matrix eigensolve.
inline PolyRoots poly_roots(const ComplexPolynomial& p) {
  if (p.nominal_degree() < 1)
    throw std::domain_error("poly_roots: nominal degree must be at least 1");
  double max_coeff = 0.0;
  for (const Complex& c : p.coeffs) max_coeff = std::max(max_coeff, std::abs(c));
  if (max_coeff == 0.0) throw std::domain_error("poly_roots: all coefficients are zero");

  int degree = p.nominal_degree();
  while (degree > 0 && std::abs(p.coeffs[static_cast<std::size_t>(degree)]) <= 1e-14 * max_coeff)
    --degree;

  PolyRoots out;
  out.roots_at_infinity = p.nominal_degree() - degree;
  if (degree == 0) return out;

  if (degree == 1) {
    out.finite_roots = {-p.coeffs[0] / p.coeffs[1]};
  } else if (degree == 2) {
    const auto r = detail::quadratic_roots(p.coeffs[2], p.coeffs[1], p.coeffs[0]);
    out.finite_roots = {r[0], r[1]};
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
    const Complex lead = p.coeffs[static_cast<std::size_t>(degree)];
    for (int i = 0; i < degree; ++i) {
      companion(i, degree - 1) = -p.coeffs[static_cast<std::size_t>(i)] / lead;
      if (i + 1 < degree) companion(i + 1, i) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("poly_roots: companion eigensolver failed");
    out.finite_roots.assign(es.eigenvalues().data(), es.eigenvalues().data() + degree);
  }
  std::sort(out.finite_roots.begin(), out.finite_roots.end(), detail::root_less);
  return out;
}

}  // namespace spinchannel
