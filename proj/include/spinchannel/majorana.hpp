#pragma once

// Majorana stellar representation: a spin-j pure state as 2j spinor
// directions on the Bloch sphere, the roots of
//   P(Z) = sum_k (-1)^k sqrt(C(2j, k)) d_k Z^k,   d_{j+m} = C^j_m,
// with Z = tan(alpha/2) e^{i beta} and each vanishing leading coefficient a
// root at infinity (alpha = pi). Plus the closed-form eigen-system of the
// channel spin-1 state and its spinor angles.

#include <array>
#include <cmath>
#include <vector>

#include "spinchannel/channel_state.hpp"
#include "spinchannel/cmatrix.hpp"
#include "spinchannel/spin_algebra.hpp"

namespace spinchannel {

inline constexpr double kDegeneracyGap = 1e-10;

/// A direction on the Bloch sphere. beta lives in [0, 2pi) and is 0 by
/// convention at the poles.
struct BlochPoint {
  double alpha = 0.0;  // polar, [0, pi]
  double beta = 0.0;   // azimuthal, [0, 2pi)

  Vec3 cartesian() const {
    // + 0.0 collapses negative zeros out of the emitted coordinates
    return {std::sin(alpha) * std::cos(beta) + 0.0, std::sin(alpha) * std::sin(beta) + 0.0,
            std::cos(alpha) + 0.0};
  }
};

/// Eigen-system of the channel spin-1 density matrix, descending. For the
/// closed-form route, paper_labels records which of the three analytic
/// branches (1, 2: the |1,+-1> block; 3: the decoupled |1,0>) landed in each
/// slot; the descending order and the branch labels differ on most of the
/// (p, theta) square.
struct EigenSystem {
  std::array<double, 3> lambdas{};
  std::array<Eigen::Vector3cd, 3> vectors{};
  std::array<int, 3> paper_labels{};
  bool degenerate = false;  // some gap below 1e-10: eigenvectors basis-dependent
};

namespace detail {

inline void fix_real_phase(Eigen::Vector3cd& v) {
  int imax = 0;
  double best = 0.0;
  for (int i = 0; i < 3; ++i)
    if (std::abs(v(i)) > best) {
      best = std::abs(v(i));
      imax = i;
    }
  if (best > 0.0) v *= std::conj(v(imax)) / std::abs(v(imax));
}

}  // namespace detail

/// Closed-form eigenvalues and eigenvectors for equal magnitudes p and
/// half-angle theta. In the Special Lakin Frame |1,0> decouples with
/// eigenvalue (1-p^2)/N, and the |1,+-1> block carries
/// (1 + p^2 cos^2 theta +- sqrt(p^4 sin^4 theta + 4 p^2 cos^2 theta))/N,
/// N = 3 + p^2 cos 2theta. Eigenvectors come from the stable branch of the
/// symmetric 2x2 block, which stays accurate where the textbook expression
/// (the |1,-1> component proportional to (1 + p cos theta)^2 - lambda N)
/// cancels catastrophically near sin theta = 0.
inline EigenSystem channel_eigen_closed_form(double p, double theta) {
  if (!(p >= 0.0 && p <= 1.0 + kPolarizationTol))
    throw std::domain_error("channel_eigen_closed_form: p must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= M_PI + 1e-12))
    throw std::domain_error("channel_eigen_closed_form: theta must lie in [0, pi]");

  const double st = std::sin(theta), ct = std::cos(theta);
  const double p2 = p * p;
  const double n = 3.0 + p2 * std::cos(2.0 * theta);
  const double root = std::sqrt(p2 * p2 * st * st * st * st + 4.0 * p2 * ct * ct);

  struct Entry {
    double lambda;
    int label;
    Eigen::Vector3cd vec;
  };
  std::array<Entry, 3> entries;
  entries[0] = {(1.0 + p2 * ct * ct + root) / n, 1, {}};
  entries[1] = {(1.0 + p2 * ct * ct - root) / n, 2, {}};
  entries[2] = {(1.0 - p2) / n, 3, Eigen::Vector3cd(0.0, 1.0, 0.0)};

  // 2x2 block on span{|1,+1>, |1,-1>}.
  const double half_gap = 2.0 * p * ct / n;   // ((1+p ct)^2 - (1-p ct)^2) / 2N
  const double off = -p2 * st * st / n;       // <1,+1|rho|1,-1>
  const double r = std::hypot(half_gap, off);
  Eigen::Vector2d top;
  if (r < 1e-300) {
    top = Eigen::Vector2d(1.0, 0.0);  // p = 0: fully degenerate block
  } else if (half_gap >= 0.0) {
    top = Eigen::Vector2d(half_gap + r, off).normalized();
  } else {
    top = Eigen::Vector2d(off, r - half_gap).normalized();
  }
  entries[0].vec = Eigen::Vector3cd(top(0), 0.0, top(1));
  entries[1].vec = Eigen::Vector3cd(-top(1), 0.0, top(0));

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.lambda != b.lambda) return a.lambda > b.lambda;
    return a.label < b.label;
  });

  EigenSystem out;
  for (int i = 0; i < 3; ++i) {
    out.lambdas[static_cast<std::size_t>(i)] = entries[static_cast<std::size_t>(i)].lambda;
    out.paper_labels[static_cast<std::size_t>(i)] = entries[static_cast<std::size_t>(i)].label;
    Eigen::Vector3cd v = entries[static_cast<std::size_t>(i)].vec;
    detail::fix_real_phase(v);
    out.vectors[static_cast<std::size_t>(i)] = v;
  }
  out.degenerate = out.lambdas[0] - out.lambdas[1] < kDegeneracyGap ||
                   out.lambdas[1] - out.lambdas[2] < kDegeneracyGap;
  return out;
}

/// Majorana polynomial of a normalized spin-j state given as amplitudes
/// (C^j_j, C^j_{j-1}, ..., C^j_{-j}); the nominal degree is 2j. Written for
/// general degree, exercised here at j = 1.
inline ComplexPolynomial majorana_polynomial(const Eigen::VectorXcd& state) {
  const int dim = static_cast<int>(state.size());
  if (dim < 2) throw std::domain_error("majorana_polynomial: need at least spin 1/2");
  const double norm = state.norm();
  if (norm < 1e-12) throw std::domain_error("majorana_polynomial: null state");
  if (std::abs(norm - 1.0) > 1e-10)
    throw std::invalid_argument("majorana_polynomial: state must be normalized");

  const int two_j = dim - 1;
  ComplexPolynomial poly;
  poly.coeffs.resize(static_cast<std::size_t>(dim));
  for (int k = 0; k <= two_j; ++k) {
    const double binom = detail::fact(two_j) / (detail::fact(k) * detail::fact(two_j - k));
    const Complex d_k = state(two_j - k);  // d_{j+m} = C^j_m, state(0) = C^j_j
    poly.coeffs[static_cast<std::size_t>(k)] =
        ((k % 2 == 0) ? 1.0 : -1.0) * std::sqrt(binom) * d_k;
  }
  return poly;
}

/// Stellar points of a normalized spin-j state: one Bloch direction per
/// polynomial root, alpha = 2 atan|Z|, beta = arg Z mod 2pi; roots at
/// infinity map to the south pole. Deterministic (alpha, beta) ordering.
inline std::vector<BlochPoint> stellar_points(const Eigen::VectorXcd& state) {
  const PolyRoots roots = poly_roots(majorana_polynomial(state));
  std::vector<BlochPoint> points;
  points.reserve(static_cast<std::size_t>(state.size()) - 1);
  for (int i = 0; i < roots.roots_at_infinity; ++i) points.push_back({M_PI, 0.0});
  for (const Complex& z : roots.finite_roots) {
    BlochPoint pt;
    pt.alpha = 2.0 * std::atan(std::abs(z));
    pt.beta = std::arg(z);
    if (pt.beta < 0.0) pt.beta += 2.0 * M_PI;
    if (pt.beta == 0.0 || pt.beta >= 2.0 * M_PI) pt.beta = 0.0;
    if (pt.alpha <= 1e-12 || pt.alpha >= M_PI - 1e-12) pt.beta = 0.0;
    points.push_back(pt);
  }
  std::sort(points.begin(), points.end(), [](const BlochPoint& a, const BlochPoint& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.beta < b.beta;
  });
  return points;
}

/// Spinor angles of the closed-form channel eigenvectors, for the analytic
/// branches 1 and 2. Branch 1 sits in the x0-z0 plane, (2 atan sqrt|x|, 0)
/// and (2 atan sqrt|x|, pi) with x = ((1 + p cos theta)^2 - lambda_1 N) /
/// (p^2 sin^2 theta); branch 2 sits in the y0-z0 plane at beta = pi/2, 3pi/2
/// with y built from lambda_2. Requires p > 0 and sin theta != 0.
inline std::array<BlochPoint, 2> channel_spinor_angles(double p, double theta, int which) {
  if (which != 1 && which != 2)
    throw std::invalid_argument("channel_spinor_angles: which must be 1 or 2");
  if (!(p > 0.0 && p <= 1.0 + kPolarizationTol))
    throw std::domain_error("channel_spinor_angles: p must lie in (0, 1]");
  const double st = std::sin(theta);
  if (!(theta >= 0.0 && theta <= M_PI + 1e-12) || st <= 1e-12)
    throw std::domain_error(
        "channel_spinor_angles: degenerate geometry (sin theta = 0); use stellar_points on "
        "the closed-form eigenvector");

  const double ct = std::cos(theta);
  const double p2 = p * p;
  const double n = 3.0 + p2 * std::cos(2.0 * theta);
  const double root = std::sqrt(p2 * p2 * st * st * st * st + 4.0 * p2 * ct * ct);
  const double lambda = (1.0 + p2 * ct * ct + (which == 1 ? root : -root)) / n;
  const double ratio = ((1.0 + p * ct) * (1.0 + p * ct) - lambda * n) / (p2 * st * st);
  const double alpha = 2.0 * std::atan(std::sqrt(std::abs(ratio)));
  if (which == 1) return {BlochPoint{alpha, 0.0}, BlochPoint{alpha, M_PI}};
  return {BlochPoint{alpha, 0.5 * M_PI}, BlochPoint{alpha, 1.5 * M_PI}};
}

/// Per-eigenvector stellar points with eigenvalue weights, from a numerical
/// eigendecomposition. With a degenerate spectrum (gap < 1e-10) the point
/// sets are basis-dependent and the flag says so.
struct Constellation {
  struct Entry {
    double lambda = 0.0;
    std::array<BlochPoint, 2> points{};
  };
  std::array<Entry, 3> entries{};  // descending eigenvalue order
  bool degenerate = false;
};

inline Constellation constellation(const CMatrix& rho1) {
  if (rho1.rows() != 3 || rho1.cols() != 3 || !is_hermitian(rho1, 1e-10) ||
      std::abs(rho1.trace() - 1.0) > 1e-8)
    throw std::invalid_argument("constellation: input is not a valid spin-1 state");
  const HermitianEigen es = eig_hermitian(rho1);
  Constellation out;
  for (int i = 0; i < 3; ++i) {
    auto& entry = out.entries[static_cast<std::size_t>(i)];
    entry.lambda = es.values(i);
    const std::vector<BlochPoint> pts = stellar_points(es.vectors.col(i));
    entry.points = {pts[0], pts[1]};
  }
  out.degenerate = es.values(0) - es.values(1) < kDegeneracyGap ||
                   es.values(1) - es.values(2) < kDegeneracyGap;
  return out;
}

}  // namespace spinchannel
