#pragma once

// Entanglement of the channel spin-1 state. Primary criterion: negativity of
// the covariance matrix C_ij = <s1i s2j> - <s1i><s2j>, necessary and
// sufficient for symmetric (triplet-supported) two-qubit states. Every
// verdict also computes the Peres-Horodecki partial-transpose eigenvalue, so
// each call doubles as a cross-check of the two criteria.

#include <cmath>
#include <vector>

#include "spinchannel/channel_state.hpp"
#include "spinchannel/cmatrix.hpp"

namespace spinchannel {

inline constexpr double kEntangleTol = 1e-10;

/// Real 3x3 covariance matrix over the Pauli axes.
struct CovarianceMatrix {
  Eigen::Matrix3d entries;

  /// Smallest eigenvalue of the symmetric part.
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(
        Eigen::Matrix3d(0.5 * (entries + entries.transpose())), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
};

/// Lift a spin-1 state to the two-qubit state supported on the triplet
/// subspace; inverse of triplet_projection for weight-one states.
inline CMatrix symmetric_embedding(const CMatrix& rho1) {
  if (rho1.rows() != 3 || rho1.cols() != 3 || !is_hermitian(rho1, 1e-10) ||
      std::abs(rho1.trace() - 1.0) > 1e-8)
    throw std::invalid_argument("symmetric_embedding: input is not a valid spin-1 state");
  const CMatrix& v = triplet_isometry();
  return v * rho1 * v.adjoint();
}

namespace detail {

struct PauliKron {
  std::array<CMatrix, 3> first;   // sigma_i (x) I
  std::array<CMatrix, 3> second;  // I (x) sigma_j
  std::array<std::array<CMatrix, 3>, 3> both;  // sigma_i (x) sigma_j
};

inline const PauliKron& pauli_kron() {
  static const PauliKron tables = [] {
    PauliKron t;
    const CMatrix id = CMatrix::Identity(2, 2);
    const std::array<CMatrix, 3> sigma = {pauli('x'), pauli('y'), pauli('z')};
    for (int i = 0; i < 3; ++i) {
      t.first[static_cast<std::size_t>(i)] = kron(sigma[static_cast<std::size_t>(i)], id);
      t.second[static_cast<std::size_t>(i)] = kron(id, sigma[static_cast<std::size_t>(i)]);
      for (int j = 0; j < 3; ++j)
        t.both[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            kron(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
    }
    return t;
  }();
  return tables;
}

inline void require_two_qubit_state(const CMatrix& rho, const char* who) {
  if (rho.rows() != 4 || rho.cols() != 4 || !is_hermitian(rho, 1e-10) ||
      std::abs(rho.trace() - 1.0) > 1e-8)
    throw std::invalid_argument(std::string(who) + ": input is not a valid two-qubit state");
}

}  // namespace detail

/// C_ij = Tr(rho sigma_i (x) sigma_j) - Tr(rho sigma_i (x) I) Tr(rho I (x) sigma_j).
inline CovarianceMatrix covariance_matrix(const CMatrix& rho) {
  detail::require_two_qubit_state(rho, "covariance_matrix");
  const auto& pk = detail::pauli_kron();
  std::array<double, 3> m1, m2;
  for (int i = 0; i < 3; ++i) {
    m1[static_cast<std::size_t>(i)] = (rho * pk.first[static_cast<std::size_t>(i)]).trace().real();
    m2[static_cast<std::size_t>(i)] = (rho * pk.second[static_cast<std::size_t>(i)]).trace().real();
  }
  CovarianceMatrix c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c.entries(i, j) =
          (rho * pk.both[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]).trace().real() -
          m1[static_cast<std::size_t>(i)] * m2[static_cast<std::size_t>(j)];
  return c;
}

/// Canonical covariance diagonals for equal magnitudes p in the Special
/// Lakin Frame (N = 3 + p^2 cos 2theta):
///   Cxx = (1 - p^2 (1 + 2 sin^2 theta)) / N
///   Cyy = (1 - p^2 cos 2theta) / N
///   Czz = (1 + p^2 (1 + 2 cos^2 theta)) / N - (4 p cos theta / N)^2
/// Valid over theta in [0, pi]; the denominator never drops below 2.
struct CanonicalDiagonals {
  double cxx, cyy, czz;
};

inline CanonicalDiagonals canonical_diagonals(double p, double theta) {
  if (!(p >= 0.0 && p <= 1.0 + kPolarizationTol))
    throw std::domain_error("canonical_diagonals: p must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= M_PI + 1e-12))
    throw std::domain_error("canonical_diagonals: theta must lie in [0, pi]");
  const double p2 = p * p;
  const double c2 = std::cos(2.0 * theta);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double n = 3.0 + p2 * c2;
  const double czz_mean = 4.0 * p * ct / n;
  return {(1.0 - p2 * (1.0 + 2.0 * st * st)) / n, (1.0 - p2 * c2) / n,
          (1.0 + p2 * (1.0 + 2.0 * ct * ct)) / n - czz_mean * czz_mean};
}

/// Partial transpose over the given subsystem (1 or 2).
inline CMatrix partial_transpose(const CMatrix& rho, int subsystem = 2) {
  detail::require_two_qubit_state(rho, "partial_transpose");
  if (subsystem != 1 && subsystem != 2)
    throw std::domain_error("partial_transpose: subsystem must be 1 or 2");
  CMatrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) {
          if (subsystem == 2)
            out(2 * i + k, 2 * j + l) = rho(2 * i + l, 2 * j + k);
          else
            out(2 * i + k, 2 * j + l) = rho(2 * j + k, 2 * i + l);
        }
  return out;
}

/// Smallest eigenvalue of the partial transpose over subsystem 2; negative
/// iff entangled (two-qubit PPT is necessary and sufficient).
inline double ppt_min_eigenvalue(const CMatrix& rho) {
  const CMatrix pt = partial_transpose(rho, 2);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(0.5 * (pt + pt.adjoint())),
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

struct EntanglementVerdict {
  double cov_min_eig = 0.0;
  double ppt_min_eig = 0.0;
  bool entangled = false;  // covariance criterion: cov_min_eig < -tol
  bool boundary = false;   // |cov_min_eig| <= tol: too close to call entangled
  bool criterion_agreement = true;  // signs match whenever both exceed tol
};

/// Verdict for a spin-1 state via its triplet embedding.
inline EntanglementVerdict verdict_from_spin1(const CMatrix& rho1, double tol = kEntangleTol) {
  if (!(tol > 0.0)) throw std::domain_error("verdict: tol must be positive");
  const CMatrix embedded = symmetric_embedding(rho1);
  EntanglementVerdict v;
  v.cov_min_eig = covariance_matrix(embedded).min_eigenvalue();
  v.ppt_min_eig = ppt_min_eigenvalue(embedded);
  v.entangled = v.cov_min_eig < -tol;
  v.boundary = std::abs(v.cov_min_eig) <= tol;
  if (std::abs(v.cov_min_eig) > tol && std::abs(v.ppt_min_eig) > tol)
    v.criterion_agreement = (v.cov_min_eig < 0.0) == (v.ppt_min_eig < 0.0);
  return v;
}

/// Full pipeline: product state -> triplet projection -> embedding ->
/// covariance criterion, with the PPT eigenvalue recorded alongside.
inline EntanglementVerdict verdict(const ChannelConfig& cfg, double tol = kEntangleTol) {
  return verdict_from_spin1(triplet_projection(product_state(cfg)).rho1, tol);
}

/// Maximal theta-interval(s) in [0, pi/2] where the covariance verdict is
/// entangled, at fixed equal magnitude p.
struct ThetaInterval {
  double lo, hi;
};

/// Scan theta in [0, pi/2] at the given resolution and refine every boundary
/// by bisection on cov_min_eig (continuous in theta) to 1e-10.
inline std::vector<ThetaInterval> entangled_theta_intervals(double p, int resolution,
                                                            double tol = kEntangleTol) {
  if (!(p >= 0.0 && p <= 1.0 + kPolarizationTol))
    throw std::domain_error("entangled_theta_intervals: p must lie in [0, 1]");
  if (resolution < 100)
    throw std::domain_error("entangled_theta_intervals: resolution must be at least 100");
  if (!(tol > 0.0)) throw std::domain_error("entangled_theta_intervals: tol must be positive");

  const double hi_theta = 0.5 * M_PI;
  const auto cov_min = [&](double theta) {
    return verdict(slf_config(p, theta), tol).cov_min_eig;
  };
  const auto grid_theta = [&](int i) {
    return i == resolution - 1 ? hi_theta
                               : static_cast<double>(i) * hi_theta / (resolution - 1);
  };

  std::vector<bool> entangled(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i)
    entangled[static_cast<std::size_t>(i)] = cov_min(grid_theta(i)) < -tol;

  // Bisect between a non-entangled point (f >= -tol) and an entangled one.
  const auto refine = [&](double theta_out, double theta_in) {
    while (std::abs(theta_in - theta_out) > 1e-10) {
      const double mid = 0.5 * (theta_out + theta_in);
      (cov_min(mid) < -tol ? theta_in : theta_out) = mid;
    }
    return 0.5 * (theta_out + theta_in);
  };

  std::vector<ThetaInterval> intervals;
  int i = 0;
  while (i < resolution) {
    if (!entangled[static_cast<std::size_t>(i)]) {
      ++i;
      continue;
    }
    int run_end = i;
    while (run_end + 1 < resolution && entangled[static_cast<std::size_t>(run_end + 1)]) ++run_end;
    ThetaInterval interval{};
    interval.lo = (i == 0) ? 0.0 : refine(grid_theta(i - 1), grid_theta(i));
    interval.hi =
        (run_end == resolution - 1) ? hi_theta : refine(grid_theta(run_end + 1), grid_theta(run_end));
    intervals.push_back(interval);
    i = run_end + 1;
  }
  return intervals;
}

}  // namespace spinchannel
