#pragma once

// The physical objects of the channel spin-1 construction: qubit density
// matrices from polarization vectors, their tensor product, the projection
// onto the spin-1 (triplet) subspace, statistical tensors t^k_q computed two
// independent ways, and the Special Lakin Frame.
//
// Basis conventions, used everywhere:
//   spin-1:     |1,+1>, |1,0>, |1,-1>
//   two qubits: |uu>, |ud>, |du>, |dd>   (subsystem 1 is the slow index)
//   triplet embedding: |1,+1> = |uu>, |1,0> = (|ud>+|du>)/sqrt(2), |1,-1> = |dd>

#include <cmath>
#include <utility>

#include "spinchannel/cmatrix.hpp"
#include "spinchannel/spin_algebra.hpp"

namespace spinchannel {

inline constexpr double kPolarizationTol = 1e-12;
inline constexpr double kTripletWeightCutoff = 1e-14;

/// A physical polarization vector, |p| <= 1 (up to 1e-12 slack for round-off).
class PolarizationVector {
 public:
  explicit PolarizationVector(const Vec3& v) : v_(v) {
    if (!v.allFinite() || v.norm() > 1.0 + kPolarizationTol)
      throw std::domain_error("PolarizationVector: unphysical polarization (|p| > 1)");
  }
  PolarizationVector(double x, double y, double z) : PolarizationVector(Vec3(x, y, z)) {}

  const Vec3& vec() const { return v_; }
  double norm() const { return v_.norm(); }

 private:
  Vec3 v_;
};

/// Beam (1) and target (2) polarizations.
struct ChannelConfig {
  PolarizationVector p1;
  PolarizationVector p2;
};

/// The scalar (p, theta) parametrization: both magnitudes p, vectors opening
/// an angle 2*theta symmetrically about the lab z axis and lying in the xz
/// plane. By construction the lab frame coincides with the Special Lakin
/// Frame, so closed forms in (p, theta) and the vector pipeline are directly
/// comparable.
inline ChannelConfig slf_config(double p, double theta) {
  if (!(p >= 0.0 && p <= 1.0 + kPolarizationTol))
    throw std::domain_error("slf_config: p must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= M_PI + 1e-12))
    throw std::domain_error("slf_config: theta must lie in [0, pi]");
  const double s = std::sin(theta), c = std::cos(theta);
  return {PolarizationVector(p * s, 0.0, p * c), PolarizationVector(-p * s, 0.0, p * c)};
}

/// rho = (I + sigma . p)/2. Hermitian, trace one, PSD for |p| <= 1.
inline CMatrix qubit_density(const PolarizationVector& p) {
  static const CMatrix sx = pauli('x'), sy = pauli('y'), sz = pauli('z');
  return 0.5 * (CMatrix::Identity(2, 2) + p.vec().x() * sx + p.vec().y() * sy +
                p.vec().z() * sz);
}

/// rho_c = rho(1) (x) rho(2): the uncorrelated beam-target state.
inline CMatrix product_state(const ChannelConfig& cfg) {
  return kron(qubit_density(cfg.p1), qubit_density(cfg.p2));
}

/// Isometry from the spin-1 basis into the two-qubit triplet subspace
/// (4x3, columns |1,+1>, |1,0>, |1,-1>).
inline const CMatrix& triplet_isometry() {
  static const CMatrix v = [] {
    CMatrix m = CMatrix::Zero(4, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0 / std::sqrt(2.0);
    m(2, 1) = 1.0 / std::sqrt(2.0);
    m(3, 2) = 1.0;
    return m;
  }();
  return v;
}

struct TripletProjection {
  CMatrix rho1;   // 3x3 spin-1 state, trace renormalized to one
  double weight;  // Tr(Pi_S rho_c) before renormalization
};

/// Project a two-qubit state onto the triplet subspace and renormalize.
/// For product states the weight is (3 + p1.p2)/4, never below 1/2; a weight
/// under 1e-14 (a pure singlet) has no spin-1 content and is an error.
inline TripletProjection triplet_projection(const CMatrix& rho_c) {
  if (rho_c.rows() != 4 || rho_c.cols() != 4)
    throw std::invalid_argument("triplet_projection: expected a 4x4 matrix");
  if (!is_hermitian(rho_c, 1e-10) || std::abs(rho_c.trace() - 1.0) > 1e-8)
    throw std::invalid_argument("triplet_projection: input is not a valid two-qubit state");
  const CMatrix& v = triplet_isometry();
  CMatrix r3 = v.adjoint() * rho_c * v;
  const double weight = r3.trace().real();
  if (weight < kTripletWeightCutoff)
    throw std::domain_error("triplet_projection: projection null (pure singlet input)");
  r3 /= weight;
  return {std::move(r3), weight};
}

/// Statistical tensors t^k_q of a spin-1 state, k <= 2, |q| <= k.
/// Invariants: t^0_0 = 1 and t^k_q^* = (-1)^q t^k_{-q}.
class StatTensors {
 public:
  Complex t(int k, int q) const {
    if (k < 0 || k > 2 || std::abs(q) > k)
      throw std::out_of_range("StatTensors::t: (k, q) out of range");
    return values_[static_cast<std::size_t>(k * k + k + q)];
  }

  void set(int k, int q, Complex value) {
    if (k < 0 || k > 2 || std::abs(q) > k)
      throw std::out_of_range("StatTensors::set: (k, q) out of range");
    values_[static_cast<std::size_t>(k * k + k + q)] = value;
  }

 private:
  std::array<Complex, 9> values_{};
};

inline const TensorOperatorSet& spin1_ops() {
  static const TensorOperatorSet ops = tensor_ops(1.0);
  return ops;
}

/// t^k_q = Tr(rho tau^k_q), the first-principles route.
inline StatTensors stat_tensors_from_state(const CMatrix& rho1) {
  if (rho1.rows() != 3 || rho1.cols() != 3 || !is_hermitian(rho1, 1e-10) ||
      std::abs(rho1.trace() - 1.0) > 1e-8)
    throw std::invalid_argument("stat_tensors_from_state: input is not a valid spin-1 state");
  StatTensors out;
  for (int k = 0; k <= 2; ++k)
    for (int q = -k; q <= k; ++q) out.set(k, q, (rho1 * spin1_ops().op(k, q)).trace());
  return out;
}

/// Closed forms for the channel spin-1 tensors:
///   t^1_q = sqrt(6) (p_q(1) + p_q(2)) / (3 + p1.p2)
///   t^2_q = 2 sqrt(3) (p(1) (x) p(2))^2_q / (3 + p1.p2)
inline StatTensors stat_tensors_closed_form(const ChannelConfig& cfg) {
  const double den = 3.0 + cfg.p1.vec().dot(cfg.p2.vec());
  if (0.25 * den < kTripletWeightCutoff)
    throw std::domain_error("stat_tensors_closed_form: projection null");
  const SphericalComponents s1 = spherical_components(cfg.p1.vec());
  const SphericalComponents s2 = spherical_components(cfg.p2.vec());
  StatTensors out;
  out.set(0, 0, 1.0);
  for (int q = -1; q <= 1; ++q) out.set(1, q, std::sqrt(6.0) * (s1(q) + s2(q)) / den);
  for (int q = -2; q <= 2; ++q)
    out.set(2, q, 2.0 * std::sqrt(3.0) * rank2_product(cfg.p1.vec(), cfg.p2.vec(), q) / den);
  return out;
}

/// Rebuild the spin-1 density matrix from its tensors,
/// rho = (1/3) sum_{k,q} t^k_q tau^k_q^dag. Completeness of the tensor basis
/// makes this the exact inverse of stat_tensors_from_state.
inline CMatrix state_from_tensors(const StatTensors& t) {
  CMatrix rho = CMatrix::Zero(3, 3);
  for (int k = 0; k <= 2; ++k)
    for (int q = -k; q <= k; ++q) rho += t.t(k, q) * spin1_ops().op(k, q).adjoint();
  return rho / 3.0;
}

/// Right-handed orthonormal triad of the Special Lakin Frame.
struct Frame {
  Vec3 x0, y0, z0;
  bool degenerate = false;  // collinear or vanishing polarizations: x0 is a
                            // deterministic completion, not a physical azimuth
};

namespace detail {

// Deterministic unit vector orthogonal to z: Gram-Schmidt against lab x,
// falling back to lab y when z is (nearly) along x.
inline Vec3 orthogonal_completion(const Vec3& z) {
  Vec3 cand = Vec3::UnitX() - Vec3::UnitX().dot(z) * z;
  if (cand.norm() < 1e-6) cand = Vec3::UnitY() - Vec3::UnitY().dot(z) * z;
  return cand.normalized();
}

}  // namespace detail

/// Construct the Special Lakin Frame: z0 along p1 + p2, x0 in the (p1, p2)
/// plane with p1 at azimuth 0 (p2 then sits at azimuth pi automatically,
/// since the transverse parts of p1 and p2 cancel), y0 = z0 x x0. Degenerate
/// inputs (collinear vectors, vanishing sum) get a deterministic fallback
/// frame and the degenerate flag.
inline Frame slf_frame(const ChannelConfig& cfg) {
  Frame f;
  const Vec3 sum = cfg.p1.vec() + cfg.p2.vec();
  if (sum.norm() >= 1e-12) {
    f.z0 = sum.normalized();
  } else if (cfg.p1.norm() >= 1e-14) {
    f.z0 = cfg.p1.vec().normalized();  // antiparallel equal magnitudes
    f.degenerate = true;
  } else {
    f.z0 = Vec3::UnitZ();
    f.degenerate = true;
  }

  const Vec3 transverse = cfg.p1.vec() - cfg.p1.vec().dot(f.z0) * f.z0;
  if (transverse.norm() >= 1e-12) {
    f.x0 = transverse.normalized();
  } else {
    f.x0 = detail::orthogonal_completion(f.z0);
    f.degenerate = true;  // no unique polarization plane
  }
  f.y0 = f.z0.cross(f.x0);
  return f;
}

/// Cartesian polarization components in the Special Lakin Frame for given
/// magnitudes and half-angle theta (2*theta is the angle between the
/// vectors): p_x0(1) = p1 p2 sin(2 theta)/|p1+p2| = -p_x0(2), p_y0 = 0,
/// p_z0(i) = (p(i)^2 + p1 p2 cos(2 theta))/|p1+p2|.
struct SlfComponents {
  double px1, pz1, px2, pz2;
};

inline SlfComponents slf_components(double p_mag1, double p_mag2, double theta) {
  if (!(p_mag1 >= 0.0 && p_mag1 <= 1.0 + kPolarizationTol) ||
      !(p_mag2 >= 0.0 && p_mag2 <= 1.0 + kPolarizationTol))
    throw std::domain_error("slf_components: magnitudes must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= 0.5 * M_PI + 1e-12))
    throw std::domain_error("slf_components: theta must lie in [0, pi/2]");
  const double c2 = std::cos(2.0 * theta);
  const double sum_norm =
      std::sqrt(std::max(0.0, p_mag1 * p_mag1 + p_mag2 * p_mag2 + 2.0 * p_mag1 * p_mag2 * c2));
  if (sum_norm < 1e-14)
    throw std::domain_error("slf_components: frame degenerate (p1 + p2 vanishes)");
  const double px1 = p_mag1 * p_mag2 * std::sin(2.0 * theta) / sum_norm;
  return {px1, (p_mag1 * p_mag1 + p_mag1 * p_mag2 * c2) / sum_norm, -px1,
          (p_mag2 * p_mag2 + p_mag1 * p_mag2 * c2) / sum_norm};
}

}  // namespace spinchannel
