#pragma once

// Deterministic emitters behind the CLI: (p, theta) sweeps and the four
// figure datasets as CSV, single-configuration and constellation reports as
// JSON. Output is locale-free (std::to_chars), LF-terminated, and
// byte-identical across invocations for identical arguments.
//
// CSV schemas (also pinned by golden tests):
//   sweep:    p,theta,Cxx,Cyy,Czz,cov_min_eig,ppt_min_eig,lambda1,lambda2,lambda3,entangled
//   figure 1: p,theta,Cxx                      (101x101, theta in [0, pi])
//   figure 2: p,Cxx,Cyy,Czz                    (201 samples, theta = pi/4)
//   figure 3: theta_deg,Cxx_p0.5,Cxx_p0.7,Cxx_p0.9   (181 samples, 0..180 deg)
//   figure 4: p,theta_lo_rad,theta_hi_rad,theta_lo_deg,theta_hi_deg

#include <cassert>
#include <charconv>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spinchannel/channel_state.hpp"
#include "spinchannel/entanglement.hpp"
#include "spinchannel/majorana.hpp"

namespace spinchannel {

inline constexpr std::string_view kSweepCsvHeader =
    "p,theta,Cxx,Cyy,Czz,cov_min_eig,ppt_min_eig,lambda1,lambda2,lambda3,entangled";
inline constexpr std::string_view kFigure1CsvHeader = "p,theta,Cxx";
inline constexpr std::string_view kFigure2CsvHeader = "p,Cxx,Cyy,Czz";
inline constexpr std::string_view kFigure3CsvHeader = "theta_deg,Cxx_p0.5,Cxx_p0.7,Cxx_p0.9";
inline constexpr std::string_view kFigure4CsvHeader =
    "p,theta_lo_rad,theta_hi_rad,theta_lo_deg,theta_hi_deg";

/// 12 significant digits, '.' decimal point regardless of locale, "-0"
/// collapsed to "0".
inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0.0
  std::array<char, 32> buf;
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

struct SweepSpec {
  double p_lo = 0.0, p_hi = 1.0;
  int p_steps = 101;
  double theta_lo = 0.0, theta_hi = 0.5 * M_PI;
  int theta_steps = 101;
  double tol = kEntangleTol;
};

inline void validate(const SweepSpec& spec) {
  if (!(spec.p_lo <= spec.p_hi) || !(spec.theta_lo <= spec.theta_hi))
    throw std::domain_error("sweep: range lo must not exceed hi");
  if (spec.p_steps < 2 || spec.theta_steps < 2)
    throw std::domain_error("sweep: steps must be at least 2");
  if (!(spec.tol > 0.0)) throw std::domain_error("sweep: tol must be positive");
  if (spec.p_lo < 0.0 || spec.p_hi > 1.0 + kPolarizationTol)
    throw std::domain_error("sweep: p range must lie in [0, 1]");
  if (spec.theta_lo < 0.0 || spec.theta_hi > M_PI + 1e-12)
    throw std::domain_error("sweep: theta range must lie in [0, pi]");
}

struct SweepRecord {
  double p, theta;
  double cxx, cyy, czz;
  double cov_min_eig, ppt_min_eig;
  double lambda1, lambda2, lambda3;  // descending
  int entangled;
};

/// One grid point: canonical diagonals and closed-form eigenvalues, with the
/// covariance/PPT eigenvalues computed through the generic vector pipeline
/// so every row cross-checks the closed forms.
inline SweepRecord evaluate_record(double p, double theta, double tol = kEntangleTol) {
  const CanonicalDiagonals cd = canonical_diagonals(p, theta);
  const EntanglementVerdict v = verdict(slf_config(p, theta), tol);
  const EigenSystem es = channel_eigen_closed_form(p, theta);
  return {p,       theta,         cd.cxx,        cd.cyy,        cd.czz,       v.cov_min_eig,
          v.ppt_min_eig, es.lambdas[0], es.lambdas[1], es.lambdas[2], v.entangled ? 1 : 0};
}

namespace detail {

inline double grid_value(double lo, double hi, int steps, int i) {
  return i == steps - 1 ? hi : lo + static_cast<double>(i) * (hi - lo) / (steps - 1);
}

}  // namespace detail

/// Row-major sweep, p outer, theta inner.
inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  validate(spec);
  std::vector<SweepRecord> records;
  records.reserve(static_cast<std::size_t>(spec.p_steps) *
                  static_cast<std::size_t>(spec.theta_steps));
  for (int i = 0; i < spec.p_steps; ++i) {
    const double p = detail::grid_value(spec.p_lo, spec.p_hi, spec.p_steps, i);
    for (int j = 0; j < spec.theta_steps; ++j) {
      const double theta = detail::grid_value(spec.theta_lo, spec.theta_hi, spec.theta_steps, j);
      records.push_back(evaluate_record(p, theta, spec.tol));
#ifndef NDEBUG
      // debug builds spot-check emitted records against the module invariants
      if (records.size() % 37 == 1) {
        const SweepRecord& r = records.back();
        assert(std::abs(r.lambda1 + r.lambda2 + r.lambda3 - 1.0) <= 1e-10);
        assert(r.lambda1 >= r.lambda2 && r.lambda2 >= r.lambda3 && r.lambda3 >= -1e-12);
        assert(r.cyy >= -1e-12);
        assert(r.entangled == (r.cov_min_eig < -spec.tol ? 1 : 0));
      }
#endif
    }
  }
  return records;
}

inline void write_sweep_csv(std::ostream& os, const SweepSpec& spec) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRecord& r : run_sweep(spec)) {
    os << format_number(r.p) << ',' << format_number(r.theta) << ',' << format_number(r.cxx)
       << ',' << format_number(r.cyy) << ',' << format_number(r.czz) << ','
       << format_number(r.cov_min_eig) << ',' << format_number(r.ppt_min_eig) << ','
       << format_number(r.lambda1) << ',' << format_number(r.lambda2) << ','
       << format_number(r.lambda3) << ',' << r.entangled << '\n';
  }
}

/// Figure datasets 1..4 (see the schema block above).
inline void write_figure_csv(std::ostream& os, int which) {
  switch (which) {
    case 1: {
      os << kFigure1CsvHeader << '\n';
      for (int i = 0; i <= 100; ++i) {
        const double p = detail::grid_value(0.0, 1.0, 101, i);
        for (int j = 0; j <= 100; ++j) {
          const double theta = detail::grid_value(0.0, M_PI, 101, j);
          os << format_number(p) << ',' << format_number(theta) << ','
             << format_number(canonical_diagonals(p, theta).cxx) << '\n';
        }
      }
      break;
    }
    case 2: {
      os << kFigure2CsvHeader << '\n';
      for (int i = 0; i <= 200; ++i) {
        const double p = detail::grid_value(0.0, 1.0, 201, i);
        const CanonicalDiagonals cd = canonical_diagonals(p, 0.25 * M_PI);
        os << format_number(p) << ',' << format_number(cd.cxx) << ',' << format_number(cd.cyy)
           << ',' << format_number(cd.czz) << '\n';
      }
      break;
    }
    case 3: {
      os << kFigure3CsvHeader << '\n';
      for (int deg = 0; deg <= 180; ++deg) {
        const double theta = static_cast<double>(deg) * M_PI / 180.0;
        os << format_number(deg);
        for (const double p : {0.5, 0.7, 0.9})
          os << ',' << format_number(canonical_diagonals(p, theta).cxx);
        os << '\n';
      }
      break;
    }
    case 4: {
      os << kFigure4CsvHeader << '\n';
      for (const double p : {0.7, 0.9}) {
        for (const ThetaInterval& it : entangled_theta_intervals(p, 2001)) {
          os << format_number(p) << ',' << format_number(it.lo) << ',' << format_number(it.hi)
             << ',' << format_number(it.lo * 180.0 / M_PI) << ','
             << format_number(it.hi * 180.0 / M_PI) << '\n';
        }
      }
      break;
    }
    default:
      throw std::domain_error("figure: which must be 1, 2, 3 or 4");
  }
}

namespace detail {

inline nlohmann::ordered_json json_vec3(const Vec3& v) {
  return nlohmann::ordered_json::array({v.x(), v.y(), v.z()});
}

inline nlohmann::ordered_json json_matrix(const CMatrix& m) {
  nlohmann::ordered_json re = nlohmann::ordered_json::array();
  nlohmann::ordered_json im = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row_re = nlohmann::ordered_json::array();
    nlohmann::ordered_json row_im = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row_re.push_back(m(i, j).real());
      row_im.push_back(m(i, j).imag());
    }
    re.push_back(row_re);
    im.push_back(row_im);
  }
  return {{"re", re}, {"im", im}};
}

inline nlohmann::ordered_json json_point(const BlochPoint& pt) {
  const Vec3 c = pt.cartesian();
  return {{"alpha", pt.alpha}, {"beta", pt.beta}, {"cartesian", json_vec3(c)}};
}

inline nlohmann::ordered_json json_frame(const Frame& f) {
  return {{"x0", json_vec3(f.x0)},
          {"y0", json_vec3(f.y0)},
          {"z0", json_vec3(f.z0)},
          {"degenerate", f.degenerate}};
}

inline nlohmann::ordered_json json_constellation(const Constellation& cons) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& entry : cons.entries) {
    arr.push_back({{"lambda", entry.lambda},
                   {"points", nlohmann::ordered_json::array(
                                  {json_point(entry.points[0]), json_point(entry.points[1])})}});
  }
  return arr;
}

}  // namespace detail

/// Constellation report for the (p, theta) channel state: eigen weights,
/// 3 x 2 stellar points with Bloch cartesians, the frame, and both
/// degeneracy flags. Runs the numerical pipeline end to end.
inline nlohmann::ordered_json majorana_report(double p, double theta) {
  const ChannelConfig cfg = slf_config(p, theta);
  const Frame frame = slf_frame(cfg);
  const TripletProjection proj = triplet_projection(product_state(cfg));
  const Constellation cons = constellation(proj.rho1);

  nlohmann::ordered_json j;
  j["p"] = p;
  j["theta"] = theta;
  j["lambdas"] = {cons.entries[0].lambda, cons.entries[1].lambda, cons.entries[2].lambda};
  j["degenerate_spectrum"] = cons.degenerate;
  j["frame"] = detail::json_frame(frame);
  j["constellations"] = detail::json_constellation(cons);
  return j;
}

/// Full single-configuration report: density matrices, statistical tensors,
/// frame, covariance matrix, verdict, eigen-system and constellation.
inline nlohmann::ordered_json state_report_json(const ChannelConfig& cfg,
                                                double tol = kEntangleTol) {
  const CMatrix rho_beam = qubit_density(cfg.p1);
  const CMatrix rho_target = qubit_density(cfg.p2);
  const CMatrix rho_c = product_state(cfg);
  const TripletProjection proj = triplet_projection(rho_c);
  const StatTensors tensors = stat_tensors_from_state(proj.rho1);
  const Frame frame = slf_frame(cfg);
  const CMatrix embedded = symmetric_embedding(proj.rho1);
  const CovarianceMatrix cov = covariance_matrix(embedded);
  const EntanglementVerdict v = verdict_from_spin1(proj.rho1, tol);
  const HermitianEigen es = eig_hermitian(proj.rho1);
  const Constellation cons = constellation(proj.rho1);

  nlohmann::ordered_json j;
  j["input"] = {{"p1", detail::json_vec3(cfg.p1.vec())},
                {"p2", detail::json_vec3(cfg.p2.vec())},
                {"tol", tol}};
  j["rho_beam"] = detail::json_matrix(rho_beam);
  j["rho_target"] = detail::json_matrix(rho_target);
  j["rho_product"] = detail::json_matrix(rho_c);
  j["triplet_weight"] = proj.weight;
  j["rho_spin1"] = detail::json_matrix(proj.rho1);

  nlohmann::ordered_json t;
  static constexpr const char* kTensorKeys[] = {"t00",  "t1m1", "t10",  "t1p1", "t2m2",
                                                "t2m1", "t20",  "t2p1", "t2p2"};
  int idx = 0;
  for (int k = 0; k <= 2; ++k)
    for (int q = -k; q <= k; ++q) {
      const Complex value = tensors.t(k, q);
      t[kTensorKeys[idx++]] = {value.real(), value.imag()};
    }
  j["stat_tensors"] = t;

  j["frame"] = detail::json_frame(frame);
  nlohmann::ordered_json cov_rows = nlohmann::ordered_json::array();
  for (int r = 0; r < 3; ++r)
    cov_rows.push_back({cov.entries(r, 0), cov.entries(r, 1), cov.entries(r, 2)});
  j["covariance"] = cov_rows;
  j["verdict"] = {{"cov_min_eig", v.cov_min_eig},
                  {"ppt_min_eig", v.ppt_min_eig},
                  {"entangled", v.entangled},
                  {"boundary", v.boundary},
                  {"criterion_agreement", v.criterion_agreement}};

  CMatrix vecs(3, 3);
  for (int i = 0; i < 3; ++i) vecs.col(i) = es.vectors.col(i);
  j["eigen"] = {{"lambdas", {es.values(0), es.values(1), es.values(2)}},
                {"vectors", detail::json_matrix(vecs)},
                {"degenerate",
                 es.values(0) - es.values(1) < kDegeneracyGap ||
                     es.values(1) - es.values(2) < kDegeneracyGap}};
  j["constellation"] = detail::json_constellation(cons);
  return j;
}

/// Key,value flattening of a report for the CSV output format: nested keys
/// joined with '.', array elements indexed, doubles rendered with
/// format_number, booleans as 0/1.
inline void flatten_csv(const nlohmann::ordered_json& node, const std::string& prefix,
                        std::string& out) {
  if (node.is_object()) {
    for (const auto& item : node.items())
      flatten_csv(item.value(), prefix.empty() ? item.key() : prefix + "." + item.key(), out);
  } else if (node.is_array()) {
    int i = 0;
    for (const auto& value : node) flatten_csv(value, prefix + "." + std::to_string(i++), out);
  } else {
    out += prefix;
    out += ',';
    if (node.is_number_float())
      out += format_number(node.get<double>());
    else if (node.is_boolean())
      out += node.get<bool>() ? "1" : "0";
    else if (node.is_number_integer())
      out += std::to_string(node.get<long long>());
    else
      out += node.get<std::string>();
    out += '\n';
  }
}

inline std::string state_report_csv(const ChannelConfig& cfg, double tol = kEntangleTol) {
  std::string out = "key,value\n";
  flatten_csv(state_report_json(cfg, tol), "", out);
  return out;
}

}  // namespace spinchannel
