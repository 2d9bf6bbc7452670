// spinchannel CLI: entanglement analysis and Majorana constellations for the
// channel spin-1 system built from two polarized spin-1/2 subsystems.
//
// Subcommands: state, sweep, figure, majorana. Exit codes: 0 separable (or
// plain success), 3 entangled, 2 invalid input, 1 I/O or internal failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinchannel/sweep_io.hpp"

namespace {

using namespace spinchannel;

struct Range {
  double lo = 0.0, hi = 0.0;
  std::optional<int> steps;
};

// "lo:hi" or "lo:hi:steps".
Range parse_range(const std::string& text, const char* what) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 2 && parts.size() != 3)
    throw std::domain_error(std::string(what) + ": expected lo:hi or lo:hi:steps, got '" +
                            text + "'");
  Range r;
  try {
    r.lo = std::stod(parts[0]);
    r.hi = std::stod(parts[1]);
    if (parts.size() == 3) r.steps = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw std::domain_error(std::string(what) + ": could not parse '" + text + "'");
  }
  return r;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) throw std::ios_base::failure("cannot open output file '" + path + "'");
  return ofs;
}

constexpr double kDegToRad = M_PI / 180.0;

int run(int argc, char** argv) {
  CLI::App app{"channel spin-1 entanglement and Majorana constellation toolkit"};
  app.require_subcommand(1);

  // --- state ---------------------------------------------------------------
  auto* state = app.add_subcommand(
      "state", "evaluate one configuration; exit code 0 separable, 3 entangled");
  std::vector<double> p1_vec, p2_vec;
  double p_scalar = 0.0, theta_scalar = 0.0, tol = kEntangleTol;
  bool degrees = false;
  std::string out_path, format = "json";
  auto* opt_p1 = state->add_option("--p1", p1_vec, "beam polarization x,y,z")
                     ->delimiter(',')
                     ->expected(3);
  auto* opt_p2 = state->add_option("--p2", p2_vec, "target polarization x,y,z")
                     ->delimiter(',')
                     ->expected(3);
  auto* opt_p = state->add_option("--p", p_scalar, "common polarization magnitude");
  auto* opt_theta =
      state->add_option("--theta", theta_scalar, "half-angle between the vectors (radians)");
  state->add_flag("--degrees", degrees, "interpret angles in degrees");
  state->add_option("--tol", tol, "entanglement tolerance")->capture_default_str();
  state->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  state->add_option("--out", out_path, "output file (default: stdout)");

  // --- sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "grid sweep over (p, theta), CSV output");
  std::string p_range_text = "0:1", theta_range_text;
  int default_steps = 101;
  double sweep_tol = kEntangleTol;
  bool sweep_degrees = false;
  std::string sweep_out;
  sweep->add_option("--p", p_range_text, "p range lo:hi[:steps]")->capture_default_str();
  sweep->add_option("--theta", theta_range_text, "theta range lo:hi[:steps], radians")
      ->required();
  sweep->add_option("--steps", default_steps, "steps for ranges without their own")
      ->capture_default_str();
  sweep->add_option("--tol", sweep_tol, "entanglement tolerance")->capture_default_str();
  sweep->add_flag("--degrees", sweep_degrees, "interpret angles in degrees");
  sweep->add_option("--out", sweep_out, "output CSV path")->required();

  // --- figure --------------------------------------------------------------
  auto* figure = app.add_subcommand("figure", "emit one of the four figure datasets");
  int which = 0;
  std::string figure_out;
  figure->add_option("which", which, "figure number 1..4")->required();
  figure->add_option("--out", figure_out, "output CSV path")->required();

  // --- majorana ------------------------------------------------------------
  auto* majorana = app.add_subcommand("majorana", "stellar constellation report, JSON output");
  double mj_p = 0.0, mj_theta = 0.0;
  bool mj_degrees = false;
  std::string mj_out;
  majorana->add_option("--p", mj_p, "common polarization magnitude")->required();
  majorana->add_option("--theta", mj_theta, "half-angle between the vectors (radians)")
      ->required();
  majorana->add_flag("--degrees", mj_degrees, "interpret angles in degrees");
  majorana->add_option("--out", mj_out, "output JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  if (state->parsed()) {
    ChannelConfig cfg = [&] {
      const bool have_vectors = *opt_p1 || *opt_p2;
      const bool have_scalars = *opt_p || *opt_theta;
      if (have_vectors == have_scalars)
        throw std::domain_error("state: give either --p1 and --p2, or --p and --theta");
      if (have_vectors) {
        if (!*opt_p1 || !*opt_p2) throw std::domain_error("state: need both --p1 and --p2");
        return ChannelConfig{PolarizationVector(p1_vec[0], p1_vec[1], p1_vec[2]),
                             PolarizationVector(p2_vec[0], p2_vec[1], p2_vec[2])};
      }
      return slf_config(p_scalar, degrees ? theta_scalar * kDegToRad : theta_scalar);
    }();

    const nlohmann::ordered_json report = state_report_json(cfg, tol);
    const std::string text =
        format == "json" ? report.dump(2) + "\n" : state_report_csv(cfg, tol);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      open_output(out_path) << text;
    }
    return report["verdict"]["entangled"].get<bool>() ? 3 : 0;
  }

  if (sweep->parsed()) {
    const Range pr = parse_range(p_range_text, "--p");
    Range tr = parse_range(theta_range_text, "--theta");
    if (sweep_degrees) {
      tr.lo *= kDegToRad;
      tr.hi *= kDegToRad;
    }
    SweepSpec spec;
    spec.p_lo = pr.lo;
    spec.p_hi = pr.hi;
    spec.p_steps = pr.steps.value_or(default_steps);
    spec.theta_lo = tr.lo;
    spec.theta_hi = tr.hi;
    spec.theta_steps = tr.steps.value_or(default_steps);
    spec.tol = sweep_tol;
    auto ofs = open_output(sweep_out);
    write_sweep_csv(ofs, spec);
    return 0;
  }

  if (figure->parsed()) {
    auto ofs = open_output(figure_out);
    write_figure_csv(ofs, which);
    return 0;
  }

  if (majorana->parsed()) {
    const double theta = mj_degrees ? mj_theta * kDegToRad : mj_theta;
    open_output(mj_out) << majorana_report(mj_p, theta).dump(2) << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
