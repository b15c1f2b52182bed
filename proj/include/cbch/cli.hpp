#pragma once

// Command-line front end. run() takes the full argument vector and two
// streams so the tests can drive it in-process; tools/cbch_cli.cpp is a thin
// wrapper around it.
//
// Exit codes: 0 success, 1 a verification residual above tolerance,
// 2 usage or solver error (error name printed on stderr).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cbch/errors.hpp"
#include "cbch/oracles.hpp"
#include "cbch/parity_lab.hpp"
#include "cbch/solver.hpp"
#include "cbch/trotter.hpp"

namespace cbch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Residual bound for the quadrature check reported by `solve`.
inline constexpr double kSymplecticTol = 1e-9;

/// Shortest round-trippable form with 17 significant digits; -0 prints as 0.
inline std::string fmt(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_number(std::optional<double> v) {
  return (v && std::isfinite(*v)) ? fmt(*v) : "null";
}

inline std::string json_string(std::string_view s) { return "\"" + std::string(s) + "\""; }

/// FockConfig with dim taken from BCH_FOCK_DIM when set.
inline FockConfig fock_config_from_env() {
  FockConfig cfg;
  if (const char* env = std::getenv("BCH_FOCK_DIM"); env && *env) {
    char* end = nullptr;
    const long d = std::strtol(env, &end, 10);
    if (*end != '\0' || d < 2 || d > 4096)
      throw Error(ErrorKind::InvalidArgument, std::string("BCH_FOCK_DIM is not a usable dimension: ") + env);
    cfg.dim = static_cast<int>(d);
  }
  cfg.validate();
  return cfg;
}

inline BranchPolicy parse_policy(const std::string& s) {
  if (s == "continuous") return BranchPolicy::CONTINUOUS;
  if (s == "force-main") return BranchPolicy::FORCE_MAIN;
  if (s == "force-second") return BranchPolicy::FORCE_SECOND;
  throw Error(ErrorKind::InvalidArgument, "unknown policy " + s);
}

namespace detail {

struct AngleFlags {
  std::optional<double> omega;
  std::optional<double> omega_pi;
  double eta = 0.0;

  ProductParams params() const {
    if (omega.has_value() == omega_pi.has_value())
      throw Error(ErrorKind::InvalidArgument, "give exactly one of --omega and --omega-pi");
    ProductParams p{omega ? *omega : *omega_pi * kPi, eta};
    p.validate();
    return p;
  }
};

inline void add_angle_flags(CLI::App* cmd, AngleFlags& f) {
  auto* o = cmd->add_option("--omega", f.omega, "phase-shift angle in radians");
  auto* op = cmd->add_option("--omega-pi", f.omega_pi, "phase-shift angle in multiples of pi");
  o->excludes(op);
  cmd->add_option("--eta", f.eta, "squeezing parameter")->required();
}

/// Opens path for writing, or returns nullptr for stdout ("" or "-").
inline std::unique_ptr<std::ofstream> open_output(const std::string& path) {
  if (path.empty() || path == "-") return nullptr;
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  return f;
}

// ---------------------------------------------------------------------------

struct SolveFlags {
  AngleFlags angle;
  std::string policy = "continuous";
  std::string format = "json";
};

inline int cmd_solve(const SolveFlags& f, std::ostream& out) {
  const ProductParams p = f.angle.params();
  const BranchPolicy policy = parse_policy(f.policy);
  const FockConfig cfg = fock_config_from_env();

  const RegionClass rc = classify(p);
  const AlgebraCoeffs c = solve(p, policy);
  const double sym = verify_coeffs(p, c);
  std::optional<double> fock;
  std::string fock_status = "ok";
  try {
    fock = fock_verify(p, c, cfg);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::TruncationUnreliable) throw;
    fock_status = std::string(e.name());
  }
  const bool failed = sym > kSymplecticTol || (fock && *fock > cfg.tol);

  if (f.format == "json") {
    out << "{\"omega\":" << fmt(p.omega) << ",\"eta\":" << fmt(p.eta) << ",\"x\":" << fmt(rc.x)
        << ",\"region\":" << json_string(region_name(rc.region)) << ",\"alpha\":" << fmt(c.alpha)
        << ",\"beta\":" << fmt(c.beta) << ",\"gamma\":" << fmt(c.gamma) << ",\"delta\":" << fmt(c.delta)
        << ",\"branch\":" << json_string(branch_name(c.branch))
        << ",\"policy\":" << json_string(f.policy)
        << ",\"symplectic_residual\":" << fmt(sym) << ",\"fock_residual\":" << json_number(fock)
        << ",\"fock_status\":" << json_string(fock_status) << ",\"fock_dim\":" << cfg.dim
        << ",\"fock_n_max\":" << cfg.n_max << "}\n";
  } else {
    auto line = [&](const char* k, const std::string& v) {
      char key[24];
      std::snprintf(key, sizeof key, "%-20s", k);
      out << key << v << "\n";
    };
    line("omega", fmt(p.omega));
    line("eta", fmt(p.eta));
    line("x", fmt(rc.x));
    line("region", std::string(region_name(rc.region)));
    line("alpha", fmt(c.alpha));
    line("beta", fmt(c.beta));
    line("gamma", fmt(c.gamma));
    line("delta", fmt(c.delta));
    line("branch", std::string(branch_name(c.branch)));
    line("symplectic_residual", fmt(sym));
    line("fock_residual", fock ? fmt(*fock) : fock_status);
    line("fock_dim", std::to_string(cfg.dim));
  }
  return failed ? kExitVerifyFailed : kExitOk;
}

// ---------------------------------------------------------------------------

struct ScanFlags {
  double omega_min = 0.0, omega_max = kTwoPi;
  double eta_min = -2.0, eta_max = 2.0;
  int steps = 11;
  std::string out_path;
};

inline std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> v(steps);
  for (int i = 0; i < steps; ++i) v[i] = (i == steps - 1) ? hi : lo + (hi - lo) * i / (steps - 1);
  return v;
}

inline void write_scan_row(std::ostream& os, double omega, double eta) {
  const RegionClass rc = classify({omega, eta});
  os << fmt(omega) << ',' << fmt(eta) << ',' << fmt(rc.x) << ',' << region_name(rc.region) << ',';
  try {
    const AlgebraCoeffs c = solve({omega, eta}, BranchPolicy::CONTINUOUS);
    os << fmt(c.alpha) << ',' << fmt(c.beta) << ',' << fmt(c.gamma) << ',' << fmt(c.delta) << ','
       << branch_name(c.branch) << '\n';
  } catch (const Error&) {
    os << ",,,,\n";
  }
}

inline int cmd_scan(const ScanFlags& f, std::ostream& out) {
  for (double v : {f.omega_min, f.omega_max, f.eta_min, f.eta_max})
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "scan ranges must be finite");
  if (f.steps < 2) throw Error(ErrorKind::InvalidArgument, "--steps must be >= 2");
  if (!(f.omega_max > f.omega_min) || !(f.eta_max > f.eta_min))
    throw Error(ErrorKind::InvalidArgument, "scan ranges must satisfy min < max");

  std::ostringstream buf;
  buf << "omega,eta,x,region,alpha,beta,gamma,delta,branch\n";
  const auto omegas = linspace(f.omega_min, f.omega_max, f.steps);
  const auto etas = linspace(f.eta_min, f.eta_max, f.steps);
  for (double w : omegas)
    for (double e : etas) write_scan_row(buf, w, e);

  auto file = open_output(f.out_path);
  (file ? static_cast<std::ostream&>(*file) : out) << buf.str();
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct HorizonFlags {
  double eta_max = 4.0;
  int steps = 101;
  std::string out_path;
};

/// Points of cosh(eta/2)cos(omega/2) = -1, pi < omega <= 2 pi, walked from
/// eta = 0 outwards; the eta < 0 mirror follows.
inline int cmd_horizon(const HorizonFlags& f, std::ostream& out) {
  if (!std::isfinite(f.eta_max) || !(f.eta_max > 0.0))
    throw Error(ErrorKind::InvalidArgument, "--eta-max must be positive");
  if (f.steps < 2) throw Error(ErrorKind::InvalidArgument, "--steps must be >= 2");

  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < f.steps; ++k) {
    const double eta = f.eta_max * k / (f.steps - 1);
    pts.emplace_back(2.0 * std::acos(-1.0 / std::cosh(0.5 * eta)), eta);
  }
  const std::size_t upper = pts.size();
  for (std::size_t k = 1; k < upper; ++k) pts.emplace_back(pts[k].first, -pts[k].second);

  std::ostringstream buf;
  buf << "omega,eta\n";
  for (const auto& [w, e] : pts) buf << fmt(w) << ',' << fmt(e) << '\n';
  auto file = open_output(f.out_path);
  (file ? static_cast<std::ostream&>(*file) : out) << buf.str();
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TrotterFlags {
  AngleFlags angle;
  std::vector<int> ns{1, 2, 5};
  std::string policy = "force-second";
  std::string format = "text";
};

inline int cmd_trotter(const TrotterFlags& f, std::ostream& out) {
  const ProductParams p = f.angle.params();
  const BranchPolicy policy = parse_policy(f.policy);
  std::vector<TrotterRecord> records;
  for (int n : f.ns) records.push_back(trotter_error(p, n, policy));

  std::optional<ScalingReport> rep;
  std::vector<int> sorted = f.ns;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() >= 3) rep = scaling_report(p, sorted, policy);
  std::optional<double> slope;
  if (rep && !rep->degenerate) slope = rep->slope;

  if (f.format == "json") {
    out << "{\"omega\":" << fmt(p.omega) << ",\"eta\":" << fmt(p.eta)
        << ",\"policy\":" << json_string(f.policy) << ",\"records\":[";
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      out << (i ? "," : "") << "{\"n_steps\":" << r.n_steps << ",\"error_abs\":" << fmt(r.error_abs)
          << ",\"error_rel\":" << fmt(r.error_rel) << "}";
    }
    out << "],\"slope\":" << json_number(slope)
        << ",\"degenerate\":" << ((rep && rep->degenerate) ? "true" : "false") << "}\n";
  } else {
    out << "n_steps error_abs error_rel\n";
    for (const auto& r : records)
      out << r.n_steps << ' ' << fmt(r.error_abs) << ' ' << fmt(r.error_rel) << '\n';
    if (!rep)
      out << "slope n/a (needs 3 distinct N)\n";
    else if (rep->degenerate)
      out << "slope degenerate\n";
    else
      out << "slope " << fmt(*slope) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ParityFlags {
  AngleFlags angle;
  int n_steps = 50;
  std::vector<int> ns{0, 1};
  std::string format = "text";
};

inline int cmd_parity(const ParityFlags& f, std::ostream& out) {
  const ProductParams p = f.angle.params();
  FockConfig cfg = fock_config_from_env();
  if (f.n_steps < 1) throw Error(ErrorKind::InvalidArgument, "--steps must be >= 1");
  for (int n : f.ns) cfg.n_max = std::max(cfg.n_max, n);
  cfg.validate();
  const auto sigs = signature_sweep(p, f.n_steps, f.ns, cfg);

  if (f.format == "json") {
    out << "{\"omega\":" << fmt(p.omega) << ",\"eta\":" << fmt(p.eta) << ",\"n_steps\":" << f.n_steps
        << ",\"fock_dim\":" << cfg.dim << ",\"signatures\":[";
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      const auto& s = sigs[i];
      out << (i ? "," : "") << "{\"n\":" << s.n << ",\"phase_re\":" << fmt(s.phase.real())
          << ",\"phase_im\":" << fmt(s.phase.imag()) << ",\"arg\":" << fmt(std::arg(s.phase))
          << ",\"visibility\":" << fmt(s.visibility) << "}";
    }
    out << "]}\n";
  } else {
    out << "n phase_re phase_im arg visibility\n";
    for (const auto& s : sigs)
      out << s.n << ' ' << fmt(s.phase.real()) << ' ' << fmt(s.phase.imag()) << ' '
          << fmt(std::arg(s.phase)) << ' ' << fmt(s.visibility) << '\n';
  }
  return kExitOk;
}

}  // namespace detail

/// Entry point; args[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-exponent form of a phase-shift times squeezing product"};
  app.require_subcommand(1);

  detail::SolveFlags solve_f;
  auto* solve_cmd = app.add_subcommand("solve", "solve one point and verify it");
  detail::add_angle_flags(solve_cmd, solve_f.angle);
  solve_cmd->add_option("--policy", solve_f.policy)
      ->check(CLI::IsMember({"continuous", "force-main", "force-second"}));
  solve_cmd->add_option("--format", solve_f.format)->check(CLI::IsMember({"json", "text"}));

  detail::ScanFlags scan_f;
  auto* scan_cmd = app.add_subcommand("scan", "coefficient table over an (omega, eta) grid, CSV");
  scan_cmd->add_option("--omega-min", scan_f.omega_min);
  scan_cmd->add_option("--omega-max", scan_f.omega_max);
  scan_cmd->add_option("--eta-min", scan_f.eta_min);
  scan_cmd->add_option("--eta-max", scan_f.eta_max);
  scan_cmd->add_option("--steps", scan_f.steps, "grid points per axis");
  scan_cmd->add_option("--out", scan_f.out_path, "output file (default stdout)");

  detail::HorizonFlags hor_f;
  auto* hor_cmd = app.add_subcommand("horizon", "points on the curve x = -1, CSV");
  hor_cmd->add_option("--eta-max", hor_f.eta_max);
  hor_cmd->add_option("--steps", hor_f.steps);
  hor_cmd->add_option("--out", hor_f.out_path, "output file (default stdout)");

  detail::TrotterFlags trot_f;
  auto* trot_cmd = app.add_subcommand("trotter", "Trotter error versus step count");
  detail::add_angle_flags(trot_cmd, trot_f.angle);
  trot_cmd->add_option("--n", trot_f.ns, "comma-separated step counts")->delimiter(',');
  trot_cmd->add_option("--policy", trot_f.policy)
      ->check(CLI::IsMember({"continuous", "force-main", "force-second"}));
  trot_cmd->add_option("--format", trot_f.format)->check(CLI::IsMember({"text", "json"}));

  detail::ParityFlags par_f;
  auto* par_cmd = app.add_subcommand("parity", "parity-resolved overlap phases");
  detail::add_angle_flags(par_cmd, par_f.angle);
  par_cmd->add_option("--steps", par_f.n_steps, "Trotter steps");
  par_cmd->add_option("--n", par_f.ns, "comma-separated number states")->delimiter(',');
  par_cmd->add_option("--format", par_f.format)->check(CLI::IsMember({"text", "json"}));

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return detail::cmd_solve(solve_f, out);
    if (*scan_cmd) return detail::cmd_scan(scan_f, out);
    if (*hor_cmd) return detail::cmd_horizon(hor_f, out);
    if (*trot_cmd) return detail::cmd_trotter(trot_f, out);
    if (*par_cmd) return detail::cmd_parity(par_f, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cbch::cli
