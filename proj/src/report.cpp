#include "onofri/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "onofri/constants.hpp"
#include "onofri/errors.hpp"
#include "onofri/functionals.hpp"
#include "onofri/minimizer.hpp"
#include "onofri/parallel.hpp"
#include "onofri/profiles.hpp"

namespace onofri {

namespace {

using json = nlohmann::json;

const std::vector<std::pair<Command, std::string>> kCommandNames = {
    {Command::constants, "constants"},
    {Command::verify_onofri, "verify-onofri"},
    {Command::verify_poincare, "verify-poincare"},
    {Command::verify_gn, "verify-gn"},
    {Command::verify_logsob, "verify-logsob"},
    {Command::limits, "limits"},
    {Command::extrapolate, "extrapolate"},
    {Command::second_variation, "second-variation"},
    {Command::minimize, "minimize"},
    {Command::report_all, "report-all"},
};

// Relative tolerance applied to equality checks on top of the quadrature budget.
constexpr double kEqualityTol = 1e-6;

// Rounding budget for quantities that should agree exactly.
double with_rounding(double quad_error, double x, double y) {
  return std::max(quad_error, 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(x) + std::abs(y)));
}

class Clock {
public:
  explicit Clock(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
  long elapsed_ms() const {
    if (!on_) return 0;
    return static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count());
  }

private:
  bool on_;
  std::chrono::steady_clock::time_point start_;
};

ReportRecord inequality_record(std::string name, int d, std::string profile, double lhs, double rhs, double deficit,
                               double quad_error) {
  ReportRecord r;
  r.inequality = std::move(name);
  r.d = d;
  r.profile = std::move(profile);
  r.lhs = lhs;
  r.rhs = rhs;
  r.deficit = deficit;
  r.quad_error = with_rounding(quad_error, lhs, rhs);
  r.pass = deficit_passes(deficit, r.quad_error);
  return r;
}

// value should equal reference; pass when within 3 quad_error or kEqualityTol relative.
ReportRecord equality_record(std::string name, int d, std::string profile, double value, double reference,
                             double quad_error) {
  ReportRecord r;
  r.inequality = std::move(name);
  r.d = d;
  r.profile = std::move(profile);
  r.lhs = value;
  r.rhs = reference;
  r.deficit = value - reference;
  r.quad_error = with_rounding(quad_error, value, reference);
  r.pass = std::abs(value - reference) <= std::max(3.0 * r.quad_error, kEqualityTol * std::abs(reference));
  r.params["relative_gap"] = reference != 0.0 ? (value - reference) / reference : value;
  return r;
}

void add_quotient(ReportRecord& r, const FunctionalReport& rep) {
  if (rep.quotient_status == QuotientStatus::finite) {
    r.quotient = rep.quotient;
  } else if (rep.quotient_status == QuotientStatus::infinite) {
    r.quotient = std::numeric_limits<double>::infinity();
  }
}

struct NamedProfile {
  AxisymmetricProfile profile;
  std::map<std::string, double> params;
};

std::vector<NamedProfile> suite_or_single(const RunConfig& cfg, Dimension d) {
  std::vector<NamedProfile> out;
  if (cfg.profile.empty() || cfg.profile == "suite") {
    for (int s = 1; s <= cfg.seeds; ++s) {
      const auto suite = test_suite(d, static_cast<std::uint64_t>(s));
      for (std::size_t i = 0; i < suite.size(); ++i) {
        out.push_back({suite[i], {{"seed", double(s)}, {"index", double(i)}}});
      }
    }
  } else {
    out.push_back({parse_profile_label(cfg.profile, d), {}});
  }
  return out;
}

std::vector<ReportRecord> run_constants(const RunConfig& cfg) {
  const Dimension d(cfg.d);
  const SharpConstants c = sharp_constants(d, cfg.p.value_or(std::min(2.0, d.real())));
  ReportRecord r;
  r.inequality = "constants";
  r.d = cfg.d;
  r.params["alpha_d"] = c.alpha_d;
  r.params["one_over_alpha"] = c.one_over_alpha;
  r.params["sphere_area"] = c.sphere_area;
  r.params["p"] = cfg.p.value_or(std::min(2.0, d.real()));
  r.params["beta_pd"] = c.beta_pd;
  if (cfg.d >= 3) r.params["aubin_talenti"] = aubin_talenti_constant(d);
  r.pass = true;
  for (const auto& [k, v] : r.params) r.pass = r.pass && std::isfinite(v) && v > 0.0;
  return {r};
}

std::vector<ReportRecord> run_onofri(const RunConfig& cfg) {
  const Dimension d(cfg.d);
  const auto profiles = suite_or_single(cfg, d);
  std::vector<ReportRecord> out(profiles.size());
  parallel_for(profiles.size(), [&](std::size_t i) {
    const Clock clock(cfg.timing);
    const FunctionalReport rep = onofri_report(profiles[i].profile, d, cfg.quadrature());
    ReportRecord r =
        inequality_record("onofri", cfg.d, profiles[i].profile.label, rep.lhs, rep.rhs, rep.deficit, rep.quad_error);
    add_quotient(r, rep);
    r.params = profiles[i].params;
    r.params["mean_u"] = rep.mean_u;
    r.runtime_ms = clock.elapsed_ms();
    out[i] = std::move(r);
  });
  return out;
}

std::vector<ReportRecord> run_poincare(const RunConfig& cfg) {
  const Dimension d(cfg.d);
  const auto profiles = suite_or_single(cfg, d);
  std::vector<ReportRecord> out(profiles.size());
  parallel_for(profiles.size(), [&](std::size_t i) {
    const Clock clock(cfg.timing);
    const FunctionalReport rep = poincare_report(profiles[i].profile, d, cfg.quadrature());
    ReportRecord r =
        inequality_record("poincare", cfg.d, profiles[i].profile.label, rep.lhs, rep.rhs, rep.deficit, rep.quad_error);
    add_quotient(r, rep);
    r.params = profiles[i].params;
    r.runtime_ms = clock.elapsed_ms();
    out[i] = std::move(r);
  });

  const Clock clock(cfg.timing);
  const EigenCheck eig = rayleigh_check(d, cfg.quadrature());
  ReportRecord r = equality_record("poincare_equality", cfg.d, "v", eig.rayleigh, eig.lambda1_reference, eig.quad_error);
  r.quotient = eig.rayleigh;
  if (eig.dirichlet_ratio) {
    r.params["dirichlet_ratio"] = *eig.dirichlet_ratio;
    r.params["dirichlet_reference"] = *eig.dirichlet_reference;
    r.pass = r.pass && std::abs(*eig.dirichlet_ratio - *eig.dirichlet_reference) <= 1e-4;
  }
  r.runtime_ms = clock.elapsed_ms();
  out.push_back(std::move(r));
  return out;
}

struct GNCase {
  double p;
  double a;
};

std::vector<GNCase> default_gn_cases(Dimension d) {
  const double n = d.real();
  std::vector<GNCase> cases;
  const double p = n - 0.5;
  cases.push_back({p, 0.5 * (p + gn_a_max(p, d))});
  cases.push_back({p, 0.5 * (1.0 + p)});
  for (double a : {n + 1.0, 2.0 * n, 10.0 * n}) cases.push_back({n, a});
  if (d.value() >= 3) cases.push_back({2.0, gn_a_max(2.0, d)});
  return cases;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string gn_label(double p, double a, double A, double B) {
  return "gn:p=" + num(p) + ",a=" + num(a) + ",A=" + num(A) + ",B=" + num(B);
}

std::vector<ReportRecord> run_gn(const RunConfig& cfg) {
  const Dimension d(cfg.d);
  std::vector<GNCase> cases;
  if (cfg.p) {
    cases.push_back({*cfg.p, *cfg.a});
  } else {
    cases = default_gn_cases(d);
  }
  const QuadratureSpec spec = cfg.quadrature();
  std::vector<std::vector<ReportRecord>> per_case(cases.size());
  parallel_for(cases.size(), [&](std::size_t k) {
    const auto [p, a] = cases[k];
    const GNExponents ex = gn_exponents(p, a, d);
    if (ex.regime == GNRegime::degenerate) throw DegenerateError("no Gagliardo-Nirenberg constant at a = p");
    const double sign = ex.regime == GNRegime::a_above_p ? 1.0 : -1.0;
    const Clock clock(cfg.timing);
    const GNReport ref = gn_report(gn_extremal(p, a, d, 1.0, sign), p, a, d, spec);
    const double C = ref.quotient;

    std::vector<std::pair<std::string, AxisymmetricProfile>> profiles;
    profiles.emplace_back(gn_label(p, a, 1.0, sign), gn_extremal(p, a, d, 1.0, sign));
    profiles.emplace_back(gn_label(p, a, 2.5, 3.7 * sign), gn_extremal(p, a, d, 2.5, 3.7 * sign));
    const std::string other = cfg.profile.empty() ? "gaussian:s=1" : cfg.profile;
    profiles.emplace_back(other, parse_profile_label(other, d));

    for (const auto& [label, f] : profiles) {
      const GNReport rep = gn_report(f, p, a, d, spec);
      ReportRecord r = inequality_record("gn", cfg.d, label, rep.quotient, C, C - rep.quotient,
                                         C * (rep.quad_error + ref.quad_error));
      r.quotient = rep.quotient;
      r.params = {{"p", p}, {"a", a}, {"b", ex.b}, {"theta", ex.theta.value_or(0.0)}};
      r.runtime_ms = clock.elapsed_ms();
      per_case[k].push_back(std::move(r));
    }
    if (p == 2.0 && a == gn_a_max(2.0, d)) {
      ReportRecord r = equality_record("aubin_talenti", cfg.d, gn_label(p, a, 1.0, sign), C,
                                       aubin_talenti_constant(d), C * ref.quad_error);
      r.params["p"] = p;
      r.params["a"] = a;
      per_case[k].push_back(std::move(r));
    }
  });
  std::vector<ReportRecord> out;
  for (auto& v : per_case) {
    for (auto& r : v) out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReportRecord> run_logsob(const RunConfig& cfg) {
  const Dimension d(cfg.d);
  std::vector<double> ps;
  if (cfg.p) {
    ps.push_back(*cfg.p);
  } else {
    for (double p : {1.5, 2.0, d.real()}) {
      if (p <= d.real() && std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
    }
  }
  const QuadratureSpec spec = cfg.quadrature();
  std::vector<ReportRecord> out;
  for (double p : ps) {
    std::vector<std::pair<std::string, AxisymmetricProfile>> profiles;
    profiles.emplace_back("logsob:p=" + num(p) + ",sigma=1", logsob_extremal(p, d, 1.0));
    std::vector<std::string> labels;
    if (cfg.profile.empty()) {
      labels = {"gaussian:s=1", "r2exp"};
    } else {
      labels = {cfg.profile};
    }
    for (const auto& l : labels) profiles.emplace_back(l, normalized_lp(parse_profile_label(l, d), p, d, spec));
    for (const auto& [label, u] : profiles) {
      const Clock clock(cfg.timing);
      const LogSobolevReport rep = logsob_report(u, p, d, spec);
      ReportRecord r = inequality_record("logsob", cfg.d, label, rep.entropy, rep.rhs, rep.deficit, rep.quad_error);
      r.params = {{"p", p}, {"beta", rep.beta}, {"grad_integral", rep.grad_integral}};
      r.runtime_ms = clock.elapsed_ms();
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<ReportRecord> run_limits(const RunConfig& cfg) {
  const Dimension d(cfg.d);
  const std::string label = cfg.profile.empty() ? "bump:R=2" : cfg.profile;
  std::vector<double> grid = default_a_grid();
  if (cfg.a) {
    grid.clear();
    for (int k = 0; k < 5; ++k) grid.push_back(*cfg.a * std::ldexp(1.0, k));
  }
  const Clock clock(cfg.timing);
  const LimitLabReport lab = limit_lab(parse_profile_label(label, d), d, grid, cfg.quadrature());
  const long ms = clock.elapsed_ms();

  std::vector<ReportRecord> out;
  const auto add = [&](const std::string& name, const std::vector<double>& ratio, double target, const RateFit& fit) {
    ReportRecord r;
    r.inequality = name;
    r.d = cfg.d;
    r.profile = label;
    r.lhs = ratio.back();
    r.rhs = target;
    const double gap_first = std::abs(ratio.front() - target);
    const double gap_last = std::abs(ratio.back() - target);
    r.deficit = gap_first - gap_last;
    r.params = {{"slope", fit.slope},
                {"correlation", fit.correlation},
                {"a_min", grid.front()},
                {"a_max", grid.back()},
                {"gap_first", gap_first},
                {"gap_last", gap_last}};
    r.pass = gap_last < gap_first;
    r.series["a"] = grid;
    r.series["ratio"] = ratio;
    r.runtime_ms = ms;
    out.push_back(std::move(r));
  };
  add("limit_ratio_i", lab.ratio_i, lab.target_i, lab.rate_i);
  add("limit_ratio_ii", lab.ratio_ii, lab.target_ii, lab.rate_ii);
  add("limit_ratio_iii", lab.ratio_iii, lab.target_iii, lab.rate_iii);
  out.back().params["onofri_rhs"] = lab.onofri_rhs;
  return out;
}

std::vector<ReportRecord> run_extrapolate(const RunConfig& cfg) {
  const Dimension d(cfg.d);
  const std::string label = cfg.profile.empty() ? "v" : cfg.profile;
  const Clock clock(cfg.timing);
  const QuotientExtrapolation ex =
      quotient_extrapolation(parse_profile_label(label, d), d, default_eps_grid(), cfg.quadrature());
  const double target = 1.0 / onofri_alpha(d);
  ReportRecord r = inequality_record("sharpness", cfg.d, label, ex.value, target, ex.value - target, ex.error_estimate);
  r.quotient = ex.value;
  r.params["relative_gap"] = (ex.value - target) / target;
  r.series["eps"] = ex.eps;
  r.series["quotient"] = ex.quotients;
  r.runtime_ms = clock.elapsed_ms();
  return {r};
}

std::vector<ReportRecord> run_second_variation(const RunConfig& cfg) {
  const Dimension d(cfg.d);
  std::vector<double> grid;
  if (cfg.a) {
    grid.push_back(*cfg.a);
  } else {
    for (double a : {10.0, 20.0, 40.0, 80.0}) {
      if (a > d.real()) grid.push_back(a);
    }
  }
  const PointVec e = PointVec::basis(static_cast<std::size_t>(cfg.d), 0);
  std::vector<ReportRecord> out(grid.size());
  std::vector<double> a_share(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Clock clock(cfg.timing);
    const SecondVariationEval sv = second_variation(grid[i], d, e, cfg.quadrature());
    ReportRecord r;
    r.inequality = "second_variation";
    r.d = cfg.d;
    r.profile = "Fa:a=" + num(grid[i]);
    r.lhs = sv.term_lhs;
    r.rhs = sv.term_grad + sv.term_a;
    r.deficit = sv.residual;
    r.quad_error = with_rounding(sv.quad_error, sv.term_lhs, sv.term_grad + sv.term_a);
    r.pass = std::abs(sv.residual) <= std::max(3.0 * r.quad_error, kEqualityTol * sv.scale);
    a_share[i] = sv.term_a / sv.term_lhs;
    r.params = {{"a", grid[i]}, {"term_grad", sv.term_grad}, {"term_a", sv.term_a}, {"a_share", a_share[i]},
                {"scale", sv.scale}};
    r.runtime_ms = clock.elapsed_ms();
    out[i] = std::move(r);
  });
  if (grid.size() > 1) {
    ReportRecord r;
    r.inequality = "second_variation_a_term";
    r.d = cfg.d;
    r.pass = true;
    for (std::size_t i = 1; i < grid.size(); ++i) r.pass = r.pass && a_share[i] < a_share[i - 1];
    r.series["a"] = grid;
    r.series["a_share"] = a_share;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReportRecord> run_minimize(const RunConfig& cfg) {
  const Dimension d(cfg.d);
  const BasisSpec basis = geometric_basis(d, {1});
  MinimizeOptions opt;
  opt.spec = cfg.quadrature();
  opt.restarts = cfg.seeds;
  std::vector<double> init;
  std::string label = cfg.profile;
  if (label.empty()) {
    init.resize(basis.count());
    for (std::size_t j = 0; j < init.size(); ++j) init[j] = 0.01 * std::sin(1.0 + double(j));
    label = "basis:sin";
  } else {
    init = fit_to_profile(basis, parse_profile_label(label, d), opt.spec);
  }
  const double target = 1.0 / onofri_alpha(d);
  std::vector<ReportRecord> out;

  Clock clock(cfg.timing);
  const MinimizationResult res = minimize_quotient(basis, init, opt);
  ReportRecord r = inequality_record("minimize", cfg.d, label, res.value, target, res.value - target, res.tolerance);
  r.quotient = res.value;
  r.params = {{"iterations", double(res.iterations)},
              {"grad_norm", res.grad_norm},
              {"converged", res.converged ? 1.0 : 0.0},
              {"basis_size", double(basis.count())},
              {"relative_gap", (res.value - target) / target}};
  r.series["trace"] = res.trace;
  r.series["coefficients"] = res.coefficients;
  r.runtime_ms = clock.elapsed_ms();
  out.push_back(std::move(r));

  const std::vector<double> norms = {1.0, 0.3, 0.1, 0.03};
  clock = Clock(cfg.timing);
  const auto rows = scan_norms(basis, norms, opt);
  ReportRecord s;
  s.inequality = "norm_scan";
  s.d = cfg.d;
  s.profile = "basis:geometric";
  std::vector<double> values;
  for (const auto& row : rows) values.push_back(row.value);
  s.lhs = values.back();
  s.rhs = target;
  s.deficit = values.back() - target;
  s.pass = values.back() >= target * (1.0 - kEqualityTol);
  for (std::size_t i = 1; i < values.size(); ++i) s.pass = s.pass && values[i] < values[i - 1];
  s.params["relative_gap"] = (values.back() - target) / target;
  s.series["norm"] = norms;
  s.series["quotient"] = values;
  s.runtime_ms = clock.elapsed_ms();
  out.push_back(std::move(s));
  return out;
}

std::vector<ReportRecord> dispatch(const RunConfig& cfg);

std::vector<ReportRecord> run_all(const RunConfig& cfg) {
  std::vector<ReportRecord> out;
  const auto sub = [&](Command c, int d) {
    RunConfig s = cfg;
    s.command = c;
    s.d = d;
    s.p.reset();
    s.a.reset();
    s.profile.clear();
    for (auto& r : dispatch(s)) out.push_back(std::move(r));
  };
  for (int d : {2, 3, 4}) sub(Command::constants, d);
  for (int d : {2, 3, 4, 5}) sub(Command::verify_onofri, d);
  for (int d : {2, 3, 4}) sub(Command::verify_poincare, d);
  for (int d : {2, 3, 4}) sub(Command::verify_gn, d);
  for (int d : {2, 3}) sub(Command::verify_logsob, d);
  sub(Command::limits, 3);
  for (int d : {2, 3, 4}) sub(Command::extrapolate, d);
  for (int d : {2, 3, 4}) sub(Command::second_variation, d);
  for (int d : {2, 3}) sub(Command::minimize, d);
  return out;
}

std::vector<ReportRecord> dispatch(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::constants: return run_constants(cfg);
    case Command::verify_onofri: return run_onofri(cfg);
    case Command::verify_poincare: return run_poincare(cfg);
    case Command::verify_gn: return run_gn(cfg);
    case Command::verify_logsob: return run_logsob(cfg);
    case Command::limits: return run_limits(cfg);
    case Command::extrapolate: return run_extrapolate(cfg);
    case Command::second_variation: return run_second_variation(cfg);
    case Command::minimize: return run_minimize(cfg);
    case Command::report_all: return run_all(cfg);
  }
  throw DomainError("unknown command");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

json optional_number(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

const char* kCsvHeader = "inequality,d,profile,params,lhs,rhs,deficit,quotient,quad_error,pass,runtime_ms";

}  // namespace

Command parse_command(const std::string& name) {
  for (const auto& [c, n] : kCommandNames) {
    if (n == name) return c;
  }
  throw DomainError("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  for (const auto& [k, n] : kCommandNames) {
    if (k == c) return n;
  }
  return "unknown";
}

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw DomainError("unknown format '" + name + "'");
}

void RunConfig::validate() const {
  if (d < 2) throw DomainError("dimension must be an integer d >= 2, got " + std::to_string(d));
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (radial_nodes < 8) throw DomainError("radial-nodes must be at least 8");
  if (angular_nodes < 4) throw DomainError("angular-nodes must be at least 4");
  if (max_refine < 1) throw DomainError("max-refine must be at least 1");
  if (seeds < 1) throw DomainError("seeds must be at least 1");
  if (p && !(*p > 1.0)) throw DomainError("p must exceed 1");
  if (a && !(*a > 1.0)) throw DomainError("a must exceed 1");
  if (command == Command::verify_gn && p.has_value() != a.has_value()) {
    throw DomainError("verify-gn takes both --p and --a, or neither");
  }
  if ((command == Command::limits || command == Command::second_variation) && a && !(*a > d)) {
    throw DomainError("a must exceed d");
  }
}

QuadratureSpec RunConfig::quadrature() const {
  QuadratureSpec s;
  s.rel_tol = tol;
  s.radial_nodes = radial_nodes;
  s.angular_nodes = angular_nodes;
  s.max_refinements = max_refine;
  return s;
}

bool deficit_passes(double deficit, double quad_error) { return deficit >= -3.0 * quad_error; }

RunResult run(const RunConfig& config) {
  RunResult result;
  try {
    config.validate();
    result.records = dispatch(config);
    const auto failed = std::count_if(result.records.begin(), result.records.end(),
                                      [](const ReportRecord& r) { return !r.pass; });
    result.exit_code = failed == 0 ? 0 : 1;
    result.message = std::to_string(result.records.size() - failed) + "/" + std::to_string(result.records.size()) +
                     " records pass";
  } catch (const std::exception& e) {
    result.records.clear();
    result.exit_code = 2;
    result.message = e.what();
  }
  return result;
}

std::string to_json(const RunConfig& config, const RunResult& result) {
  json cfg = {{"command", command_name(config.command)},
              {"d", config.d},
              {"p", config.p ? json(*config.p) : json(nullptr)},
              {"a", config.a ? json(*config.a) : json(nullptr)},
              {"profile", config.profile},
              {"tol", config.tol},
              {"radial_nodes", config.radial_nodes},
              {"angular_nodes", config.angular_nodes},
              {"max_refine", config.max_refine},
              {"seeds", config.seeds}};
  json recs = json::array();
  std::size_t passed = 0;
  for (const auto& r : result.records) {
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = std::isfinite(v) ? json(v) : json(nullptr);
    json j = {{"inequality", r.inequality},
              {"d", r.d},
              {"profile", r.profile},
              {"params", params},
              {"lhs", optional_number(r.lhs)},
              {"rhs", optional_number(r.rhs)},
              {"deficit", optional_number(r.deficit)},
              {"quotient", optional_number(r.quotient)},
              {"quad_error", r.quad_error},
              {"pass", r.pass},
              {"runtime_ms", r.runtime_ms}};
    if (!r.series.empty()) j["series"] = r.series;
    recs.push_back(std::move(j));
    passed += r.pass ? 1 : 0;
  }
  json doc = {{"config", cfg},
              {"records", recs},
              {"summary",
               {{"records", result.records.size()},
                {"passed", passed},
                {"exit_code", result.exit_code},
                {"message", result.message}}}};
  return doc.dump(2) + "\n";
}

std::string to_csv(const RunResult& result) {
  std::string out = std::string(kCsvHeader) + "\n";
  const auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string(); };
  for (const auto& r : result.records) {
    std::string params;
    for (const auto& [k, v] : r.params) {
      if (!params.empty()) params += ';';
      params += k + "=" + format_number(v);
    }
    out += csv_field(r.inequality) + "," + std::to_string(r.d) + "," + csv_field(r.profile) + "," +
           csv_field(params) + "," + opt(r.lhs) + "," + opt(r.rhs) + "," + opt(r.deficit) + "," + opt(r.quotient) +
           "," + format_number(r.quad_error) + "," + (r.pass ? "true" : "false") + "," + std::to_string(r.runtime_ms) +
           "\n";
  }
  return out;
}

std::vector<ReportRecord> records_from_json(const std::string& text) {
  const json doc = json::parse(text);
  std::vector<ReportRecord> out;
  const auto opt = [](const json& j) -> std::optional<double> {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
  };
  for (const auto& j : doc.at("records")) {
    ReportRecord r;
    r.inequality = j.at("inequality").get<std::string>();
    r.d = j.at("d").get<int>();
    r.profile = j.at("profile").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) {
      r.params[k] = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    }
    r.lhs = opt(j.at("lhs"));
    r.rhs = opt(j.at("rhs"));
    r.deficit = opt(j.at("deficit"));
    r.quotient = opt(j.at("quotient"));
    r.quad_error = j.at("quad_error").get<double>();
    r.pass = j.at("pass").get<bool>();
    r.runtime_ms = j.at("runtime_ms").get<long>();
    if (j.contains("series")) r.series = j.at("series").get<std::map<std::string, std::vector<double>>>();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReportRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != kCsvHeader) throw DomainError("unexpected CSV header");
  std::vector<ReportRecord> out;
  const auto opt = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return parse_number(s);
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw DomainError("malformed CSV row");
    ReportRecord r;
    r.inequality = f[0];
    r.d = std::stoi(f[1]);
    r.profile = f[2];
    std::istringstream ps(f[3]);
    std::string kv;
    while (std::getline(ps, kv, ';')) {
      const auto eq = kv.find('=');
      r.params[kv.substr(0, eq)] = parse_number(kv.substr(eq + 1));
    }
    r.lhs = opt(f[4]);
    r.rhs = opt(f[5]);
    r.deficit = opt(f[6]);
    r.quotient = opt(f[7]);
    r.quad_error = parse_number(f[8]);
    r.pass = f[9] == "true";
    r.runtime_ms = std::stol(f[10]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string output_target(const RunConfig& config) {
  if (config.output_path == "-") return {};
  if (!config.output_path.empty()) return config.output_path;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    const std::string ext = config.format == OutputFormat::json ? ".json" : ".csv";
    return (std::filesystem::path(dir) / (command_name(config.command) + ext)).string();
  }
  return {};
}

int run_and_write(const RunConfig& config) {
  const RunResult result = run(config);
  if (result.exit_code == 2) std::cerr << "error: " << result.message << "\n";
  const std::string text = config.format == OutputFormat::json ? to_json(config, result) : to_csv(result);
  const std::string target = output_target(config);
  if (target.empty()) {
    std::cout << text;
  } else {
    const std::filesystem::path path(target);
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path);
    if (!f) {
      std::cerr << "error: cannot write " << target << "\n";
      return 2;
    }
    f << text;
    std::cerr << result.message << " -> " << target << "\n";
  }
  return result.exit_code;
}

}  // namespace onofri
