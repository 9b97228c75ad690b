#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "onofri/errors.hpp"
#include "onofri/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification lab for Onofri-type inequalities"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  onofri::RunConfig cfg;
  double p = 0.0;
  double a = 0.0;
  std::string format = "json";

  app.add_option("--dim,-d", cfg.d, "Space dimension d >= 2")->capture_default_str();
  auto* p_opt = app.add_option("--p", p, "Gradient exponent p");
  auto* a_opt = app.add_option("--a", a, "Index a");
  app.add_option("--profile", cfg.profile, "Profile label, or 'suite'");
  app.add_option("--tol", cfg.tol, "Relative quadrature tolerance")->capture_default_str();
  app.add_option("--radial-nodes", cfg.radial_nodes, "Base radial nodes")->capture_default_str();
  app.add_option("--angular-nodes", cfg.angular_nodes, "Base angular nodes")->capture_default_str();
  app.add_option("--max-refine", cfg.max_refine, "Node doublings")->capture_default_str();
  app.add_option("--seeds", cfg.seeds, "Suite seeds / minimizer restarts")->capture_default_str();
  app.add_option("--output,-o", cfg.output_path,
                 std::string("Output file ('-' for stdout); default $") + onofri::kOutputDirEnv + "/<command>.<format>");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--timing", cfg.timing, "Record wall-clock runtime_ms");

  const char* commands[][2] = {
      {"constants", "Sharp constants"},
      {"verify-onofri", "Onofri deficit on a profile or the test suite"},
      {"verify-poincare", "Poincare deficit and the equality case"},
      {"verify-gn", "Gagliardo-Nirenberg quotients against the extremal"},
      {"verify-logsob", "L^p log-Sobolev deficits"},
      {"limits", "Large-a limits of the GN family"},
      {"extrapolate", "Quotient along eps v as eps -> 0"},
      {"second-variation", "Second-variation identity at finite a"},
      {"minimize", "Descent on the quotient over a finite basis"},
      {"report-all", "Every suite at default settings"},
  };
  for (const auto& c : commands) app.add_subcommand(c[0], c[1]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.command = onofri::parse_command(app.get_subcommands().front()->get_name());
    cfg.format = onofri::parse_format(format);
  } catch (const onofri::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (*p_opt) cfg.p = p;
  if (*a_opt) cfg.a = a;
  return onofri::run_and_write(cfg);
}
