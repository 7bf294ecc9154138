// anosov: pressure curves, orbit spectra, codings and the rigidity
// counterexample for hyperbolic automorphisms of the 2-torus.
//
// Exit status: 0 success (counterexample reproduced), 2 counterexample not
// reproduced, 1 error.

#include <iostream>

#include "CLI11.hpp"
#include "anosov/io.hpp"

using namespace anosov;

namespace {

struct Options {
  std::string matrix = "1,1,1,0";
  std::string potential;
  int depth = 0;  // 0: the subcommand's default
  int order = 0;
  std::string t_grid = "-2:2:0.05";
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 1;
  std::string method = "ratio";
  int max_period = 6;
  int k = 2;
  std::string dump;
  std::string report;
};

Potential load_potential(const Options& o, const Potential& fallback) {
  return o.potential.empty() ? fallback : potential_from_json(read_json(o.potential));
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text(path, text);
}

int cmd_pressure(const Options& o) {
  const IntMatrix2 M = parse_matrix(o.matrix);
  const ToralAutomorphism L(M);
  const auto method = parse_method(o.method);
  const int order = o.order > 0 ? o.order : (method == PressureMethod::transfer_operator ? 14 : default_orbit_order(L));
  auto curve = pressure_curve(load_potential(o, Potential::constant(0.0)), L, parse_grid(o.t_grid), method, order);
  write_out(o.out, parse_format(o.format) == Format::csv ? curve_csv(curve) : dump(to_json(curve)));
  return 0;
}

int cmd_curve(const Options& o) {
  const ToralAutomorphism L(parse_matrix(o.matrix));
  const auto method = parse_method(o.method);
  const int order = o.order > 0 ? o.order : (method == PressureMethod::transfer_operator ? 14 : default_orbit_order(L));
  const auto grid = parse_grid(o.t_grid);
  const Potential phi = load_potential(o, Potential::cosine(0.3));
  auto a = pressure_curve(phi, L, grid, method, order);
  auto b = pressure_curve(phi.compose_Mk(o.k), L, grid, method, order);
  if (parse_format(o.format) == Format::csv) {
    write_out(o.out, curves_csv(a, b));
  } else {
    a.potential_id = "phi";
    b.potential_id = "phi_k";
    write_out(o.out, dump(json{{"k", o.k}, {"phi", to_json(a)}, {"phi2", to_json(b)}, {"max_gap", max_gap(a, b)}}));
  }
  return 0;
}

int cmd_spectrum(const Options& o) {
  const ToralAutomorphism L(parse_matrix(o.matrix));
  auto s = unmarked_spectrum(load_potential(o, Potential::cosine(0.3)), L, o.max_period);
  if (parse_format(o.format) == Format::csv) {
    std::string text = "n,value\n";
    for (auto& [n, v] : s.values)
      for (double x : v) text += std::to_string(n) + "," + format_double(x) + "\n";
    write_out(o.out, text);
  } else {
    write_out(o.out, dump(to_json(s)));
  }
  return 0;
}

int cmd_coding(const Options& o) {
  const ToralAutomorphism L(parse_matrix(o.matrix));
  auto c = build_partition(L);
  write_out(o.dump.empty() ? o.out : o.dump, dump(to_json(c)));
  std::cerr << "alphabet " << c.alphabet_size() << ", zero symbol " << c.zero_symbol() << "\n";
  return 0;
}

int cmd_realize(const Options& o) {
  RealizationConfig cfg;
  cfg.matrix = parse_matrix(o.matrix);
  cfg.psi = load_potential(o, cfg.psi);
  if (o.depth > 0) cfg.depth = o.depth;
  cfg.seed = o.seed;
  auto rep = run_realization(cfg);
  write_out(o.report.empty() ? o.out : o.report, dump(to_json(rep)));
  std::cerr << "livsic M " << format_double(rep.livsic.M) << ", lebesgue xi error "
            << format_double(rep.lebesgue.xi_affine_error) << "\n";
  return 0;
}

int cmd_counterexample(const Options& o) {
  CounterexampleConfig cfg;
  cfg.matrix = parse_matrix(o.matrix);
  cfg.psi = load_potential(o, cfg.psi);
  cfg.k = o.k;
  cfg.t_grid = parse_grid(o.t_grid);
  if (o.depth > 0) cfg.depth = o.depth;
  if (o.order > 0) cfg.order = o.order;
  cfg.max_period = o.max_period;
  auto rep = run_counterexample(cfg);
  const Format f = parse_format(o.format);
  write_out(o.out, render(rep, f));
  if (!o.report.empty()) emit(rep, Format::json, o.report);
  std::cerr << "verdict " << rep.verdict.label() << (rep.verdict.reproduced ? "" : ": " + rep.verdict.reason)
            << "; max curve gap " << format_double(rep.max_curve_gap) << "; witness gap "
            << (rep.spectrum_witness ? format_double(rep.spectrum_witness->gap) : "none") << "\n";
  return rep.verdict.reproduced ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamic formalism for hyperbolic toral automorphisms"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--matrix", o.matrix, "a,b,c,d or a matrix JSON file")->capture_default_str();
  app.add_option("--potential", o.potential, "potential JSON file");
  app.add_option("--depth", o.depth, "Gibbs / transfer operator depth");
  app.add_option("--order", o.order, "orbit order, or depth for --method eigen");
  app.add_option("--t-grid", o.t_grid, "a:b:step")->capture_default_str();
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--seed", o.seed, "seed for sampled checks")->capture_default_str();

  auto* pressure = app.add_subcommand("pressure", "pressure curve t -> P(t phi)");
  pressure->add_option("--method", o.method, "ratio|eigen|sum")->capture_default_str();
  auto* curve = app.add_subcommand("curve", "pressure curves of phi and phi o M_k");
  curve->add_option("--method", o.method, "ratio|eigen|sum")->capture_default_str();
  curve->add_option("--k", o.k, "multiplier")->capture_default_str();
  auto* spectrum = app.add_subcommand("spectrum", "unmarked orbit spectrum");
  spectrum->add_option("--max-period", o.max_period)->capture_default_str();
  auto* coding = app.add_subcommand("coding", "Markov partition and transition matrix");
  coding->add_option("--dump", o.dump, "coding JSON file");
  auto* realize = app.add_subcommand("realize", "xi charts, Livsic bound and cohomology residuals");
  realize->add_option("--report", o.report, "report JSON file");
  auto* counter = app.add_subcommand("counterexample", "equal pressure, different spectra");
  counter->add_option("--k", o.k, "multiplier")->capture_default_str();
  counter->add_option("--max-period", o.max_period)->capture_default_str();
  counter->add_option("--report", o.report, "also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*pressure) return cmd_pressure(o);
    if (*curve) return cmd_curve(o);
    if (*spectrum) return cmd_spectrum(o);
    if (*coding) return cmd_coding(o);
    if (*realize) return cmd_realize(o);
    if (*counter) return cmd_counterexample(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
