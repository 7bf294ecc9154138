#pragma once

// JSON and CSV serialization. Doubles are written in shortest round-trip form,
// keys in a fixed order, so equal inputs give byte-identical files.

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "anosov/pipeline.hpp"

namespace anosov {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// files

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write " + path);
  out << text;
  if (!out) throw IoFailure("write failed for " + path);
}

inline json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw IoFailure(path + ": " + e.what());
  }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// matrix, potential, rationals

inline json to_json(const IntMatrix2& m) { return json{{"matrix", {{m.a, m.b}, {m.c, m.d}}}}; }

inline IntMatrix2 matrix_from_json(const json& j) {
  const json& m = j.contains("matrix") ? j.at("matrix") : j;
  if (!m.is_array() || m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
    throw std::invalid_argument("matrix must be [[a,b],[c,d]]");
  return {m[0][0].get<i64>(), m[0][1].get<i64>(), m[1][0].get<i64>(), m[1][1].get<i64>()};
}

/// "a,b,c,d", or a path to a matrix JSON file.
inline IntMatrix2 parse_matrix(const std::string& s) {
  if (s.find(',') == std::string::npos) return matrix_from_json(read_json(s));
  std::vector<i64> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    v.push_back(std::stoll(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad matrix entry '" + item + "'");
  }
  if (v.size() != 4) throw std::invalid_argument("matrix needs four integers a,b,c,d");
  return {v[0], v[1], v[2], v[3]};
}

inline json to_json(const Potential& p) {
  json terms = json::array();
  for (auto& t : p.terms()) terms.push_back({{"m", {t.m[0], t.m[1]}}, {"cos", t.c_cos}, {"sin", t.c_sin}});
  return json{{"constant", p.constant_term()}, {"terms", terms}};
}

inline Potential potential_from_json(const json& j) {
  std::vector<TrigTerm> terms;
  if (j.contains("terms"))
    for (auto& t : j.at("terms")) {
      TrigTerm term;
      term.m = {t.at("m").at(0).get<i64>(), t.at("m").at(1).get<i64>()};
      term.c_cos = t.value("cos", 0.0);
      term.c_sin = t.value("sin", 0.0);
      terms.push_back(term);
    }
  return Potential(std::move(terms), j.value("constant", 0.0));
}

inline json to_json(const RationalPoint& p) { return json::array({p.x.str(), p.y.str()}); }

inline RationalPoint point_from_json(const json& j) {
  return {Rational::parse(j.at(0).get<std::string>()), Rational::parse(j.at(1).get<std::string>())};
}

// ---------------------------------------------------------------------------
// curves and spectra

inline json to_json(const PressureCurve& c) {
  return json{{"method", to_string(c.method)},
              {"order", c.order},
              {"potential_id", c.potential_id},
              {"t", c.t_grid},
              {"P", c.values},
              {"residual", c.residuals},
              {"min_second_difference", c.min_second_difference}};
}

inline PressureCurve curve_from_json(const json& j) {
  PressureCurve c;
  c.method = parse_method(j.at("method").get<std::string>());
  c.order = j.at("order").get<int>();
  c.potential_id = j.at("potential_id").get<std::string>();
  c.t_grid = j.at("t").get<std::vector<double>>();
  c.values = j.at("P").get<std::vector<double>>();
  c.residuals = j.at("residual").get<std::vector<double>>();
  c.min_second_difference = j.at("min_second_difference").get<double>();
  if (c.values.size() != c.t_grid.size() || c.residuals.size() != c.t_grid.size())
    throw std::invalid_argument("curve arrays differ in length");
  return c;
}

/// {"1": [...], "2": [...], ...}
inline json to_json(const OrbitSpectrum& s) {
  json j = json::object();
  for (auto& [n, v] : s.values) j[std::to_string(n)] = v;
  return j;
}

inline OrbitSpectrum spectrum_from_json(const json& j) {
  OrbitSpectrum s;
  for (auto& [key, v] : j.items()) {
    const int n = std::stoi(key);
    s.values[n] = v.get<std::vector<double>>();
    s.max_period = std::max(s.max_period, n);
  }
  return s;
}

/// t,P_phi,P_phi2,gap
inline std::string curves_csv(const PressureCurve& a, const PressureCurve& b) {
  if (a.t_grid != b.t_grid) throw std::invalid_argument("curves_csv: grids differ");
  std::ostringstream os;
  os << "t,P_phi,P_phi2,gap\n";
  for (std::size_t i = 0; i < a.size(); ++i)
    os << format_double(a.t_grid[i]) << ',' << format_double(a.values[i]) << ',' << format_double(b.values[i]) << ','
       << format_double(std::abs(a.values[i] - b.values[i])) << '\n';
  return os.str();
}

inline std::string curve_csv(const PressureCurve& c) {
  std::ostringstream os;
  write_csv(os, c);
  return os.str();
}

// ---------------------------------------------------------------------------
// counterexample report

inline json to_json(const CounterexampleReport& r) {
  json witness = nullptr;
  if (r.spectrum_witness) {
    json pts = json::array();
    for (auto& p : r.witness_points) pts.push_back(to_json(p));
    witness = json{{"period", r.spectrum_witness->period},
                   {"gap", r.spectrum_witness->gap},
                   {"phi", r.spectrum_witness->first},
                   {"phi2", r.spectrum_witness->second},
                   {"points", pts}};
  }
  return json{{"matrix", to_json(r.matrix).at("matrix")},
              {"potential", to_json(r.psi)},
              {"k", r.k},
              {"normalization", r.normalization},
              {"phi", to_json(r.phi)},
              {"phi2", to_json(r.phi_k)},
              {"depth", r.depth},
              {"order", r.order},
              {"curve_tol", r.curve_tol},
              {"spec_tol", r.spec_tol},
              {"pressure_curve_phi", to_json(r.pressure_curve_phi)},
              {"pressure_curve_phi2", to_json(r.pressure_curve_phi2)},
              {"ratio_curve_phi", to_json(r.ratio_curve_phi)},
              {"ratio_curve_phi2", to_json(r.ratio_curve_phi2)},
              {"max_curve_gap", r.max_curve_gap},
              {"transfer_gap", r.transfer_gap},
              {"ratio_gap", r.ratio_gap},
              {"max_period", r.max_period},
              {"spectrum_witness", witness},
              {"condition_check", r.condition_check},
              {"verdict", r.verdict.label()},
              {"reason", r.verdict.reason}};
}

inline CounterexampleReport counterexample_from_json(const json& j) {
  CounterexampleReport r;
  r.matrix = matrix_from_json(j.at("matrix"));
  r.psi = potential_from_json(j.at("potential"));
  r.k = j.at("k").get<int>();
  r.normalization = j.at("normalization").get<double>();
  r.phi = potential_from_json(j.at("phi"));
  r.phi_k = potential_from_json(j.at("phi2"));
  r.depth = j.at("depth").get<int>();
  r.order = j.at("order").get<int>();
  r.curve_tol = j.at("curve_tol").get<double>();
  r.spec_tol = j.at("spec_tol").get<double>();
  r.pressure_curve_phi = curve_from_json(j.at("pressure_curve_phi"));
  r.pressure_curve_phi2 = curve_from_json(j.at("pressure_curve_phi2"));
  r.ratio_curve_phi = curve_from_json(j.at("ratio_curve_phi"));
  r.ratio_curve_phi2 = curve_from_json(j.at("ratio_curve_phi2"));
  r.max_curve_gap = j.at("max_curve_gap").get<double>();
  r.transfer_gap = j.at("transfer_gap").get<double>();
  r.ratio_gap = j.at("ratio_gap").get<double>();
  r.max_period = j.at("max_period").get<int>();
  if (const json& w = j.at("spectrum_witness"); !w.is_null()) {
    r.spectrum_witness = SpectrumWitness{w.at("period").get<int>(), w.at("phi").get<std::vector<double>>(),
                                         w.at("phi2").get<std::vector<double>>(), w.at("gap").get<double>()};
    for (auto& p : w.at("points")) r.witness_points.push_back(point_from_json(p));
  }
  r.condition_check = j.at("condition_check").get<double>();
  const auto label = j.at("verdict").get<std::string>();
  if (label != "reproduced" && label != "failed") throw std::invalid_argument("unknown verdict '" + label + "'");
  r.verdict = {label == "reproduced", j.at("reason").get<std::string>()};
  return r;
}

enum class Format { json, csv };

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw std::invalid_argument("unknown format '" + s + "' (json|csv)");
}

inline std::string render(const CounterexampleReport& r, Format f) {
  return f == Format::json ? dump(to_json(r)) : curves_csv(r.pressure_curve_phi, r.pressure_curve_phi2);
}

inline void emit(const CounterexampleReport& r, Format f, const std::string& path) { write_text(path, render(r, f)); }

// ---------------------------------------------------------------------------
// realization report

inline json to_json(const RealizationReport& r) {
  json livsic{{"depth", r.livsic.depth},
              {"n", r.livsic.periods},
              {"M", r.livsic.per_period},
              {"cumulative", r.livsic.cumulative},
              {"M_max", r.livsic.M},
              {"words", r.livsic.words},
              {"skipped", r.livsic.skipped}};
  json coh = json::array();
  for (auto& c : r.cohomology)
    coh.push_back({{"depth", c.depth},
                   {"n", c.periods},
                   {"residual", c.per_period},
                   {"max_residual", c.max_residual},
                   {"orbits", c.orbits},
                   {"boundary_skipped", c.boundary_skipped}});
  return json{{"matrix", to_json(r.matrix).at("matrix")},
              {"potential", to_json(r.psi)},
              {"normalization", r.normalization},
              {"depth", r.depth},
              {"seed", r.seed},
              {"livsic_M", livsic},
              {"cohomology", coh},
              {"expansion", {{"steps", r.expansion.steps}, {"min_product", r.expansion.min_product}}},
              {"lebesgue",
               {{"depth", r.lebesgue.depth},
                {"xi_affine_error", r.lebesgue.xi_affine_error},
                {"inverse_g_error", r.lebesgue.inverse_g_error},
                {"livsic_error", r.lebesgue.livsic_error},
                {"cohomology_residual", r.lebesgue.cohomology_residual}}}};
}

// ---------------------------------------------------------------------------
// coding dump

inline json to_json(const MarkovCoding& c) {
  const auto& L = c.map();
  json rects = json::array();
  for (std::size_t a = 0; a < c.rectangles().size(); ++a) {
    const Rect& r = c.rectangles()[a];
    Vec2 corner = mod1(L.from_us(r.u0, r.s0));
    rects.push_back({{"symbol", a},
                     {"corner", {corner.x, corner.y}},
                     {"corner_us", {r.u0, r.s0}},
                     {"extents_us", {r.wu(), r.ws()}},
                     {"area", c.area(static_cast<int>(a))}});
  }
  json T = json::array();
  for (auto& row : c.sft().transition) {
    json jr = json::array();
    for (auto v : row) jr.push_back(static_cast<int>(v));
    T.push_back(jr);
  }
  return json{{"matrix", to_json(L.matrix()).at("matrix")},
              {"e_u", {L.e_u().x, L.e_u().y}},
              {"e_s", {L.e_s().x, L.e_s().y}},
              {"rectangles", rects},
              {"transition", T},
              {"zero_symbol", c.zero_symbol()}};
}

}  // namespace anosov
