#include "normop/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "normop/calculus.hpp"
#include "normop/equivalence.hpp"
#include "normop/independence.hpp"
#include "normop/json_io.hpp"
#include "normop/linalg.hpp"
#include "normop/typespace.hpp"

namespace normop::cli {

namespace {

using io::Json;
using io::number;

struct Common {
  std::optional<double> tol;
  bool verbose = false;
  std::uint64_t seed = 0;
  std::string out_path;
  unsigned threads = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--tol", c.tol, "Tolerance of the check");
  sub->add_flag("--verbose", c.verbose, "Human-readable summary on stderr");
  sub->add_option("--seed", c.seed, "Seed for randomized checks");
  sub->add_option("--out", c.out_path, "Write the report to this path instead of stdout");
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 256u));
}

// Uniform double in [0, 1) from the top 53 bits; stable across standard
// library implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
}

Json report(Json j) {
  j["v"] = io::kSchemaVersion;
  return j;
}

Json complex_list(const std::vector<Complex>& zs) {
  Json a = Json::array();
  for (Complex z : zs) a.push_back(io::complex_json(z));
  return a;
}

// --- Subcommand bodies; each returns the exit code and fills `result` ------------------

int cmd_decompose(const std::string& path, const std::string& label, const Common& c, Json& result,
                  std::ostream& err) {
  const linalg::ComplexMatrix t = io::matrix_from_json(io::read_file(path));
  const linalg::SpectralDecomposition d = linalg::decompose_normal(t, c.tol.value_or(1e-8));
  const double scale = std::max(1.0, t.frobenius_norm());
  const double merge = 1e-9 * scale;

  std::vector<Block> blocks;
  std::vector<std::vector<Complex>> groups;
  for (Complex z : d.eigenvalues) {
    if (!groups.empty() && std::abs(z - groups.back().front()) <= merge)
      groups.back().push_back(z);
    else
      groups.push_back({z});
  }
  for (const auto& g : groups) {
    Complex mean = 0.0;
    for (Complex z : g) mean += z;
    mean /= static_cast<double>(g.size());
    blocks.push_back({mean, Multiplicity::finite(g.size()), 0});
  }
  const SpectralModel model(label, std::move(blocks));
  for (Complex z : d.eigenvalues) {
    if (std::abs(z) > 1.0 + 1e-12) {
      err << "warning: spectrum leaves the closed unit disk (|lambda| = " << std::abs(z) << ")\n";
      break;
    }
  }
  result = io::to_json(model);
  result["normality_residual"] = number(linalg::normality_residual(t));
  result["reconstruction_residual"] = number((d.reconstruct() - t).frobenius_norm());
  result["eigenvalues"] = complex_list(d.eigenvalues);
  if (c.verbose) err << "decompose: " << model.size() << " distinct eigenvalues of " << t.rows() << "\n";
  return kHolds;
}

int cmd_axioms(const std::string& model_path, const std::string& theory_path, double resolution,
               const Common& c, Json& result, std::ostream& err) {
  const Json mj = io::read_file(model_path);
  const SpectralModel m = io::model_from_json(mj);
  const TheoryDescriptor th = io::theory_from_json(io::read_file(theory_path));
  double normality = 0.0;
  if (mj.contains("normality_residual") && mj["normality_residual"].is_number())
    normality = mj["normality_residual"].get<double>();
  const AxiomReport r = axiom_residuals(m, th, c.tol.value_or(resolution), normality);

  Json eigen = Json::array(), viol = Json::array(), mism = Json::array();
  for (const AtomResidual& a : r.eigen)
    eigen.push_back({{"re", number(a.lambda.real())}, {"im", number(a.lambda.imag())}, {"residual", number(a.residual)}});
  for (const AtomResidual& a : r.violations)
    viol.push_back({{"re", number(a.lambda.real())}, {"im", number(a.lambda.imag())}, {"violation", number(a.residual)}});
  for (const MultiplicityMismatch& mm : r.mismatches)
    mism.push_back({{"re", number(mm.lambda.real())}, {"im", number(mm.lambda.imag())},
                    {"expected", io::to_json(mm.expected)}, {"actual", io::to_json(mm.actual)}});
  result = {{"holds", r.holds},
            {"resolution", number(c.tol.value_or(resolution))},
            {"normality", number(r.normality)},
            {"max_eigen_residual", number(r.max_eigen)},
            {"max_violation", number(r.max_violation)},
            {"probes", r.probes},
            {"eigen", eigen},
            {"violations", viol},
            {"mismatches", mism}};
  if (c.verbose) {
    err << "axioms: " << (r.holds ? "model satisfies" : "model violates") << " the theory (max eigen residual "
        << r.max_eigen << ", max violation " << r.max_violation << ", " << r.mismatches.size()
        << " multiplicity mismatches)\n";
  }
  return r.holds ? kHolds : kFails;
}

int cmd_equiv(const std::string& a_path, const std::string& b_path, const Common& c, Json& result,
              std::ostream& err) {
  const SpectralModel a = io::model_from_json(io::read_file(a_path));
  const SpectralModel b = io::model_from_json(io::read_file(b_path));
  const double tol = c.tol.value_or(1e-9);
  const EquivalenceReport r = spectrally_equivalent(a, b, tol);
  Json matching = Json::array();
  for (const auto& [i, j] : r.matching) matching.push_back({i, j});
  result = {{"equivalent", r.equivalent},
            {"tol", number(tol)},
            {"bottleneck", r.bottleneck ? number(*r.bottleneck) : Json(nullptr)},
            {"matching", matching}};
  if (c.verbose) err << "equiv: " << (r.equivalent ? "spectrally equivalent" : "not equivalent") << "\n";
  return r.equivalent ? kHolds : kFails;
}

Json coord_json(Coord c) { return {{"block", c.block}, {"index", c.index}}; }

int cmd_align(const std::string& a_path, const std::string& b_path, const Common& c, Json& result,
              std::ostream& err) {
  const SpectralModel a = io::model_from_json(io::read_file(a_path));
  const SpectralModel b = io::model_from_json(io::read_file(b_path));
  const AlignmentCertificate cert = aue_align(a, b);
  Json pairs = Json::array(), absorbed = Json::array(), inf = Json::array();
  for (const CoordPair& p : cert.pairs)
    pairs.push_back({{"a", coord_json(p.a)}, {"b", coord_json(p.b)}, {"distance", number(p.distance)}});
  for (const Absorption& p : cert.absorbed)
    absorbed.push_back({{"side", p.from_a ? "a" : "b"}, {"coord", coord_json(p.coord)},
                        {"partner_block", p.partner}, {"distance", number(p.distance)}});
  for (const InfinitePair& p : cert.infinite)
    inf.push_back({{"side", p.from_a ? "a" : "b"}, {"block", p.block}, {"partner_block", p.partner},
                   {"distance", number(p.distance)}});
  result = {{"residual", number(cert.residual)}, {"pairs", pairs}, {"absorbed", absorbed}, {"infinite", inf}};
  if (c.verbose) err << "align: residual " << cert.residual << "\n";
  return kHolds;
}

int cmd_limit(const std::string& path, std::vector<double> radii, std::uint64_t cap, const Common& c,
              Json& result, std::ostream& err) {
  const Json j = io::read_file(path);
  if (!j.is_object() || !j.contains("models") || !j["models"].is_array())
    throw Error(ErrorKind::Input, path + ": expected an object with a 'models' array");
  std::vector<SpectralModel> seq;
  for (const Json& m : j["models"]) seq.push_back(io::model_from_json(m));
  if (radii.empty() && j.contains("radii")) {
    if (!j["radii"].is_array()) throw Error(ErrorKind::Input, path + ": 'radii' must be an array");
    for (const Json& r : j["radii"]) {
      if (!r.is_number()) throw Error(ErrorKind::Input, path + ": radii must be numbers");
      radii.push_back(r.get<double>());
    }
  }
  const LimitTheory lt = limit_theory(seq, radii, cap);
  result = {{"theory", io::to_json(lt.theory)},
            {"oscillation", number(lt.oscillation)},
            {"radius", number(lt.radius)}};
  if (c.verbose) err << "limit: " << lt.theory.atoms.size() << " limit points, oscillation " << lt.oscillation << "\n";
  return kHolds;
}

int cmd_type_dist(const std::string& p_path, const std::string& q_path, const Common& c, Json& result,
                  std::ostream& err) {
  const TypeDescriptor p = io::type_from_json(io::read_file(p_path));
  const TypeDescriptor q = io::type_from_json(io::read_file(q_path));
  const double d = type_distance(p, q);
  const double h = hellinger_sq(p.gram[0][0], q.gram[0][0]);
  result = {{"distance", number(d)},
            {"hellinger_sq", number(h)},
            {"base_distance", number(distance(p.base[0], q.base[0]))}};
  if (c.verbose) err << "type-dist: " << d << "\n";
  return kHolds;
}

int cmd_indep(const std::string& model_path, const std::string& a_path, const std::string& b_path,
              const std::string& c_path, const Common& c, Json& result, std::ostream& err) {
  const SpectralModel m = io::model_from_json(io::read_file(model_path));
  const auto a = io::vectors_from_json(io::read_file(a_path));
  const auto b = io::vectors_from_json(io::read_file(b_path));
  const auto cc = io::vectors_from_json(io::read_file(c_path));
  const IndependenceReport r = indep(m, a, b, cc, c.tol.value_or(kIndependenceTol));
  Json w = Json::array();
  for (double x : r.witnesses) w.push_back(number(x));
  result = {{"independent", r.independent}, {"witnesses", w}, {"tolerance", number(r.tolerance)}};
  if (c.verbose) err << "indep: " << (r.independent ? "independent" : "dependent") << "\n";
  return r.independent ? kHolds : kFails;
}

std::vector<double> parse_arguments(const std::string& spec, const std::string& name) {
  const auto open = spec.find('(');
  const auto close = spec.rfind(')');
  if (open == std::string::npos || close != spec.size() - 1)
    throw Error(ErrorKind::Input, "function '" + spec + "': expected " + name + "(...)");
  std::vector<double> out;
  std::stringstream ss(spec.substr(open + 1, close - open - 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Input, "function '" + spec + "': bad argument '" + tok + "'");
    }
  }
  return out;
}

ScalarFunction named_function(const std::string& spec) {
  if (spec == "identity") return [](Complex z) { return z; };
  if (spec == "square") return [](Complex z) { return z * z; };
  if (spec == "modulus-squared") return [](Complex z) { return Complex(std::norm(z)); };
  if (spec.rfind("mobius", 0) == 0) {
    const std::vector<double> p = parse_arguments(spec, "mobius");
    if (p.size() != 4) throw Error(ErrorKind::Input, "mobius takes four real coefficients a,b,c,d");
    if (p[0] * p[3] - p[1] * p[2] == 0.0) throw Error(ErrorKind::Input, "mobius needs ad - bc != 0");
    return [p](Complex z) { return (p[0] * z + p[1]) / (p[2] * z + p[3]); };
  }
  throw Error(ErrorKind::Input, "unknown function '" + spec +
                                    "' (square, modulus-squared, mobius(a,b,c,d), identity, bump)");
}

int cmd_calc(const std::string& model_path, const std::string& fn, const std::string& k1_path,
             const std::string& k2_path, std::optional<double> eps, const Common& c, Json& result,
             std::ostream& err) {
  const SpectralModel m = io::model_from_json(io::read_file(model_path));
  if (fn == "bump") {
    if (k1_path.empty() || k2_path.empty() || !eps)
      throw Error(ErrorKind::Input, "bump needs --k1, --k2 and --eps");
    const Region k1 = io::region_from_json(io::read_file(k1_path));
    const Region k2 = io::region_from_json(io::read_file(k2_path));
    const SeparatedProjection sp = separated_projection(m, k1, k2, *eps, c.tol.value_or(1e-6));
    Json proj = Json::array(), bump = Json::array();
    for (Complex z : sp.projection.multipliers) proj.push_back(number(z.real()));
    for (Complex z : sp.bump.multipliers) bump.push_back(number(z.real()));
    result = {{"function", "bump"},
              {"projection", proj},
              {"bump", bump},
              {"sigma", number(sp.sigma)},
              {"bump_error", number(sp.bump_error)},
              {"witness_degree", sp.witness_degree},
              {"witness_error", number(sp.witness_error)}};
    if (c.verbose) err << "calc: bump witness degree " << sp.witness_degree << ", error " << sp.witness_error << "\n";
    return sp.witness_degree >= 0 ? kHolds : kFails;
  }
  const SpectralModel image = functional_calculus(m, named_function(fn));
  result = {{"function", fn}, {"model", io::to_json(image)}};
  if (c.verbose) err << "calc: " << m.size() << " blocks -> " << image.size() << " blocks\n";
  return kHolds;
}

int cmd_pert(const std::string& p_path, const std::string& q_path, const std::string& model_path,
             const Common& c, Json& result, std::ostream& err) {
  const TypeDescriptor p = io::type_from_json(io::read_file(p_path));
  const TypeDescriptor q = io::type_from_json(io::read_file(q_path));
  const SpectralModel m = io::model_from_json(io::read_file(model_path));
  const PerturbationCertificate cert = perturbation_distance(p, q, m, c.threads);
  Json matched = Json::array();
  for (const auto& [a, b] : cert.matched) matched.push_back({{"p", io::complex_json(a)}, {"q", io::complex_json(b)}});
  result = {{"bound", number(cert.bound)},
            {"spectral_shift", number(cert.spectral_shift)},
            {"vector_term", number(cert.vector_term)},
            {"matched", matched},
            {"unmatched_p", complex_list(cert.unmatched_p)},
            {"unmatched_q", complex_list(cert.unmatched_q)},
            {"exhaustive", cert.exhaustive}};
  if (c.verbose) err << "pert: upper bound " << cert.bound << "\n";
  return kHolds;
}

int cmd_net(const std::string& model_path, const std::string& params_path, double eps, double cap,
            std::size_t check, bool count_only, const Common& c, Json& result, std::ostream& err) {
  SpectralModel m = io::model_from_json(io::read_file(model_path));
  std::vector<ModelVector> b;
  if (!params_path.empty()) b = io::vectors_from_json(io::read_file(params_path));
  const EpsilonNet net = epsilon_net(m, b, eps, cap);
  result = {{"size", net.types.size()}, {"spacing", number(net.spacing)}, {"dimension", net.dimension}};
  if (!count_only) {
    Json types = Json::array();
    for (const TypeDescriptor& t : net.types) types.push_back(io::to_json(t));
    result["types"] = types;
  }
  int code = kHolds;
  if (check > 0) {
    // Random vectors of norm <= cap; infinite blocks get a coordinate if
    // they have none.
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m.block(i).allocated == 0) m.allocate_fresh(i);
    std::mt19937_64 rng(c.seed);
    double worst = 0.0;
    for (std::size_t s = 0; s < check; ++s) {
      ModelVector v(m.label());
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::uint64_t j = 0; j < m.block(i).allocated; ++j)
          v.set({static_cast<std::uint32_t>(i), j}, Complex(normal(rng), normal(rng)));
      const double n = v.norm();
      if (n > 0.0) v = Complex(cap * uniform01(rng) / n) * v;
      const TypeDescriptor t = type_of(m, {v}, b);
      double best = std::numeric_limits<double>::infinity();
      for (const TypeDescriptor& u : net.types) best = std::min(best, type_distance(t, u));
      worst = std::max(worst, best);
    }
    const bool covered = worst <= eps;
    result["check"] = {{"samples", check}, {"max_distance", number(worst)}, {"covered", covered}};
    if (!covered) code = kFails;
  }
  if (c.verbose) err << "net: " << net.types.size() << " types in dimension " << net.dimension << "\n";
  return code;
}

int emit(const Json& j, const Common& c, std::ostream& out) {
  const std::string text = io::dump(j);
  if (c.out_path.empty()) {
    out << text;
    return 0;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Input, c.out_path + ": cannot write");
  f << text;
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral models of Hilbert spaces with a normal operator", "normop"};
  app.require_subcommand(1);
  Common common;
  std::function<int(Json&)> action;

  std::string p1, p2, p3, p4, label = "decomposed", fn, k1, k2;
  double resolution = 0.01, eps = 0.0, cap = 1.0;
  std::optional<double> calc_eps;
  std::vector<double> radii;
  std::uint64_t mult_cap = kMultiplicityCap;
  std::size_t check = 0;
  bool count_only = false;

  auto* dec = app.add_subcommand("decompose", "Spectral model of a normal matrix");
  dec->add_option("matrix", p1, "Matrix JSON")->required();
  dec->add_option("--label", label, "Label of the produced model");
  add_common(dec, common);
  dec->callback([&] { action = [&](Json& r) { return cmd_decompose(p1, label, common, r, err); }; });

  auto* ax = app.add_subcommand("axioms", "Axiom residuals of a model against a theory");
  ax->add_option("model", p1, "Model JSON")->required();
  ax->add_option("theory", p2, "Theory JSON")->required();
  ax->add_option("--resolution", resolution, "Net resolution and acceptance threshold");
  add_common(ax, common);
  ax->callback([&] { action = [&](Json& r) { return cmd_axioms(p1, p2, resolution, common, r, err); }; });

  auto* eq = app.add_subcommand("equiv", "Spectral equivalence of two models");
  eq->add_option("a", p1, "Model JSON")->required();
  eq->add_option("b", p2, "Model JSON")->required();
  add_common(eq, common);
  eq->callback([&] { action = [&](Json& r) { return cmd_equiv(p1, p2, common, r, err); }; });

  auto* al = app.add_subcommand("align", "Bottleneck alignment of two models");
  al->add_option("a", p1, "Model JSON")->required();
  al->add_option("b", p2, "Model JSON")->required();
  add_common(al, common);
  al->callback([&] { action = [&](Json& r) { return cmd_align(p1, p2, common, r, err); }; });

  auto* li = app.add_subcommand("limit", "Limit theory of a sequence of models");
  li->add_option("sequence", p1, "JSON object with 'models' and optional 'radii'")->required();
  li->add_option("--radii", radii, "Ball schedule radii")->delimiter(',');
  li->add_option("--cap", mult_cap, "Multiplicity cap beyond which growth means infinite");
  add_common(li, common);
  li->callback([&] { action = [&](Json& r) { return cmd_limit(p1, radii, mult_cap, common, r, err); }; });

  auto* td = app.add_subcommand("type-dist", "Distance between two 1-types");
  td->add_option("p", p1, "Type JSON")->required();
  td->add_option("q", p2, "Type JSON")->required();
  add_common(td, common);
  td->callback([&] { action = [&](Json& r) { return cmd_type_dist(p1, p2, common, r, err); }; });

  auto* in = app.add_subcommand("indep", "Forking independence of A from C over B");
  in->add_option("model", p1, "Model JSON")->required();
  in->add_option("a", p2, "Vector list JSON")->required();
  in->add_option("b", p3, "Vector list JSON")->required();
  in->add_option("c", p4, "Vector list JSON")->required();
  add_common(in, common);
  in->callback([&] { action = [&](Json& r) { return cmd_indep(p1, p2, p3, p4, common, r, err); }; });

  auto* ca = app.add_subcommand("calc", "Functional calculus and separated projections");
  ca->add_option("model", p1, "Model JSON")->required();
  ca->add_option("--f", fn, "square, modulus-squared, mobius(a,b,c,d), identity or bump")->required();
  ca->add_option("--k1", k1, "Region JSON of K1 (bump)");
  ca->add_option("--k2", k2, "Region JSON of K2 (bump)");
  ca->add_option("--eps", calc_eps, "Separation of K1 and K2 (bump)");
  add_common(ca, common);
  ca->callback([&] { action = [&](Json& r) { return cmd_calc(p1, fn, k1, k2, calc_eps, common, r, err); }; });

  auto* pe = app.add_subcommand("pert", "Perturbation-distance upper bound of two 1-types");
  pe->add_option("p", p1, "Type JSON")->required();
  pe->add_option("q", p2, "Type JSON")->required();
  pe->add_option("model", p3, "Model JSON realizing both")->required();
  add_common(pe, common);
  pe->callback([&] { action = [&](Json& r) { return cmd_pert(p1, p2, p3, common, r, err); }; });

  auto* ne = app.add_subcommand("net", "Epsilon-net of 1-types over parameters");
  ne->add_option("model", p1, "Model JSON")->required();
  ne->add_option("--params", p2, "Vector list JSON of the parameters");
  ne->add_option("--eps", eps, "Net radius")->required();
  ne->add_option("--cap", cap, "Norm cap");
  ne->add_option("--check", check, "Random vectors to test coverage with");
  ne->add_flag("--count-only", count_only, "Omit the types from the report");
  add_common(ne, common);
  ne->callback([&] {
    action = [&](Json& r) { return cmd_net(p1, p2, eps, cap, check, count_only, common, r, err); };
  });

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::Success&) {
    err << app.help();
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'normop --help' for usage\n";
    return kUsage;
  }

  try {
    Json result;
    const int code = action(result);
    emit(report(std::move(result)), common, out);
    return code;
  } catch (const Error& e) {
    const bool input = e.kind() == ErrorKind::Input || e.kind() == ErrorKind::Dimension;
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    Json j = {{"error", to_string(e.kind())}, {"message", e.what()}, {"value", number(e.value())}};
    emit(report(std::move(j)), common, out);
    return input ? kUsage : kFails;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace normop::cli
