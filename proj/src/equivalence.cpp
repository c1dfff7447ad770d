#include "normop/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "normop/matching.hpp"

namespace normop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance_to_set(Complex z, const std::vector<Complex>& set) {
  double d = kInf;
  for (Complex w : set) d = std::min(d, std::abs(z - w));
  return d;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySet, "Hausdorff distance of an empty set");
  double d = 0.0;
  for (Complex z : a) d = std::max(d, distance_to_set(z, b));
  for (Complex z : b) d = std::max(d, distance_to_set(z, a));
  return d;
}

// --- Spectral equivalence -------------------------------------------------------

EquivalenceReport spectrally_equivalent(const SpectralModel& a, const SpectralModel& b,
                                        double tol) {
  EquivalenceReport report;
  if (a.size() != b.size()) return report;
  const std::size_t n = a.size();
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a.block(i).mult == b.block(j).mult)
        cost[i][j] = std::abs(a.block(i).lambda - b.block(j).lambda);
  const auto result = matching::bottleneck_assignment(cost);
  if (!result) return report;
  report.bottleneck = result->value;
  for (std::size_t i = 0; i < n; ++i) report.matching.emplace_back(i, result->assignment[i]);
  report.equivalent = result->value <= tol;
  return report;
}

// --- Axiom residuals ---------------------------------------------------------------

double probe_violation(const SpectralModel& m, const TheoryDescriptor& theory, Complex lambda) {
  const double to_k = theory.distance(lambda);
  const double to_spec = distance_to_set(lambda, m.spectrum());
  if (!std::isfinite(to_k)) return 0.0;
  return std::max(0.0, to_k - to_spec);
}

namespace {

constexpr std::size_t kNetPointBudget = 100000;
constexpr int kProbeGridSide = 256;

std::vector<Complex> box_net(const Box& b, double h) {
  if (!std::isfinite(b.x0) || !std::isfinite(b.x1) || !std::isfinite(b.y0) ||
      !std::isfinite(b.y1))
    throw Error(ErrorKind::Input, "perfect part boxes must be bounded");
  const double nx = std::max(1.0, std::ceil((b.x1 - b.x0) / h));
  const double ny = std::max(1.0, std::ceil((b.y1 - b.y0) / h));
  if (nx * ny > static_cast<double>(kNetPointBudget)) {
    throw Error(ErrorKind::Budget, "net of a perfect box exceeds " +
                                       std::to_string(kNetPointBudget) + " points",
                nx * ny);
  }
  std::vector<Complex> pts;
  for (long long i = 0; i < static_cast<long long>(nx); ++i)
    for (long long j = 0; j < static_cast<long long>(ny); ++j)
      pts.emplace_back(b.x0 + static_cast<double>(i) * h, b.y0 + static_cast<double>(j) * h);
  return pts;
}

}  // namespace

AxiomReport axiom_residuals(const SpectralModel& m, const TheoryDescriptor& theory,
                            double net_resolution, double normality) {
  if (!(net_resolution > 0.0)) throw Error(ErrorKind::Precondition, "net resolution must be positive");
  const std::vector<Complex> spectrum = m.spectrum();
  AxiomReport r;
  r.normality = normality;

  auto add_eigen = [&](Complex lambda) {
    const double d = distance_to_set(lambda, spectrum);
    r.eigen.push_back({lambda, d});
    r.max_eigen = std::max(r.max_eigen, d);
  };
  for (const TheoryAtom& a : theory.atoms) add_eigen(a.lambda);
  for (const Box& b : theory.perfect)
    for (Complex z : box_net(b, net_resolution)) add_eigen(z);

  // Probes: the model eigenvalues, where the margin is largest, and a grid
  // over the bounding box of K and the spectrum.
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  auto extend = [&](double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (Complex z : spectrum) extend(z.real(), z.imag());
  for (const TheoryAtom& a : theory.atoms) extend(a.lambda.real(), a.lambda.imag());
  for (const Box& b : theory.perfect) {
    extend(b.x0, b.y0);
    extend(b.x1, b.y1);
  }
  std::vector<Complex> probes = spectrum;
  if (x0 <= x1) {
    x0 -= net_resolution;
    x1 += net_resolution;
    y0 -= net_resolution;
    y1 += net_resolution;
    const double step = std::max({net_resolution, (x1 - x0) / kProbeGridSide,
                                  (y1 - y0) / kProbeGridSide});
    for (double x = x0; x <= x1; x += step)
      for (double y = y0; y <= y1; y += step) probes.emplace_back(x, y);
  }
  r.probes = probes.size();
  AtomResidual worst_grid{0.0, 0.0};
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double v = probe_violation(m, theory, probes[i]);
    r.max_violation = std::max(r.max_violation, v);
    if (v <= 0.0) continue;
    if (i < spectrum.size())
      r.violations.push_back({probes[i], v});
    else if (v > worst_grid.residual)
      worst_grid = {probes[i], v};
  }
  if (worst_grid.residual > 0.0) r.violations.push_back(worst_grid);

  for (const TheoryAtom& a : theory.atoms) {
    if (!a.isolated) continue;
    const auto block = m.find_block(a.lambda);
    const Multiplicity actual = block ? m.block(*block).mult : Multiplicity::finite(0);
    if (!(actual == a.mult)) r.mismatches.push_back({a.lambda, a.mult, actual});
  }

  r.holds = r.normality <= net_resolution && r.max_eigen <= net_resolution &&
            r.max_violation <= net_resolution && r.mismatches.empty();
  return r;
}

// --- Approximate unitary equivalence ---------------------------------------------------

namespace {

struct Side {
  std::vector<Coord> finite;                 // expanded finite coordinates
  std::vector<Complex> finite_lambda;
  std::vector<std::uint32_t> infinite;       // INF block indices
  std::vector<Complex> infinite_lambda;
};

Side expand(const SpectralModel& m) {
  Side s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Block& blk = m.block(i);
    const auto idx = static_cast<std::uint32_t>(i);
    if (blk.mult.is_infinite()) {
      s.infinite.push_back(idx);
      s.infinite_lambda.push_back(blk.lambda);
      continue;
    }
    for (std::uint64_t j = 0; j < blk.mult.value(); ++j) {
      s.finite.push_back({idx, j});
      s.finite_lambda.push_back(blk.lambda);
    }
  }
  return s;
}

// Nearest infinite block of `other` within r, if any.
std::optional<std::size_t> nearest_infinite(Complex z, const Side& other, double r) {
  std::optional<std::size_t> best;
  double best_d = kInf;
  for (std::size_t k = 0; k < other.infinite.size(); ++k) {
    const double d = std::abs(z - other.infinite_lambda[k]);
    if (d <= r && d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

bool infinite_requirement(const Side& a, const Side& b, double r) {
  for (Complex z : a.infinite_lambda)
    if (!nearest_infinite(z, b, r)) return false;
  for (Complex z : b.infinite_lambda)
    if (!nearest_infinite(z, a, r)) return false;
  return true;
}

// Left: A coordinates x, then one dummy d_y per B coordinate.
// Right: B coordinates y, then one dummy e_x per A coordinate.
// x - e_x and d_y - y mean absorption into a nearby infinite block; dummies
// pair freely with each other. A perfect matching is a feasible alignment.
matching::BipartiteMatching finite_matching(const Side& a, const Side& b, double r,
                                            bool allow_absorb) {
  const std::size_t na = a.finite.size();
  const std::size_t nb = b.finite.size();
  std::vector<std::vector<std::size_t>> adj(na + nb);
  for (std::size_t x = 0; x < na; ++x) {
    for (std::size_t y = 0; y < nb; ++y)
      if (std::abs(a.finite_lambda[x] - b.finite_lambda[y]) <= r) adj[x].push_back(y);
    if (allow_absorb && nearest_infinite(a.finite_lambda[x], b, r)) adj[x].push_back(nb + x);
  }
  for (std::size_t y = 0; y < nb; ++y) {
    auto& row = adj[na + y];
    if (allow_absorb && nearest_infinite(b.finite_lambda[y], a, r)) row.push_back(y);
    for (std::size_t x = 0; x < na; ++x) row.push_back(nb + x);
  }
  return matching::hopcroft_karp(na + nb, na + nb, adj);
}

}  // namespace

AlignmentCertificate aue_align(const SpectralModel& a, const SpectralModel& b,
                               std::size_t budget) {
  const Side sa = expand(a);
  const Side sb = expand(b);
  if (sa.finite.size() + sb.finite.size() > budget) {
    throw Error(ErrorKind::Budget, "alignment needs " +
                                       std::to_string(sa.finite.size() + sb.finite.size()) +
                                       " finite coordinates, above the budget " +
                                       std::to_string(budget));
  }
  const std::size_t na = sa.finite.size();
  const std::size_t nb = sb.finite.size();
  const std::size_t full = na + nb;

  std::vector<double> thresholds{0.0};
  for (const Block& x : a.blocks())
    for (const Block& y : b.blocks()) thresholds.push_back(std::abs(x.lambda - y.lambda));
  thresholds = sorted_unique(std::move(thresholds));

  auto feasible = [&](double r) {
    return infinite_requirement(sa, sb, r) && finite_matching(sa, sb, r, true).size == full;
  };

  if (!feasible(thresholds.back())) {
    // Best bound for a maximum partial matching of the finite coordinates.
    const std::size_t target = finite_matching(sa, sb, thresholds.back(), false).size;
    std::size_t lo = 0, hi = thresholds.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (finite_matching(sa, sb, thresholds[mid], false).size >= target)
        hi = mid;
      else
        lo = mid + 1;
    }
    throw Error(ErrorKind::NoAlignment,
                "no alignment between '" + a.label() + "' and '" + b.label() +
                    "': dimensions cannot be matched; best partial bound " +
                    std::to_string(thresholds[lo]),
                thresholds[lo]);
  }

  std::size_t lo = 0, hi = thresholds.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(thresholds[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  const double r = thresholds[lo];
  const matching::BipartiteMatching m = finite_matching(sa, sb, r, true);

  AlignmentCertificate cert;
  auto note = [&](double d) { cert.residual = std::max(cert.residual, d); };
  for (std::size_t x = 0; x < na; ++x) {
    const std::size_t y = m.left_to_right[x];
    if (y < nb) {
      const double d = std::abs(sa.finite_lambda[x] - sb.finite_lambda[y]);
      cert.pairs.push_back({sa.finite[x], sb.finite[y], d});
      note(d);
    } else {
      const std::size_t k = *nearest_infinite(sa.finite_lambda[x], sb, r);
      const double d = std::abs(sa.finite_lambda[x] - sb.infinite_lambda[k]);
      cert.absorbed.push_back({true, sa.finite[x], sb.infinite[k], d});
      note(d);
    }
  }
  for (std::size_t y = 0; y < nb; ++y) {
    if (m.right_to_left[y] < na) continue;
    const std::size_t k = *nearest_infinite(sb.finite_lambda[y], sa, r);
    const double d = std::abs(sb.finite_lambda[y] - sa.infinite_lambda[k]);
    cert.absorbed.push_back({false, sb.finite[y], sa.infinite[k], d});
    note(d);
  }
  for (std::size_t i = 0; i < sa.infinite.size(); ++i) {
    const std::size_t k = *nearest_infinite(sa.infinite_lambda[i], sb, r);
    const double d = std::abs(sa.infinite_lambda[i] - sb.infinite_lambda[k]);
    cert.infinite.push_back({true, sa.infinite[i], sb.infinite[k], d});
    note(d);
  }
  for (std::size_t i = 0; i < sb.infinite.size(); ++i) {
    const std::size_t k = *nearest_infinite(sb.infinite_lambda[i], sa, r);
    const double d = std::abs(sb.infinite_lambda[i] - sa.infinite_lambda[k]);
    cert.infinite.push_back({false, sb.infinite[i], sa.infinite[k], d});
    note(d);
  }
  return cert;
}

// --- Limit theories ---------------------------------------------------------------

namespace {

Multiplicity mass_in_ball(const SpectralModel& m, Complex center, double radius) {
  Multiplicity total = Multiplicity::finite(0);
  for (const Block& b : m.blocks())
    if (std::abs(b.lambda - center) < radius) total = total + b.mult;
  return total;
}

std::size_t points_in_ball(const SpectralModel& m, Complex center, double radius) {
  std::size_t n = 0;
  for (const Block& b : m.blocks())
    if (std::abs(b.lambda - center) < radius) ++n;
  return n;
}

// Stabilized value of a tail of multiplicities: constant, or unbounded
// (nondecreasing past the cap), or nothing.
std::optional<Multiplicity> stabilized(const std::vector<Multiplicity>& values,
                                       std::uint64_t cap) {
  if (std::all_of(values.begin(), values.end(),
                  [&](const Multiplicity& v) { return v == values.front(); }))
    return values.front();
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[i - 1]) return std::nullopt;
  const Multiplicity last = values.back();
  if (last.is_infinite() || last.value() > cap) return Multiplicity::infinite();
  return std::nullopt;
}

}  // namespace

LimitTheory limit_theory(const std::vector<SpectralModel>& seq, const std::vector<double>& radii,
                         std::uint64_t cap) {
  if (seq.empty()) throw Error(ErrorKind::Precondition, "limit of an empty sequence");
  if (radii.empty()) throw Error(ErrorKind::Precondition, "empty ball schedule");
  for (double r : radii)
    if (!(r > 0.0)) throw Error(ErrorKind::Precondition, "schedule radii must be positive");
  for (const SpectralModel& m : seq)
    if (m.size() == 0) throw Error(ErrorKind::EmptySet, "a model in the sequence has empty spectrum");

  const double r_min = *std::min_element(radii.begin(), radii.end());
  const std::size_t n = seq.size();
  const std::size_t tail_start = n - std::max<std::size_t>(1, n / 3);
  const SpectralModel& last = seq.back();

  LimitTheory out;
  out.radius = r_min;
  for (std::size_t i = tail_start; i < n; ++i)
    out.oscillation = std::max(out.oscillation, hausdorff(seq[i].spectrum(), last.spectrum()));
  if (out.oscillation > r_min) {
    throw Error(ErrorKind::Divergence,
                "spectra do not settle: tail Hausdorff oscillation " +
                    std::to_string(out.oscillation) + " exceeds the finest radius " +
                    std::to_string(r_min),
                out.oscillation);
  }

  // Candidates: points of the last spectrum, most persistent first.
  struct Candidate {
    Complex lambda;
    std::size_t persistence = 0;
  };
  std::vector<Candidate> cands;
  for (Complex z : last.spectrum()) {
    Candidate c{z, 0};
    for (std::size_t i = tail_start; i < n; ++i)
      if (points_in_ball(seq[i], z, 0.5 * r_min) > 0) ++c.persistence;
    cands.push_back(c);
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.persistence != y.persistence) return x.persistence > y.persistence;
    return lex_less(x.lambda, y.lambda);
  });
  std::vector<Complex> kept;
  for (const Candidate& c : cands) {
    const bool absorbed = std::any_of(kept.begin(), kept.end(), [&](Complex k) {
      return std::abs(k - c.lambda) < 0.5 * r_min;
    });
    if (!absorbed) kept.push_back(c.lambda);
  }
  std::sort(kept.begin(), kept.end(), lex_less);

  for (Complex lambda : kept) {
    TheoryAtom atom{lambda, Multiplicity::finite(0), true};
    const std::size_t first = points_in_ball(seq[tail_start], lambda, r_min);
    for (std::size_t i = tail_start + 1; i < n && atom.isolated; ++i)
      if (points_in_ball(seq[i], lambda, r_min) != first) atom.isolated = false;

    if (atom.isolated) {
      std::optional<Multiplicity> best;
      for (double r : radii) {
        std::vector<Multiplicity> values;
        for (std::size_t i = tail_start; i < n; ++i) values.push_back(mass_in_ball(seq[i], lambda, r));
        const auto v = stabilized(values, cap);
        if (!v) {
          if (r == r_min) {
            throw Error(ErrorKind::Divergence,
                        "multiplicity near (" + std::to_string(lambda.real()) + ", " +
                            std::to_string(lambda.imag()) + ") does not stabilize",
                        r);
          }
          continue;
        }
        best = best ? min(*best, *v) : *v;
      }
      atom.mult = *best;
    }
    out.theory.atoms.push_back(atom);
  }
  return out;
}

// --- Perturbation distance ---------------------------------------------------------------

namespace {

struct Atoms {
  std::vector<Complex> points;
  std::vector<double> roots;  // sqrt of masses
};

Atoms realized_atoms(const TypeDescriptor& t, const SpectralModel& model, const char* name) {
  if (t.n != 1) throw Error(ErrorKind::Arity, std::string(name) + " is not a 1-type");
  if (t.param_label != kEmptyParams)
    throw Error(ErrorKind::Precondition, std::string(name) + " is not a type over the empty set");
  if (!t.gram[0][0].is_positive())
    throw Error(ErrorKind::Positivity, std::string(name) + " has a non-positive measure");
  Atoms out;
  for (const auto& atom : t.gram[0][0].atoms()) {
    if (!model.find_block(atom.point)) {
      throw Error(ErrorKind::Realization,
                  std::string(name) + " puts mass on (" + std::to_string(atom.point.real()) +
                      ", " + std::to_string(atom.point.imag()) + "), not an eigenvalue of '" +
                      model.label() + "'");
    }
    out.points.push_back(atom.point);
    out.roots.push_back(std::sqrt(std::max(0.0, atom.mass.real())));
  }
  return out;
}

struct Injection {
  double cost = kInf;
  double shift = 0.0;
  double l2sq = 0.0;
  std::vector<std::size_t> map;  // p atom -> q atom or kUnmatched
};

// Exhaustive search over partial injections whose first choice is fixed.
Injection search_branch(const Atoms& p, const Atoms& q, std::size_t first_choice) {
  const std::size_t n = p.points.size();
  const std::size_t m = q.points.size();
  double total_q = 0.0;
  for (double r : q.roots) total_q += r * r;

  Injection best;
  std::vector<std::size_t> map(n, matching::kUnmatched);
  std::vector<bool> used(m, false);
  // l2 accumulates matched differences and unmatched p masses; the unmatched
  // q mass is total_q minus matched q mass.
  std::function<void(std::size_t, double, double, double)> rec =
      [&](std::size_t i, double shift, double l2, double matched_q) {
        const double lower = std::max(shift, std::sqrt(std::max(0.0, l2)));
        if (lower >= best.cost) return;
        if (i == n) {
          const double l2sq = l2 + std::max(0.0, total_q - matched_q);
          const double cost = std::max(shift, std::sqrt(l2sq));
          if (cost < best.cost) best = {cost, shift, l2sq, map};
          return;
        }
        const std::size_t lo = i == 0 ? first_choice : 0;
        const std::size_t hi = i == 0 ? first_choice + 1 : m + 1;
        for (std::size_t j = lo; j < hi; ++j) {
          if (j == m) {
            map[i] = matching::kUnmatched;
            rec(i + 1, shift, l2 + p.roots[i] * p.roots[i], matched_q);
            continue;
          }
          if (used[j]) continue;
          used[j] = true;
          map[i] = j;
          const double d = p.roots[i] - q.roots[j];
          rec(i + 1, std::max(shift, std::abs(p.points[i] - q.points[j])), l2 + d * d,
              matched_q + q.roots[j] * q.roots[j]);
          used[j] = false;
        }
        map[i] = matching::kUnmatched;
      };
  rec(0, 0.0, 0.0, 0.0);
  return best;
}

Injection brute_force(const Atoms& p, const Atoms& q, unsigned threads) {
  const std::size_t m = q.points.size();
  if (p.points.empty()) {
    double total_q = 0.0;
    for (double r : q.roots) total_q += r * r;
    return {std::sqrt(total_q), 0.0, total_q, {}};
  }
  std::vector<Injection> branch(m + 1);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(m + 1)));
  if (workers == 1) {
    for (std::size_t j = 0; j <= m; ++j) branch[j] = search_branch(p, q, j);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t j = w; j <= m; j += workers) branch[j] = search_branch(p, q, j);
      });
    }
    for (std::thread& t : pool) t.join();
  }
  Injection best;
  for (Injection& b : branch)
    if (b.cost < best.cost) best = std::move(b);
  return best;
}

// Best partial injection using only pairs at distance <= t, minimizing the
// l2 term by a min-cost assignment with dummy rows and columns.
Injection threshold_injection(const Atoms& p, const Atoms& q, double t) {
  const std::size_t n = p.points.size();
  const std::size_t m = q.points.size();
  double scale = 1.0;
  for (double r : p.roots) scale += r * r;
  for (double r : q.roots) scale += r * r;
  const double forbid = 1e6 * scale;
  const std::size_t size = n + m;
  std::vector<std::vector<double>> cost(size, std::vector<double>(size, forbid));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (std::abs(p.points[i] - q.points[j]) <= t) {
        const double d = p.roots[i] - q.roots[j];
        cost[i][j] = d * d;
      }
    }
    cost[i][m + i] = p.roots[i] * p.roots[i];
  }
  for (std::size_t j = 0; j < m; ++j) {
    cost[n + j][j] = q.roots[j] * q.roots[j];
    for (std::size_t i = 0; i < n; ++i) cost[n + j][m + i] = 0.0;
  }
  const std::vector<std::size_t> assign = matching::min_cost_assignment(cost);
  Injection inj;
  inj.map.assign(n, matching::kUnmatched);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = assign[i];
    if (j < m) {
      inj.map[i] = j;
      inj.shift = std::max(inj.shift, std::abs(p.points[i] - q.points[j]));
    }
  }
  for (std::size_t i = 0; i < size; ++i) inj.l2sq += cost[i][assign[i]];
  inj.cost = std::max(inj.shift, std::sqrt(inj.l2sq));
  return inj;
}

Injection threshold_search(const Atoms& p, const Atoms& q) {
  std::vector<double> ts{-1.0};  // no pairs allowed
  for (Complex a : p.points)
    for (Complex b : q.points) ts.push_back(std::abs(a - b));
  ts = sorted_unique(std::move(ts));

  // Past the first index where t >= sqrt(l2(t)) the objective only grows.
  auto crossed = [&](std::size_t k) {
    return ts[k] >= std::sqrt(threshold_injection(p, q, ts[k]).l2sq);
  };
  std::size_t lo = 0, hi = ts.size() - 1;
  if (!crossed(hi)) {
    lo = hi;
  } else {
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (crossed(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
  }
  Injection best = threshold_injection(p, q, ts[lo]);
  if (lo > 0) {
    Injection before = threshold_injection(p, q, ts[lo - 1]);
    if (before.cost <= best.cost) best = std::move(before);
  }
  return best;
}

}  // namespace

PerturbationCertificate perturbation_distance(const TypeDescriptor& p, const TypeDescriptor& q,
                                              const SpectralModel& model, unsigned threads,
                                              std::size_t brute_force_max) {
  const Atoms ap = realized_atoms(p, model, "first type");
  const Atoms aq = realized_atoms(q, model, "second type");

  PerturbationCertificate cert;
  cert.exhaustive = ap.points.size() <= brute_force_max && aq.points.size() <= brute_force_max;
  const Injection best = cert.exhaustive ? brute_force(ap, aq, threads) : threshold_search(ap, aq);

  cert.bound = best.cost;
  cert.spectral_shift = best.shift;
  cert.vector_term = std::sqrt(best.l2sq);
  std::vector<bool> q_used(aq.points.size(), false);
  for (std::size_t i = 0; i < ap.points.size(); ++i) {
    const std::size_t j = i < best.map.size() ? best.map[i] : matching::kUnmatched;
    if (j == matching::kUnmatched) {
      cert.unmatched_p.push_back(ap.points[i]);
    } else {
      cert.matched.emplace_back(ap.points[i], aq.points[j]);
      q_used[j] = true;
    }
  }
  for (std::size_t j = 0; j < aq.points.size(); ++j)
    if (!q_used[j]) cert.unmatched_q.push_back(aq.points[j]);
  return cert;
}

}  // namespace normop
