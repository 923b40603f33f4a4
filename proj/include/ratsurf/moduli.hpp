#pragma once

// The restriction map u to the anticanonical curve, rho-invariance of u,
// fixed-part components, the injectivity check for W(G') vs W(G), and
// recovering blown-up points from u.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ratsurf/abelian.hpp"
#include "ratsurf/errors.hpp"
#include "ratsurf/folding.hpp"
#include "ratsurf/lattice.hpp"
#include "ratsurf/rootsys.hpp"

namespace ratsurf {

/// Blown-up points x_1..x_n on the curve; the identity 0 is implicit.
struct PointAssignment {
  SurfaceModel model = SurfaceModel::F1Blowup;
  std::vector<GroupElement> points;

  std::size_t size() const noexcept { return points.size(); }
  const GroupElement& x(int i) const { return points.at(static_cast<std::size_t>(i - 1)); }
  friend bool operator==(const PointAssignment&, const PointAssignment&) = default;
  friend auto operator<=>(const PointAssignment&, const PointAssignment&) = default;
};

/// u(a s + b f + c h + sum c_i l_i) = sum c_i x_i. Defined on every class;
/// the degree is tracked separately by callers that need it.
inline GroupElement restrict_point(const IntersectionLattice& lat, const PointAssignment& pa, const SigmaModel& sigma,
                                   const DivisorClass& d) {
  if (lat.model() != pa.model || static_cast<std::size_t>(lat.blowups()) != pa.size())
    throw Error(ErrorCode::DimensionMismatch, "point assignment does not match the lattice");
  GroupElement acc = sigma.zero();
  for (int i = 1; i <= lat.blowups(); ++i) {
    Int c = d[lat.first_exceptional() + static_cast<std::size_t>(i) - 1];
    acc = sigma.add(acc, sigma.scale(c, pa.x(i)));
  }
  return acc;
}

struct RestrictionHom {
  std::vector<DivisorClass> domain;
  std::vector<GroupElement> images;
};

/// u on a family of degree-0 classes.
inline RestrictionHom restriction_hom(const IntersectionLattice& lat, const PointAssignment& pa,
                                      const SigmaModel& sigma, const std::vector<DivisorClass>& classes) {
  RestrictionHom u{classes, {}};
  for (const auto& d : classes) {
    if (lat.pair(d, lat.canonical_class()) != 0)
      throw Error(ErrorCode::InvalidArgument, "class " + lat.format(d) + " is not orthogonal to K");
    u.images.push_back(restrict_point(lat, pa, sigma, d));
  }
  return u;
}

/// Case constraints on the points when viewed as a configuration.
inline bool satisfies_case_constraints(FoldType t, const PointAssignment& pa, const SigmaModel& g, int n = 0) {
  if (static_cast<int>(pa.size()) != point_count(t, n)) return false;
  auto x = [&](int i) { return pa.x(i); };
  switch (t) {
    case FoldType::B: return x(1) == g.zero();
    case FoldType::C:
      for (int i = 1; i <= n; ++i)
        if (x(2 * n + 1 - i) != g.neg(x(i))) return false;
      return true;
    case FoldType::G2: return x(1) == g.zero() && x(4) == g.add(x(2), x(3));
    case FoldType::F4: {
      auto p = g.add(x(1), x(6));
      return g.add(x(2), x(5)) == p && g.add(x(3), x(4)) == p;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// rho-invariance of u.

struct InvarianceResult {
  bool closed_form = false;   // the explicit condition on the points
  bool direct = false;        // u(rho(alpha_i)) == u(alpha_i) for all i
  bool literal = false;       // the condition exactly as usually stated (C_n: n(x_i + x_{2n+1-i}) = 0)
  bool agree() const { return closed_form == direct; }
};

/// For C_n the points are expected to satisfy sum x_i = 0.
inline InvarianceResult invariance_condition(const FoldingData& fd, const PointAssignment& pa, const SigmaModel& g) {
  const FoldType t = fd.type;
  const int n = fd.n;
  if (static_cast<int>(pa.size()) != fd.lattice.blowups())
    throw Error(ErrorCode::DimensionMismatch, "point count does not match the case");
  auto x = [&](int i) { return pa.x(i); };
  InvarianceResult r;
  switch (t) {
    case FoldType::B:
      r.closed_form = g.scale(2, x(1)) == g.zero();
      r.literal = r.closed_form;
      break;
    case FoldType::C: {
      std::vector<GroupElement> sums;
      for (int i = 1; i <= n; ++i) sums.push_back(g.add(x(i), x(2 * n + 1 - i)));
      r.closed_form = std::all_of(sums.begin(), sums.end(), [&](const auto& s) { return s == sums.front(); });
      r.literal = std::all_of(sums.begin(), sums.end(), [&](const auto& s) { return g.scale(n, s) == g.zero(); });
      break;
    }
    case FoldType::G2:
      r.closed_form = g.scale(2, x(1)) == g.zero() && g.add(x(1), x(4)) == g.add(x(2), x(3));
      r.literal = r.closed_form;
      break;
    case FoldType::F4: {
      auto p = g.add(x(1), x(6));
      r.closed_form = g.add(x(2), x(5)) == p && g.add(x(3), x(4)) == p;
      r.literal = r.closed_form;
      break;
    }
  }
  r.direct = true;
  for (const auto& a : fd.rho.simple.roots) {
    GroupElement lhs = restrict_point(fd.lattice, pa, g, fd.rho.apply(a));
    GroupElement rhs = restrict_point(fd.lattice, pa, g, a);
    if (lhs != rhs) {
      r.direct = false;
      break;
    }
  }
  return r;
}

inline InvarianceResult invariance_condition(FoldType t, const PointAssignment& pa, const SigmaModel& g, int n = 0) {
  return invariance_condition(folding_data(t, n), pa, g);
}

/// Assignments the invariance conditions are stated for: all of them, except
/// sum x_i = 0 for C_n.
inline bool in_invariance_domain(FoldType t, const PointAssignment& pa, const SigmaModel& g) {
  if (t != FoldType::C) return true;
  GroupElement s = g.zero();
  for (const auto& x : pa.points) s = g.add(s, x);
  return s == g.zero();
}

struct InvarianceSweep {
  Int total = 0;
  Int agree = 0;
  Int invariant = 0;
  Int literal_differs = 0;
  std::optional<PointAssignment> disagreement;
  std::optional<PointAssignment> literal_witness;  // literal form holds, closed form fails
};

inline InvarianceSweep invariance_sweep(FoldType t, const SigmaModel& g, int n = 0, Int cap = 100'000'000) {
  const FoldingData fd = folding_data(t, n);
  const int pts = fd.lattice.blowups();
  Int size = 1;
  for (int i = 0; i < pts; ++i) size = checked_mul(size, g.order());
  if (size > cap) throw Error(ErrorCode::BudgetExceeded, "too many point assignments to sweep");
  InvarianceSweep sw;
  g.for_each_tuple(static_cast<std::size_t>(pts), [&](const std::vector<GroupElement>& v) {
    PointAssignment pa{fd.lattice.model(), v};
    if (!in_invariance_domain(t, pa, g)) return;
    auto r = invariance_condition(fd, pa, g);
    ++sw.total;
    sw.agree += r.agree();
    sw.invariant += r.direct;
    if (!r.agree() && !sw.disagreement) sw.disagreement = pa;
    if (r.literal != r.closed_form) {
      ++sw.literal_differs;
      if (!sw.literal_witness) sw.literal_witness = pa;
    }
  });
  return sw;
}

// ---------------------------------------------------------------------------
// Components of the fixed part.

struct ComponentLabel {
  GroupElement label;
  Int size = 0;  // number of invariant point assignments carrying it
};

struct FixedComponents {
  std::vector<ComponentLabel> labels;
  GroupElement identity_label;
  Int expected = 0;  // count with full torsion
  std::optional<std::string> warning;
};

/// Labels: x_1 for B and G2 (2-torsion), the common pair sum for C_n
/// (n-torsion, with sum x_i = 0), and a single label for F4.
inline FixedComponents fixed_components(FoldType t, const SigmaModel& g, int n = 0) {
  FixedComponents fc;
  fc.identity_label = g.zero();
  const Int q = g.order();
  auto power = [](Int b, int e) {
    Int r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, b);
    return r;
  };
  std::vector<GroupElement> labels;
  Int per_label = 0;
  switch (t) {
    case FoldType::B:
      labels = g.torsion(2);
      fc.expected = 4;
      per_label = power(q, n);  // x_2..x_{n+1} free
      break;
    case FoldType::C:
      labels = g.torsion(n);
      fc.expected = static_cast<Int>(n) * n;
      per_label = power(q, n);  // x_1..x_n free, partners fixed by the label
      break;
    case FoldType::G2:
      labels = g.torsion(2);
      fc.expected = 4;
      per_label = power(q, 2);  // x_2, x_3 free
      break;
    case FoldType::F4:
      labels = {g.zero()};
      fc.expected = 1;
      per_label = power(q, 4);  // common value and x_1, x_2, x_3 free
      break;
  }
  for (const auto& l : labels) fc.labels.push_back({l, per_label});
  if (static_cast<Int>(labels.size()) < fc.expected)
    fc.warning = "insufficient torsion: " + std::to_string(labels.size()) + " of " + std::to_string(fc.expected) +
                 " components visible";
  return fc;
}

/// Label of an invariant point assignment, or nullopt if it is not invariant.
inline std::optional<GroupElement> component_label(const FoldingData& fd, const PointAssignment& pa,
                                                   const SigmaModel& g) {
  auto r = invariance_condition(fd, pa, g);
  if (!r.closed_form) return std::nullopt;
  switch (fd.type) {
    case FoldType::B:
    case FoldType::G2: return pa.x(1);
    case FoldType::C: return g.add(pa.x(1), pa.x(2 * fd.n));
    case FoldType::F4: return g.zero();
  }
  return std::nullopt;
}

inline std::optional<GroupElement> component_label(FoldType t, const PointAssignment& pa, const SigmaModel& g,
                                                   int n = 0) {
  return component_label(folding_data(t, n), pa, g);
}

// ---------------------------------------------------------------------------
// Injectivity of (Lambda(G')^rho (x) Sigma)/W(G) -> (Lambda(G') (x) Sigma)/W(G').

struct ChiResult {
  bool verified = false;
  Int domain_size = 0;
  Int orbit_count = 0;
  std::optional<std::pair<std::vector<GroupElement>, std::vector<GroupElement>>> counterexample;
};

inline constexpr Int kDefaultActionCap = 100'000'000;

inline ChiResult chi_injectivity_check(FoldType t, const SigmaModel& g, int n = 0, Int action_cap = kDefaultActionCap) {
  const FoldingData fd = folding_data(t, n);
  RootBasis basis(fd.lattice, fd.rho.simple.roots);
  const std::size_t r = basis.size();
  const auto orbits = fd.rho.orbits();

  std::vector<IntMatrix> big_gens, small_gens;
  for (const auto& a : fd.rho.simple.roots) big_gens.push_back(restrict_to_span(reflection(fd.lattice, a), basis));
  for (const auto& w : fd.weyl_gens) small_gens.push_back(restrict_to_span(w, basis));

  Int domain_size = 1;
  for (std::size_t i = 0; i < orbits.size(); ++i) domain_size = checked_mul(domain_size, g.order());
  const std::size_t big_order = matrix_closure(big_gens, r).size();
  if (checked_mul(domain_size, static_cast<Int>(big_order)) > action_cap)
    throw Error(ErrorCode::BudgetExceeded, "domain times |W(G')| exceeds the action cap");

  using Vec = std::vector<GroupElement>;
  auto act = [&](const IntMatrix& m, const Vec& v) { return apply_group_matrix(m, v, g); };
  auto orbit_of = [&](const std::vector<IntMatrix>& gens, const Vec& seed) {
    std::set<Vec> seen{seed};
    std::vector<Vec> stack{seed};
    while (!stack.empty()) {
      Vec v = stack.back();
      stack.pop_back();
      for (const auto& m : gens) {
        Vec w = act(m, v);
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    return seen;
  };
  auto in_domain = [&](const Vec& v) {
    for (const auto& o : orbits)
      for (std::size_t i : o)
        if (v[i] != v[o.front()]) return false;
    return true;
  };

  ChiResult res;
  res.domain_size = domain_size;
  std::set<Vec> visited;
  g.for_each_tuple(orbits.size(), [&](const Vec& c) {
    if (res.counterexample) return;
    Vec x(r);
    for (std::size_t k = 0; k < orbits.size(); ++k)
      for (std::size_t i : orbits[k]) x[i] = c[k];
    if (visited.count(x)) return;
    std::set<Vec> small = orbit_of(small_gens, x);
    std::set<Vec> big = orbit_of(big_gens, x);
    for (const auto& y : big)
      if (in_domain(y) && !small.count(y)) {
        res.counterexample = std::make_pair(x, y);
        return;
      }
    visited.insert(small.begin(), small.end());
    ++res.orbit_count;
  });
  res.verified = !res.counterexample;
  return res;
}

// ---------------------------------------------------------------------------
// Points from the values of u on the folded simple system.

/// Coefficient matrix and the unknowns it acts on. B: x_2..x_{n+1};
/// C: x_1..x_n; G2: x_2, x_3; F4: x_1..x_6 with two extra homogeneous rows.
inline IntMatrix reconstruction_matrix(FoldType t, int n = 0) {
  switch (t) {
    case FoldType::B: {
      IntMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      a(0, 0) = -2;
      for (int k = 1; k < n; ++k) {
        a(static_cast<std::size_t>(k), static_cast<std::size_t>(k - 1)) = 2;
        a(static_cast<std::size_t>(k), static_cast<std::size_t>(k)) = -2;
      }
      return a;
    }
    case FoldType::C: {
      IntMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      for (int k = 0; k + 1 < n; ++k) {
        a(static_cast<std::size_t>(k), static_cast<std::size_t>(k)) = 2;
        a(static_cast<std::size_t>(k), static_cast<std::size_t>(k + 1)) = -2;
      }
      a(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(n - 1)) = 4;
      return a;
    }
    case FoldType::G2: return IntMatrix(2, 2, {-3, 0, 3, -3});
    case FoldType::F4:
      return IntMatrix(6, 6, {1, -1, 0, 0, 1, -1,    //
                              0, 1, -1, 1, -1, 0,    //
                              -2, -2, -2, 0, 0, 0,   //
                              0, 0, 2, -2, 0, 0,     //
                              1, -1, 0, 0, -1, 1,    //
                              0, 1, -1, -1, 1, 0});
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fold type");
}

struct Reconstruction {
  GroupSolution raw;
  std::vector<PointAssignment> assignments;  // constraint-satisfying, sorted
};

inline PointAssignment expand_unknowns(FoldType t, const std::vector<GroupElement>& y, const SigmaModel& g, int n) {
  PointAssignment pa;
  pa.model = t == FoldType::F4 ? SurfaceModel::P2Blowup : SurfaceModel::F1Blowup;
  switch (t) {
    case FoldType::B:
      pa.points.push_back(g.zero());
      pa.points.insert(pa.points.end(), y.begin(), y.end());
      break;
    case FoldType::C:
      pa.points = y;
      for (int i = n; i >= 1; --i) pa.points.push_back(g.neg(y[static_cast<std::size_t>(i - 1)]));
      break;
    case FoldType::G2: pa.points = {g.zero(), y[0], y[1], g.add(y[0], y[1])}; break;
    case FoldType::F4: pa.points = y; break;
  }
  return pa;
}

inline Reconstruction reconstruct_points(FoldType t, const std::vector<GroupElement>& p, const SigmaModel& g, int n = 0,
                                         Int cap = kDefaultSolutionCap) {
  if (static_cast<int>(p.size()) != folded_rank(t, n))
    throw Error(ErrorCode::DimensionMismatch, "need one value per folded simple root");
  std::vector<GroupElement> rhs = p;
  if (t == FoldType::F4) {
    rhs.push_back(g.zero());
    rhs.push_back(g.zero());
  }
  Reconstruction rec;
  rec.raw = solve_group_system(reconstruction_matrix(t, n), rhs, g, cap);
  if (rec.raw.solvable && rec.raw.enumerated) {
    for (const auto& y : rec.raw.all) rec.assignments.push_back(expand_unknowns(t, y, g, n));
    std::sort(rec.assignments.begin(), rec.assignments.end());
  }
  return rec;
}

/// u on the folded simple system.
inline std::vector<GroupElement> folded_values(FoldType t, const PointAssignment& pa, const SigmaModel& g, int n = 0) {
  const IntersectionLattice lat = fold_lattice(t, n);
  auto simple = standard_simple_system(simple_case(t), lat, n);
  return restriction_hom(lat, pa, g, simple.roots).images;
}

/// Number of W(G)-classes among reconstructed assignments, comparing u on the
/// parent simple roots: a ~ b when u_b = u_a o w for some w in W(G).
inline std::size_t solution_weyl_classes(FoldType t, const std::vector<PointAssignment>& sols, const SigmaModel& g,
                                         int n = 0, std::size_t cap = kDefaultWeylCap) {
  if (sols.empty()) return 0;
  const auto fd = folding_data(t, n);
  const auto w = weyl_generate(fd.weyl_gens, 0, cap);
  std::vector<std::vector<DivisorClass>> moved;
  moved.reserve(w.size());
  for (const auto& x : w) {
    std::vector<DivisorClass> r;
    for (const auto& a : fd.rho.simple.roots) r.push_back(x.apply(a));
    moved.push_back(std::move(r));
  }
  std::set<std::vector<GroupElement>> reps;
  for (const auto& pa : sols) {
    std::optional<std::vector<GroupElement>> best;
    for (const auto& r : moved) {
      auto v = restriction_hom(fd.lattice, pa, g, r).images;
      if (!best || v < *best) best = std::move(v);
    }
    reps.insert(*best);
  }
  return reps.size();
}

/// A uniformly random assignment satisfying the case constraints.
template <class Rng>
PointAssignment random_admissible(FoldType t, const SigmaModel& g, int n, Rng& rng) {
  std::uniform_int_distribution<Int> d1(0, g.m1() - 1), d2(0, g.m2() - 1);
  auto draw = [&] { return g.make(d1(rng), d2(rng)); };
  std::vector<GroupElement> y;
  switch (t) {
    case FoldType::B:
    case FoldType::C:
      for (int i = 0; i < n; ++i) y.push_back(draw());
      break;
    case FoldType::G2: y = {draw(), draw()}; break;
    case FoldType::F4: {
      GroupElement p = draw();
      y = {draw(), draw(), draw()};
      y.push_back(g.sub(p, y[2]));
      y.push_back(g.sub(p, y[1]));
      y.push_back(g.sub(p, y[0]));
      break;
    }
  }
  return expand_unknowns(t, y, g, n);
}

// ---------------------------------------------------------------------------
// General position.

enum class Position { Interior, Boundary };

/// Distinct and non-degenerate points for the case; boundary otherwise.
/// B: 0 and the +-x_i (i >= 2) pairwise distinct. C: x_i distinct and
/// x_i + x_j != 0 for all i, j. G2: 0, +-x_2, +-x_3, +-x_4 distinct.
/// F4: distinct, no three summing to 0, not all six summing to 0.
inline Position general_position(FoldType t, const PointAssignment& pa, const SigmaModel& g, int n = 0) {
  auto distinct = [](std::vector<GroupElement> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  std::vector<GroupElement> pts;
  switch (t) {
    case FoldType::B:
      pts.push_back(g.zero());
      for (int i = 2; i <= n + 1; ++i) {
        pts.push_back(pa.x(i));
        pts.push_back(g.neg(pa.x(i)));
      }
      return distinct(pts) ? Position::Interior : Position::Boundary;
    case FoldType::C:
      for (int i = 1; i <= n; ++i) pts.push_back(pa.x(i));
      if (!distinct(pts)) return Position::Boundary;
      for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
          if (g.add(pa.x(i), pa.x(j)) == g.zero()) return Position::Boundary;
      return Position::Interior;
    case FoldType::G2:
      pts.push_back(g.zero());
      for (int i = 2; i <= 4; ++i) {
        pts.push_back(pa.x(i));
        pts.push_back(g.neg(pa.x(i)));
      }
      return distinct(pts) ? Position::Interior : Position::Boundary;
    case FoldType::F4: {
      if (!distinct(pa.points)) return Position::Boundary;
      GroupElement total = g.zero();
      for (int i = 1; i <= 6; ++i) {
        total = g.add(total, pa.x(i));
        for (int j = i + 1; j <= 6; ++j)
          for (int k = j + 1; k <= 6; ++k)
            if (g.add(g.add(pa.x(i), pa.x(j)), pa.x(k)) == g.zero()) return Position::Boundary;
      }
      return total == g.zero() ? Position::Boundary : Position::Interior;
    }
  }
  return Position::Boundary;
}

}  // namespace ratsurf
