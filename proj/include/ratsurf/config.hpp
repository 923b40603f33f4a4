#pragma once

// Exceptional systems and configurations for B_n, C_n, G2, F4, blow-down
// validity, and the lines / triangles / double-sixes of the cubic surface.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ratsurf/abelian.hpp"
#include "ratsurf/errors.hpp"
#include "ratsurf/folding.hpp"
#include "ratsurf/lattice.hpp"
#include "ratsurf/moduli.hpp"
#include "ratsurf/rootsys.hpp"

namespace ratsurf {

using ClassTuple = std::vector<DivisorClass>;

/// True iff the classes are disjoint (-1)-classes that some isometry fixing
/// K (and f when `keep_fibration`) sends to l_1, ..., l_k.
inline bool is_blowdown_sequence(const IntersectionLattice& lat, const ClassTuple& classes, bool keep_fibration = true) {
  const DivisorClass& k = lat.canonical_class();
  const bool f1 = lat.model() == SurfaceModel::F1Blowup;
  if (classes.size() > static_cast<std::size_t>(lat.blowups())) return false;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& e = classes[i];
    if (lat.square(e) != -1 || lat.pair(e, k) != -1) return false;
    if (f1 && keep_fibration && lat.pair(e, lat.f()) != 0) return false;
    for (std::size_t j = i + 1; j < classes.size(); ++j)
      if (lat.pair(e, classes[j]) != 0) return false;
  }

  auto complete = [&](const ClassTuple& es) {
    DivisorClass sum = lat.zero();
    for (const auto& e : es) sum += e;
    auto divide = [&](const DivisorClass& d, Int q) -> std::optional<DivisorClass> {
      DivisorClass out = lat.zero();
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] % q != 0) return std::nullopt;
        out[i] = d[i] / q;
      }
      return out;
    };
    if (!f1) {
      auto h = divide(-k + sum, 3);
      if (!h || lat.square(*h) != 1) return false;
      return std::all_of(es.begin(), es.end(), [&](const auto& e) { return lat.pair(*h, e) == 0; });
    }
    std::vector<DivisorClass> fibres;
    if (keep_fibration) {
      fibres.push_back(lat.f());
    } else {
      std::vector<ClassConstraint> cs{ClassConstraint::self(0), ClassConstraint::with(k, -2)};
      for (const auto& e : es) cs.push_back(ClassConstraint::with(e, 0));
      fibres = enumerate_classes(lat, cs);
    }
    for (const auto& f : fibres) {
      auto s = divide(-k - 3 * f + sum, 2);
      if (!s) continue;
      if (lat.square(*s) != -1 || lat.pair(*s, f) != 1) continue;
      if (std::all_of(es.begin(), es.end(), [&](const auto& e) { return lat.pair(*s, e) == 0; })) return true;
    }
    return false;
  };

  if (classes.size() == static_cast<std::size_t>(lat.blowups())) return complete(classes);

  // Extend a partial tuple by further disjoint (-1)-classes.
  std::vector<ClassConstraint> cs{ClassConstraint::self(-1), ClassConstraint::with(k, -1)};
  if (f1 && keep_fibration) cs.push_back(ClassConstraint::with(lat.f(), 0));
  const auto candidates = enumerate_classes(lat, cs);
  ClassTuple cur = classes;
  std::function<bool()> extend = [&]() {
    if (cur.size() == static_cast<std::size_t>(lat.blowups())) return complete(cur);
    for (const auto& c : candidates) {
      if (!std::all_of(cur.begin(), cur.end(), [&](const auto& e) { return lat.pair(e, c) == 0; })) continue;
      if (std::find(cur.begin(), cur.end(), c) != cur.end()) continue;
      cur.push_back(c);
      if (extend()) return true;
      cur.pop_back();
    }
    return false;
  };
  return extend();
}

// ---------------------------------------------------------------------------
// Generic points: each x_i as an integer combination of free parameters, so
// that point conditions are checked as identities.

struct GenericPoints {
  std::vector<IntVector> x;  // x[i] for l_{i+1}

  IntVector restrict(const IntersectionLattice& lat, const DivisorClass& d) const {
    IntVector out(x.front().size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      Int c = d[lat.first_exceptional() + i];
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * x[i][k];
    }
    return out;
  }
};

inline GenericPoints generic_points(FoldType t, int n = 0) {
  auto unit = [](std::size_t dim, std::size_t i) {
    IntVector v(dim, 0);
    v[i] = 1;
    return v;
  };
  auto neg = [](IntVector v) {
    for (auto& c : v) c = -c;
    return v;
  };
  auto sum = [](IntVector a, const IntVector& b, Int sign = 1) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += sign * b[i];
    return a;
  };
  GenericPoints g;
  switch (t) {
    case FoldType::B: {
      const std::size_t dim = static_cast<std::size_t>(n);
      g.x.push_back(IntVector(dim, 0));
      for (std::size_t i = 0; i < dim; ++i) g.x.push_back(unit(dim, i));
      break;
    }
    case FoldType::C: {
      const std::size_t dim = static_cast<std::size_t>(n);
      for (std::size_t i = 0; i < dim; ++i) g.x.push_back(unit(dim, i));
      for (std::size_t i = dim; i-- > 0;) g.x.push_back(neg(unit(dim, i)));
      break;
    }
    case FoldType::G2:
      g.x = {IntVector(2, 0), unit(2, 0), unit(2, 1), sum(unit(2, 0), unit(2, 1))};
      break;
    case FoldType::F4: {
      // Parameters x1, x2, x3 and the common value p.
      IntVector p = unit(4, 3);
      g.x = {unit(4, 0), unit(4, 1), unit(4, 2), sum(p, unit(4, 2), -1), sum(p, unit(4, 1), -1), sum(p, unit(4, 0), -1)};
      break;
    }
  }
  return g;
}

/// Exceptional systems of a case at class level, for generic points
/// satisfying the case's point conditions. B, G2: fibre components with the
/// point conditions and a blow-down to F1 keeping the ruling. C: pairs
/// (l_a, l_a^-) in either order; stored as (e_1..e_n, e_n^-..e_1^-), so the
/// standard system is (l_1..l_2n). F4: ordered disjoint sixes of lines with
/// y1 + y6 = y2 + y5 = y3 + y4.
inline std::vector<ClassTuple> enumerate_exceptional_systems(FoldType t, const IntersectionLattice& lat, int n = 0) {
  if (lat.blowups() != point_count(t, n) ||
      lat.model() != (t == FoldType::F4 ? SurfaceModel::P2Blowup : SurfaceModel::F1Blowup))
    throw Error(ErrorCode::InvalidArgument, "lattice does not match the case");
  const GenericPoints gp = generic_points(t, n);
  const std::size_t len = static_cast<std::size_t>(lat.blowups());
  const DivisorClass& k = lat.canonical_class();

  std::vector<DivisorClass> candidates;
  if (t == FoldType::C) {
    for (int i = 1; i <= lat.blowups(); ++i) candidates.push_back(lat.l(i));
  } else if (t == FoldType::F4) {
    candidates = exceptional_classes(lat);
  } else {
    candidates = enumerate_classes(lat, {ClassConstraint::self(-1), ClassConstraint::with(k, -1),
                                         ClassConstraint::with(lat.f(), 0)});
  }
  std::vector<IntVector> u;
  for (const auto& c : candidates) u.push_back(gp.restrict(lat, c));

  auto zero = [](const IntVector& v) { return std::all_of(v.begin(), v.end(), [](Int c) { return c == 0; }); };
  auto plus = [](IntVector a, const IntVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
  };
  // Point condition on the prefix of chosen candidate indices.
  auto prefix_ok = [&](const std::vector<std::size_t>& idx) {
    const std::size_t m = idx.size();
    const auto& y = [&](std::size_t i) -> const IntVector& { return u[idx[i - 1]]; };
    switch (t) {
      case FoldType::B: return m != 1 || zero(y(1));
      case FoldType::C: {
        const std::size_t half = len / 2;
        if (m <= half) return true;
        std::size_t partner = len + 1 - m;  // e_m is the partner of e_{partner}
        return zero(plus(y(m), y(partner)));
      }
      case FoldType::G2:
        if (m == 1) return zero(y(1));
        if (m == 4) return plus(y(2), y(3)) == y(4);
        return true;
      case FoldType::F4:
        if (m == 5) return plus(y(2), y(5)) == plus(y(3), y(4));
        if (m == 6) return plus(y(1), y(6)) == plus(y(2), y(5));
        return true;
    }
    return false;
  };

  std::vector<ClassTuple> out;
  std::vector<std::size_t> idx;
  std::function<void()> rec = [&]() {
    if (idx.size() == len) {
      ClassTuple tuple;
      for (std::size_t i : idx) tuple.push_back(candidates[i]);
      if (is_blowdown_sequence(lat, tuple, true)) out.push_back(std::move(tuple));
      return;
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      bool ok = std::find(idx.begin(), idx.end(), c) == idx.end();
      for (std::size_t j = 0; j < idx.size() && ok; ++j) ok = lat.pair(candidates[idx[j]], candidates[c]) == 0;
      if (!ok) continue;
      idx.push_back(c);
      if (prefix_ok(idx)) rec();
      idx.pop_back();
    }
  };
  rec();
  std::sort(out.begin(), out.end());
  return out;
}

/// The system (l_1, ..., l_n) every case starts from.
inline ClassTuple standard_system(const IntersectionLattice& lat) {
  ClassTuple t;
  for (int i = 1; i <= lat.blowups(); ++i) t.push_back(lat.l(i));
  return t;
}

struct GConfiguration {
  FoldType type;
  ClassTuple classes;
  PointAssignment pa;
};

/// Class-level and point-level invariants; empty string when all hold.
inline std::string check_configuration(const IntersectionLattice& lat, const GConfiguration& cfg, const SigmaModel& g,
                                       int n = 0) {
  const auto& es = cfg.classes;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (lat.square(es[i]) != -1 || lat.pair(es[i], lat.canonical_class()) != -1)
      return "not exceptional: " + lat.format(es[i]);
    if (cfg.type != FoldType::F4 && lat.pair(es[i], lat.f()) != 0) return "meets f: " + lat.format(es[i]);
    for (std::size_t j = i + 1; j < es.size(); ++j)
      if (lat.pair(es[i], es[j]) != 0) return "not disjoint: " + lat.format(es[i]) + ", " + lat.format(es[j]);
  }
  PointAssignment y{cfg.pa.model, {}};
  for (const auto& e : es) y.points.push_back(restrict_point(lat, cfg.pa, g, e));
  if (!satisfies_case_constraints(cfg.type, y, g, n)) return "point conditions fail";
  return {};
}

// ---------------------------------------------------------------------------
// Simple transitivity.

struct TransitivityResult {
  bool simply_transitive = false;
  std::size_t group_order = 0;
  std::size_t system_count = 0;
  std::size_t orbit_size = 0;
  std::string failure;
};

inline TransitivityResult simple_transitivity_check(const std::vector<ClassTuple>& systems,
                                                    const std::vector<WeylElement>& group) {
  TransitivityResult r;
  r.group_order = group.size();
  r.system_count = systems.size();
  if (systems.empty()) {
    r.failure = "no systems";
    return r;
  }
  std::set<ClassTuple> all(systems.begin(), systems.end());
  const ClassTuple& base = systems.front();
  std::map<ClassTuple, std::size_t> hit;
  for (std::size_t i = 0; i < group.size(); ++i) {
    ClassTuple img = group[i].apply(base);
    if (!all.count(img)) {
      r.failure = "element " + std::to_string(i) + " leaves the set of systems";
      return r;
    }
    auto [it, fresh] = hit.emplace(img, i);
    if (!fresh) {
      r.failure = "elements " + std::to_string(it->second) + " and " + std::to_string(i) + " agree on the base system";
      r.orbit_size = hit.size();
      return r;
    }
  }
  r.orbit_size = hit.size();
  if (r.orbit_size != all.size()) {
    r.failure = "orbit of size " + std::to_string(r.orbit_size) + " misses systems";
    return r;
  }
  r.simply_transitive = true;
  return r;
}

// ---------------------------------------------------------------------------
// Cubic surface combinatorics on the 6-point P2 blow-up.

using Triangle = std::vector<DivisorClass>;  // sorted

struct DoubleSix {
  std::vector<DivisorClass> L;       // sorted
  std::vector<DivisorClass> Lprime;  // Lprime[i] is the line of L' disjoint from L[i]
  friend bool operator==(const DoubleSix&, const DoubleSix&) = default;
  friend auto operator<=>(const DoubleSix&, const DoubleSix&) = default;
};

struct CubicCombinatorics {
  std::vector<DivisorClass> lines;
  std::vector<Triangle> triangles;
  std::vector<DoubleSix> double_sixes;
};

inline void require_cubic(const IntersectionLattice& lat) {
  if (lat.model() != SurfaceModel::P2Blowup || lat.blowups() != 6)
    throw Error(ErrorCode::InvalidArgument, "expected the 6-point P2 blow-up");
}

/// Unordered sixes of pairwise disjoint lines.
inline std::vector<std::vector<DivisorClass>> disjoint_sixes(const IntersectionLattice& lat,
                                                             const std::vector<DivisorClass>& lines) {
  std::vector<std::vector<DivisorClass>> out;
  std::vector<DivisorClass> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == 6) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < lines.size(); ++i) {
      if (!std::all_of(cur.begin(), cur.end(), [&](const auto& e) { return lat.pair(e, lines[i]) == 0; })) continue;
      cur.push_back(lines[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline CubicCombinatorics cubic_combinatorics(const IntersectionLattice& lat) {
  require_cubic(lat);
  CubicCombinatorics cc;
  cc.lines = exceptional_classes(lat);
  const auto& ls = cc.lines;
  const DivisorClass minus_k = -lat.canonical_class();
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (std::size_t j = i + 1; j < ls.size(); ++j) {
      if (lat.pair(ls[i], ls[j]) != 1) continue;
      for (std::size_t k = j + 1; k < ls.size(); ++k) {
        if (lat.pair(ls[i], ls[k]) != 1 || lat.pair(ls[j], ls[k]) != 1) continue;
        if (ls[i] + ls[j] + ls[k] != minus_k)
          throw Error(ErrorCode::ConstraintViolated, "meeting triple whose sum is not -K");
        cc.triangles.push_back({ls[i], ls[j], ls[k]});
      }
    }
  std::set<DoubleSix> seen;
  for (const auto& six : disjoint_sixes(lat, ls)) {
    std::vector<DivisorClass> partner;
    for (const auto& m : ls) {
      int meets = 0;
      for (const auto& e : six) meets += lat.pair(m, e) == 1;
      if (meets == 5) partner.push_back(m);
    }
    if (partner.size() != 6) continue;
    std::sort(partner.begin(), partner.end());
    const auto& first = std::min(six, partner);
    const auto& second = std::max(six, partner);
    DoubleSix ds{first, {}};
    for (const auto& a : first)
      for (const auto& b : second)
        if (lat.pair(a, b) == 0) ds.Lprime.push_back(b);
    seen.insert(ds);
  }
  cc.double_sixes.assign(seen.begin(), seen.end());
  return cc;
}

/// Checks the Schlaefli incidence of a double-six.
inline bool is_double_six(const IntersectionLattice& lat, const DoubleSix& ds) {
  if (ds.L.size() != 6 || ds.Lprime.size() != 6) return false;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      if (i != j && (lat.pair(ds.L[i], ds.L[j]) != 0 || lat.pair(ds.Lprime[i], ds.Lprime[j]) != 0)) return false;
      if (lat.pair(ds.L[i], ds.Lprime[j]) != (i == j ? 0 : 1)) return false;
    }
  return true;
}

/// The positive root whose reflection swaps L and L'.
inline DivisorClass double_six_to_root(const IntersectionLattice& lat, const DoubleSix& ds,
                                       const std::vector<DivisorClass>& positive) {
  if (!is_double_six(lat, ds)) throw Error(ErrorCode::NoRootFound, "not a double-six");
  for (const auto& a : positive) {
    bool swaps = true;
    for (std::size_t i = 0; i < 6 && swaps; ++i) swaps = reflect(lat, a, ds.L[i]) == ds.Lprime[i];
    if (swaps) return a;
  }
  throw Error(ErrorCode::NoRootFound, "no positive root exchanges the two sixes");
}

struct StabilizerResult {
  std::vector<WeylElement> elements;     // sorted
  std::size_t permutation_image = 0;     // distinct permutations induced on the lines
};

/// Stabilizer in `group` of a triangle, as a set or line by line.
inline StabilizerResult triangle_stabilizer(const Triangle& tri, bool ordered, const std::vector<WeylElement>& group) {
  StabilizerResult r;
  std::set<std::vector<std::size_t>> perms;
  for (const auto& w : group) {
    std::vector<std::size_t> p;
    for (const auto& e : tri) {
      auto img = w.apply(e);
      auto it = std::find(tri.begin(), tri.end(), img);
      if (it == tri.end()) break;
      p.push_back(static_cast<std::size_t>(it - tri.begin()));
    }
    if (p.size() != tri.size()) continue;
    bool identity = true;
    for (std::size_t i = 0; i < p.size(); ++i) identity = identity && p[i] == i;
    if (ordered && !identity) continue;
    r.elements.push_back(w);
    perms.insert(p);
  }
  r.permutation_image = perms.size();
  std::sort(r.elements.begin(), r.elements.end());
  return r;
}

/// The triangle {h-l1-l6, h-l2-l5, h-l3-l4}.
inline Triangle base_triangle(const IntersectionLattice& lat) {
  require_cubic(lat);
  Triangle t{lat.h() - lat.l(1) - lat.l(6), lat.h() - lat.l(2) - lat.l(5), lat.h() - lat.l(3) - lat.l(4)};
  std::sort(t.begin(), t.end());
  return t;
}

/// D4 inside E6 fixed by the diagram automorphism.
inline std::vector<DivisorClass> fixed_d4_simple_roots(const IntersectionLattice& lat) {
  require_cubic(lat);
  return {lat.l(1) - lat.l(6), lat.l(2) - lat.l(5), lat.l(3) - lat.l(4), lat.h() - lat.l(1) - lat.l(2) - lat.l(3)};
}

}  // namespace ratsurf
