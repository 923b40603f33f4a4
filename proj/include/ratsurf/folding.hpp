#pragma once

// Diagram automorphisms of the simply-laced systems and the folded
// non-simply-laced root systems B_n, C_n, G2, F4 they produce.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ratsurf/abelian.hpp"
#include "ratsurf/errors.hpp"
#include "ratsurf/lattice.hpp"
#include "ratsurf/matrix.hpp"
#include "ratsurf/rootsys.hpp"

namespace ratsurf {

enum class OuterCase { A_odd, D, E6, D4Triality };

/// Class with rational coordinates; only produced by orbit averaging.
using RationalClass = RatVector;

/// A diagram automorphism of a simple system, realised on the ambient
/// lattice as a rational matrix that fixes a chosen complement of the root
/// lattice. It is integral on the root lattice.
struct OuterAutomorphism {
  IntersectionLattice lattice;
  SimpleSystem simple;
  RatMatrix matrix;
  int order = 1;
  std::vector<std::size_t> permutation;  // rho(alpha_i) = alpha_{permutation[i]}, 0-based

  /// Image of an integral class; throws NonIntegralMap off the root lattice.
  DivisorClass apply(const DivisorClass& x) const {
    RatVector img = matrix * to_rational(x.coords());
    auto v = to_integer(img);
    if (!v) throw Error(ErrorCode::NonIntegralMap, "image of " + lattice.format(x) + " is not integral");
    return DivisorClass(*v);
  }

  RationalClass apply(const RationalClass& x) const { return matrix * x; }

  bool is_integral() const { return to_integer(matrix).has_value(); }

  /// rho-orbits on simple-root indices, each sorted, ordered by first index.
  std::vector<std::vector<std::size_t>> orbits() const {
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> seen(permutation.size(), false);
    for (std::size_t i = 0; i < permutation.size(); ++i) {
      if (seen[i]) continue;
      std::vector<std::size_t> o;
      for (std::size_t j = i; !seen[j]; j = permutation[j]) {
        seen[j] = true;
        o.push_back(j);
      }
      std::sort(o.begin(), o.end());
      out.push_back(o);
    }
    return out;
  }
};

namespace detail {

inline OuterAutomorphism realise_outer(const IntersectionLattice& lat, const SimpleSystem& simple,
                                       const std::vector<std::size_t>& perm,
                                       const std::vector<DivisorClass>& complement) {
  std::vector<RatVector> src, dst;
  for (std::size_t i = 0; i < simple.roots.size(); ++i) {
    src.push_back(to_rational(simple.roots[i].coords()));
    dst.push_back(to_rational(simple.roots[perm[i]].coords()));
  }
  for (const auto& c : complement) {
    src.push_back(to_rational(c.coords()));
    dst.push_back(to_rational(c.coords()));
  }
  RatMatrix b = RatMatrix::from_columns(src), b2 = RatMatrix::from_columns(dst);
  auto binv = inverse(b);
  if (!binv) throw Error(ErrorCode::InvalidArgument, "roots and complement do not span the lattice");
  OuterAutomorphism rho{lat, simple, b2 * *binv, 1, perm};

  // Order of the permutation, then confirm the matrix has the same order
  // and preserves the pairing.
  RatMatrix id = RatMatrix::identity(lat.rank());
  RatMatrix power = rho.matrix;
  while (power != id) {
    power = power * rho.matrix;
    if (++rho.order > 6) throw Error(ErrorCode::InvalidArgument, "automorphism of unexpected order");
  }
  RatMatrix g = to_rational(lat.gram());
  if (rho.matrix.transpose() * g * rho.matrix != g)
    throw Error(ErrorCode::InvalidArgument, "automorphism does not preserve the pairing");
  return rho;
}

}  // namespace detail

/// Index map from the textbook E6 labelling (chain a1-a2-a3-a4-a5, a6 on a3)
/// to our E6 simple system (chain alpha1-alpha2-alpha4-alpha5-alpha6,
/// alpha3 on alpha4). Both 0-based.
inline const std::vector<std::size_t>& e6_chain_labels() {
  static const std::vector<std::size_t> m{0, 1, 3, 4, 5, 2};
  return m;
}

/// The automorphism for each simply-laced case. For A_odd the lattice is
/// the 2n-point F1 blow-up; for D it is the (n+1)-point one.
inline OuterAutomorphism outer_automorphism(OuterCase c, int n = 0) {
  switch (c) {
    case OuterCase::A_odd: {
      auto lat = lattice_for(SimpleSystemCase::A_F1, n);
      auto simple = standard_simple_system(SimpleSystemCase::A_F1, lat, n);
      const std::size_t r = simple.roots.size();
      std::vector<std::size_t> perm(r);
      for (std::size_t i = 0; i < r; ++i) perm[i] = r - 1 - i;
      return detail::realise_outer(lat, simple, perm, {lat.canonical_class(), lat.f(), lat.s()});
    }
    case OuterCase::D: {
      auto lat = lattice_for(SimpleSystemCase::D_F1, n);
      auto simple = standard_simple_system(SimpleSystemCase::D_F1, lat, n);
      std::vector<std::size_t> perm(simple.roots.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::swap(perm[0], perm[1]);
      return detail::realise_outer(lat, simple, perm, {lat.canonical_class(), lat.f()});
    }
    case OuterCase::D4Triality: {
      auto lat = lattice_for(SimpleSystemCase::D4_F1);
      auto simple = standard_simple_system(SimpleSystemCase::D4_F1, lat);
      // alpha1 -> alpha2 -> alpha4 -> alpha1, alpha3 fixed.
      return detail::realise_outer(lat, simple, {1, 3, 2, 0}, {lat.canonical_class(), lat.f()});
    }
    case OuterCase::E6: {
      auto lat = lattice_for(SimpleSystemCase::E6_P2);
      auto simple = standard_simple_system(SimpleSystemCase::E6_P2, lat);
      // Textbook a_i -> a_{6-i} (i <= 5), a6 fixed, translated to our labels.
      const auto& m = e6_chain_labels();
      std::vector<std::size_t> perm(6);
      for (std::size_t i = 0; i < 5; ++i) perm[m[i]] = m[4 - i];
      perm[m[5]] = m[5];
      return detail::realise_outer(lat, simple, perm, {lat.canonical_class()});
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown outer automorphism case");
}

inline OuterAutomorphism identity_automorphism(const IntersectionLattice& lat, const SimpleSystem& simple) {
  std::vector<std::size_t> perm(simple.roots.size());
  std::iota(perm.begin(), perm.end(), 0);
  return OuterAutomorphism{lat, simple, RatMatrix::identity(lat.rank()), 1, perm};
}

/// Orbit averages of the simple roots, one per rho-orbit.
inline std::vector<RationalClass> fold_simple_system(const OuterAutomorphism& rho) {
  std::vector<RationalClass> out;
  for (const auto& orbit : rho.orbits()) {
    RationalClass avg(rho.lattice.rank(), Rational(0));
    for (std::size_t i : orbit)
      for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += Rational(rho.simple.roots[i][k]);
    for (auto& v : avg) v /= static_cast<Int>(orbit.size());
    out.push_back(std::move(avg));
  }
  return out;
}

inline Rational rational_pair(const IntersectionLattice& lat, const RationalClass& a, const RationalClass& b) {
  Rational acc(0);
  for (std::size_t i = 0; i < lat.rank(); ++i)
    for (std::size_t j = 0; j < lat.rank(); ++j)
      if (lat.gram()(i, j) != 0) acc += a[i] * Rational(lat.gram()(i, j)) * b[j];
  return acc;
}

/// Cartan data of rational classes via the general reflection formula.
inline CartanInfo folded_cartan(const IntersectionLattice& lat, const std::vector<RationalClass>& simple) {
  const std::size_t n = simple.size();
  IntMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational v = Rational(2) * rational_pair(lat, simple[i], simple[j]) / rational_pair(lat, simple[j], simple[j]);
      if (v.denominator() != 1) throw Error(ErrorCode::UnrecognizedDiagram, "non-integral folded Cartan entry");
      a(i, j) = v.numerator();
    }
  return recognize_cartan(a);
}

/// One generator per rho-orbit: the product of its mutually orthogonal
/// reflections.
inline std::vector<WeylElement> folded_weyl_generators(const OuterAutomorphism& rho) {
  const auto& lat = rho.lattice;
  std::vector<WeylElement> gens;
  for (const auto& orbit : rho.orbits()) {
    for (std::size_t i = 0; i < orbit.size(); ++i)
      for (std::size_t j = i + 1; j < orbit.size(); ++j)
        if (lat.pair(rho.simple.roots[orbit[i]], rho.simple.roots[orbit[j]]) != 0)
          throw Error(ErrorCode::OrbitNotCommuting, "roots in one orbit are not orthogonal");
    WeylElement w = WeylElement::identity(lat.rank());
    for (std::size_t i : orbit) w = reflection(lat, rho.simple.roots[i]) * w;
    gens.push_back(w);
  }
  return gens;
}

/// Integral basis of the rho-fixed part of the lattice spanned by `span`
/// (which must be linearly independent and rho-stable).
inline std::vector<DivisorClass> fixed_sublattice(const OuterAutomorphism& rho, const std::vector<DivisorClass>& span) {
  RootBasis basis(rho.lattice, span);
  std::vector<IntVector> cols;
  for (const auto& b : span) {
    auto c = basis.integer_coordinates(rho.apply(b));
    if (!c) throw Error(ErrorCode::NonIntegralMap, "automorphism does not preserve the given lattice");
    cols.push_back(*c);
  }
  IntMatrix m = IntMatrix::from_columns(cols);
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= 1;
  std::vector<DivisorClass> out;
  for (const auto& k : integer_kernel(m)) out.push_back(basis.combine(k));
  return out;
}

/// True when the two families span the same sublattice.
inline bool same_lattice(const IntersectionLattice& lat, const std::vector<DivisorClass>& a,
                         const std::vector<DivisorClass>& b) {
  if (a.size() != b.size()) return false;
  RootBasis ba(lat, a), bb(lat, b);
  for (const auto& x : b)
    if (!ba.integer_coordinates(x)) return false;
  for (const auto& x : a)
    if (!bb.integer_coordinates(x)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// The folded cases with their literal root sets.

enum class FoldType { B, C, G2, F4 };

inline std::string to_string(FoldType t) {
  switch (t) {
    case FoldType::B: return "B";
    case FoldType::C: return "C";
    case FoldType::G2: return "G2";
    case FoldType::F4: return "F4";
  }
  return "?";
}

inline IntersectionLattice fold_lattice(FoldType t, int n = 0) {
  switch (t) {
    case FoldType::B: return lattice_for(SimpleSystemCase::B, n);
    case FoldType::C: return lattice_for(SimpleSystemCase::C, n);
    case FoldType::G2: return lattice_for(SimpleSystemCase::G2);
    case FoldType::F4: return lattice_for(SimpleSystemCase::F4);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fold type");
}

inline OuterCase parent_case(FoldType t) {
  switch (t) {
    case FoldType::B: return OuterCase::D;
    case FoldType::C: return OuterCase::A_odd;
    case FoldType::G2: return OuterCase::D4Triality;
    case FoldType::F4: return OuterCase::E6;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fold type");
}

inline SimpleSystemCase simple_case(FoldType t) {
  switch (t) {
    case FoldType::B: return SimpleSystemCase::B;
    case FoldType::C: return SimpleSystemCase::C;
    case FoldType::G2: return SimpleSystemCase::G2;
    case FoldType::F4: return SimpleSystemCase::F4;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fold type");
}

/// Number of points blown up for each case.
inline int point_count(FoldType t, int n = 0) {
  switch (t) {
    case FoldType::B: return n + 1;
    case FoldType::C: return 2 * n;
    case FoldType::G2: return 4;
    case FoldType::F4: return 6;
  }
  return 0;
}

inline int folded_rank(FoldType t, int n = 0) {
  switch (t) {
    case FoldType::B:
    case FoldType::C: return n;
    case FoldType::G2: return 2;
    case FoldType::F4: return 4;
  }
  return 0;
}

/// The constants used by the G2 and F4 root lists.
inline std::vector<DivisorClass> epsilon_classes(FoldType t, const IntersectionLattice& lat) {
  if (t == FoldType::G2) return {lat.l(2), lat.l(3), lat.f() - lat.l(4)};
  if (t == FoldType::F4) {
    auto l = [&](int i) { return lat.l(i); };
    auto h = lat.h();
    return {l(2) - l(3) + l(4) - l(5), l(2) + l(3) - l(4) - l(5), 2 * h - 2 * l(1) - l(2) - l(3) - l(4) - l(5),
            2 * h - 2 * l(6) - l(2) - l(3) - l(4) - l(5)};
  }
  throw Error(ErrorCode::InvalidArgument, "epsilon classes exist for G2 and F4 only");
}

/// R(G) as the literal divisor lists.
inline RootSystemData folded_root_system(FoldType t, const IntersectionLattice& lat, int n = 0) {
  std::vector<DivisorClass> r;
  auto pm = [&](const DivisorClass& d) {
    r.push_back(d);
    r.push_back(-d);
  };
  switch (t) {
    case FoldType::B: {
      if (lat.model() != SurfaceModel::F1Blowup || lat.blowups() != n + 1)
        throw Error(ErrorCode::InvalidArgument, "B_n lives on the (n+1)-point F1 blow-up");
      for (int i = 2; i <= n + 1; ++i) pm(lat.f() - 2 * lat.l(i));
      for (int i = 2; i <= n + 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j) {
          pm(2 * (lat.l(i) - lat.l(j)));
          pm(2 * (lat.f() - lat.l(i) - lat.l(j)));
        }
      break;
    }
    case FoldType::C: {
      if (lat.model() != SurfaceModel::F1Blowup || lat.blowups() != 2 * n)
        throw Error(ErrorCode::InvalidArgument, "C_n lives on the 2n-point F1 blow-up");
      auto eps = [&](int k) { return lat.l(k) - lat.l(2 * n + 1 - k); };
      for (int i = 1; i <= n; ++i) pm(2 * eps(i));
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
          pm(eps(i) + eps(j));
          pm(eps(i) - eps(j));
        }
      break;
    }
    case FoldType::G2: {
      auto e = epsilon_classes(t, lat);
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) pm(3 * (e[static_cast<std::size_t>(i)] - e[static_cast<std::size_t>(j)]));
      for (std::size_t i = 0; i < 3; ++i) {
        DivisorClass d = 2 * e[i];
        for (std::size_t j = 0; j < 3; ++j)
          if (j != i) d -= e[j];
        pm(d);
      }
      break;
    }
    case FoldType::F4: {
      auto e = epsilon_classes(t, lat);
      for (const auto& x : e) pm(x);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
          pm(e[i] + e[j]);
          pm(e[i] - e[j]);
        }
      for (int signs = 0; signs < 8; ++signs) {
        DivisorClass d = e[0];
        for (std::size_t k = 1; k < 4; ++k) d = (signs >> (k - 1)) & 1 ? d - e[k] : d + e[k];
        // Halving is exact for these constants.
        DivisorClass half = lat.zero();
        for (std::size_t k = 0; k < d.size(); ++k) {
          if (d[k] % 2 != 0) throw Error(ErrorCode::NonIntegralMap, "half-sum is not integral");
          half[k] = d[k] / 2;
        }
        pm(half);
      }
      break;
    }
  }
  return make_root_system(lat, std::move(r));
}

/// Everything that describes one folded case.
struct FoldingData {
  FoldType type;
  int n = 0;
  IntersectionLattice lattice;
  OuterAutomorphism rho;
  SimpleSystem folded;                 // integral presentation
  std::vector<WeylElement> weyl_gens;  // one per rho-orbit
};

inline FoldingData folding_data(FoldType t, int n = 0) {
  OuterAutomorphism rho = outer_automorphism(parent_case(t), n);
  IntersectionLattice lat = rho.lattice;
  SimpleSystem folded = standard_simple_system(simple_case(t), lat, n);
  return FoldingData{t, n, lat, rho, folded, folded_weyl_generators(rho)};
}

/// Integral presentation: (order of rho) times each orbit average.
inline std::vector<DivisorClass> integral_presentation(const OuterAutomorphism& rho) {
  std::vector<DivisorClass> out;
  for (const auto& avg : fold_simple_system(rho)) {
    DivisorClass d = rho.lattice.zero();
    for (std::size_t k = 0; k < avg.size(); ++k) {
      Rational v = avg[k] * Rational(rho.order);
      if (v.denominator() != 1) throw Error(ErrorCode::NonIntegralMap, "scaled average is not integral");
      d[k] = v.numerator();
    }
    out.push_back(d);
  }
  return out;
}

/// The reflection in `beta` written in the coordinates of `basis`; `beta`
/// need not give an integral map on the whole lattice.
inline IntMatrix reflection_on_span(const IntersectionLattice& lat, const DivisorClass& beta, const RootBasis& basis) {
  std::vector<IntVector> cols;
  for (const auto& b : basis.classes()) {
    auto c = basis.integer_coordinates(reflect(lat, beta, b));
    if (!c) throw Error(ErrorCode::NonIntegralMap, "reflection leaves the span");
    cols.push_back(*c);
  }
  return IntMatrix::from_columns(cols);
}

/// Closure of integer matrices under multiplication (generic group closure).
inline std::set<IntMatrix> matrix_closure(const std::vector<IntMatrix>& gens, std::size_t dim,
                                          std::size_t cap = kDefaultWeylCap) {
  std::set<IntMatrix> seen{IntMatrix::identity(dim)};
  std::vector<IntMatrix> frontier{IntMatrix::identity(dim)};
  while (!frontier.empty()) {
    std::vector<IntMatrix> next;
    for (const auto& w : frontier)
      for (const auto& g : gens) {
        IntMatrix x = g * w;
        if (seen.insert(x).second) {
          if (seen.size() > cap) throw Error(ErrorCode::BudgetExceeded, "matrix group larger than the cap");
          next.push_back(std::move(x));
        }
      }
    frontier = std::move(next);
  }
  return seen;
}

/// The two descriptions of W(G), both written on the span of the folded
/// simple system: generated by the reflections in R(G), and by the orbit
/// products.
struct WeylPresentations {
  std::set<IntMatrix> from_roots;
  std::set<IntMatrix> from_orbits;
};

inline WeylPresentations weyl_presentations(const FoldingData& fd) {
  RootBasis basis(fd.lattice, fd.folded.roots);
  RootSystemData roots = folded_root_system(fd.type, fd.lattice, fd.n);
  std::vector<IntMatrix> root_gens, orbit_gens;
  for (const auto& r : roots.roots) root_gens.push_back(reflection_on_span(fd.lattice, r, basis));
  for (const auto& w : fd.weyl_gens) orbit_gens.push_back(restrict_to_span(w, basis));
  return {matrix_closure(root_gens, basis.size()), matrix_closure(orbit_gens, basis.size())};
}

// ---------------------------------------------------------------------------
// Long-root subsystems and diagram symmetries.

/// Roots of the most negative square.
inline RootSystemData long_root_subsystem(const RootSystemData& rs) {
  Int longest = *rs.norm_values.begin();
  std::vector<DivisorClass> out;
  for (const auto& r : rs.roots)
    if (rs.ambient.square(r) == longest) out.push_back(r);
  return make_root_system(rs.ambient, std::move(out));
}

/// Number of permutations of the nodes preserving the Cartan matrix.
inline std::size_t diagram_automorphism_count(const IntMatrix& cartan) {
  std::vector<std::size_t> p(cartan.rows());
  std::iota(p.begin(), p.end(), 0);
  std::size_t count = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i)
      for (std::size_t j = 0; j < p.size() && ok; ++j) ok = cartan(p[i], p[j]) == cartan(i, j);
    if (ok) ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

/// Data for |W(G)| = |W(G'')| * |Out(G'')|.
struct SecondReduction {
  std::string long_type;          // type of G''
  std::size_t weyl_order = 0;     // |W(G)|
  std::size_t long_weyl_order = 0;
  std::size_t diagram_symmetries = 0;  // all symmetries of the G'' diagram
  std::size_t induced_symmetries = 0;  // those induced by W(G)
};

inline SecondReduction second_reduction(const FoldingData& fd) {
  RootSystemData roots = folded_root_system(fd.type, fd.lattice, fd.n);
  RootSystemData longs = long_root_subsystem(roots);
  std::vector<DivisorClass> delta = choose_simple_system(longs);
  CartanInfo info = cartan_matrix(fd.lattice, delta);

  // Reflections in folded roots are only integral on the span of R(G), so
  // both groups are written there.
  RootBasis basis(fd.lattice, fd.folded.roots);
  std::vector<IntMatrix> gens, long_gens;
  for (const auto& w : fd.weyl_gens) gens.push_back(restrict_to_span(w, basis));
  for (const auto& d : delta) long_gens.push_back(reflection_on_span(fd.lattice, d, basis));
  auto w = matrix_closure(gens, basis.size());
  auto w_long = matrix_closure(long_gens, basis.size());

  SecondReduction sr;
  sr.long_type = info.type();
  sr.weyl_order = w.size();
  sr.long_weyl_order = w_long.size();
  sr.diagram_symmetries = diagram_automorphism_count(info.matrix);
  // W(G'') acts simply transitively on bases of R(G''), so the elements of
  // W(G) stabilising delta represent W(G)/W(G'').
  std::vector<IntVector> delta_coords;
  for (const auto& d : delta) delta_coords.push_back(*basis.integer_coordinates(d));
  std::set<std::vector<std::size_t>> perms;
  for (const auto& x : w) {
    std::vector<std::size_t> p;
    for (const auto& c : delta_coords) {
      auto it = std::find(delta_coords.begin(), delta_coords.end(), x * c);
      if (it == delta_coords.end()) break;
      p.push_back(static_cast<std::size_t>(it - delta_coords.begin()));
    }
    if (p.size() == delta.size()) perms.insert(p);
  }
  sr.induced_symmetries = perms.size();
  return sr;
}

}  // namespace ratsurf
