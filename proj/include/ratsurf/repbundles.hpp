#pragma once

// Weight-class multisets of representation bundles, their restrictions to
// the anticanonical curve, and the identifications between them.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ratsurf/abelian.hpp"
#include "ratsurf/config.hpp"
#include "ratsurf/errors.hpp"
#include "ratsurf/folding.hpp"
#include "ratsurf/lattice.hpp"
#include "ratsurf/moduli.hpp"

namespace ratsurf {

/// A line bundle on the curve: degree and point relative to deg * (0).
struct LineBundleClassOnSigma {
  Int degree = 0;
  GroupElement point;
  friend bool operator==(const LineBundleClassOnSigma&, const LineBundleClassOnSigma&) = default;
  friend auto operator<=>(const LineBundleClassOnSigma&, const LineBundleClassOnSigma&) = default;
};

using SigmaMultiset = std::vector<LineBundleClassOnSigma>;  // kept sorted

inline LineBundleClassOnSigma tensor(const LineBundleClassOnSigma& x, const LineBundleClassOnSigma& y,
                                     const SigmaModel& g) {
  return {x.degree + y.degree, g.add(x.point, y.point)};
}

inline LineBundleClassOnSigma dual(const LineBundleClassOnSigma& x, const SigmaModel& g) {
  return {-x.degree, g.neg(x.point)};
}

inline SigmaMultiset tensor(SigmaMultiset m, const LineBundleClassOnSigma& y, const SigmaModel& g) {
  for (auto& x : m) x = tensor(x, y, g);
  std::sort(m.begin(), m.end());
  return m;
}

inline SigmaMultiset dual(SigmaMultiset m, const SigmaModel& g) {
  for (auto& x : m) x = dual(x, g);
  std::sort(m.begin(), m.end());
  return m;
}

inline bool check_identification(const SigmaMultiset& lhs, const SigmaMultiset& rhs) { return lhs == rhs; }

enum class BundleTag { SpinorPlus, SpinorMinus, W4, V, Lines27 };

inline std::string to_string(BundleTag t) {
  switch (t) {
    case BundleTag::SpinorPlus: return "S+";
    case BundleTag::SpinorMinus: return "S-";
    case BundleTag::W4: return "W";
    case BundleTag::V: return "V";
    case BundleTag::Lines27: return "27";
  }
  return "?";
}

struct WeightBundle {
  std::string name;
  std::vector<DivisorClass> summands;  // sorted multiset
  std::size_t rank() const noexcept { return summands.size(); }
};

/// S+: D^2 = D.K = -1, D.f = 1. S-: T^2 = -2, T.K = 0, T.f = 1.
/// W: C^2 = C.K = -1, C.f = 0. V: the l_i. 27: the lines of the cubic.
inline WeightBundle weight_bundle(BundleTag tag, const IntersectionLattice& lat) {
  const bool cubic = tag == BundleTag::Lines27;
  if (cubic != (lat.model() == SurfaceModel::P2Blowup))
    throw Error(ErrorCode::InvalidArgument, to_string(tag) + " lives on the other model");
  const auto& k = lat.canonical_class();
  WeightBundle b{to_string(tag), {}};
  switch (tag) {
    case BundleTag::SpinorPlus:
      b.summands = enumerate_classes(
          lat, {ClassConstraint::self(-1), ClassConstraint::with(k, -1), ClassConstraint::with(lat.f(), 1)});
      break;
    case BundleTag::SpinorMinus:
      b.summands = enumerate_classes(
          lat, {ClassConstraint::self(-2), ClassConstraint::with(k, 0), ClassConstraint::with(lat.f(), 1)});
      break;
    case BundleTag::W4:
      b.summands = enumerate_classes(
          lat, {ClassConstraint::self(-1), ClassConstraint::with(k, -1), ClassConstraint::with(lat.f(), 0)});
      break;
    case BundleTag::V:
      for (int i = 1; i <= lat.blowups(); ++i) b.summands.push_back(lat.l(i));
      break;
    case BundleTag::Lines27:
      if (lat.blowups() != 6) throw Error(ErrorCode::InvalidArgument, "27 lines need the 6-point blow-up");
      b.summands = exceptional_classes(lat);
      break;
  }
  std::sort(b.summands.begin(), b.summands.end());
  return b;
}

/// D |-> (D.(-K), u(D)).
inline LineBundleClassOnSigma restrict_class(const IntersectionLattice& lat, const DivisorClass& d,
                                             const PointAssignment& pa, const SigmaModel& g) {
  return {-lat.pair(d, lat.canonical_class()), restrict_point(lat, pa, g, d)};
}

inline SigmaMultiset restrict_bundle(const IntersectionLattice& lat, const WeightBundle& b, const PointAssignment& pa,
                                     const SigmaModel& g) {
  SigmaMultiset out;
  for (const auto& d : b.summands) out.push_back(restrict_class(lat, d, pa, g));
  std::sort(out.begin(), out.end());
  return out;
}

inline LineBundleClassOnSigma determinant(const SigmaMultiset& m, const SigmaModel& g) {
  LineBundleClassOnSigma acc{0, g.zero()};
  for (const auto& x : m) acc = tensor(acc, x, g);
  return acc;
}

/// Sums of i distinct summands (by position, so repeated classes count twice).
inline WeightBundle wedge_power(const WeightBundle& v, int i) {
  const int r = static_cast<int>(v.rank());
  if (i < 0 || i > r) throw Error(ErrorCode::InvalidArgument, "wedge degree out of range");
  WeightBundle out{"wedge" + std::to_string(i) + "(" + v.name + ")", {}};
  if (r == 0) return out;
  std::vector<bool> pick(static_cast<std::size_t>(r), false);
  std::fill(pick.begin(), pick.begin() + i, true);
  do {
    DivisorClass acc = DivisorClass::zero(v.summands.front().size());
    for (int k = 0; k < r; ++k)
      if (pick[static_cast<std::size_t>(k)]) acc += v.summands[static_cast<std::size_t>(k)];
    out.summands.push_back(acc);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::sort(out.summands.begin(), out.summands.end());
  return out;
}

// ---------------------------------------------------------------------------
// Identifications that single out special configurations.

/// Degree and l-coefficients of each summand, so restriction is one linear
/// combination per summand.
struct LinearRestriction {
  std::vector<Int> degree;
  std::vector<IntVector> coeffs;
};

inline LinearRestriction linear_restriction(const IntersectionLattice& lat, const std::vector<DivisorClass>& classes) {
  LinearRestriction r;
  for (const auto& d : classes) {
    r.degree.push_back(-lat.pair(d, lat.canonical_class()));
    IntVector c(static_cast<std::size_t>(lat.blowups()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = d[lat.first_exceptional() + i];
    r.coeffs.push_back(std::move(c));
  }
  return r;
}

inline SigmaMultiset apply_restriction(const LinearRestriction& r, const PointAssignment& pa, const SigmaModel& g) {
  SigmaMultiset out;
  out.reserve(r.degree.size());
  for (std::size_t k = 0; k < r.degree.size(); ++k) {
    Int a = 0, b = 0;
    for (std::size_t i = 0; i < r.coeffs[k].size(); ++i) {
      a += r.coeffs[k][i] * pa.points[i].a;
      b += r.coeffs[k][i] * pa.points[i].b;
    }
    out.push_back({r.degree[k], g.make(a, b)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Precomputed weight bundles for repeated identification checks.
struct BundleSet {
  IntersectionLattice lat;
  WeightBundle sp, sm, w, v;
  std::vector<WeightBundle> wedges;  // wedge^i V, i = 0..rank V
  LinearRestriction rsp, rsm, rw, rv;
  std::vector<LinearRestriction> rwedges;

  explicit BundleSet(const IntersectionLattice& l)
      : lat(l),
        sp(weight_bundle(BundleTag::SpinorPlus, l)),
        sm(weight_bundle(BundleTag::SpinorMinus, l)),
        w(weight_bundle(BundleTag::W4, l)),
        v(weight_bundle(BundleTag::V, l)) {
    for (int i = 0; i <= static_cast<int>(v.rank()); ++i) wedges.push_back(wedge_power(v, i));
    rsp = linear_restriction(l, sp.summands);
    rsm = linear_restriction(l, sm.summands);
    rw = linear_restriction(l, w.summands);
    rv = linear_restriction(l, v.summands);
    for (const auto& x : wedges) rwedges.push_back(linear_restriction(l, x.summands));
  }

  LineBundleClassOnSigma one(const DivisorClass& d, const PointAssignment& pa, const SigmaModel& g) const {
    return restrict_class(lat, d, pa, g);
  }
};

/// S+ (x) O(-l_1) = S- on the curve.
inline bool spinor_identification(const BundleSet& bs, const PointAssignment& pa, const SigmaModel& g) {
  auto sp = apply_restriction(bs.rsp, pa, g);
  auto sm = apply_restriction(bs.rsm, pa, g);
  return check_identification(tensor(sp, bs.one(-bs.lat.l(1), pa, g), g), sm);
}

inline bool spinor_identification(const IntersectionLattice& lat, const PointAssignment& pa, const SigmaModel& g) {
  return spinor_identification(BundleSet(lat), pa, g);
}

struct G2Identifications {
  bool spinors = false;     // S+ (x) O(-l_1) = S-
  bool w_spinor = false;    // S+ (x) O(l_4) = W (x) O(s)
  bool both() const { return spinors && w_spinor; }
};

inline G2Identifications g2_identifications(const BundleSet& bs, const PointAssignment& pa, const SigmaModel& g) {
  const auto& lat = bs.lat;
  auto sp = apply_restriction(bs.rsp, pa, g);
  G2Identifications r;
  r.spinors = check_identification(tensor(sp, bs.one(-lat.l(1), pa, g), g), apply_restriction(bs.rsm, pa, g));
  r.w_spinor = check_identification(tensor(sp, bs.one(lat.l(4), pa, g), g),
                                    tensor(apply_restriction(bs.rw, pa, g), bs.one(lat.s(), pa, g), g));
  return r;
}

/// (wedge^i V)^* (x) det V = wedge^{2n-i} V on the curve.
inline bool wedge_identification(const BundleSet& bs, int i, const PointAssignment& pa, const SigmaModel& g) {
  const int r = static_cast<int>(bs.v.rank());
  if (i < 0 || i > r) throw Error(ErrorCode::InvalidArgument, "wedge degree out of range");
  auto det = determinant(apply_restriction(bs.rv, pa, g), g);
  auto lhs = tensor(dual(apply_restriction(bs.rwedges[static_cast<std::size_t>(i)], pa, g), g), det, g);
  return check_identification(lhs, apply_restriction(bs.rwedges[static_cast<std::size_t>(r - i)], pa, g));
}

/// V = V^* (x) O(f) on the curve.
inline bool v_self_duality(const BundleSet& bs, const PointAssignment& pa, const SigmaModel& g) {
  auto v = apply_restriction(bs.rv, pa, g);
  return check_identification(v, tensor(dual(v, g), bs.one(bs.lat.f(), pa, g), g));
}

/// Whether `pred` holds for some renumbering of the points.
inline bool up_to_renumbering(const PointAssignment& pa, const std::function<bool(const PointAssignment&)>& pred) {
  std::vector<std::size_t> perm(pa.size());
  std::iota(perm.begin(), perm.end(), 0);
  PointAssignment q = pa;
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) q.points[i] = pa.points[perm[i]];
    if (pred(q)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

struct ConverseSweep {
  std::size_t assignments = 0;
  std::size_t identified = 0;
  std::size_t special = 0;
  std::size_t special_not_identified = 0;
  std::optional<PointAssignment> counterexample;
  bool equivalent() const { return !counterexample; }
  bool forward_holds() const { return special_not_identified == 0; }
};

/// Runs over every point assignment of `points` points and compares the
/// identification with the configuration condition.
inline ConverseSweep converse_sweep(const SigmaModel& g, SurfaceModel model, int points,
                                    const std::function<bool(const PointAssignment&)>& identified,
                                    const std::function<bool(const PointAssignment&)>& special) {
  ConverseSweep r;
  g.for_each_tuple(static_cast<std::size_t>(points), [&](const std::vector<GroupElement>& xs) {
    PointAssignment pa{model, xs};
    ++r.assignments;
    bool a = identified(pa), b = special(pa);
    r.identified += a;
    r.special += b;
    r.special_not_identified += b && !a;
    if (a != b && !r.counterexample) r.counterexample = pa;
  });
  return r;
}

// ---------------------------------------------------------------------------
// The 27 = 3 + 24 split for F4.

struct F4RepDecomposition {
  GroupElement p;
  std::vector<DivisorClass> zero_weights;        // the lines of the base triangle
  std::vector<DivisorClass> lines;               // the other 24 lines
  std::vector<DivisorClass> short_root_weights;  // root attached to each of `lines`
  int trace_kernel_rank = 0;
  LineBundleClassOnSigma trace_kernel_det;
  bool specials_common = false;   // all restrict to (1, -p)
  bool specials_sum_to_minus_k = false;
  bool short_roots_match = false; // bijection onto the short roots of R(F4)
  bool restrictions_match = false;  // u(r_e) = 2(u(e) + p)
};

inline F4RepDecomposition f4_rep_decomposition(const IntersectionLattice& lat, const PointAssignment& pa,
                                               const SigmaModel& g) {
  require_cubic(lat);
  if (!satisfies_case_constraints(FoldType::F4, pa, g))
    throw Error(ErrorCode::ConstraintViolated, "points do not satisfy y1+y6 = y2+y5 = y3+y4");
  F4RepDecomposition d;
  d.p = g.add(pa.x(1), pa.x(6));
  const LineBundleClassOnSigma special{1, g.neg(d.p)};
  auto tri = base_triangle(lat);
  d.zero_weights = tri;
  d.specials_common = std::all_of(tri.begin(), tri.end(),
                                  [&](const auto& e) { return restrict_class(lat, e, pa, g) == special; });
  d.specials_sum_to_minus_k = tri[0] + tri[1] + tri[2] == -lat.canonical_class();

  const auto rho = outer_automorphism(OuterCase::E6);
  RationalClass k3 = to_rational(lat.canonical_class().coords());
  for (auto& c : k3) c /= Rational(3);
  std::vector<DivisorClass> roots;
  d.restrictions_match = true;
  for (const auto& e : exceptional_classes(lat)) {
    if (std::find(tri.begin(), tri.end(), e) != tri.end()) continue;
    d.lines.push_back(e);
    RationalClass w = to_rational(e.coords());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += k3[i];
    RationalClass img = rho.apply(w);
    IntVector r(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      Rational c = w[i] + img[i];
      if (c.denominator() != 1) throw Error(ErrorCode::NonIntegralMap, "short root of a line is not integral");
      r[i] = c.numerator();
    }
    DivisorClass root(r);
    d.short_root_weights.push_back(root);
    auto lhs = restrict_point(lat, pa, g, root);
    auto rhs = g.scale(2, g.add(restrict_point(lat, pa, g, e), d.p));
    d.restrictions_match = d.restrictions_match && lhs == rhs;
  }
  auto fr = folded_root_system(FoldType::F4, lat);
  Int short_norm = *fr.norm_values.rbegin();  // norms are negative; short is the largest
  std::vector<DivisorClass> shorts;
  for (const auto& r : fr.roots)
    if (lat.square(r) == short_norm) shorts.push_back(r);
  auto found = d.short_root_weights;
  std::sort(found.begin(), found.end());
  d.short_roots_match = found == shorts && std::adjacent_find(found.begin(), found.end()) == found.end();
  // 0 -> ker(tr) -> O((-p))^3 -> O((-p)) -> 0
  d.trace_kernel_rank = 3 - 1;
  d.trace_kernel_det = {2, g.scale(-2, d.p)};
  return d;
}

}  // namespace ratsurf
