#pragma once

// Finite abelian groups of rank <= 2 standing in for the elliptic curve,
// Smith normal form, and linear systems with group-valued right-hand sides.

#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ratsurf/errors.hpp"
#include "ratsurf/matrix.hpp"

namespace ratsurf {

/// (a mod m1, b mod m2) in canonical residues.
struct GroupElement {
  Int a = 0;
  Int b = 0;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

inline std::string to_string(const GroupElement& g) {
  return "(" + std::to_string(g.a) + "," + std::to_string(g.b) + ")";
}

/// Z/m1 x Z/m2 with m1 | m2.
class SigmaModel {
 public:
  SigmaModel(Int m1, Int m2) : m1_(m1), m2_(m2) {
    if (m1 < 1 || m2 < 1) throw Error(ErrorCode::InvalidArgument, "group moduli must be positive");
    if (m2 % m1 != 0) throw Error(ErrorCode::InvalidArgument, "m1 must divide m2");
  }

  Int m1() const noexcept { return m1_; }
  Int m2() const noexcept { return m2_; }
  Int order() const noexcept { return m1_ * m2_; }

  GroupElement zero() const noexcept { return {}; }
  GroupElement make(Int a, Int b) const { return {mod(a, m1_), mod(b, m2_)}; }
  GroupElement add(const GroupElement& x, const GroupElement& y) const { return make(x.a + y.a, x.b + y.b); }
  GroupElement sub(const GroupElement& x, const GroupElement& y) const { return make(x.a - y.a, x.b - y.b); }
  GroupElement neg(const GroupElement& x) const { return make(-x.a, -x.b); }
  GroupElement scale(Int k, const GroupElement& x) const {
    return make(mod(k, m1_) * x.a, mod(k, m2_) * x.b);
  }

  /// sum_i c_i * x_i.
  GroupElement combine(const IntVector& coeffs, const std::vector<GroupElement>& xs) const {
    if (coeffs.size() != xs.size()) throw Error(ErrorCode::DimensionMismatch, "combination length");
    GroupElement acc = zero();
    for (std::size_t i = 0; i < xs.size(); ++i) acc = add(acc, scale(coeffs[i], xs[i]));
    return acc;
  }

  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(order()));
    for (Int a = 0; a < m1_; ++a)
      for (Int b = 0; b < m2_; ++b) out.push_back({a, b});
    return out;
  }

  /// Elements killed by n.
  std::vector<GroupElement> torsion(Int n) const {
    std::vector<GroupElement> out;
    for (const auto& g : elements())
      if (scale(n, g) == zero()) out.push_back(g);
    return out;
  }

  Int torsion_count(Int n) const { return std::gcd(n, m1_) * std::gcd(n, m2_); }

  Int element_order(const GroupElement& g) const {
    Int oa = m1_ / std::gcd(g.a, m1_);
    Int ob = m2_ / std::gcd(g.b, m2_);
    return std::lcm(oa, ob);
  }

  /// All tuples of length k, in lexicographic order.
  template <class F>
  void for_each_tuple(std::size_t k, F&& f) const {
    auto elems = elements();
    std::vector<std::size_t> idx(k, 0);
    std::vector<GroupElement> t(k, zero());
    while (true) {
      for (std::size_t i = 0; i < k; ++i) t[i] = elems[idx[i]];
      f(static_cast<const std::vector<GroupElement>&>(t));
      std::size_t i = 0;
      while (i < k && idx[i] + 1 == elems.size()) idx[i++] = 0;
      if (i == k) break;
      ++idx[i];
    }
  }

  friend bool operator==(const SigmaModel&, const SigmaModel&) = default;

 private:
  Int m1_;
  Int m2_;
};

inline SigmaModel make_sigma_model(Int m1, Int m2) { return SigmaModel(m1, m2); }

// ---------------------------------------------------------------------------
// Smith normal form.

struct SNFResult {
  IntMatrix U, S, V;           // A = U S V
  IntMatrix U_inv, V_inv;      // S = U_inv A V_inv
  std::vector<Int> diagonal;   // d_1 | d_2 | ... (min(rows, cols) entries, trailing zeros allowed)
  std::size_t rank = 0;
};

inline SNFResult smith_normal_form(const IntMatrix& a) {
  const std::size_t r = a.rows(), c = a.cols();
  IntMatrix s = a;
  IntMatrix L = IntMatrix::identity(r), Linv = IntMatrix::identity(r);
  IntMatrix R = IntMatrix::identity(c), Rinv = IntMatrix::identity(c);

  // Row op: row i += k * row j. Tracked as L <- E L, Linv <- Linv E^-1.
  auto row_add = [&](std::size_t i, std::size_t j, Int k) {
    for (std::size_t x = 0; x < c; ++x) s(i, x) = checked_add(s(i, x), checked_mul(k, s(j, x)));
    for (std::size_t x = 0; x < r; ++x) L(i, x) = checked_add(L(i, x), checked_mul(k, L(j, x)));
    for (std::size_t x = 0; x < r; ++x) Linv(x, j) = checked_sub(Linv(x, j), checked_mul(k, Linv(x, i)));
  };
  auto row_swap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t x = 0; x < c; ++x) std::swap(s(i, x), s(j, x));
    for (std::size_t x = 0; x < r; ++x) std::swap(L(i, x), L(j, x));
    for (std::size_t x = 0; x < r; ++x) std::swap(Linv(x, i), Linv(x, j));
  };
  auto row_neg = [&](std::size_t i) {
    for (std::size_t x = 0; x < c; ++x) s(i, x) = -s(i, x);
    for (std::size_t x = 0; x < r; ++x) L(i, x) = -L(i, x);
    for (std::size_t x = 0; x < r; ++x) Linv(x, i) = -Linv(x, i);
  };
  // Column op: col i += k * col j. R <- R E, Rinv <- E^-1 Rinv.
  auto col_add = [&](std::size_t i, std::size_t j, Int k) {
    for (std::size_t x = 0; x < r; ++x) s(x, i) = checked_add(s(x, i), checked_mul(k, s(x, j)));
    for (std::size_t x = 0; x < c; ++x) R(x, i) = checked_add(R(x, i), checked_mul(k, R(x, j)));
    for (std::size_t x = 0; x < c; ++x) Rinv(j, x) = checked_sub(Rinv(j, x), checked_mul(k, Rinv(i, x)));
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t x = 0; x < r; ++x) std::swap(s(x, i), s(x, j));
    for (std::size_t x = 0; x < c; ++x) std::swap(R(x, i), R(x, j));
    for (std::size_t x = 0; x < c; ++x) std::swap(Rinv(i, x), Rinv(j, x));
  };

  const std::size_t m = std::min(r, c);
  for (std::size_t t = 0; t < m; ++t) {
    while (true) {
      // Pivot on the smallest nonzero entry of the remaining block.
      std::size_t pi = r, pj = c;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (s(i, j) != 0 && (pi == r || std::abs(s(i, j)) < std::abs(s(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == r) break;
      row_swap(t, pi);
      col_swap(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        Int q = floor_div(s(i, t), s(t, t));
        if (q) row_add(i, t, -q);
        if (s(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        Int q = floor_div(s(t, j), s(t, t));
        if (q) col_add(j, t, -q);
        if (s(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Enforce divisibility of the rest of the block.
      bool divides = true;
      for (std::size_t i = t + 1; i < r && divides; ++i)
        for (std::size_t j = t + 1; j < c && divides; ++j)
          if (s(i, j) % s(t, t) != 0) {
            row_add(t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
    if (s(t, t) < 0) row_neg(t);
  }

  SNFResult res;
  res.S = s;
  res.U = Linv;
  res.V = Rinv;
  res.U_inv = L;
  res.V_inv = R;
  for (std::size_t t = 0; t < m; ++t) {
    res.diagonal.push_back(s(t, t));
    if (s(t, t) != 0) ++res.rank;
  }
  return res;
}

/// Integral basis of {x in Z^cols : A x = 0}, as columns.
inline std::vector<IntVector> integer_kernel(const IntMatrix& a) {
  SNFResult snf = smith_normal_form(a);
  std::vector<IntVector> basis;
  for (std::size_t j = snf.rank; j < a.cols(); ++j) basis.push_back(snf.V_inv.column(j));
  return basis;
}

// ---------------------------------------------------------------------------
// Linear systems over the group.

struct GroupSolution {
  bool solvable = false;
  std::vector<GroupElement> particular;
  Int kernel_size = 0;
  std::vector<std::vector<GroupElement>> all;  // filled when kernel_size <= cap
  bool enumerated = false;
};

namespace detail {

// Inverse of a modulo m for gcd(a, m) = 1.
inline Int mod_inverse(Int a, Int m) {
  Int old_r = mod(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  return mod(old_s, m);
}

struct CyclicSolution {
  bool solvable = false;
  IntVector particular;               // y-coordinates after V
  std::vector<Int> step, count;       // y_i = particular_i + t*step_i, t < count_i
};

// Solves S y = c mod m for the diagonal S of an SNF.
inline CyclicSolution solve_diagonal(const SNFResult& snf, const IntVector& c, Int m, std::size_t cols) {
  CyclicSolution out;
  out.particular.assign(cols, 0);
  out.step.assign(cols, 1);
  out.count.assign(cols, 1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    Int d = i < snf.diagonal.size() ? snf.diagonal[i] : 0;
    Int ci = mod(c[i], m);
    if (i >= cols) {
      if (ci != 0) return out;
      continue;
    }
    Int g = std::gcd(d, m);  // gcd(0, m) = m
    if (ci % g != 0) return out;
    Int mg = m / g;
    out.particular[i] = mg == 1 ? 0 : mod((ci / g) * mod_inverse(d / g, mg), mg);
    out.step[i] = mg;
    out.count[i] = g;
  }
  for (std::size_t i = c.size(); i < cols; ++i) {
    out.step[i] = 1;
    out.count[i] = m;
  }
  out.solvable = true;
  return out;
}

}  // namespace detail

inline constexpr Int kDefaultSolutionCap = 100'000;

/// Solves A x = rhs with x in sigma^cols, componentwise through the SNF of A.
inline GroupSolution solve_group_system(const IntMatrix& a, const std::vector<GroupElement>& rhs,
                                        const SigmaModel& sigma, Int cap = kDefaultSolutionCap) {
  if (a.rows() != rhs.size()) throw Error(ErrorCode::DimensionMismatch, "rhs length");
  const std::size_t cols = a.cols();
  SNFResult snf = smith_normal_form(a);

  GroupSolution sol;
  std::array<detail::CyclicSolution, 2> parts;
  std::array<Int, 2> mods{sigma.m1(), sigma.m2()};
  for (int k = 0; k < 2; ++k) {
    IntVector b(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) b[i] = k == 0 ? rhs[i].a : rhs[i].b;
    IntVector c = snf.U_inv * b;
    parts[static_cast<std::size_t>(k)] = detail::solve_diagonal(snf, c, mods[static_cast<std::size_t>(k)], cols);
    if (!parts[static_cast<std::size_t>(k)].solvable) return sol;
  }
  sol.solvable = true;
  sol.kernel_size = 1;
  for (const auto& p : parts)
    for (Int n : p.count) sol.kernel_size = checked_mul(sol.kernel_size, n);

  auto assemble = [&](const IntVector& ya, const IntVector& yb) {
    IntVector xa = snf.V_inv * ya, xb = snf.V_inv * yb;
    std::vector<GroupElement> x(cols);
    for (std::size_t i = 0; i < cols; ++i) x[i] = sigma.make(xa[i], xb[i]);
    return x;
  };
  sol.particular = assemble(parts[0].particular, parts[1].particular);

  if (sol.kernel_size <= cap) {
    sol.enumerated = true;
    // Mixed-radix walk over both components' free parameters.
    std::vector<Int> counts;
    for (const auto& p : parts) counts.insert(counts.end(), p.count.begin(), p.count.end());
    std::vector<Int> t(counts.size(), 0);
    while (true) {
      IntVector ya = parts[0].particular, yb = parts[1].particular;
      for (std::size_t i = 0; i < cols; ++i) {
        ya[i] += t[i] * parts[0].step[i];
        yb[i] += t[cols + i] * parts[1].step[i];
      }
      sol.all.push_back(assemble(ya, yb));
      std::size_t i = 0;
      while (i < t.size() && t[i] + 1 >= counts[i]) t[i++] = 0;
      if (i == t.size()) break;
      ++t[i];
    }
    std::sort(sol.all.begin(), sol.all.end());
  }
  return sol;
}

/// A x evaluated in the group.
inline std::vector<GroupElement> apply_group_matrix(const IntMatrix& a, const std::vector<GroupElement>& x,
                                                    const SigmaModel& sigma) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "group vector length");
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < a.rows(); ++i) out.push_back(sigma.combine(a.row(i), x));
  return out;
}

// ---------------------------------------------------------------------------
// Weierstrass curves y^2 = x^3 + a x + b over F_p.

struct CurvePoint {
  bool infinity = true;
  Int x = 0;
  Int y = 0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
  friend auto operator<=>(const CurvePoint&, const CurvePoint&) = default;
};

class WeierstrassCurve {
 public:
  WeierstrassCurve(Int p, Int a, Int b) : p_(p), a_(mod(a, p)), b_(mod(b, p)) {
    if (p < 3 || p > 10'000) throw Error(ErrorCode::InvalidArgument, "prime must be odd and at most 10^4");
    for (Int d = 2; d * d <= p; ++d)
      if (p % d == 0) throw Error(ErrorCode::InvalidArgument, "modulus is not prime");
    Int disc = mod(4 * pow_mod(a_, 3) + 27 * mod(b_ * b_, p_), p_);
    if (disc == 0) throw Error(ErrorCode::SingularCurve, "4a^3 + 27b^2 = 0 mod p");
  }

  Int p() const noexcept { return p_; }

  bool on_curve(const CurvePoint& q) const {
    if (q.infinity) return true;
    return mod(q.y * q.y, p_) == mod(pow_mod(q.x, 3) + a_ * q.x + b_, p_);
  }

  std::vector<CurvePoint> points() const {
    std::vector<CurvePoint> out{CurvePoint{}};
    for (Int x = 0; x < p_; ++x) {
      Int rhs = mod(pow_mod(x, 3) + a_ * x + b_, p_);
      for (Int y = 0; y < p_; ++y)
        if (mod(y * y, p_) == rhs) out.push_back({false, x, y});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  CurvePoint neg(const CurvePoint& q) const {
    if (q.infinity) return q;
    return {false, q.x, mod(-q.y, p_)};
  }

  /// Chord-tangent addition.
  CurvePoint add(const CurvePoint& u, const CurvePoint& v) const {
    if (u.infinity) return v;
    if (v.infinity) return u;
    Int lambda;
    if (u.x == v.x) {
      if (mod(u.y + v.y, p_) == 0) return CurvePoint{};
      lambda = mod((3 * mod(u.x * u.x, p_) + a_) * inv(2 * u.y), p_);
    } else {
      lambda = mod((v.y - u.y) * inv(v.x - u.x), p_);
    }
    Int x3 = mod(lambda * lambda - u.x - v.x, p_);
    Int y3 = mod(lambda * (u.x - x3) - u.y, p_);
    return {false, x3, y3};
  }

  CurvePoint mul(Int k, CurvePoint q) const {
    if (k < 0) return mul(-k, neg(q));
    CurvePoint acc{};
    while (k) {
      if (k & 1) acc = add(acc, q);
      q = add(q, q);
      k >>= 1;
    }
    return acc;
  }

  Int order_of(const CurvePoint& q) const {
    Int k = 1;
    CurvePoint r = q;
    while (!r.infinity) {
      r = add(r, q);
      ++k;
    }
    return k;
  }

 private:
  Int pow_mod(Int base, Int e) const {
    Int r = 1;
    base = mod(base, p_);
    while (e) {
      if (e & 1) r = mod(r * base, p_);
      base = mod(base * base, p_);
      e >>= 1;
    }
    return r;
  }
  Int inv(Int v) const { return pow_mod(mod(v, p_), p_ - 2); }

  Int p_, a_, b_;
};

/// The point group with an explicit isomorphism to a SigmaModel:
/// (a, b) corresponds to a*Q + b*P with P of order m2 and Q of order m1.
struct WeierstrassGroup {
  WeierstrassCurve curve;
  SigmaModel sigma;
  CurvePoint gen_m2;  // P
  CurvePoint gen_m1;  // Q
  std::map<CurvePoint, GroupElement> encode;
  std::map<GroupElement, CurvePoint> decode;
};

inline WeierstrassGroup weierstrass_group(Int p, Int a, Int b) {
  WeierstrassCurve curve(p, a, b);
  auto pts = curve.points();
  const Int n = static_cast<Int>(pts.size());
  Int exponent = 1;
  CurvePoint P{};
  for (const auto& q : pts) {
    Int o = curve.order_of(q);
    if (o > exponent) {
      exponent = o;
      P = q;
    }
  }
  const Int m2 = exponent, m1 = n / exponent;
  std::set<CurvePoint> span_p;
  for (Int k = 0; k < m2; ++k) span_p.insert(curve.mul(k, P));
  CurvePoint Q{};
  bool found = m1 == 1;
  for (const auto& q : pts) {
    if (found) break;
    if (curve.order_of(q) != m1) continue;
    bool meets = false;
    for (Int k = 1; k < m1 && !meets; ++k) meets = span_p.count(curve.mul(k, q)) > 0;
    if (!meets) {
      Q = q;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::InvalidArgument, "group structure search failed");
  WeierstrassGroup g{curve, SigmaModel(m1, m2), P, Q, {}, {}};
  for (Int i = 0; i < m1; ++i)
    for (Int j = 0; j < m2; ++j) {
      CurvePoint pt = curve.add(curve.mul(i, Q), curve.mul(j, P));
      g.encode[pt] = {i, j};
      g.decode[{i, j}] = pt;
    }
  if (static_cast<Int>(g.encode.size()) != n) throw Error(ErrorCode::InvalidArgument, "encoding is not bijective");
  return g;
}

}  // namespace ratsurf
