#pragma once

// Chevalley-basis structure constants for root systems of divisor classes,
// Jacobi verification, and the graded Lie algebra bundles.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ratsurf/errors.hpp"
#include "ratsurf/folding.hpp"
#include "ratsurf/lattice.hpp"
#include "ratsurf/rootsys.hpp"

namespace ratsurf {

struct RootString {
  int r = 0;  // beta - r alpha, ..., beta + q alpha
  int q = 0;
  friend bool operator==(const RootString&, const RootString&) = default;
};

inline RootString root_string(const DivisorClass& alpha, const DivisorClass& beta, const RootSystemData& rs) {
  if (!rs.contains(alpha) || !rs.contains(beta)) throw Error(ErrorCode::InvalidArgument, "string endpoints must be roots");
  if (beta == alpha || beta == -alpha) throw Error(ErrorCode::InvalidArgument, "string through a proportional root");
  RootString s;
  while (rs.contains(beta - (s.r + 1) * alpha)) ++s.r;
  while (rs.contains(beta + (s.q + 1) * alpha)) ++s.q;
  // Strings are unbroken: nothing lies just beyond either end.
  for (int k = 2; k <= 4; ++k)
    if (rs.contains(beta + (s.q + k) * alpha) || rs.contains(beta - (s.r + k) * alpha))
      throw Error(ErrorCode::ConstraintViolated, "broken root string");
  return s;
}

/// Basis: h_1..h_n (simple coroots) then e_alpha for roots in `roots` order.
struct StructureConstantTable {
  IntersectionLattice lattice;
  std::vector<DivisorClass> simple;
  std::vector<DivisorClass> roots;     // positive roots by height, then their negatives
  std::size_t positive_count = 0;
  std::vector<std::vector<Int>> N;     // N[i][j] over root indices, 0 when not a root
  std::vector<std::vector<Int>> cartan_pairing;  // <alpha, alpha_i> = 2(alpha, alpha_i)/(alpha_i, alpha_i)
  std::vector<IntVector> coroot;       // h_alpha in the h_i basis
  std::vector<std::pair<std::size_t, std::size_t>> extraspecial;

  std::size_t rank() const noexcept { return simple.size(); }
  std::size_t dimension() const noexcept { return simple.size() + roots.size(); }
  std::optional<std::size_t> index(const DivisorClass& d) const {
    auto it = std::find(roots.begin(), roots.end(), d);
    if (it == roots.end()) return std::nullopt;
    return static_cast<std::size_t>(it - roots.begin());
  }
  std::size_t opposite(std::size_t i) const { return i < positive_count ? i + positive_count : i - positive_count; }
};

namespace detail {

// (x, y) = -x.y, positive definite on roots.
inline Int form(const IntersectionLattice& lat, const DivisorClass& x, const DivisorClass& y) { return -lat.pair(x, y); }

}  // namespace detail

inline StructureConstantTable structure_constants(const RootSystemData& rs, const std::vector<DivisorClass>& simple) {
  const auto& lat = rs.ambient;
  StructureConstantTable t{lat, simple, {}, 0, {}, {}, {}, {}};
  RootBasis basis(lat, simple);

  auto pos = positive_roots(rs, simple);
  std::vector<std::pair<IntVector, DivisorClass>> keyed;
  for (const auto& p : pos) {
    IntVector c = *basis.integer_coordinates(p);
    Int h = 0;
    for (Int v : c) h += v;
    IntVector key{h};
    key.insert(key.end(), c.rbegin(), c.rend());
    keyed.emplace_back(std::move(key), p);
  }
  std::sort(keyed.begin(), keyed.end());
  for (auto& [k, p] : keyed) t.roots.push_back(p);
  t.positive_count = t.roots.size();
  for (std::size_t i = 0; i < t.positive_count; ++i) t.roots.push_back(-t.roots[i]);
  const std::size_t m = t.roots.size();
  const std::size_t np = t.positive_count;

  std::map<DivisorClass, std::size_t> idx;
  for (std::size_t i = 0; i < m; ++i) idx.emplace(t.roots[i], i);
  auto find = [&](const DivisorClass& d) -> std::optional<std::size_t> {
    auto it = idx.find(d);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  };
  auto len = [&](std::size_t i) { return detail::form(lat, t.roots[i], t.roots[i]); };

  t.N.assign(m, std::vector<Int>(m, 0));
  std::vector<std::vector<bool>> known(m, std::vector<bool>(m, false));

  // N for an arbitrary pair, reduced to a pair of positive roots already fixed.
  std::function<Int(std::size_t, std::size_t)> value = [&](std::size_t a, std::size_t b) -> Int {
    auto sum = find(t.roots[a] + t.roots[b]);
    if (!sum) return 0;
    if (known[a][b]) return t.N[a][b];
    const bool pa = a < np, pb = b < np;  // signs of a and b
    if (pa && pb) {
      if (known[b][a]) return -t.N[b][a];
      throw Error(ErrorCode::SignPropagationConflict, "pair used before it was fixed");
    }
    if (!pa && !pb) return -value(t.opposite(a), t.opposite(b));
    // a + b + c = 0; N_ab/(c,c) = N_bc/(a,a) = N_ca/(b,b). Use the pair in
    // which c has a partner of its own sign.
    const std::size_t c = t.opposite(*sum);
    const bool same_a = (a < np) == (c < np);
    const Int v = same_a ? value(c, a) : value(b, c);
    const Int num = v * len(c);
    const Int den = same_a ? len(b) : len(a);
    if (num % den != 0) throw Error(ErrorCode::SignPropagationConflict, "non-integral rotated constant");
    return num / den;
  };

  auto set = [&](std::size_t a, std::size_t b, Int v) {
    t.N[a][b] = v;
    t.N[b][a] = -v;
    known[a][b] = known[b][a] = true;
  };

  for (std::size_t xi = 0; xi < np; ++xi) {
    std::vector<std::pair<std::size_t, std::size_t>> special;
    for (std::size_t r = 0; r < xi; ++r) {
      auto s = find(t.roots[xi] - t.roots[r]);
      if (s && *s < np && r < *s) special.emplace_back(r, *s);
    }
    if (special.empty()) continue;
    auto [r1, s1] = special.front();
    t.extraspecial.emplace_back(r1, s1);
    const auto str1 = root_string(t.roots[r1], t.roots[s1], rs);
    set(r1, s1, str1.r + 1);
    for (std::size_t k = 1; k < special.size(); ++k) {
      auto [r, s] = special[k];
      const std::size_t mr1 = t.opposite(r1), ms1 = t.opposite(s1);
      auto term = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) -> Rational {
        auto ab = find(t.roots[a] + t.roots[b]);
        if (!ab) return Rational(0);
        Int n1 = value(a, b), n2 = value(c, d);
        return Rational(n1 * n2, detail::form(lat, t.roots[*ab], t.roots[*ab]));
      };
      Rational bracket = term(s, mr1, r, ms1) + term(mr1, r, s, ms1);
      Rational v = bracket * Rational(len(xi)) / Rational(t.N[r1][s1]);
      if (v.denominator() != 1) throw Error(ErrorCode::SignPropagationConflict, "non-integral structure constant");
      const auto str = root_string(t.roots[r], t.roots[s], rs);
      if (v.numerator() != str.r + 1 && v.numerator() != -(str.r + 1))
        throw Error(ErrorCode::SignPropagationConflict, "|N| differs from r+1 at " + lat.format(t.roots[xi]));
      set(r, s, v.numerator());
    }
  }

  // Fill every remaining pair with a root sum.
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (known[a][b] || !find(t.roots[a] + t.roots[b])) continue;
      Int v = value(a, b);
      t.N[a][b] = v;
      known[a][b] = true;
    }

  t.cartan_pairing.assign(m, std::vector<Int>(simple.size(), 0));
  t.coroot.assign(m, IntVector(simple.size(), 0));
  for (std::size_t a = 0; a < m; ++a) {
    const auto coords = *basis.integer_coordinates(t.roots[a]);
    for (std::size_t i = 0; i < simple.size(); ++i) {
      const Int num = 2 * detail::form(lat, t.roots[a], simple[i]);
      const Int den = detail::form(lat, simple[i], simple[i]);
      if (num % den != 0) throw Error(ErrorCode::ConstraintViolated, "non-integral Cartan pairing");
      t.cartan_pairing[a][i] = num / den;
      // h_alpha = sum_i c_i (alpha_i, alpha_i)/(alpha, alpha) h_i
      const Int cnum = coords[i] * den;
      if (cnum % len(a) != 0) throw Error(ErrorCode::ConstraintViolated, "h_alpha is not integral");
      t.coroot[a][i] = cnum / len(a);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Brackets on the Chevalley basis.

using SparseVector = std::vector<std::pair<std::size_t, Int>>;  // sorted by index

inline SparseVector basis_bracket(const StructureConstantTable& t, std::size_t x, std::size_t y) {
  const std::size_t n = t.rank();
  SparseVector out;
  if (x < n && y < n) return out;
  if (x < n) {
    const std::size_t a = y - n;
    if (Int c = t.cartan_pairing[a][x]; c != 0) out.emplace_back(y, c);
    return out;
  }
  if (y < n) {
    const std::size_t a = x - n;
    if (Int c = t.cartan_pairing[a][y]; c != 0) out.emplace_back(x, -c);
    return out;
  }
  const std::size_t a = x - n, b = y - n;
  if (t.opposite(a) == b) {
    for (std::size_t i = 0; i < n; ++i)
      if (t.coroot[a][i] != 0) out.emplace_back(i, t.coroot[a][i]);
    return out;
  }
  if (Int v = t.N[a][b]; v != 0) {
    auto s = t.index(t.roots[a] + t.roots[b]);
    out.emplace_back(n + *s, v);
  }
  return out;
}

struct BracketCache {
  std::vector<std::vector<SparseVector>> table;
  explicit BracketCache(const StructureConstantTable& t) {
    const std::size_t d = t.dimension();
    table.assign(d, std::vector<SparseVector>(d));
    for (std::size_t x = 0; x < d; ++x)
      for (std::size_t y = 0; y < d; ++y) table[x][y] = basis_bracket(t, x, y);
  }
  void accumulate(std::size_t x, const SparseVector& v, Int scale, std::vector<Int>& dense) const {
    for (auto [k, c] : v)
      for (auto [j, d] : table[x][k]) dense[j] += scale * c * d;
  }
};

struct JacobiResult {
  bool ok = true;
  std::size_t triples = 0;
  std::string failure;
};

/// Antisymmetry on all pairs and the Jacobi identity on all ordered triples.
inline JacobiResult verify_jacobi(const StructureConstantTable& t) {
  JacobiResult r;
  const std::size_t d = t.dimension();
  const BracketCache bc(t);
  auto name = [&](std::size_t x) {
    return x < t.rank() ? "h" + std::to_string(x + 1) : "e(" + t.lattice.format(t.roots[x - t.rank()]) + ")";
  };
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y) {
      SparseVector neg = bc.table[y][x];
      for (auto& [k, c] : neg) c = -c;
      if (bc.table[x][y] != neg) {
        r.ok = false;
        r.failure = "antisymmetry fails for " + name(x) + ", " + name(y);
        return r;
      }
    }
  std::vector<Int> acc(d, 0);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z) {
        ++r.triples;
        bc.accumulate(x, bc.table[y][z], 1, acc);
        bc.accumulate(y, bc.table[z][x], 1, acc);
        bc.accumulate(z, bc.table[x][y], 1, acc);
        bool zero = true;
        for (auto& v : acc) {
          zero = zero && v == 0;
          v = 0;
        }
        if (!zero) {
          r.ok = false;
          r.failure = "Jacobi fails for " + name(x) + ", " + name(y) + ", " + name(z);
          return r;
        }
      }
  return r;
}

/// |N| = r+1 on every pair with a root sum, and the bracket respects the
/// class grading: e_a, e_b land in the summand of a+b.
struct StructureCensus {
  bool magnitudes_ok = true;
  bool grading_ok = true;
  Int max_abs = 0;
  std::size_t nonzero = 0;
  std::string failure;
};

inline StructureCensus structure_census(const StructureConstantTable& t, const RootSystemData& rs) {
  StructureCensus c;
  const std::size_t m = t.roots.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b || t.opposite(a) == b) continue;
      const Int v = t.N[a][b];
      const bool is_root = rs.contains(t.roots[a] + t.roots[b]);
      if (v == 0) {
        if (is_root) {
          c.magnitudes_ok = false;
          c.failure = "missing constant at " + t.lattice.format(t.roots[a]) + ", " + t.lattice.format(t.roots[b]);
        }
        continue;
      }
      ++c.nonzero;
      if (!is_root) {
        c.grading_ok = false;
        c.failure = "bracket outside the grading";
        continue;
      }
      const auto s = root_string(t.roots[a], t.roots[b], rs);
      const Int mag = v < 0 ? -v : v;
      if (mag != s.r + 1) {
        c.magnitudes_ok = false;
        c.failure = "|N| != r+1 at " + t.lattice.format(t.roots[a]) + ", " + t.lattice.format(t.roots[b]);
      }
      c.max_abs = std::max(c.max_abs, mag);
    }
  return c;
}

// ---------------------------------------------------------------------------

struct GradedBundleDecomposition {
  int trivial_rank = 0;
  std::vector<DivisorClass> summands;  // sorted
};

inline GradedBundleDecomposition build_lie_bundle(const RootSystemData& rs, const std::vector<DivisorClass>& simple) {
  return {static_cast<int>(simple.size()), rs.roots};
}

inline GradedBundleDecomposition build_lie_bundle(FoldType t, int n = 0) {
  const auto lat = fold_lattice(t, n);
  const auto rs = folded_root_system(t, lat, n);
  return {folded_rank(t, n), rs.roots};
}

/// Root system and simple system for one of the tabulated cases.
struct LieCase {
  std::string name;
  RootSystemData roots;
  std::vector<DivisorClass> simple;
};

inline LieCase lie_case(SimpleSystemCase c, int n = 0) {
  auto lat = lattice_for(c, n);
  auto simple = standard_simple_system(c, lat, n);
  return {simple.type(), root_system_closure(lat, simple.roots), simple.roots};
}

inline LieCase lie_case(FoldType t, int n = 0) {
  auto fd = folding_data(t, n);
  auto rs = folded_root_system(t, fd.lattice, n);
  std::string name = to_string(t) + (t == FoldType::B || t == FoldType::C ? std::to_string(n) : "");
  return {name, rs, fd.folded.roots};
}

}  // namespace ratsurf
