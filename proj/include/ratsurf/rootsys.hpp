#pragma once

// Root systems embedded in Picard lattices, Cartan data, and Weyl groups
// realised as integer matrices acting on divisor-class coordinates.

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ratsurf/errors.hpp"
#include "ratsurf/lattice.hpp"
#include "ratsurf/matrix.hpp"

namespace ratsurf {

struct RootSystemData {
  IntersectionLattice ambient;
  std::vector<DivisorClass> roots;  // sorted
  std::set<Int> norm_values;

  bool contains(const DivisorClass& d) const { return std::binary_search(roots.begin(), roots.end(), d); }
  std::size_t size() const noexcept { return roots.size(); }
};

inline RootSystemData make_root_system(const IntersectionLattice& lat, std::vector<DivisorClass> roots) {
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  std::set<Int> norms;
  for (const auto& r : roots) norms.insert(lat.square(r));
  return RootSystemData{lat, std::move(roots), std::move(norms)};
}

/// x - 2(x.a)/(a.a) a. Throws when the coefficient is not an integer.
inline DivisorClass reflect(const IntersectionLattice& lat, const DivisorClass& alpha, const DivisorClass& x) {
  const Int aa = lat.square(alpha);
  if (aa == 0) throw Error(ErrorCode::InvalidArgument, "reflection in an isotropic class");
  const Int num = checked_mul(2, lat.pair(x, alpha));
  if (num % aa != 0)
    throw Error(ErrorCode::NonIntegralReflection,
                "reflecting " + lat.format(x) + " in " + lat.format(alpha));
  return x - (num / aa) * alpha;
}

/// Every x with x.x = -2 orthogonal to the given classes.
inline RootSystemData root_sublattice(const IntersectionLattice& lat, const std::vector<DivisorClass>& orthogonal_to) {
  std::vector<ClassConstraint> cs{ClassConstraint::self(-2)};
  for (const auto& c : orthogonal_to) cs.push_back(ClassConstraint::with(c, 0));
  // K is always a legitimate bounding class for the root searches in scope.
  bool has_k = std::find(orthogonal_to.begin(), orthogonal_to.end(), lat.canonical_class()) != orthogonal_to.end();
  if (!has_k) throw Error(ErrorCode::UnboundedSearch, "root searches must be orthogonal to K");
  return make_root_system(lat, enumerate_classes(lat, cs));
}

/// Checks the RootSystemData invariants; returns an empty string when they hold.
inline std::string validate_root_system(const RootSystemData& rs) {
  for (const auto& r : rs.roots) {
    if (r.is_zero()) return "zero class in root set";
    if (!rs.contains(-r)) return "not closed under negation: " + rs.ambient.format(r);
    for (const auto& a : rs.roots) {
      DivisorClass img;
      try {
        img = reflect(rs.ambient, a, r);
      } catch (const Error&) {
        return "non-integral reflection of " + rs.ambient.format(r) + " in " + rs.ambient.format(a);
      }
      if (!rs.contains(img)) return "not closed under reflection in " + rs.ambient.format(a);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Dynkin catalogue and Cartan recognition.

struct DynkinComponent {
  char family = 'A';
  int rank = 0;
  std::vector<std::size_t> order;  // input indices in Bourbaki order

  std::string name() const { return std::string(1, family) + std::to_string(rank); }
};

inline std::string type_name(const std::vector<DynkinComponent>& comps) {
  std::vector<std::string> names;
  for (const auto& c : comps) names.push_back(c.name());
  std::sort(names.begin(), names.end());
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "x" : "") + names[i];
  return out;
}

/// Bourbaki Cartan matrix, A_ij = <a_i, a_j^vee>.
inline IntMatrix standard_cartan(char family, int n) {
  IntMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  auto link = [&](int i, int j, Int aij = -1, Int aji = -1) {
    a(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = aij;
    a(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i - 1)) = aji;
  };
  for (int i = 0; i < n; ++i) a(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 2;
  switch (family) {
    case 'A':
      for (int i = 1; i < n; ++i) link(i, i + 1);
      break;
    case 'B':
      for (int i = 1; i < n - 1; ++i) link(i, i + 1);
      link(n - 1, n, -2, -1);
      break;
    case 'C':
      for (int i = 1; i < n - 1; ++i) link(i, i + 1);
      link(n - 1, n, -1, -2);
      break;
    case 'D':
      for (int i = 1; i < n - 1; ++i) link(i, i + 1);
      link(n - 2, n);
      break;
    case 'E':
      link(1, 3);
      link(2, 4);
      for (int i = 3; i < n; ++i) link(i, i + 1);
      break;
    case 'F':
      link(1, 2);
      link(2, 3, -2, -1);
      link(3, 4);
      break;
    case 'G':
      link(1, 2, -1, -3);
      break;
    default:
      throw Error(ErrorCode::InvalidArgument, "unknown Dynkin family");
  }
  return a;
}

struct CartanInfo {
  IntMatrix matrix;
  std::vector<DynkinComponent> components;
  std::string type() const { return type_name(components); }
};

namespace detail {

inline DynkinComponent recognize_component(const IntMatrix& a, const std::vector<std::size_t>& nodes) {
  const std::size_t r = nodes.size();
  auto unrecognized = [](const std::string& why) { return Error(ErrorCode::UnrecognizedDiagram, why); };
  std::map<std::size_t, std::vector<std::size_t>> adj;
  std::size_t edges = 0;
  std::vector<std::pair<std::size_t, std::size_t>> multi;
  for (std::size_t x : nodes) adj[x];
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      std::size_t u = nodes[i], v = nodes[j];
      Int m = a(u, v) * a(v, u);
      if (m == 0) continue;
      if (m > 3) throw unrecognized("edge multiplicity above 3");
      adj[u].push_back(v);
      adj[v].push_back(u);
      ++edges;
      if (m > 1) multi.emplace_back(u, v);
    }
  if (edges != r - 1) throw unrecognized("diagram is not a tree");

  auto longer = [&](std::size_t u, std::size_t v) { return a(u, v) < -1; };  // |<u,v^vee>| > 1 => u longer
  auto walk = [&](std::size_t start, std::size_t avoid) {
    std::vector<std::size_t> path{start};
    std::size_t prev = avoid, cur = start;
    while (true) {
      std::size_t next = SIZE_MAX;
      for (std::size_t w : adj[cur])
        if (w != prev) next = w;
      if (next == SIZE_MAX || adj[cur].size() > 2) break;
      path.push_back(next);
      prev = cur;
      cur = next;
    }
    return path;
  };
  std::vector<std::size_t> leaves;
  std::size_t branch = SIZE_MAX;
  for (auto& [x, ns] : adj) {
    if (ns.size() == 1) leaves.push_back(x);
    if (ns.size() == 3) {
      if (branch != SIZE_MAX) throw unrecognized("two branch nodes");
      branch = x;
    }
    if (ns.size() > 3) throw unrecognized("node of degree above 3");
  }

  DynkinComponent c;
  c.rank = static_cast<int>(r);
  if (r == 1) {
    c.family = 'A';
    c.order = nodes;
    return c;
  }
  if (!multi.empty()) {
    if (multi.size() > 1 || branch != SIZE_MAX) throw unrecognized("multiple edge in a non-path diagram");
    auto [u, v] = multi.front();
    Int m = a(u, v) * a(v, u);
    if (m == 3) {
      if (r != 2) throw unrecognized("triple edge beyond rank 2");
      c.family = 'G';
      c.order = longer(u, v) ? std::vector<std::size_t>{v, u} : std::vector<std::size_t>{u, v};
      return c;
    }
    // Path; orient it so that the double edge sits at the end (B/C) or in the middle (F4).
    std::vector<std::size_t> path = walk(leaves.front(), SIZE_MAX);
    auto pos = [&](std::size_t x) {
      return static_cast<std::size_t>(std::find(path.begin(), path.end(), x) - path.begin());
    };
    std::size_t pu = pos(u), pv = pos(v);
    std::size_t lo = std::min(pu, pv);
    if (r == 2) {
      c.family = 'B';
      c.order = longer(u, v) ? std::vector<std::size_t>{u, v} : std::vector<std::size_t>{v, u};
      return c;
    }
    if (r == 4 && lo == 1) {
      c.family = 'F';
      std::vector<std::size_t> p = path;
      if (!longer(p[1], p[2])) std::reverse(p.begin(), p.end());
      c.order = p;
      return c;
    }
    if (lo == 0) std::reverse(path.begin(), path.end());
    else if (lo != r - 2) throw unrecognized("double edge in an unexpected position");
    c.family = longer(path[r - 2], path[r - 1]) ? 'B' : 'C';
    c.order = path;
    return c;
  }
  if (branch == SIZE_MAX) {
    std::sort(leaves.begin(), leaves.end());
    c.family = 'A';
    c.order = walk(leaves.front(), SIZE_MAX);
    return c;
  }
  std::vector<std::vector<std::size_t>> arms;
  for (std::size_t w : adj[branch]) arms.push_back(walk(w, branch));
  std::sort(arms.begin(), arms.end(), [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x.back() < y.back();
  });
  const std::size_t a0 = arms[0].size(), a1 = arms[1].size(), a2 = arms[2].size();
  auto reversed = [](std::vector<std::size_t> v) {
    std::reverse(v.begin(), v.end());
    return v;
  };
  if (a0 == 1 && a1 == 1) {
    c.family = 'D';
    std::vector<std::size_t> o = reversed(arms[2]);
    o.push_back(branch);
    o.push_back(arms[0][0]);
    o.push_back(arms[1][0]);
    c.order = o;
    return c;
  }
  if (a0 == 1 && a1 == 2 && a2 >= 2 && a2 <= 4) {
    c.family = 'E';
    // Bourbaki: a1 - a3 - a4 - a5 ..., a2 hangs off a4.
    std::vector<std::size_t> o;
    o.push_back(arms[1][1]);
    o.push_back(arms[0][0]);
    o.push_back(arms[1][0]);
    o.push_back(branch);
    for (std::size_t x : arms[2]) o.push_back(x);
    c.order = o;
    return c;
  }
  throw unrecognized("branch arms do not match D or E");
}

}  // namespace detail

/// Cartan matrix of a list of classes together with the recognised type.
/// A_ij = 2 (b_i.b_j) / (b_j.b_j).
inline IntMatrix cartan_entries(const IntersectionLattice& lat, const std::vector<DivisorClass>& simple) {
  const std::size_t n = simple.size();
  IntMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Int num = 2 * lat.pair(simple[i], simple[j]);
      Int den = lat.square(simple[j]);
      if (den == 0 || num % den != 0) throw Error(ErrorCode::UnrecognizedDiagram, "non-integral Cartan entry");
      a(i, j) = num / den;
    }
  return a;
}

inline CartanInfo recognize_cartan(const IntMatrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) != 2) throw Error(ErrorCode::UnrecognizedDiagram, "diagonal entry is not 2");
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && (a(i, j) > 0 || ((a(i, j) == 0) != (a(j, i) == 0))))
        throw Error(ErrorCode::UnrecognizedDiagram, "off-diagonal sign pattern");
  }
  std::vector<int> comp(n, -1);
  CartanInfo info{a, {}};
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> nodes;
    std::deque<std::size_t> q{s};
    comp[s] = static_cast<int>(info.components.size());
    while (!q.empty()) {
      std::size_t x = q.front();
      q.pop_front();
      nodes.push_back(x);
      for (std::size_t y = 0; y < n; ++y)
        if (y != x && a(x, y) != 0 && comp[y] < 0) {
          comp[y] = comp[s];
          q.push_back(y);
        }
    }
    std::sort(nodes.begin(), nodes.end());
    DynkinComponent c = detail::recognize_component(a, nodes);
    // Confirm against the catalogue.
    IntMatrix ref = standard_cartan(c.family, c.rank);
    for (std::size_t i = 0; i < c.order.size(); ++i)
      for (std::size_t j = 0; j < c.order.size(); ++j)
        if (a(c.order[i], c.order[j]) != ref(i, j))
          throw Error(ErrorCode::UnrecognizedDiagram, "ordering does not reproduce " + c.name());
    info.components.push_back(std::move(c));
  }
  return info;
}

inline CartanInfo cartan_matrix(const IntersectionLattice& lat, const std::vector<DivisorClass>& simple) {
  if (rank(IntMatrix::from_columns([&] {
        std::vector<IntVector> cols;
        for (const auto& s : simple) cols.push_back(s.coords());
        return cols;
      }())) != simple.size())
    throw Error(ErrorCode::InvalidArgument, "simple roots are not independent");
  return recognize_cartan(cartan_entries(lat, simple));
}

// ---------------------------------------------------------------------------
// Simple systems printed for each case.

enum class SimpleSystemCase { D_F1, A_F1, D4_F1, E6_P2, B, C, G2, F4 };

struct SimpleSystem {
  std::vector<DivisorClass> roots;
  char family = 'A';
  int rank = 0;

  std::string type() const { return std::string(1, family) + std::to_string(rank); }
};

/// Lattice each case lives on: D_{n+1}, B_n on F1 with n+1 points; A_{2n-1},
/// C_n on F1 with 2n points; D4, G2 on F1 with 4 points; E6, F4 on P2 with 6.
inline IntersectionLattice lattice_for(SimpleSystemCase c, int n = 0) {
  switch (c) {
    case SimpleSystemCase::D_F1:
    case SimpleSystemCase::B: return make_blowup_lattice(SurfaceModel::F1Blowup, n + 1);
    case SimpleSystemCase::A_F1:
    case SimpleSystemCase::C: return make_blowup_lattice(SurfaceModel::F1Blowup, 2 * n);
    case SimpleSystemCase::D4_F1:
    case SimpleSystemCase::G2: return make_blowup_lattice(SurfaceModel::F1Blowup, 4);
    case SimpleSystemCase::E6_P2:
    case SimpleSystemCase::F4: return make_blowup_lattice(SurfaceModel::P2Blowup, 6);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown case");
}

/// The case's simple system on its lattice. `n` is the rank parameter for the
/// D_{n+1}, A_{2n-1}, B_n, C_n families and ignored otherwise.
inline SimpleSystem standard_simple_system(SimpleSystemCase c, const IntersectionLattice& lat, int n = 0) {
  auto expect = [&](SurfaceModel m, int blowups) {
    if (lat.model() != m || lat.blowups() != blowups)
      throw Error(ErrorCode::InvalidArgument, "lattice does not match the requested simple system");
  };
  SimpleSystem s;
  switch (c) {
    case SimpleSystemCase::D4_F1:
      n = 3;
      [[fallthrough]];
    case SimpleSystemCase::D_F1: {
      if (n < 2) throw Error(ErrorCode::InvalidArgument, "D_{n+1} needs n >= 2");
      expect(SurfaceModel::F1Blowup, n + 1);
      s.roots.push_back(lat.l(1) - lat.l(2));
      s.roots.push_back(lat.f() - lat.l(1) - lat.l(2));
      for (int k = 3; k <= n + 1; ++k) s.roots.push_back(lat.l(k - 1) - lat.l(k));
      s.family = n + 1 == 3 ? 'A' : 'D';  // D3 = A3
      s.rank = n + 1;
      break;
    }
    case SimpleSystemCase::A_F1: {
      if (n < 1) throw Error(ErrorCode::InvalidArgument, "A_{2n-1} needs n >= 1");
      expect(SurfaceModel::F1Blowup, 2 * n);
      for (int i = 1; i < 2 * n; ++i) s.roots.push_back(lat.l(i) - lat.l(i + 1));
      s.family = 'A';
      s.rank = 2 * n - 1;
      break;
    }
    case SimpleSystemCase::E6_P2: {
      expect(SurfaceModel::P2Blowup, 6);
      s.roots = {lat.l(1) - lat.l(2), lat.l(2) - lat.l(3), lat.h() - lat.l(1) - lat.l(2) - lat.l(3),
                 lat.l(3) - lat.l(4), lat.l(4) - lat.l(5), lat.l(5) - lat.l(6)};
      s.family = 'E';
      s.rank = 6;
      break;
    }
    case SimpleSystemCase::B: {
      if (n < 2) throw Error(ErrorCode::InvalidArgument, "B_n needs n >= 2");
      expect(SurfaceModel::F1Blowup, n + 1);
      s.roots.push_back(lat.f() - 2 * lat.l(2));
      for (int k = 2; k <= n; ++k) s.roots.push_back(2 * (lat.l(k) - lat.l(k + 1)));
      s.family = 'B';
      s.rank = n;
      break;
    }
    case SimpleSystemCase::C: {
      if (n < 2) throw Error(ErrorCode::InvalidArgument, "C_n needs n >= 2");
      expect(SurfaceModel::F1Blowup, 2 * n);
      auto eps = [&](int k) { return lat.l(k) - lat.l(2 * n + 1 - k); };
      for (int k = 1; k < n; ++k) s.roots.push_back(eps(k) - eps(k + 1));
      s.roots.push_back(2 * eps(n));
      s.family = 'C';
      s.rank = n;
      break;
    }
    case SimpleSystemCase::G2: {
      expect(SurfaceModel::F1Blowup, 4);
      s.roots = {lat.f() - 2 * lat.l(2) + lat.l(3) - lat.l(4), 3 * (lat.l(2) - lat.l(3))};
      s.family = 'G';
      s.rank = 2;
      break;
    }
    case SimpleSystemCase::F4: {
      expect(SurfaceModel::P2Blowup, 6);
      s.roots = {lat.l(1) - lat.l(2) + lat.l(5) - lat.l(6), lat.l(2) - lat.l(3) + lat.l(4) - lat.l(5),
                 2 * (lat.h() - lat.l(1) - lat.l(2) - lat.l(3)), 2 * (lat.l(3) - lat.l(4))};
      s.family = 'F';
      s.rank = 4;
      break;
    }
  }
  return s;
}

/// Coordinates of classes with respect to a linearly independent family,
/// e.g. a simple system.
class RootBasis {
 public:
  RootBasis(const IntersectionLattice& lat, std::vector<DivisorClass> basis)
      : lat_(lat), basis_(std::move(basis)) {
    const std::size_t n = basis_.size();
    RatMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = lat_.pair(basis_[i], basis_[j]);
    auto inv = inverse(g);
    if (!inv) throw Error(ErrorCode::InvalidArgument, "basis classes are degenerate");
    ginv_ = *inv;
  }

  const std::vector<DivisorClass>& classes() const noexcept { return basis_; }
  std::size_t size() const noexcept { return basis_.size(); }

  /// Rational coordinates; nullopt when x is outside the span.
  std::optional<RatVector> coordinates(const DivisorClass& x) const {
    RatVector pairings(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) pairings[i] = lat_.pair(basis_[i], x);
    RatVector c = ginv_ * pairings;
    // Reconstruct to make sure x really lies in the span.
    RatVector back(x.size(), Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      for (std::size_t k = 0; k < x.size(); ++k) back[k] += c[i] * basis_[i][k];
    for (std::size_t k = 0; k < x.size(); ++k)
      if (back[k] != Rational(x[k])) return std::nullopt;
    return c;
  }

  std::optional<IntVector> integer_coordinates(const DivisorClass& x) const {
    auto c = coordinates(x);
    if (!c) return std::nullopt;
    return to_integer(*c);
  }

  DivisorClass combine(const IntVector& c) const {
    DivisorClass d = lat_.zero();
    for (std::size_t i = 0; i < basis_.size(); ++i) d += c[i] * basis_[i];
    return d;
  }

 private:
  IntersectionLattice lat_;
  std::vector<DivisorClass> basis_;
  RatMatrix ginv_;
};

/// Closure of the simple roots under the simple reflections.
inline RootSystemData root_system_closure(const IntersectionLattice& lat, const std::vector<DivisorClass>& simple) {
  std::set<DivisorClass> seen(simple.begin(), simple.end());
  std::deque<DivisorClass> q(simple.begin(), simple.end());
  while (!q.empty()) {
    DivisorClass x = q.front();
    q.pop_front();
    for (const auto& a : simple) {
      DivisorClass y = reflect(lat, a, x);
      if (seen.insert(y).second) q.push_back(y);
    }
  }
  return make_root_system(lat, {seen.begin(), seen.end()});
}

/// Positive roots: non-negative coordinates in the simple system.
inline std::vector<DivisorClass> positive_roots(const RootSystemData& rs, const std::vector<DivisorClass>& simple) {
  RootBasis basis(rs.ambient, simple);
  std::vector<DivisorClass> pos;
  for (const auto& r : rs.roots) {
    auto c = basis.integer_coordinates(r);
    if (!c) throw Error(ErrorCode::InvalidArgument, "root outside the integral span of the simple system");
    bool nonneg = std::all_of(c->begin(), c->end(), [](Int v) { return v >= 0; });
    bool nonpos = std::all_of(c->begin(), c->end(), [](Int v) { return v <= 0; });
    if (!nonneg && !nonpos) throw Error(ErrorCode::InvalidArgument, "simple system is not a base");
    if (nonneg) pos.push_back(r);
  }
  return pos;
}

/// A base of the root system picked by a generic linear functional.
inline std::vector<DivisorClass> choose_simple_system(const RootSystemData& rs) {
  const std::size_t r = rs.ambient.rank();
  for (Int attempt = 0; attempt < 64; ++attempt) {
    IntVector w(r);
    for (std::size_t i = 0; i < r; ++i) w[i] = 1 + static_cast<Int>((i + 1) * (i + 3 + attempt)) * 7919 % 10007;
    auto phi = [&](const DivisorClass& x) {
      Int v = 0;
      for (std::size_t i = 0; i < r; ++i) v += w[i] * x[i];
      return v;
    };
    bool generic = std::none_of(rs.roots.begin(), rs.roots.end(), [&](const auto& x) { return phi(x) == 0; });
    if (!generic) continue;
    std::vector<DivisorClass> pos;
    for (const auto& x : rs.roots)
      if (phi(x) > 0) pos.push_back(x);
    std::set<DivisorClass> sums;
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t j = i; j < pos.size(); ++j) sums.insert(pos[i] + pos[j]);
    std::vector<DivisorClass> simple;
    for (const auto& x : pos)
      if (!sums.count(x)) simple.push_back(x);
    return simple;
  }
  throw Error(ErrorCode::InvalidArgument, "could not find a generic functional");
}

// ---------------------------------------------------------------------------
// Weyl groups.

class WeylElement {
 public:
  WeylElement() = default;
  explicit WeylElement(IntMatrix m) : m_(std::move(m)) {}

  static WeylElement identity(std::size_t rank) { return WeylElement(IntMatrix::identity(rank)); }

  const IntMatrix& matrix() const noexcept { return m_; }
  std::size_t rank() const noexcept { return m_.rows(); }

  DivisorClass apply(const DivisorClass& x) const { return DivisorClass(m_ * x.coords()); }
  std::vector<DivisorClass> apply(const std::vector<DivisorClass>& xs) const {
    std::vector<DivisorClass> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(apply(x));
    return out;
  }

  /// (this * o)(x) = this(o(x)).
  friend WeylElement operator*(const WeylElement& a, const WeylElement& b) { return WeylElement(a.m_ * b.m_); }
  friend bool operator==(const WeylElement&, const WeylElement&) = default;
  friend auto operator<=>(const WeylElement&, const WeylElement&) = default;

  bool preserves(const IntersectionLattice& lat) const { return m_.transpose() * lat.gram() * m_ == lat.gram(); }
  bool fixes(const DivisorClass& x) const { return apply(x) == x; }

 private:
  IntMatrix m_;
};

struct WeylElementHash {
  std::size_t operator()(const WeylElement& w) const {
    return hash_range(w.matrix().data().begin(), w.matrix().data().end());
  }
};

/// Matrix of the reflection in alpha; throws if it is not integral on the
/// whole lattice.
inline WeylElement reflection(const IntersectionLattice& lat, const DivisorClass& alpha) {
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < lat.rank(); ++j) cols.push_back(reflect(lat, alpha, lat.basis(j)).coords());
  return WeylElement(IntMatrix::from_columns(cols));
}

inline std::vector<WeylElement> reflections(const IntersectionLattice& lat, const std::vector<DivisorClass>& roots) {
  std::vector<WeylElement> out;
  for (const auto& r : roots) out.push_back(reflection(lat, r));
  return out;
}

inline constexpr std::size_t kDefaultWeylCap = 1'000'000;

/// Closure of the generators under composition, sorted. The identity is
/// always included.
inline std::vector<WeylElement> weyl_generate(const std::vector<WeylElement>& gens, std::size_t rank_hint = 0,
                                              std::size_t cap = kDefaultWeylCap) {
  std::size_t rank = gens.empty() ? rank_hint : gens.front().rank();
  if (rank == 0) throw Error(ErrorCode::InvalidArgument, "cannot infer rank of an empty generator list");
  std::unordered_set<WeylElement, WeylElementHash> seen;
  std::vector<WeylElement> frontier{WeylElement::identity(rank)};
  seen.insert(frontier.front());
  while (!frontier.empty()) {
    std::vector<WeylElement> next;
    for (const auto& w : frontier)
      for (const auto& g : gens) {
        WeylElement x = g * w;
        if (seen.insert(x).second) {
          if (seen.size() > cap) throw Error(ErrorCode::BudgetExceeded, "Weyl group larger than the cap");
          next.push_back(std::move(x));
        }
      }
    frontier = std::move(next);
  }
  std::vector<WeylElement> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

template <class Seed>
struct OrbitResult {
  std::vector<Seed> elements;  // sorted
  std::optional<std::size_t> stabilizer_size;
};

namespace detail {
inline DivisorClass act(const WeylElement& w, const DivisorClass& x) { return w.apply(x); }
inline std::vector<DivisorClass> act(const WeylElement& w, const std::vector<DivisorClass>& xs) { return w.apply(xs); }
}  // namespace detail

/// Orbit of a class or an ordered tuple of classes. When the order of the
/// group generated by `gens` is known, the stabilizer size is reported.
template <class Seed>
OrbitResult<Seed> orbit(const std::vector<WeylElement>& gens, const Seed& seed,
                        std::optional<std::size_t> group_order = std::nullopt,
                        std::size_t cap = kDefaultWeylCap) {
  std::set<Seed> seen{seed};
  std::deque<Seed> q{seed};
  while (!q.empty()) {
    Seed x = q.front();
    q.pop_front();
    for (const auto& g : gens) {
      Seed y = detail::act(g, x);
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw Error(ErrorCode::BudgetExceeded, "orbit larger than the cap");
        q.push_back(std::move(y));
      }
    }
  }
  OrbitResult<Seed> r{{seen.begin(), seen.end()}, std::nullopt};
  if (group_order) r.stabilizer_size = *group_order / r.elements.size();
  return r;
}

/// Matrix of w on the span of `basis` in basis coordinates (column j is the
/// image of basis j). Throws if w does not preserve the integral span.
inline IntMatrix restrict_to_span(const WeylElement& w, const RootBasis& basis) {
  std::vector<IntVector> cols;
  for (const auto& b : basis.classes()) {
    auto c = basis.integer_coordinates(w.apply(b));
    if (!c) throw Error(ErrorCode::NonIntegralMap, "element does not preserve the span");
    cols.push_back(*c);
  }
  return IntMatrix::from_columns(cols);
}

}  // namespace ratsurf
