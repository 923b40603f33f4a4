#pragma once

// Brute-force references the library is checked against. Nothing here uses
// the library's search bounds, SNF, or closure routines.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "ratsurf/abelian.hpp"
#include "ratsurf/errors.hpp"
#include "ratsurf/lattice.hpp"

namespace oracle {

using ratsurf::DivisorClass;
using ratsurf::GroupElement;
using ratsurf::Int;
using ratsurf::IntersectionLattice;
using ratsurf::IntMatrix;
using ratsurf::IntVector;
using ratsurf::SigmaModel;

/// Every class with all coordinates in [-bound, bound] satisfying `keep`.
inline std::vector<DivisorClass> box_classes(const IntersectionLattice& lat, Int bound,
                                             const std::function<bool(const DivisorClass&)>& keep) {
  const std::size_t r = lat.rank();
  IntVector c(r, -bound);
  std::vector<DivisorClass> out;
  while (true) {
    DivisorClass d(c);
    if (keep(d)) out.push_back(d);
    std::size_t i = 0;
    while (i < r && c[i] == bound) c[i++] = -bound;
    if (i == r) break;
    ++c[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<DivisorClass> box_exceptional(const IntersectionLattice& lat, Int bound) {
  const auto& k = lat.canonical_class();
  return box_classes(lat, bound, [&](const DivisorClass& d) { return lat.square(d) == -1 && lat.pair(d, k) == -1; });
}

inline std::vector<DivisorClass> box_roots(const IntersectionLattice& lat, Int bound) {
  const auto& k = lat.canonical_class();
  return box_classes(lat, bound, [&](const DivisorClass& d) { return lat.square(d) == -2 && lat.pair(d, k) == 0; });
}

/// Determinant by permutation expansion.
inline Int leibniz_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  Int total = 0;
  do {
    Int sign = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) sign = -sign;
    Int prod = sign;
    for (std::size_t i = 0; i < n; ++i) prod *= m(i, p[i]);
    total += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

/// gcd of all k x k minors.
inline Int determinantal_divisor(const IntMatrix& m, std::size_t k) {
  Int g = 0;
  std::vector<bool> rows(m.rows(), false), cols(m.cols(), false);
  std::fill(rows.begin(), rows.begin() + static_cast<long>(k), true);
  do {
    std::fill(cols.begin(), cols.end(), false);
    std::fill(cols.begin(), cols.begin() + static_cast<long>(k), true);
    do {
      IntMatrix sub(k, k);
      std::size_t si = 0;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        if (!rows[i]) continue;
        std::size_t sj = 0;
        for (std::size_t j = 0; j < m.cols(); ++j)
          if (cols[j]) sub(si, sj++) = m(i, j);
        ++si;
      }
      g = std::gcd(g, leibniz_det(sub));
    } while (std::prev_permutation(cols.begin(), cols.end()));
  } while (std::prev_permutation(rows.begin(), rows.end()));
  return g < 0 ? -g : g;
}

/// All y in sigma^cols with A y = rhs.
inline std::set<std::vector<GroupElement>> brute_solve(const IntMatrix& a, const std::vector<GroupElement>& rhs,
                                                       const SigmaModel& g) {
  std::set<std::vector<GroupElement>> out;
  g.for_each_tuple(a.cols(), [&](const std::vector<GroupElement>& y) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      GroupElement acc = g.zero();
      for (std::size_t j = 0; j < a.cols(); ++j) acc = g.add(acc, g.scale(a(i, j), y[j]));
      if (acc != rhs[i]) return;
    }
    out.insert(y);
  });
  return out;
}

/// Affine points of y^2 = x^3 + a x + b over F_p plus one at infinity.
inline Int brute_curve_count(Int p, Int a, Int b) {
  Int count = 1;
  for (Int x = 0; x < p; ++x)
    for (Int y = 0; y < p; ++y)
      if ((y * y - (x * x % p * x + a * x + b)) % p == 0) ++count;
  return count;
}

/// Code of the ratsurf::Error thrown by f, or nullopt if it returns.
template <class F>
std::optional<ratsurf::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const ratsurf::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace oracle
