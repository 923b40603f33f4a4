#pragma once

// Picard lattices of blow-ups of F1 (basis s, f, l1..ln) and of P2
// (basis h, l1..ln), with bounded enumeration of classes cut out by one
// quadratic and several linear conditions.

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ratsurf/errors.hpp"
#include "ratsurf/matrix.hpp"

namespace ratsurf {

enum class SurfaceModel { F1Blowup, P2Blowup };

inline std::string to_string(SurfaceModel m) {
  return m == SurfaceModel::F1Blowup ? "F1-blowup" : "P2-blowup";
}

/// Integer coordinates over the ambient lattice basis.
class DivisorClass {
 public:
  DivisorClass() = default;
  explicit DivisorClass(IntVector coords) : coords_(std::move(coords)) {}
  DivisorClass(std::initializer_list<Int> coords) : coords_(coords) {}

  static DivisorClass zero(std::size_t rank) { return DivisorClass(IntVector(rank, 0)); }

  std::size_t size() const noexcept { return coords_.size(); }
  Int operator[](std::size_t i) const { return coords_[i]; }
  Int& operator[](std::size_t i) { return coords_[i]; }
  const IntVector& coords() const noexcept { return coords_; }
  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](Int c) { return c == 0; });
  }

  DivisorClass& operator+=(const DivisorClass& o) {
    check_same(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = checked_add(coords_[i], o.coords_[i]);
    return *this;
  }
  DivisorClass& operator-=(const DivisorClass& o) {
    check_same(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = checked_sub(coords_[i], o.coords_[i]);
    return *this;
  }
  friend DivisorClass operator+(DivisorClass a, const DivisorClass& b) { return a += b; }
  friend DivisorClass operator-(DivisorClass a, const DivisorClass& b) { return a -= b; }
  friend DivisorClass operator-(DivisorClass a) {
    for (auto& c : a.coords_) c = checked_sub(0, c);
    return a;
  }
  friend DivisorClass operator*(Int k, DivisorClass a) {
    for (auto& c : a.coords_) c = checked_mul(k, c);
    return a;
  }

  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;
  friend auto operator<=>(const DivisorClass&, const DivisorClass&) = default;

 private:
  void check_same(const DivisorClass& o) const {
    if (o.coords_.size() != coords_.size())
      throw Error(ErrorCode::DimensionMismatch, "divisor classes of different rank");
  }
  IntVector coords_;
};

struct DivisorClassHash {
  std::size_t operator()(const DivisorClass& d) const {
    return hash_range(d.coords().begin(), d.coords().end());
  }
};

/// Unimodular lattice of signature (1, rank-1) with a fixed canonical class.
class IntersectionLattice {
 public:
  IntersectionLattice(SurfaceModel model, int blowups, IntMatrix gram,
                      std::vector<std::string> labels, DivisorClass canonical)
      : model_(model), blowups_(blowups), gram_(std::move(gram)),
        labels_(std::move(labels)), canonical_(std::move(canonical)) {}

  SurfaceModel model() const noexcept { return model_; }
  int blowups() const noexcept { return blowups_; }
  std::size_t rank() const noexcept { return gram_.rows(); }
  const IntMatrix& gram() const noexcept { return gram_; }
  const std::vector<std::string>& basis_labels() const noexcept { return labels_; }
  const DivisorClass& canonical_class() const noexcept { return canonical_; }

  Int pair(const DivisorClass& a, const DivisorClass& b) const {
    if (a.size() != rank() || b.size() != rank())
      throw Error(ErrorCode::DimensionMismatch, "pairing expects classes of rank " + std::to_string(rank()));
    Int acc = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j) {
        if (gram_(i, j) == 0 || b[j] == 0) continue;
        acc = checked_add(acc, checked_mul(checked_mul(a[i], gram_(i, j)), b[j]));
      }
    }
    return acc;
  }

  Int square(const DivisorClass& a) const { return pair(a, a); }

  DivisorClass basis(std::size_t i) const {
    DivisorClass d = DivisorClass::zero(rank());
    d[i] = 1;
    return d;
  }
  DivisorClass zero() const { return DivisorClass::zero(rank()); }

  /// Exceptional class l_i, 1-based.
  DivisorClass l(int i) const {
    if (i < 1 || i > blowups_) throw Error(ErrorCode::InvalidArgument, "exceptional index out of range");
    return basis(static_cast<std::size_t>(i) + first_exceptional() - 1);
  }
  DivisorClass s() const { require(SurfaceModel::F1Blowup, "s"); return basis(0); }
  DivisorClass f() const { require(SurfaceModel::F1Blowup, "f"); return basis(1); }
  DivisorClass h() const { require(SurfaceModel::P2Blowup, "h"); return basis(0); }

  /// Sum of all exceptional classes.
  DivisorClass exceptional_sum() const {
    DivisorClass d = zero();
    for (int i = 1; i <= blowups_; ++i) d += l(i);
    return d;
  }

  std::size_t first_exceptional() const noexcept { return model_ == SurfaceModel::F1Blowup ? 2 : 1; }

  /// Renders e.g. "f-2l2+l3".
  std::string format(const DivisorClass& d) const {
    std::string out;
    for (std::size_t i = 0; i < d.size(); ++i) {
      Int c = d[i];
      if (c == 0) continue;
      if (c < 0) out += '-';
      else if (!out.empty()) out += '+';
      Int a = c < 0 ? -c : c;
      if (a != 1) out += std::to_string(a);
      out += labels_[i];
    }
    return out.empty() ? "0" : out;
  }

 private:
  void require(SurfaceModel m, const char* what) const {
    if (model_ != m) throw Error(ErrorCode::InvalidArgument, std::string("class ") + what + " not in this model");
  }

  SurfaceModel model_;
  int blowups_;
  IntMatrix gram_;
  std::vector<std::string> labels_;
  DivisorClass canonical_;
};

/// F1 model: K = -(2s + 3f - sum l_i). P2 model: K = -(3h - sum l_i).
inline IntersectionLattice make_blowup_lattice(SurfaceModel model, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "blow-up count must be at least 1");
  std::vector<std::string> labels;
  std::size_t rank;
  if (model == SurfaceModel::F1Blowup) {
    rank = static_cast<std::size_t>(n) + 2;
    labels = {"s", "f"};
  } else if (model == SurfaceModel::P2Blowup) {
    rank = static_cast<std::size_t>(n) + 1;
    labels = {"h"};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown surface model");
  }
  for (int i = 1; i <= n; ++i) labels.push_back("l" + std::to_string(i));

  IntMatrix gram(rank, rank);
  IntVector k(rank, 0);
  if (model == SurfaceModel::F1Blowup) {
    gram(0, 0) = -1;
    gram(0, 1) = gram(1, 0) = 1;
    gram(1, 1) = 0;
    for (std::size_t i = 2; i < rank; ++i) gram(i, i) = -1;
    k[0] = -2;
    k[1] = -3;
    for (std::size_t i = 2; i < rank; ++i) k[i] = 1;
  } else {
    gram(0, 0) = 1;
    for (std::size_t i = 1; i < rank; ++i) gram(i, i) = -1;
    k[0] = -3;
    for (std::size_t i = 1; i < rank; ++i) k[i] = 1;
  }
  return IntersectionLattice(model, n, std::move(gram), std::move(labels), DivisorClass(std::move(k)));
}

inline const DivisorClass& canonical_class(const IntersectionLattice& lat) { return lat.canonical_class(); }

/// A condition D.against = value, or D.D = value when `against` is empty.
struct ClassConstraint {
  std::optional<DivisorClass> against;
  Int value = 0;

  static ClassConstraint self(Int v) { return {std::nullopt, v}; }
  static ClassConstraint with(DivisorClass c, Int v) { return {std::move(c), v}; }
};

/// Per-coordinate search box used by `enumerate_classes`.
struct EnumerationBounds {
  IntVector lower;
  IntVector upper;
  DivisorClass positive_class;  // the class P with P.P > 0 used for the split
};

namespace detail {

// Look for P in the span of the linear-constraint classes with P.P > 0.
// Returns P together with the integer weights expressing it.
inline std::optional<std::pair<DivisorClass, IntVector>> positive_combination(
    const IntersectionLattice& lat, const std::vector<DivisorClass>& classes) {
  const std::size_t m = classes.size();
  if (m == 0) return std::nullopt;
  std::optional<std::pair<DivisorClass, IntVector>> best;
  Int best_norm = 0;
  IntVector w(m, -2);
  // Small search over weights in [-2, 2]^m; constraint lists are short.
  while (true) {
    DivisorClass p = lat.zero();
    for (std::size_t i = 0; i < m; ++i) p += w[i] * classes[i];
    Int norm = lat.square(p);
    if (norm > 0 && (!best || norm < best_norm)) {
      best = std::make_pair(p, w);
      best_norm = norm;
    }
    std::size_t i = 0;
    while (i < m && w[i] == 2) w[i++] = -2;
    if (i == m) break;
    ++w[i];
  }
  return best;
}

}  // namespace detail

/// Coordinate bounds for classes satisfying the constraints.
///
/// Splits D = (D.P / P.P) P + D', with P.P > 0 taken from the span of the
/// linear constraints. The orthogonal part D' lives in P-perp, which is
/// negative definite, so for the dual basis vector e*_i (coordinate i is
/// D.e*_i) Cauchy-Schwarz gives
///   |coord_i - (D.P)(e*_i.P)/P.P| <= sqrt(D'.D' * e*_i'.e*_i').
inline EnumerationBounds enumeration_bounds(const IntersectionLattice& lat,
                                            const std::vector<ClassConstraint>& constraints) {
  std::optional<Int> self_value;
  std::vector<DivisorClass> linear;
  std::vector<Int> linear_values;
  for (const auto& c : constraints) {
    if (!c.against) {
      if (self_value && *self_value != c.value)
        throw Error(ErrorCode::InvalidArgument, "conflicting self-intersection constraints");
      self_value = c.value;
    } else {
      if (c.against->size() != lat.rank()) throw Error(ErrorCode::DimensionMismatch, "constraint class rank");
      linear.push_back(*c.against);
      linear_values.push_back(c.value);
    }
  }
  if (!self_value)
    throw Error(ErrorCode::UnboundedSearch, "a self-intersection constraint is required");
  auto pos = detail::positive_combination(lat, linear);
  if (!pos)
    throw Error(ErrorCode::UnboundedSearch, "linear constraints contain no class of positive square");
  const DivisorClass& p = pos->first;
  Int dp = 0;
  for (std::size_t i = 0; i < linear.size(); ++i)
    dp = checked_add(dp, checked_mul(pos->second[i], linear_values[i]));
  const Rational pp(lat.square(p));
  const Rational d_perp = Rational(*self_value) - Rational(dp) * Rational(dp) / pp;

  EnumerationBounds b;
  b.positive_class = p;
  const std::size_t r = lat.rank();
  b.lower.assign(r, 0);
  b.upper.assign(r, -1);  // empty box unless D' can exist
  if (d_perp > Rational(0)) return b;

  auto ginv = inverse(to_rational(lat.gram()));
  auto dual = to_integer(*ginv);  // unimodular, so integral
  for (std::size_t i = 0; i < r; ++i) {
    DivisorClass e = DivisorClass(dual->column(i));
    Rational ep(lat.pair(e, p));
    Rational center = Rational(dp) * ep / pp;
    Rational e_perp = Rational(lat.square(e)) - ep * ep / pp;
    Rational radius2 = d_perp * e_perp;  // both factors <= 0
    long double radius = std::sqrt(static_cast<long double>(radius2.numerator()) /
                                   static_cast<long double>(radius2.denominator()));
    long double c = static_cast<long double>(center.numerator()) /
                    static_cast<long double>(center.denominator());
    b.lower[i] = static_cast<Int>(std::floor(c - radius)) - 1;
    b.upper[i] = static_cast<Int>(std::ceil(c + radius)) + 1;
  }
  return b;
}

/// All classes satisfying every constraint, sorted. Exhaustive within the
/// box from `enumeration_bounds`.
inline std::vector<DivisorClass> enumerate_classes(const IntersectionLattice& lat,
                                                   const std::vector<ClassConstraint>& constraints,
                                                   std::size_t box_cap = 50'000'000) {
  EnumerationBounds b = enumeration_bounds(lat, constraints);
  const std::size_t r = lat.rank();
  std::size_t volume = 1;
  for (std::size_t i = 0; i < r; ++i) {
    if (b.upper[i] < b.lower[i]) return {};
    volume *= static_cast<std::size_t>(b.upper[i] - b.lower[i] + 1);
    if (volume > box_cap) throw Error(ErrorCode::BudgetExceeded, "enumeration box too large");
  }

  // Linear forms as covectors: value(D) = sum_j D_j * (gram * c)_j.
  std::vector<IntVector> covectors;
  std::vector<Int> targets;
  std::optional<Int> self_value;
  for (const auto& c : constraints) {
    if (!c.against) {
      self_value = c.value;
      continue;
    }
    covectors.push_back(lat.gram() * c.against->coords());
    targets.push_back(c.value);
  }

  std::vector<DivisorClass> out;
  DivisorClass d(b.lower);
  while (true) {
    bool ok = true;
    for (std::size_t k = 0; k < covectors.size() && ok; ++k) {
      Int v = 0;
      for (std::size_t j = 0; j < r; ++j) v += d[j] * covectors[k][j];
      ok = v == targets[k];
    }
    if (ok && lat.square(d) == *self_value) out.push_back(d);
    std::size_t i = 0;
    while (i < r && d[i] == b.upper[i]) {
      d[i] = b.lower[i];
      ++i;
    }
    if (i == r) break;
    ++d[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Exceptional classes: e.e = e.K = -1.
inline std::vector<DivisorClass> exceptional_classes(const IntersectionLattice& lat) {
  return enumerate_classes(lat, {ClassConstraint::self(-1), ClassConstraint::with(lat.canonical_class(), -1)});
}

}  // namespace ratsurf
