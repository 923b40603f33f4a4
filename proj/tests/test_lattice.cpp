#include <gtest/gtest.h>

#include <random>
#include <type_traits>

#include "oracles.hpp"
#include "ratsurf/lattice.hpp"
#include "ratsurf/matrix.hpp"
#include "ratsurf/rootsys.hpp"

using namespace ratsurf;

namespace {

template <class A, class B>
concept EqComparable = requires(const A& a, const B& b) { a == b; };

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t n, Int lo, Int hi) {
  std::uniform_int_distribution<Int> d(lo, hi);
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

static_assert(!EqComparable<Rational, Int>, "mixed Rational/Int comparison must not compile");
static_assert(!EqComparable<Int, Rational>);
static_assert(EqComparable<Rational, Rational>);

TEST(Matrix, DeterminantMatchesPermutationExpansion) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto n = static_cast<std::size_t>(1 + trial % 5);
    auto m = random_matrix(rng, n, -4, 4);
    EXPECT_EQ(determinant(m), oracle::leibniz_det(m));
  }
}

TEST(Matrix, InverseIsTwoSided) {
  std::mt19937_64 rng(12);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto m = to_rational(random_matrix(rng, 4, -3, 3));
    auto inv = inverse(m);
    if (determinant(m) == Rational(0)) {
      EXPECT_FALSE(inv.has_value());
      continue;
    }
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(m * *inv, RatMatrix::identity(4));
    EXPECT_EQ(*inv * m, RatMatrix::identity(4));
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Matrix, RankOfOuterProducts) {
  IntMatrix a(3, 3, {1, 2, 3, 2, 4, 6, -1, -2, -3});
  EXPECT_EQ(rank(a), 1u);
  IntMatrix b(3, 3, {1, 0, 1, 0, 1, 1, 1, 1, 2});
  EXPECT_EQ(rank(b), 2u);
  EXPECT_EQ(rank(IntMatrix::identity(5)), 5u);
}

TEST(Matrix, OverflowIsReported) {
  const Int big = Int{1} << 62;
  EXPECT_EQ(oracle::error_code([&] { checked_mul(big, 4); }), ErrorCode::Overflow);
  EXPECT_EQ(oracle::error_code([&] { checked_add(big, big); }), ErrorCode::Overflow);
}

TEST(Lattice, CanonicalSquare) {
  for (int k = 1; k <= 8; ++k) {
    auto p = make_blowup_lattice(SurfaceModel::P2Blowup, k);
    EXPECT_EQ(p.square(p.canonical_class()), 9 - k);
    auto f = make_blowup_lattice(SurfaceModel::F1Blowup, k);
    EXPECT_EQ(f.square(f.canonical_class()), 8 - k);
  }
}

TEST(Lattice, GramIsUnimodular) {
  for (int k = 1; k <= 7; ++k) {
    EXPECT_EQ(std::abs(determinant(make_blowup_lattice(SurfaceModel::P2Blowup, k).gram())), 1);
    EXPECT_EQ(std::abs(determinant(make_blowup_lattice(SurfaceModel::F1Blowup, k).gram())), 1);
  }
}

TEST(Lattice, F1BasisRelations) {
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 3);
  EXPECT_EQ(lat.square(lat.s()), -1);
  EXPECT_EQ(lat.square(lat.f()), 0);
  EXPECT_EQ(lat.pair(lat.s(), lat.f()), 1);
  EXPECT_EQ(lat.pair(lat.f(), lat.canonical_class()), -2);
  EXPECT_EQ(lat.format(lat.f() - 2 * lat.l(2) + lat.l(3)), "f-2l2+l3");
  EXPECT_EQ(oracle::error_code([&] { lat.h(); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(oracle::error_code([&] { lat.l(4); }), ErrorCode::InvalidArgument);
}

TEST(Lattice, ExceptionalClassesMatchBoxSearch) {
  for (int k = 2; k <= 7; ++k) {
    auto lat = make_blowup_lattice(SurfaceModel::P2Blowup, k);
    EXPECT_EQ(exceptional_classes(lat), oracle::box_exceptional(lat, 3)) << "P2 blown up in " << k;
  }
  for (int k = 1; k <= 5; ++k) {
    auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, k);
    EXPECT_EQ(exceptional_classes(lat), oracle::box_exceptional(lat, 3)) << "F1 blown up in " << k;
  }
}

TEST(Lattice, ExceptionalCounts) {
  const std::size_t counts[] = {0, 0, 3, 6, 10, 16, 27, 56};
  for (int k = 2; k <= 7; ++k)
    EXPECT_EQ(exceptional_classes(make_blowup_lattice(SurfaceModel::P2Blowup, k)).size(), counts[k]);
  for (int k = 1; k <= 6; ++k)
    EXPECT_EQ(exceptional_classes(make_blowup_lattice(SurfaceModel::F1Blowup, k)).size(), counts[k + 1]);
}

TEST(Lattice, SearchNeedsBoundingConstraints) {
  auto lat = make_blowup_lattice(SurfaceModel::P2Blowup, 3);
  EXPECT_EQ(oracle::error_code([&] { enumerate_classes(lat, {ClassConstraint::with(lat.h(), 1)}); }),
            ErrorCode::UnboundedSearch);
  EXPECT_EQ(oracle::error_code([&] { enumerate_classes(lat, {ClassConstraint::self(-1)}); }),
            ErrorCode::UnboundedSearch);
  EXPECT_EQ(oracle::error_code([&] { make_blowup_lattice(SurfaceModel::P2Blowup, 0); }),
            ErrorCode::InvalidArgument);
}

TEST(Lattice, EnumerationMatchesBoxOnRandomConstraints) {
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 3);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Int> v(-3, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Int self = v(rng), dk = v(rng);
    auto got = enumerate_classes(lat, {ClassConstraint::self(self), ClassConstraint::with(lat.canonical_class(), dk)});
    auto want = oracle::box_classes(lat, 4, [&](const DivisorClass& d) {
      return lat.square(d) == self && lat.pair(d, lat.canonical_class()) == dk;
    });
    EXPECT_EQ(got, want) << "D.D=" << self << " D.K=" << dk;
  }
}

TEST(RootSystem, E6RootsMatchBoxSearch) {
  auto lat = lattice_for(SimpleSystemCase::E6_P2);
  auto simple = standard_simple_system(SimpleSystemCase::E6_P2, lat);
  auto closure = root_system_closure(lat, simple.roots);
  EXPECT_EQ(closure.roots, oracle::box_roots(lat, 2));
  EXPECT_EQ(closure.size(), 72u);
  EXPECT_EQ(root_sublattice(lat, {lat.canonical_class()}).roots, closure.roots);
  EXPECT_EQ(validate_root_system(closure), "");
}

TEST(RootSystem, DTypeRootsAreOrthogonalToFibre) {
  for (int n = 2; n <= 4; ++n) {
    auto lat = lattice_for(SimpleSystemCase::D_F1, n);
    auto simple = standard_simple_system(SimpleSystemCase::D_F1, lat, n);
    auto closure = root_system_closure(lat, simple.roots);
    auto box = oracle::box_roots(lat, 2);
    std::erase_if(box, [&](const DivisorClass& d) { return lat.pair(d, lat.f()) != 0; });
    EXPECT_EQ(closure.roots, box) << "D" << n + 1;
  }
}

TEST(RootSystem, CartanTypesAndWeylOrders) {
  struct Row {
    SimpleSystemCase c;
    int n;
    const char* type;
    std::size_t roots, weyl;
  };
  for (const auto& r : {Row{SimpleSystemCase::D_F1, 2, "A3", 12, 24}, Row{SimpleSystemCase::D4_F1, 0, "D4", 24, 192},
                        Row{SimpleSystemCase::D_F1, 4, "D5", 40, 1920}, Row{SimpleSystemCase::A_F1, 3, "A5", 30, 720},
                        Row{SimpleSystemCase::E6_P2, 0, "E6", 72, 51840}}) {
    auto lat = lattice_for(r.c, r.n);
    auto simple = standard_simple_system(r.c, lat, r.n);
    EXPECT_EQ(cartan_matrix(lat, simple.roots).type(), r.type);
    EXPECT_EQ(root_system_closure(lat, simple.roots).size(), r.roots);
    auto w = weyl_generate(reflections(lat, simple.roots));
    EXPECT_EQ(w.size(), r.weyl) << r.type;
    for (std::size_t i = 0; i < w.size(); i += 97) {
      EXPECT_TRUE(w[i].preserves(lat));
      EXPECT_TRUE(w[i].fixes(lat.canonical_class()));
    }
  }
}

TEST(RootSystem, ChosenBaseRecoversType) {
  auto lat = lattice_for(SimpleSystemCase::E6_P2);
  auto rs = root_sublattice(lat, {lat.canonical_class()});
  auto base = choose_simple_system(rs);
  EXPECT_EQ(base.size(), 6u);
  EXPECT_EQ(cartan_matrix(lat, base).type(), "E6");
  EXPECT_EQ(positive_roots(rs, base).size(), 36u);
}

TEST(RootSystem, ReflectionsAreInvolutions) {
  auto lat = lattice_for(SimpleSystemCase::E6_P2);
  auto rs = root_sublattice(lat, {lat.canonical_class()});
  for (const auto& a : rs.roots) {
    auto s = reflection(lat, a);
    EXPECT_EQ(s * s, WeylElement::identity(lat.rank()));
    EXPECT_EQ(s.apply(a), -a);
  }
}

TEST(RootSystem, NonIntegralReflectionIsReported) {
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 3);
  DivisorClass longroot = 2 * (lat.l(2) - lat.l(3));
  EXPECT_EQ(oracle::error_code([&] { reflection(lat, longroot); }), ErrorCode::NonIntegralReflection);
  EXPECT_EQ(oracle::error_code([&] { reflect(lat, lat.f(), lat.s()); }), ErrorCode::InvalidArgument);
}

TEST(Cartan, RecognitionSurvivesRelabelling) {
  std::mt19937_64 rng(3);
  const std::pair<char, int> families[] = {{'A', 4}, {'B', 3}, {'C', 4}, {'D', 5}, {'E', 6}, {'F', 4}, {'G', 2}};
  for (auto [fam, n] : families) {
    IntMatrix a = standard_cartan(fam, n);
    std::vector<std::size_t> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(p.begin(), p.end(), rng);
      IntMatrix b(a.rows(), a.cols());
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) b(i, j) = a(p[i], p[j]);
      EXPECT_EQ(recognize_cartan(b).type(), std::string(1, fam) + std::to_string(n));
    }
  }
}

TEST(Cartan, ProductsAndRejections) {
  IntMatrix a1a1 = IntMatrix::identity(2);
  for (std::size_t i = 0; i < 2; ++i) a1a1(i, i) = 2;
  EXPECT_EQ(recognize_cartan(a1a1).type(), "A1xA1");
  IntMatrix affine(3, 3, {2, -1, -1, -1, 2, -1, -1, -1, 2});
  EXPECT_EQ(oracle::error_code([&] { recognize_cartan(affine); }), ErrorCode::UnrecognizedDiagram);
}
