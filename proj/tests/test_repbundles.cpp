#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ratsurf/repbundles.hpp"

using namespace ratsurf;

namespace {

std::vector<DivisorClass> box_bundle(const IntersectionLattice& lat, Int self, Int dk, Int df) {
  return oracle::box_classes(lat, 3, [&](const DivisorClass& d) {
    return lat.square(d) == self && lat.pair(d, lat.canonical_class()) == dk && lat.pair(d, lat.f()) == df;
  });
}

// Restriction through the plain per-class route.
SigmaMultiset slow_restrict(const IntersectionLattice& lat, const std::vector<DivisorClass>& ds,
                            const PointAssignment& pa, const SigmaModel& g) {
  SigmaMultiset out;
  for (const auto& d : ds) out.push_back(restrict_class(lat, d, pa, g));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(WeightBundles, MatchBoxSearch) {
  for (int k : {3, 4}) {
    auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, k);
    auto sp = weight_bundle(BundleTag::SpinorPlus, lat);
    auto sm = weight_bundle(BundleTag::SpinorMinus, lat);
    auto w = weight_bundle(BundleTag::W4, lat);
    EXPECT_EQ(sp.summands, box_bundle(lat, -1, -1, 1));
    EXPECT_EQ(sm.summands, box_bundle(lat, -2, 0, 1));
    EXPECT_EQ(w.summands, box_bundle(lat, -1, -1, 0));
    std::size_t spin = std::size_t{1} << (k - 1);
    EXPECT_EQ(sp.rank(), spin);
    EXPECT_EQ(sm.rank(), spin);
    EXPECT_EQ(w.rank(), static_cast<std::size_t>(2 * k));
    EXPECT_EQ(weight_bundle(BundleTag::V, lat).rank(), static_cast<std::size_t>(k));
  }
  auto p2 = make_blowup_lattice(SurfaceModel::P2Blowup, 6);
  EXPECT_EQ(weight_bundle(BundleTag::Lines27, p2).rank(), 27u);
  EXPECT_EQ(oracle::error_code([&] { weight_bundle(BundleTag::SpinorPlus, p2); }), ErrorCode::InvalidArgument);
}

TEST(WeightBundles, W4IsFibreComponents) {
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 4);
  std::vector<DivisorClass> want;
  for (int i = 1; i <= 4; ++i) {
    want.push_back(lat.l(i));
    want.push_back(lat.f() - lat.l(i));
  }
  std::sort(want.begin(), want.end());
  EXPECT_EQ(weight_bundle(BundleTag::W4, lat).summands, want);
}

TEST(WeightBundles, WeylGroupPermutesSummands) {
  for (auto [t, n] : {std::pair<FoldType, int>{FoldType::B, 2}, {FoldType::B, 3}, {FoldType::G2, 0}, {FoldType::C, 2}}) {
    auto fd = folding_data(t, n);
    for (auto tag : {BundleTag::SpinorPlus, BundleTag::SpinorMinus, BundleTag::W4}) {
      auto b = weight_bundle(tag, fd.lattice);
      for (const auto& w : weyl_generate(fd.weyl_gens)) {
        auto img = w.apply(b.summands);
        std::sort(img.begin(), img.end());
        ASSERT_EQ(img, b.summands) << to_string(tag);
      }
    }
  }
}

TEST(Restriction, W4Display) {
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 4);
  SigmaModel g(1, 11);
  PointAssignment pa{SurfaceModel::F1Blowup, {g.make(0, 1), g.make(0, 3), g.make(0, 4), g.make(0, 9)}};
  SigmaMultiset want;
  for (const auto& x : pa.points) {
    want.push_back({1, x});
    want.push_back({1, g.neg(x)});
  }
  std::sort(want.begin(), want.end());
  EXPECT_EQ(restrict_bundle(lat, weight_bundle(BundleTag::W4, lat), pa, g), want);
}

TEST(Restriction, DegreesAreAnticanonical) {
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 4);
  SigmaModel g(3, 3);
  PointAssignment pa{SurfaceModel::F1Blowup, {g.make(1, 2), g.make(0, 1), g.make(2, 2), g.make(1, 0)}};
  for (auto tag : {BundleTag::SpinorPlus, BundleTag::SpinorMinus, BundleTag::W4, BundleTag::V}) {
    auto b = weight_bundle(tag, lat);
    auto r = restrict_bundle(lat, b, pa, g);
    EXPECT_EQ(r, slow_restrict(lat, b.summands, pa, g));
    EXPECT_EQ(r, apply_restriction(linear_restriction(lat, b.summands), pa, g));
    Int total = 0;
    for (const auto& d : b.summands) total -= lat.pair(d, lat.canonical_class());
    EXPECT_EQ(determinant(r, g).degree, total);
  }
  for (const auto& x : restrict_bundle(lat, weight_bundle(BundleTag::SpinorPlus, lat), pa, g)) EXPECT_EQ(x.degree, 1);
}

TEST(Restriction, DeterminantOfV) {
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 4);
  SigmaModel g(1, 7);
  PointAssignment pa{SurfaceModel::F1Blowup, {g.make(0, 2), g.make(0, 3), g.make(0, 4), g.make(0, 5)}};
  auto det = determinant(restrict_bundle(lat, weight_bundle(BundleTag::V, lat), pa, g), g);
  EXPECT_EQ(det, (LineBundleClassOnSigma{4, g.zero()}));
  EXPECT_EQ(det, restrict_class(lat, 2 * lat.f(), pa, g));
}

TEST(Wedges, SizesAndExtremes) {
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 4);
  auto v = weight_bundle(BundleTag::V, lat);
  const std::size_t binom[] = {1, 4, 6, 4, 1};
  for (int i = 0; i <= 4; ++i) EXPECT_EQ(wedge_power(v, i).rank(), binom[i]);
  EXPECT_EQ(wedge_power(v, 1).summands, v.summands);
  EXPECT_EQ(wedge_power(v, 4).summands, std::vector<DivisorClass>{lat.exceptional_sum()});
  auto w2 = wedge_power(v, 2).summands;
  for (const auto& d : w2) EXPECT_EQ(lat.pair(d, lat.canonical_class()), -2);
  EXPECT_EQ(oracle::error_code([&] { wedge_power(v, 5); }), ErrorCode::InvalidArgument);
}

TEST(Identifications, B2SpinorExamples) {
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 3);
  SigmaModel g(1, 13);
  auto pt = [&](Int v) { return g.make(0, v); };
  EXPECT_TRUE(spinor_identification(lat, {SurfaceModel::F1Blowup, {pt(0), pt(4), pt(9)}}, g));
  EXPECT_FALSE(spinor_identification(lat, {SurfaceModel::F1Blowup, {pt(1), pt(4), pt(9)}}, g));
}

TEST(Identifications, B2SpinorIffX1Zero) {
  SigmaModel g(5, 5);
  BundleSet bs(make_blowup_lattice(SurfaceModel::F1Blowup, 3));
  auto r = converse_sweep(g, SurfaceModel::F1Blowup, 3,
                          [&](const PointAssignment& pa) { return spinor_identification(bs, pa, g); },
                          [&](const PointAssignment& pa) { return pa.x(1) == g.zero(); });
  EXPECT_EQ(r.assignments, 15625u);
  EXPECT_TRUE(r.equivalent()) << testing::PrintToString(r.counterexample->points);
  EXPECT_EQ(r.special, 625u);
}

TEST(Identifications, B2ConverseNeedsOddOrder) {
  SigmaModel g(2, 4);
  BundleSet bs(make_blowup_lattice(SurfaceModel::F1Blowup, 3));
  auto r = converse_sweep(g, SurfaceModel::F1Blowup, 3,
                          [&](const PointAssignment& pa) { return spinor_identification(bs, pa, g); },
                          [&](const PointAssignment& pa) { return pa.x(1) == g.zero(); });
  EXPECT_TRUE(r.forward_holds());
  EXPECT_FALSE(r.equivalent());
  EXPECT_GT(r.identified, r.special);
}

TEST(Identifications, SpinorSweepMatchesSlowRoute) {
  SigmaModel g(2, 4);
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 3);
  BundleSet bs(lat);
  auto sp = weight_bundle(BundleTag::SpinorPlus, lat).summands;
  auto sm = weight_bundle(BundleTag::SpinorMinus, lat).summands;
  g.for_each_tuple(3, [&](const std::vector<GroupElement>& v) {
    PointAssignment pa{SurfaceModel::F1Blowup, v};
    std::vector<DivisorClass> twisted;
    for (const auto& d : sp) twisted.push_back(d - lat.l(1));
    bool slow = slow_restrict(lat, twisted, pa, g) == slow_restrict(lat, sm, pa, g);
    ASSERT_EQ(spinor_identification(bs, pa, g), slow);
  });
}

TEST(Identifications, G2TripleIffConfigurationOddOrder) {
  for (auto [m1, m2] : {std::pair<Int, Int>{3, 3}, {1, 15}, {5, 5}}) {
    SigmaModel g(m1, m2);
    BundleSet bs(make_blowup_lattice(SurfaceModel::F1Blowup, 4));
    auto r = converse_sweep(g, SurfaceModel::F1Blowup, 4,
                            [&](const PointAssignment& pa) { return g2_identifications(bs, pa, g).both(); },
                            [&](const PointAssignment& pa) { return satisfies_case_constraints(FoldType::G2, pa, g); });
    EXPECT_TRUE(r.equivalent()) << m1 << "," << m2;
    EXPECT_TRUE(r.forward_holds());
    EXPECT_EQ(static_cast<Int>(r.special), g.order() * g.order());
  }
}

TEST(Identifications, G2ConverseNeedsOddOrder) {
  // Configuration implies the identifications everywhere; with 2-torsion
  // there are extra solutions.
  SigmaModel g(2, 4);
  BundleSet bs(make_blowup_lattice(SurfaceModel::F1Blowup, 4));
  std::size_t extra = 0;
  g.for_each_tuple(4, [&](const std::vector<GroupElement>& v) {
    PointAssignment pa{SurfaceModel::F1Blowup, v};
    bool both = g2_identifications(bs, pa, g).both();
    if (satisfies_case_constraints(FoldType::G2, pa, g)) ASSERT_TRUE(both);
    else extra += both;
  });
  EXPECT_GT(extra, 0u);
  PointAssignment pa{SurfaceModel::F1Blowup, {g.make(0, 2), g.make(0, 2), g.zero(), g.zero()}};
  EXPECT_TRUE(g2_identifications(bs, pa, g).both());
  EXPECT_FALSE(satisfies_case_constraints(FoldType::G2, pa, g));
}

TEST(Identifications, G2LiteralSpinorWIsDegreeMismatched) {
  // S+ restricts in degree 1 and W (x) O(s) in degree 2, so the untwisted
  // identification can never hold.
  auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 4);
  SigmaModel g(3, 3);
  BundleSet bs(lat);
  EXPECT_EQ(-lat.pair(lat.s(), lat.canonical_class()), 1);
  g.for_each_tuple(4, [&](const std::vector<GroupElement>& v) {
    PointAssignment pa{SurfaceModel::F1Blowup, v};
    auto lhs = apply_restriction(bs.rsp, pa, g);
    auto rhs = tensor(apply_restriction(bs.rw, pa, g), bs.one(lat.s(), pa, g), g);
    ASSERT_FALSE(check_identification(lhs, rhs));
  });
}

TEST(Identifications, CWedgeUnderPairing) {
  SigmaModel g(7, 7);
  BundleSet bs(make_blowup_lattice(SurfaceModel::F1Blowup, 4));
  std::size_t checked = 0;
  g.for_each_tuple(2, [&](const std::vector<GroupElement>& v) {
    PointAssignment pa{SurfaceModel::F1Blowup, {v[0], v[1], g.neg(v[1]), g.neg(v[0])}};
    ASSERT_TRUE(satisfies_case_constraints(FoldType::C, pa, g, 2));
    ASSERT_TRUE(v_self_duality(bs, pa, g));
    for (int i = 0; i <= 4; ++i) ASSERT_TRUE(wedge_identification(bs, i, pa, g));
    ++checked;
  });
  EXPECT_EQ(checked, 2401u);
}

TEST(Identifications, CWedgeHoldsWithoutPairingButDualityDoesNot) {
  SigmaModel g(3, 3);
  BundleSet bs(make_blowup_lattice(SurfaceModel::F1Blowup, 4));
  std::size_t dual_ok = 0, total = 0;
  g.for_each_tuple(4, [&](const std::vector<GroupElement>& v) {
    PointAssignment pa{SurfaceModel::F1Blowup, v};
    for (int i = 0; i <= 4; ++i) ASSERT_TRUE(wedge_identification(bs, i, pa, g));
    ++total;
    dual_ok += v_self_duality(bs, pa, g);
  });
  EXPECT_LT(dual_ok, total);
  EXPECT_GE(dual_ok, 81u);
}

TEST(Identifications, UpToRenumbering) {
  SigmaModel g(1, 5);
  PointAssignment pa{SurfaceModel::F1Blowup, {g.make(0, 2), g.make(0, 0), g.make(0, 3)}};
  EXPECT_TRUE(up_to_renumbering(pa, [&](const PointAssignment& q) { return q.x(1) == g.zero(); }));
  EXPECT_FALSE(up_to_renumbering(pa, [&](const PointAssignment& q) { return q.x(1) == g.make(0, 4); }));
}

TEST(F4Decomposition, SplitsTwentySeven) {
  auto lat = make_blowup_lattice(SurfaceModel::P2Blowup, 6);
  std::mt19937_64 rng(3);
  for (auto [m1, m2] : {std::pair<Int, Int>{2, 2}, {3, 3}, {1, 7}}) {
    SigmaModel g(m1, m2);
    for (int trial = 0; trial < 10; ++trial) {
      auto pa = random_admissible(FoldType::F4, g, 0, rng);
      auto d = f4_rep_decomposition(lat, pa, g);
      EXPECT_EQ(d.zero_weights.size(), 3u);
      EXPECT_EQ(d.lines.size(), 24u);
      EXPECT_TRUE(d.specials_common);
      EXPECT_TRUE(d.specials_sum_to_minus_k);
      EXPECT_TRUE(d.short_roots_match);
      EXPECT_TRUE(d.restrictions_match);
      EXPECT_EQ(d.trace_kernel_rank + static_cast<int>(d.lines.size()), 26);
      EXPECT_EQ(d.trace_kernel_det, (LineBundleClassOnSigma{2, g.scale(-2, d.p)}));
      for (const auto& e : d.zero_weights) EXPECT_EQ(restrict_class(lat, e, pa, g), (LineBundleClassOnSigma{1, g.neg(d.p)}));
    }
  }
}

TEST(F4Decomposition, RejectsNonAdmissiblePoints) {
  auto lat = make_blowup_lattice(SurfaceModel::P2Blowup, 6);
  SigmaModel g(1, 7);
  PointAssignment pa{SurfaceModel::P2Blowup, {g.make(0, 1), g.make(0, 2), g.make(0, 3), g.make(0, 4), g.make(0, 5),
                                              g.make(0, 0)}};
  EXPECT_EQ(oracle::error_code([&] { f4_rep_decomposition(lat, pa, g); }), ErrorCode::ConstraintViolated);
}
