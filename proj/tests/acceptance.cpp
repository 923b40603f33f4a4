// One line per acceptance criterion; exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "ratsurf/verify.hpp"

using namespace ratsurf;

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
};

struct Case {
  FoldType t;
  int n;
};

std::string name(const Case& c) { return case_name(c.t, c.n); }

Int weyl_b(int n) { return (Int{1} << n) * factorial(n); }

Verdict cubic_counts() {
  auto lat = make_blowup_lattice(SurfaceModel::P2Blowup, 6);
  auto cc = cubic_combinatorics(lat);
  bool five = true;
  for (const auto& l : cc.lines) {
    auto k = std::count_if(cc.triangles.begin(), cc.triangles.end(),
                           [&](const Triangle& t) { return std::find(t.begin(), t.end(), l) != t.end(); });
    five = five && k == 5;
  }
  bool ok = cc.lines.size() == 27 && cc.triangles.size() == 45 && cc.double_sixes.size() == 36 && five;
  return {ok, std::to_string(cc.lines.size()) + " lines, " + std::to_string(cc.triangles.size()) + " triangles, " +
                  std::to_string(cc.double_sixes.size()) + " double-sixes, each line in 5: " + (five ? "yes" : "no")};
}

Verdict double_six_bijection() {
  auto lat = make_blowup_lattice(SurfaceModel::P2Blowup, 6);
  auto simple = standard_simple_system(SimpleSystemCase::E6_P2, lat).roots;
  auto we = weyl_generate(reflections(lat, simple));
  auto pos = positive_roots(root_system_closure(lat, simple), simple);
  std::set<DivisorClass> image;
  for (const auto& d : cubic_combinatorics(lat).double_sixes) image.insert(double_six_to_root(lat, d, pos));
  DoubleSix base;
  for (int i = 1; i <= 6; ++i) base.L.push_back(lat.l(i));
  for (int i = 1; i <= 6; ++i) base.Lprime.push_back(2 * lat.h() - lat.exceptional_sum() + lat.l(i));
  bool alpha0 = double_six_to_root(lat, base, pos) == 2 * lat.h() - lat.exceptional_sum();
  bool onto = image == std::set<DivisorClass>(pos.begin(), pos.end());
  return {we.size() == 51840 && pos.size() == 36 && onto && alpha0,
          "|W(E6)| = " + std::to_string(we.size()) + ", image " + std::to_string(image.size()) + " of " +
              std::to_string(pos.size()) + " positive roots, base -> alpha0: " + (alpha0 ? "yes" : "no")};
}

Verdict stabilizers() {
  auto lat = make_blowup_lattice(SurfaceModel::P2Blowup, 6);
  auto we = weyl_generate(reflections(lat, standard_simple_system(SimpleSystemCase::E6_P2, lat).roots));
  auto tri = base_triangle(lat);
  auto st = triangle_stabilizer(tri, false, we);
  auto ost = triangle_stabilizer(tri, true, we);
  bool f4 = st.elements == weyl_generate(folding_data(FoldType::F4).weyl_gens);
  bool d4 = ost.elements == weyl_generate(reflections(lat, fixed_d4_simple_roots(lat)));
  return {st.elements.size() == 1152 && f4 && ost.elements.size() == 192 && d4,
          "Stab = " + std::to_string(st.elements.size()) + (f4 ? " = W(F4)" : " != W(F4)") + ", ordered Stab = " +
              std::to_string(ost.elements.size()) + (d4 ? " = W(D4)" : " != W(D4)")};
}

Verdict root_counts_and_weyl() {
  const Case cases[] = {{FoldType::B, 2}, {FoldType::B, 3}, {FoldType::B, 4}, {FoldType::C, 2}, {FoldType::C, 3},
                        {FoldType::C, 4}, {FoldType::G2, 0}, {FoldType::F4, 0}};
  bool ok = true;
  std::string bad;
  for (const auto& c : cases) {
    auto fd = folding_data(c.t, c.n);
    std::size_t roots = c.t == FoldType::G2 ? 12 : c.t == FoldType::F4 ? 48 : static_cast<std::size_t>(2 * c.n * c.n);
    std::size_t order = c.t == FoldType::G2 ? 12 : c.t == FoldType::F4 ? 1152 : static_cast<std::size_t>(weyl_b(c.n));
    bool here = folded_root_system(c.t, fd.lattice, c.n).size() == roots && weyl_generate(fd.weyl_gens).size() == order;
    if (!here) bad += " " + name(c);
    ok = ok && here;
  }
  const Case rows[] = {{FoldType::B, 3}, {FoldType::B, 4}, {FoldType::G2, 0}, {FoldType::F4, 0}};
  for (const auto& c : rows) {
    auto sr = second_reduction(folding_data(c.t, c.n));
    bool here = sr.weyl_order == sr.long_weyl_order * sr.induced_symmetries;
    if (!here) bad += " reduction:" + name(c);
    ok = ok && here;
  }
  return {ok, ok ? "B2-4, C2-4, G2, F4 roots and Weyl orders; 4 order identities" : "mismatch:" + bad};
}

Verdict simple_transitivity() {
  const Case cases[] = {{FoldType::B, 2}, {FoldType::B, 3}, {FoldType::B, 4}, {FoldType::G2, 0}, {FoldType::F4, 0}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    auto fd = folding_data(c.t, c.n);
    auto sys = enumerate_exceptional_systems(c.t, fd.lattice, c.n);
    std::size_t want = c.t == FoldType::G2 ? 12 : c.t == FoldType::F4 ? 1152 : static_cast<std::size_t>(weyl_b(c.n));
    bool here = sys.size() == want && simple_transitivity_check(sys, weyl_generate(fd.weyl_gens)).simply_transitive;
    if (c.t == FoldType::G2) {
      const auto& lat = fd.lattice;
      ClassTuple listed{lat.f() - lat.l(1), lat.f() - lat.l(2), lat.l(4), lat.l(3)};
      here = here && std::find(sys.begin(), sys.end(), listed) != sys.end();
    }
    detail += (detail.empty() ? "" : ", ") + name(c) + " " + std::to_string(sys.size());
    ok = ok && here;
  }
  return {ok, detail};
}

Verdict invariance() {
  const Case cases[] = {{FoldType::B, 2}, {FoldType::B, 3}, {FoldType::C, 2},
                        {FoldType::C, 3}, {FoldType::G2, 0}, {FoldType::F4, 0}};
  bool ok = true;
  Int total = 0;
  for (auto m : {Int{2}, Int{3}}) {
    SigmaModel g(m, m);
    for (const auto& c : cases) {
      auto sw = invariance_sweep(c.t, g, c.n);
      ok = ok && sw.agree == sw.total;
      total += sw.total;
    }
  }
  struct Row {
    Case c;
    Int m;
    std::size_t labels;
  };
  std::string counts;
  for (const auto& r : {Row{{FoldType::B, 2}, 2, 4}, Row{{FoldType::B, 3}, 2, 4}, Row{{FoldType::C, 2}, 2, 4},
                        Row{{FoldType::C, 3}, 3, 9}, Row{{FoldType::G2, 0}, 2, 4}}) {
    auto fc = fixed_components(r.c.t, SigmaModel(r.m, r.m), r.c.n);
    ok = ok && fc.labels.size() == r.labels && !fc.warning;
    counts += " " + name(r.c) + "=" + std::to_string(fc.labels.size());
  }
  return {ok, std::to_string(total) + " assignments compared; components" + counts};
}

Verdict chi() {
  const Case cases[] = {{FoldType::B, 2}, {FoldType::B, 3}, {FoldType::C, 2}, {FoldType::G2, 0}};
  bool ok = true;
  std::string failed;
  auto one = [&](const Case& c, Int m) {
    if (!chi_injectivity_check(c.t, SigmaModel(m, m), c.n).verified) {
      ok = false;
      failed += " " + name(c) + "/" + std::to_string(m);
    }
  };
  for (auto m : {Int{2}, Int{3}})
    for (const auto& c : cases) one(c, m);
  one({FoldType::F4, 0}, 2);
  return {ok, ok ? "9 case/group pairs injective" : "failed:" + failed};
}

Verdict reconstruction() {
  const Case cases[] = {{FoldType::B, 2}, {FoldType::B, 3}, {FoldType::C, 2},
                        {FoldType::C, 3}, {FoldType::G2, 0}, {FoldType::F4, 0}};
  std::mt19937_64 rng(12345);
  std::size_t trials = 0, brute_checks = 0;
  for (auto [m1, m2] : {std::pair<Int, Int>{2, 2}, {3, 3}, {1, 6}, {2, 4}, {5, 5}}) {
    SigmaModel g(m1, m2);
    for (const auto& c : cases) {
      auto a = reconstruction_matrix(c.t, c.n);
      auto snf = smith_normal_form(a);
      Int predicted = 1;
      for (Int d : snf.diagonal) predicted *= std::gcd(d, m1) * std::gcd(d, m2);
      for (std::size_t i = snf.diagonal.size(); i < a.cols(); ++i) predicted *= g.order();
      for (int k = 0; k < 100; ++k) {
        auto pa = random_admissible(c.t, g, c.n, rng);
        auto p = folded_values(c.t, pa, g, c.n);
        auto rec = reconstruct_points(c.t, p, g, c.n);
        ++trials;
        if (!std::binary_search(rec.assignments.begin(), rec.assignments.end(), pa))
          return {false, name(c) + ": input lost"};
        if (rec.raw.kernel_size != predicted) return {false, name(c) + ": kernel differs from SNF"};
        if (g.order() <= 25 && a.cols() <= 3 && k < 10) {
          ++brute_checks;
          if (oracle::brute_solve(a, p, g).size() != rec.assignments.size()) return {false, name(c) + ": brute differs"};
        }
      }
    }
  }
  return {true, std::to_string(trials) + " round trips, " + std::to_string(brute_checks) + " brute-force kernels"};
}

Verdict structure_constants_all() {
  std::vector<LieCase> cases{lie_case(SimpleSystemCase::D4_F1), lie_case(SimpleSystemCase::E6_P2)};
  for (int n = 2; n <= 4; ++n) cases.push_back(lie_case(FoldType::B, n));
  for (int n = 2; n <= 3; ++n) cases.push_back(lie_case(FoldType::C, n));
  cases.push_back(lie_case(FoldType::G2));
  cases.push_back(lie_case(FoldType::F4));
  bool ok = true;
  std::vector<std::string> three;
  std::size_t triples = 0;
  for (const auto& c : cases) {
    auto t = structure_constants(c.roots, c.simple);
    auto j = verify_jacobi(t);
    auto cen = structure_census(t, c.roots);
    for (auto [a, b] : t.extraspecial) ok = ok && t.N[a][b] == root_string(t.roots[a], t.roots[b], c.roots).r + 1;
    ok = ok && j.ok && cen.magnitudes_ok && cen.grading_ok;
    triples += j.triples;
    if (cen.max_abs == 3) three.push_back(c.name);
  }
  ok = ok && three == std::vector<std::string>{"G2"};
  return {ok, std::to_string(cases.size()) + " root systems, " + std::to_string(triples) +
                  " Jacobi triples, |N| = 3 only in " + (three.empty() ? std::string("none") : three.front())};
}

Verdict bundle_identifications() {
  SigmaModel g55(5, 5);
  BundleSet b3(make_blowup_lattice(SurfaceModel::F1Blowup, 3));
  auto spin = converse_sweep(g55, SurfaceModel::F1Blowup, 3,
                             [&](const PointAssignment& pa) { return spinor_identification(b3, pa, g55); },
                             [&](const PointAssignment& pa) { return pa.x(1) == g55.zero(); });
  BundleSet b4(make_blowup_lattice(SurfaceModel::F1Blowup, 4));
  auto g2 = converse_sweep(g55, SurfaceModel::F1Blowup, 4,
                           [&](const PointAssignment& pa) { return g2_identifications(b4, pa, g55).both(); },
                           [&](const PointAssignment& pa) { return satisfies_case_constraints(FoldType::G2, pa, g55); });
  SigmaModel g77(7, 7);
  bool wedge = true;
  g77.for_each_tuple(2, [&](const std::vector<GroupElement>& v) {
    PointAssignment pa{SurfaceModel::F1Blowup, {v[0], v[1], g77.neg(v[1]), g77.neg(v[0])}};
    for (int i = 0; i <= 4; ++i) wedge = wedge && wedge_identification(b4, i, pa, g77);
    wedge = wedge && v_self_duality(b4, pa, g77);
  });
  auto p2 = make_blowup_lattice(SurfaceModel::P2Blowup, 6);
  std::mt19937_64 rng(5);
  bool f4 = true;
  for (auto [m1, m2] : {std::pair<Int, Int>{2, 2}, {3, 3}, {1, 7}}) {
    SigmaModel g(m1, m2);
    for (int k = 0; k < 10; ++k) {
      auto d = f4_rep_decomposition(p2, random_admissible(FoldType::F4, g, 0, rng), g);
      f4 = f4 && d.zero_weights.size() == 3 && d.lines.size() == 24 && d.specials_common && d.specials_sum_to_minus_k &&
           d.short_roots_match && d.restrictions_match;
    }
  }
  bool ok = spin.equivalent() && g2.equivalent() && wedge && f4;
  return {ok, std::string("B2 spinor ") + (spin.equivalent() ? "iff" : "differs") + ", G2 triple " +
                  (g2.equivalent() ? "iff" : "differs") + ", C2 wedge " + (wedge ? "holds" : "fails") + ", F4 27 = 3 + 24 " +
                  (f4 ? "holds" : "fails")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit_s;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {1, "cubic combinatorics", 1, cubic_counts},
      {2, "double-six / positive root bijection", 5, double_six_bijection},
      {3, "triangle stabilizers", 10, stabilizers},
      {4, "folded root counts and Weyl orders", 10, root_counts_and_weyl},
      {5, "simple transitivity", 30, simple_transitivity},
      {6, "invariance conditions and fixed components", 60, invariance},
      {7, "chi injectivity", 60, chi},
      {8, "reconstruction round trip", 60, reconstruction},
      {9, "structure constants", 60, structure_constants_all},
      {10, "bundle identifications", 60, bundle_identifications},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const Error& e) {
      v = {false, e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = v.ok && s < c.limit_s;
    failed += !pass;
    std::printf("%s %2d %-44s %7.2fs / %3.0fs  %s\n", pass ? "PASS" : "FAIL", c.id, c.title, s, c.limit_s,
                v.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
