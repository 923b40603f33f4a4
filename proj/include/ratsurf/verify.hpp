#pragma once

// Named verification suites and their reports.

#include <array>
#include <chrono>
#include <future>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ratsurf/abelian.hpp"
#include "ratsurf/config.hpp"
#include "ratsurf/errors.hpp"
#include "ratsurf/folding.hpp"
#include "ratsurf/lattice.hpp"
#include "ratsurf/liealg.hpp"
#include "ratsurf/moduli.hpp"
#include "ratsurf/repbundles.hpp"
#include "ratsurf/rootsys.hpp"

namespace ratsurf {

inline constexpr const char* kVersion = "0.1.0";

struct VerifyConfig {
  Int m1 = 2;
  Int m2 = 2;
  std::optional<std::array<Int, 3>> curve;  // p, a, b
  int rank_b = 4;
  int rank_c = 4;
  std::size_t weyl_cap = kDefaultWeylCap;
  Int action_cap = kDefaultActionCap;
};

inline Int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "not an integer for " + key + ": '" + v + "'");
  }
}

inline std::vector<Int> parse_int_list(const std::string& key, const std::string& v, std::size_t count) {
  std::vector<Int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(key, item));
  if (out.size() != count)
    throw Error(ErrorCode::InvalidConfig, key + " expects " + std::to_string(count) + " comma-separated integers");
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline void apply_config_value(VerifyConfig& c, const std::string& key, const std::string& value) {
  if (key == "sigma.m1") c.m1 = parse_int(key, value);
  else if (key == "sigma.m2") c.m2 = parse_int(key, value);
  else if (key == "curve.p" || key == "curve.a" || key == "curve.b") {
    if (!c.curve) c.curve = std::array<Int, 3>{0, 0, 0};
    (*c.curve)[key == "curve.p" ? 0 : key == "curve.a" ? 1 : 2] = parse_int(key, value);
  } else if (key == "ranks.b") c.rank_b = static_cast<int>(parse_int(key, value));
  else if (key == "ranks.c") c.rank_c = static_cast<int>(parse_int(key, value));
  else if (key == "budget.weyl_cap") c.weyl_cap = static_cast<std::size_t>(parse_int(key, value));
  else if (key == "budget.action_cap") c.action_cap = parse_int(key, value);
  else throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
}

/// key = value lines; '#' starts a comment.
inline void apply_config_text(VerifyConfig& c, const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    apply_config_value(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline void validate_config(const VerifyConfig& c) {
  if (c.m1 < 1 || c.m2 < 1 || c.m2 % c.m1 != 0)
    throw Error(ErrorCode::InvalidConfig, "sigma needs 1 <= m1 with m1 | m2");
  if (c.rank_b < 2 || c.rank_b > 6) throw Error(ErrorCode::InvalidConfig, "ranks.b must lie in 2..6");
  if (c.rank_c < 2 || c.rank_c > 6) throw Error(ErrorCode::InvalidConfig, "ranks.c must lie in 2..6");
  if (c.curve && (*c.curve)[0] < 3) throw Error(ErrorCode::InvalidConfig, "curve.p must be an odd prime");
}

inline nlohmann::json to_json(const VerifyConfig& c) {
  nlohmann::json j{{"sigma", {c.m1, c.m2}},
                   {"ranks", {{"b", c.rank_b}, {"c", c.rank_c}}},
                   {"budget", {{"weyl_cap", c.weyl_cap}, {"action_cap", c.action_cap}}}};
  if (c.curve) j["curve"] = {(*c.curve)[0], (*c.curve)[1], (*c.curve)[2]};
  return j;
}

enum class Status { Pass, Fail, Skipped };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

struct VerificationReport {
  std::string id;
  Status status = Status::Pass;
  nlohmann::json witness;
  double ms = 0;
};

struct Outcome {
  Status status;
  nlohmann::json witness;
};

inline Outcome pass_if(bool ok, nlohmann::json witness = nlohmann::json::object()) {
  return {ok ? Status::Pass : Status::Fail, std::move(witness)};
}

inline nlohmann::json to_json(const std::vector<GroupElement>& xs) {
  auto j = nlohmann::json::array();
  for (const auto& x : xs) j.push_back({x.a, x.b});
  return j;
}

class SuiteRun {
 public:
  SuiteRun(const VerifyConfig& cfg, const SigmaModel& g) : cfg_(cfg), g_(g) {}

  const VerifyConfig& config() const { return cfg_; }
  const SigmaModel& sigma() const { return g_; }
  std::vector<VerificationReport>& reports() { return reports_; }

  void claim(const std::string& id, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{Status::Fail, nlohmann::json::object()};
    try {
      o = body();
    } catch (const Error& e) {
      o.status = e.code() == ErrorCode::BudgetExceeded ? Status::Skipped : Status::Fail;
      o.witness = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    }
    if (o.status == Status::Fail && (o.witness.is_null() || o.witness.empty())) o.witness = {{"detail", "no witness"}};
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    reports_.push_back({id, o.status, o.witness, ms});
  }

 private:
  VerifyConfig cfg_;
  SigmaModel g_;
  std::vector<VerificationReport> reports_;
};

inline std::string case_name(FoldType t, int n) {
  return to_string(t) + ((t == FoldType::B || t == FoldType::C) ? std::to_string(n) : "");
}

inline Int factorial(int n) {
  Int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline std::vector<std::pair<FoldType, int>> fold_cases(int rank_b, int rank_c, int max_c = 6) {
  std::vector<std::pair<FoldType, int>> out;
  for (int n = 2; n <= rank_b; ++n) out.emplace_back(FoldType::B, n);
  for (int n = 2; n <= std::min(rank_c, max_c); ++n) out.emplace_back(FoldType::C, n);
  out.emplace_back(FoldType::G2, 0);
  out.emplace_back(FoldType::F4, 0);
  return out;
}

// ---------------------------------------------------------------------------

inline void suite_lattice(SuiteRun& run) {
  // Exceptional curves on P2 blown up in k points, k = 2..7.
  const std::map<int, std::size_t> expected{{2, 3}, {3, 6}, {4, 10}, {5, 16}, {6, 27}, {7, 56}};
  for (auto [k, count] : expected) {
    run.claim("lattice.exceptional.P2." + std::to_string(k), [k, count] {
      auto lat = make_blowup_lattice(SurfaceModel::P2Blowup, k);
      auto n = exceptional_classes(lat).size();
      return pass_if(n == count, {{"count", n}, {"expected", count}});
    });
    if (k >= 2)
      run.claim("lattice.exceptional.F1." + std::to_string(k - 1), [k, count] {
        auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, k - 1);
        auto n = exceptional_classes(lat).size();
        return pass_if(n == count, {{"count", n}, {"expected", count}});
      });
  }
  run.claim("lattice.K2", [] {
    nlohmann::json w = nlohmann::json::object();
    bool ok = true;
    for (int k = 1; k <= 8; ++k) {
      auto p = make_blowup_lattice(SurfaceModel::P2Blowup, k);
      ok = ok && p.square(p.canonical_class()) == 9 - k;
      w["P2." + std::to_string(k)] = p.square(p.canonical_class());
      if (k <= 7) {
        auto f = make_blowup_lattice(SurfaceModel::F1Blowup, k);
        ok = ok && f.square(f.canonical_class()) == 8 - k;
        w["F1." + std::to_string(k)] = f.square(f.canonical_class());
      }
    }
    return pass_if(ok, w);
  });
  struct RootCase {
    const char* id;
    SimpleSystemCase c;
    int n;
    std::size_t roots;
    std::size_t weyl;
    const char* type;
  };
  for (const auto& rc : {RootCase{"D3", SimpleSystemCase::D_F1, 2, 12, 24, "A3"},
                         RootCase{"D4", SimpleSystemCase::D_F1, 3, 24, 192, "D4"},
                         RootCase{"D5", SimpleSystemCase::D_F1, 4, 40, 1920, "D5"},
                         RootCase{"A3", SimpleSystemCase::A_F1, 2, 12, 24, "A3"},
                         RootCase{"A5", SimpleSystemCase::A_F1, 3, 30, 720, "A5"},
                         RootCase{"E6", SimpleSystemCase::E6_P2, 0, 72, 51840, "E6"}}) {
    const std::size_t cap = run.config().weyl_cap;
    run.claim(std::string("roots.") + rc.id, [rc, cap] {
      auto lat = lattice_for(rc.c, rc.n);
      auto simple = standard_simple_system(rc.c, lat, rc.n);
      auto rs = root_system_closure(lat, simple.roots);
      auto type = cartan_matrix(lat, simple.roots).type();
      auto w = weyl_generate(reflections(lat, simple.roots), 0, cap);
      bool ok = rs.size() == rc.roots && type == rc.type && w.size() == rc.weyl;
      return pass_if(ok, {{"roots", rs.size()}, {"type", type}, {"weyl_order", w.size()}});
    });
  }
}

inline void suite_folding(SuiteRun& run) {
  const auto& cfg = run.config();
  for (auto [t, n] : fold_cases(cfg.rank_b, cfg.rank_c)) {
    const std::string name = case_name(t, n);
    const std::size_t expected_roots = t == FoldType::G2 ? 12 : t == FoldType::F4 ? 48 : static_cast<std::size_t>(2 * n * n);
    const std::size_t expected_weyl =
        t == FoldType::G2 ? 12 : t == FoldType::F4 ? 1152 : static_cast<std::size_t>((Int{1} << n) * factorial(n));
    const std::size_t cap = cfg.weyl_cap;
    run.claim("R." + name + ".count." + std::to_string(expected_roots), [t, n, expected_roots] {
      auto fd = folding_data(t, n);
      auto rs = folded_root_system(t, fd.lattice, n);
      auto closure = root_system_closure(fd.lattice, fd.folded.roots);
      bool fixed = std::all_of(rs.roots.begin(), rs.roots.end(), [&](const auto& r) { return fd.rho.apply(r) == r; });
      bool ok = rs.size() == expected_roots && closure.roots == rs.roots && fixed;
      return pass_if(ok, {{"roots", rs.size()}, {"closure", closure.size()}, {"rho_fixed", fixed}});
    });
    run.claim("W." + name + ".order." + std::to_string(expected_weyl), [t, n, expected_weyl, cap] {
      auto fd = folding_data(t, n);
      auto w = weyl_generate(fd.weyl_gens, 0, cap);
      auto p = weyl_presentations(fd);
      bool ok = w.size() == expected_weyl && p.from_roots == p.from_orbits;
      return pass_if(ok, {{"weyl_order", w.size()},
                          {"from_roots", p.from_roots.size()},
                          {"from_orbits", p.from_orbits.size()}});
    });
    run.claim("cartan." + name, [t, n] {
      auto fd = folding_data(t, n);
      auto type = folded_cartan(fd.lattice, fold_simple_system(fd.rho)).type();
      auto integral = cartan_matrix(fd.lattice, fd.folded.roots).type();
      std::string want = t == FoldType::C && n == 2 ? "B2" : case_name(t, n);
      return pass_if(type == want && integral == want, {{"folded", type}, {"integral", integral}});
    });
    run.claim("W." + name + ".second_reduction", [t, n] {
      auto fd = folding_data(t, n);
      auto sr = second_reduction(fd);
      bool ok = sr.weyl_order == sr.long_weyl_order * sr.induced_symmetries;
      return pass_if(ok, {{"long_type", sr.long_type},
                          {"weyl_order", sr.weyl_order},
                          {"long_weyl_order", sr.long_weyl_order},
                          {"induced_symmetries", sr.induced_symmetries},
                          {"diagram_symmetries", sr.diagram_symmetries}});
    });
  }
}

inline void suite_cubic(SuiteRun& run) {
  const std::size_t cap = run.config().weyl_cap;
  auto lat = make_blowup_lattice(SurfaceModel::P2Blowup, 6);
  run.claim("E6.lines.27", [lat] {
    auto cc = cubic_combinatorics(lat);
    return pass_if(cc.lines.size() == 27, {{"lines", cc.lines.size()}});
  });
  run.claim("E6.triangles.45", [lat] {
    auto cc = cubic_combinatorics(lat);
    bool five = std::all_of(cc.lines.begin(), cc.lines.end(), [&](const auto& l) {
      return std::count_if(cc.triangles.begin(), cc.triangles.end(), [&](const Triangle& t) {
               return std::find(t.begin(), t.end(), l) != t.end();
             }) == 5;
    });
    bool base = std::find(cc.triangles.begin(), cc.triangles.end(), base_triangle(lat)) != cc.triangles.end();
    return pass_if(cc.triangles.size() == 45 && five && base,
                   {{"triangles", cc.triangles.size()}, {"each_line_in_5", five}, {"base_triangle", base}});
  });
  run.claim("E6.double_sixes.36", [lat] {
    auto cc = cubic_combinatorics(lat);
    bool valid = std::all_of(cc.double_sixes.begin(), cc.double_sixes.end(),
                             [&](const auto& d) { return is_double_six(lat, d); });
    return pass_if(cc.double_sixes.size() == 36 && valid, {{"double_sixes", cc.double_sixes.size()}});
  });
  run.claim("E6.double_six_roots.bijection", [lat] {
    auto simple = standard_simple_system(SimpleSystemCase::E6_P2, lat).roots;
    auto pos = positive_roots(root_system_closure(lat, simple), simple);
    auto cc = cubic_combinatorics(lat);
    std::set<DivisorClass> image;
    for (const auto& d : cc.double_sixes) image.insert(double_six_to_root(lat, d, pos));
    DivisorClass a0 = 2 * lat.h() - lat.exceptional_sum();
    DoubleSix base;
    for (int i = 1; i <= 6; ++i) base.L.push_back(lat.l(i));
    for (int i = 1; i <= 6; ++i) base.Lprime.push_back(2 * lat.h() - lat.exceptional_sum() + lat.l(i));
    bool alpha0 = double_six_to_root(lat, base, pos) == a0;
    bool onto = image == std::set<DivisorClass>(pos.begin(), pos.end());
    return pass_if(image.size() == 36 && onto && alpha0,
                   {{"image", image.size()}, {"positive_roots", pos.size()}, {"alpha0", alpha0}});
  });
  run.claim("E6.stabilizer.triangle.1152", [lat, cap] {
    auto simple = standard_simple_system(SimpleSystemCase::E6_P2, lat).roots;
    auto we = weyl_generate(reflections(lat, simple), 0, cap);
    auto st = triangle_stabilizer(base_triangle(lat), false, we);
    auto wf = weyl_generate(folding_data(FoldType::F4).weyl_gens, 0, cap);
    bool same = st.elements == wf;
    return pass_if(st.elements.size() == 1152 && same,
                   {{"order", st.elements.size()}, {"equals_folded_F4", same}, {"permutations", st.permutation_image}});
  });
  run.claim("E6.stabilizer.ordered_triangle.192", [lat, cap] {
    auto simple = standard_simple_system(SimpleSystemCase::E6_P2, lat).roots;
    auto we = weyl_generate(reflections(lat, simple), 0, cap);
    auto st = triangle_stabilizer(base_triangle(lat), true, we);
    auto wd = weyl_generate(reflections(lat, fixed_d4_simple_roots(lat)), 0, cap);
    bool same = st.elements == wd;
    return pass_if(st.elements.size() == 192 && same, {{"order", st.elements.size()}, {"equals_D4", same}});
  });
  run.claim("E6.triangle_orbits", [lat, cap] {
    auto simple = standard_simple_system(SimpleSystemCase::E6_P2, lat).roots;
    auto ordered = orbit(reflections(lat, simple), base_triangle(lat), std::size_t{51840}, cap);
    std::set<Triangle> unordered;
    for (auto t : ordered.elements) {
      std::sort(t.begin(), t.end());
      unordered.insert(t);
    }
    return pass_if(ordered.elements.size() == 270 && unordered.size() == 45,
                   {{"ordered", ordered.elements.size()}, {"unordered", unordered.size()}});
  });
}

inline void suite_configs(SuiteRun& run) {
  const auto& cfg = run.config();
  for (auto [t, n] : fold_cases(cfg.rank_b, cfg.rank_c, 4)) {
    const std::string name = case_name(t, n);
    const std::size_t cap = cfg.weyl_cap;
    run.claim("config." + name + ".simply_transitive", [t, n, cap] {
      auto fd = folding_data(t, n);
      auto sys = enumerate_exceptional_systems(t, fd.lattice, n);
      auto w = weyl_generate(fd.weyl_gens, 0, cap);
      auto tr = simple_transitivity_check(sys, w);
      bool has_standard = std::find(sys.begin(), sys.end(), standard_system(fd.lattice)) != sys.end();
      nlohmann::json wit{{"systems", sys.size()}, {"weyl_order", w.size()}, {"standard_included", has_standard}};
      if (!tr.failure.empty()) wit["failure"] = tr.failure;
      return pass_if(tr.simply_transitive && has_standard, wit);
    });
  }
  run.claim("config.G2.listed_tuple", [] {
    auto lat = fold_lattice(FoldType::G2);
    auto sys = enumerate_exceptional_systems(FoldType::G2, lat);
    ClassTuple listed{lat.f() - lat.l(1), lat.f() - lat.l(2), lat.l(4), lat.l(3)};
    bool found = std::find(sys.begin(), sys.end(), listed) != sys.end();
    return pass_if(sys.size() == 12 && found, {{"systems", sys.size()}, {"found", found}});
  });
  run.claim("config.F4.avoid_triangle", [] {
    auto lat = fold_lattice(FoldType::F4);
    auto sys = enumerate_exceptional_systems(FoldType::F4, lat);
    auto tri = base_triangle(lat);
    bool ok = std::all_of(sys.begin(), sys.end(), [&](const ClassTuple& s) {
      return std::none_of(s.begin(), s.end(), [&](const auto& e) { return std::find(tri.begin(), tri.end(), e) != tri.end(); });
    });
    return pass_if(ok, {{"systems", sys.size()}});
  });
  run.claim("config.blowdown.examples", [] {
    auto lat = make_blowup_lattice(SurfaceModel::F1Blowup, 4);
    bool a = is_blowdown_sequence(lat, standard_system(lat));
    bool b = is_blowdown_sequence(lat, {lat.f() - lat.l(1), lat.f() - lat.l(2), lat.l(4), lat.l(3)});
    bool c = !is_blowdown_sequence(lat, {lat.l(1), lat.f() - lat.l(1), lat.l(3), lat.l(4)});
    return pass_if(a && b && c, {{"standard", a}, {"listed", b}, {"meeting_rejected", c}});
  });
}

inline void suite_moduli(SuiteRun& run) {
  const auto& cfg = run.config();
  const auto& g = run.sigma();
  for (auto [t, n] : fold_cases(cfg.rank_b, cfg.rank_c, 3)) {
    const std::string name = case_name(t, n);
    const Int cap = cfg.action_cap;
    run.claim("moduli." + name + ".invariance", [t, n, g, cap] {
      auto sw = invariance_sweep(t, g, n, cap);
      nlohmann::json w{{"assignments", sw.total}, {"agree", sw.agree}, {"invariant", sw.invariant},
                       {"literal_differs", sw.literal_differs}};
      if (sw.disagreement) w["disagreement"] = to_json(sw.disagreement->points);
      return pass_if(sw.agree == sw.total, w);
    });
    run.claim("moduli." + name + ".fixed_components", [t, n, g] {
      auto fc = fixed_components(t, g, n);
      // Count labels of invariant assignments directly.
      auto fd = folding_data(t, n);
      std::set<GroupElement> seen;
      Int size = 1;
      for (int i = 0; i < fd.lattice.blowups(); ++i) size *= g.order();
      if (size > 2'000'000) return Outcome{Status::Skipped, {{"reason", "domain too large"}, {"labels", fc.labels.size()}}};
      g.for_each_tuple(static_cast<std::size_t>(fd.lattice.blowups()), [&](const std::vector<GroupElement>& v) {
        PointAssignment pa{fd.lattice.model(), v};
        if (!in_invariance_domain(t, pa, g)) return;
        if (auto l = component_label(fd, pa, g)) seen.insert(*l);
      });
      nlohmann::json w{{"labels", fc.labels.size()}, {"observed", seen.size()}, {"expected_full_torsion", fc.expected}};
      if (fc.warning) w["warning"] = *fc.warning;
      return pass_if(seen.size() == fc.labels.size(), w);
    });
    run.claim("moduli.chi." + name, [t, n, g, cap] {
      auto r = chi_injectivity_check(t, g, n, cap);
      nlohmann::json w{{"domain", r.domain_size}, {"orbits", r.orbit_count}};
      if (r.counterexample) w["counterexample"] = {to_json(r.counterexample->first), to_json(r.counterexample->second)};
      return pass_if(r.verified, w);
    });
    run.claim("moduli." + name + ".reconstruct", [t, n, g] {
      std::mt19937_64 rng(20240601u + static_cast<unsigned>(n) * 31u + static_cast<unsigned>(t));
      Int kernel = -1;
      std::size_t classes = 0;
      for (int trial = 0; trial < 100; ++trial) {
        auto pa = random_admissible(t, g, n, rng);
        auto rec = reconstruct_points(t, folded_values(t, pa, g, n), g, n);
        if (!std::binary_search(rec.assignments.begin(), rec.assignments.end(), pa))
          return pass_if(false, {{"lost", to_json(pa.points)}});
        kernel = rec.raw.kernel_size;
        if (trial == 0) classes = solution_weyl_classes(t, rec.assignments, g, n);
      }
      // Informational: how many W(G)-classes the solutions of the first trial fall into.
      return pass_if(true, {{"trials", 100}, {"kernel", kernel}, {"weyl_classes_first_trial", classes}});
    });
  }
}

inline void suite_liealg(SuiteRun& run) {
  const auto& cfg = run.config();
  std::vector<LieCase> cases{lie_case(SimpleSystemCase::D4_F1), lie_case(SimpleSystemCase::E6_P2)};
  for (auto [t, n] : fold_cases(cfg.rank_b, cfg.rank_c, 4)) cases.push_back(lie_case(t, n));
  auto three = std::make_shared<std::vector<std::string>>();
  for (const auto& c : cases) {
    run.claim("lie." + c.name + ".jacobi", [c, three] {
      auto t = structure_constants(c.roots, c.simple);
      auto j = verify_jacobi(t);
      auto cen = structure_census(t, c.roots);
      if (cen.max_abs == 3) three->push_back(c.name);
      auto bundle = build_lie_bundle(c.roots, c.simple);
      bool bundle_ok = bundle.summands.size() == c.roots.size() && bundle.trivial_rank == static_cast<int>(c.simple.size());
      nlohmann::json w{{"dimension", t.dimension()}, {"triples", j.triples}, {"nonzero", cen.nonzero},
                       {"max_abs_N", cen.max_abs}, {"magnitudes", cen.magnitudes_ok}, {"grading", cen.grading_ok}};
      if (!j.ok) w["failure"] = j.failure;
      if (!cen.failure.empty()) w["census"] = cen.failure;
      return pass_if(j.ok && cen.magnitudes_ok && cen.grading_ok && bundle_ok, w);
    });
  }
  run.claim("lie.N3.only_G2", [three] {
    return pass_if(*three == std::vector<std::string>{"G2"}, {{"cases_with_3", *three}});
  });
}

inline void suite_repbundles(SuiteRun& run) {
  const auto& g = run.sigma();
  const Int cap = run.config().action_cap;
  auto budget = [&](int points) {
    Int size = 1;
    for (int i = 0; i < points; ++i) size = checked_mul(size, g.order());
    if (size > cap) throw Error(ErrorCode::BudgetExceeded, "sweep larger than the action cap");
  };
  // 2-torsion in the group admits extra solutions to the identifications, so
  // over even order only the forward direction is checked.
  run.claim("rep.B2.spinor_iff_x1_zero", [g, budget] {
    budget(3);
    BundleSet bs(make_blowup_lattice(SurfaceModel::F1Blowup, 3));
    auto r = converse_sweep(g, SurfaceModel::F1Blowup, 3, [&](const PointAssignment& pa) { return spinor_identification(bs, pa, g); },
                            [&](const PointAssignment& pa) { return pa.x(1) == g.zero(); });
    const bool odd = g.order() % 2 == 1;
    nlohmann::json w{{"assignments", r.assignments}, {"identified", r.identified}, {"special", r.special},
                     {"converse_checked", odd}};
    if (odd && r.counterexample) w["counterexample"] = to_json(r.counterexample->points);
    return pass_if(odd ? r.equivalent() : r.forward_holds(), w);
  });
  run.claim("rep.G2.triple_iff_configuration", [g, budget] {
    budget(4);
    BundleSet bs(make_blowup_lattice(SurfaceModel::F1Blowup, 4));
    auto r = converse_sweep(g, SurfaceModel::F1Blowup, 4,
                            [&](const PointAssignment& pa) { return g2_identifications(bs, pa, g).both(); },
                            [&](const PointAssignment& pa) { return satisfies_case_constraints(FoldType::G2, pa, g); });
    const bool odd = g.order() % 2 == 1;
    nlohmann::json w{{"assignments", r.assignments}, {"identified", r.identified}, {"special", r.special},
                     {"converse_checked", odd}};
    if (odd && r.counterexample) w["counterexample"] = to_json(r.counterexample->points);
    return pass_if(odd ? r.equivalent() : r.forward_holds(), w);
  });
  run.claim("rep.C2.wedge_under_pairing", [g, budget] {
    budget(4);
    BundleSet bs(make_blowup_lattice(SurfaceModel::F1Blowup, 4));
    std::size_t checked = 0;
    std::optional<PointAssignment> bad;
    g.for_each_tuple(4, [&](const std::vector<GroupElement>& v) {
      PointAssignment pa{SurfaceModel::F1Blowup, v};
      if (!satisfies_case_constraints(FoldType::C, pa, g, 2)) return;
      ++checked;
      bool ok = v_self_duality(bs, pa, g);
      for (int i = 0; i <= 4; ++i) ok = ok && wedge_identification(bs, i, pa, g);
      if (!ok && !bad) bad = pa;
    });
    nlohmann::json w{{"assignments", checked}};
    if (bad) w["counterexample"] = to_json(bad->points);
    return pass_if(!bad, w);
  });
  run.claim("rep.F4.decomposition", [g] {
    auto lat = make_blowup_lattice(SurfaceModel::P2Blowup, 6);
    std::mt19937_64 rng(7u);
    for (int trial = 0; trial < 10; ++trial) {
      auto pa = random_admissible(FoldType::F4, g, 0, rng);
      auto d = f4_rep_decomposition(lat, pa, g);
      bool ok = d.zero_weights.size() == 3 && d.lines.size() == 24 && d.specials_common && d.specials_sum_to_minus_k &&
                d.short_roots_match && d.restrictions_match && d.trace_kernel_rank + 24 == 26;
      if (!ok) return pass_if(false, {{"points", to_json(pa.points)}});
    }
    return pass_if(true, {{"trials", 10}, {"split", "27 = 3 + 24"}, {"rank", "26 = 24 + 2"}});
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lattice", "folding", "cubic", "configs", "moduli", "liealg", "repbundles"};
  return names;
}

inline SigmaModel sigma_for(const VerifyConfig& cfg) {
  if (cfg.curve) return weierstrass_group((*cfg.curve)[0], (*cfg.curve)[1], (*cfg.curve)[2]).sigma;
  return SigmaModel(cfg.m1, cfg.m2);
}

inline std::vector<VerificationReport> run_suite(const std::string& suite, const VerifyConfig& cfg) {
  validate_config(cfg);
  const std::map<std::string, std::function<void(SuiteRun&)>> table{
      {"lattice", suite_lattice}, {"folding", suite_folding}, {"cubic", suite_cubic},
      {"configs", suite_configs}, {"moduli", suite_moduli},   {"liealg", suite_liealg},
      {"repbundles", suite_repbundles}};
  SigmaModel g = [&] {
    try {
      return sigma_for(cfg);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, e.what());
    }
  }();
  SuiteRun run(cfg, g);
  if (suite == "all") {
    for (const auto& s : suite_names()) table.at(s)(run);
  } else {
    auto it = table.find(suite);
    if (it == table.end()) throw Error(ErrorCode::UnknownSuite, "unknown suite '" + suite + "'");
    it->second(run);
  }
  return std::move(run.reports());
}

/// Runs the member suites of "all" concurrently; reports keep suite order.
inline std::vector<VerificationReport> run_suite_parallel(const std::string& suite, const VerifyConfig& cfg) {
  if (suite != "all") return run_suite(suite, cfg);
  std::vector<std::future<std::vector<VerificationReport>>> jobs;
  for (const auto& s : suite_names()) jobs.push_back(std::async(std::launch::async, [s, cfg] { return run_suite(s, cfg); }));
  std::vector<VerificationReport> out;
  for (auto& j : jobs) {
    auto part = j.get();
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

enum class ReportFormat { Text, Json };

inline nlohmann::json report_json(const std::vector<VerificationReport>& reports, const VerifyConfig& cfg) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& r : reports)
    results.push_back({{"id", r.id}, {"status", to_string(r.status)}, {"witness", r.witness}, {"ms", r.ms}});
  return {{"run", {{"config", to_json(cfg)}, {"version", kVersion}}}, {"results", results}};
}

inline std::string emit_report(const std::vector<VerificationReport>& reports, const VerifyConfig& cfg,
                               ReportFormat format) {
  if (format == ReportFormat::Json) return report_json(reports, cfg).dump(2) + "\n";
  std::size_t width = 2;
  for (const auto& r : reports) width = std::max(width, r.id.size());
  std::ostringstream os;
  os << std::left;
  for (const auto& r : reports) {
    os.width(static_cast<std::streamsize>(width + 2));
    os << r.id;
    os.width(9);
    os << to_string(r.status);
    os.width(10);
    std::ostringstream ms;
    ms.precision(1);
    ms << std::fixed << r.ms << "ms";
    os << ms.str() << r.witness.dump() << "\n";
  }
  std::size_t fails = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.status == Status::Fail; });
  os << reports.size() << " claims, " << fails << " failed\n";
  return os.str();
}

inline bool all_passed(const std::vector<VerificationReport>& reports) {
  return std::none_of(reports.begin(), reports.end(), [](const auto& r) { return r.status == Status::Fail; });
}

}  // namespace ratsurf
