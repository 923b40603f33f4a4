#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ratsurf/verify.hpp"

using namespace ratsurf;

namespace {

constexpr int kExitUsage = 2;

VerifyConfig build_config(const std::string& config_file, const std::string& sigma, const std::string& curve,
                          int rank_b, int rank_c) {
  VerifyConfig cfg;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read config file " + config_file);
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
  }
  if (!sigma.empty()) {
    auto v = parse_int_list("--sigma", sigma, 2);
    cfg.m1 = v[0];
    cfg.m2 = v[1];
    cfg.curve.reset();
  }
  if (!curve.empty()) {
    auto v = parse_int_list("--curve", curve, 3);
    cfg.curve = std::array<Int, 3>{v[0], v[1], v[2]};
  }
  if (rank_b > 0) cfg.rank_b = rank_b;
  if (rank_c > 0) cfg.rank_c = rank_c;
  validate_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify the finite content of the folding correspondence"};
  std::string suite, sigma, curve, format = "text", out, config_file;
  int rank_b = 0, rank_c = 0;
  bool parallel = false;
  app.add_option("suite", suite, "lattice, folding, cubic, configs, moduli, liealg, repbundles or all")->required();
  app.add_option("--sigma", sigma, "Z/m1 x Z/m2 as m1,m2");
  app.add_option("--curve", curve, "y^2 = x^3 + a x + b over F_p as p,a,b");
  app.add_option("--rank-b", rank_b, "largest n for B_n");
  app.add_option("--rank-c", rank_c, "largest n for C_n");
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", out, "write the report to FILE");
  app.add_option("--config", config_file, "key = value config file");
  app.add_flag("--parallel", parallel, "run the suites of 'all' concurrently");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    VerifyConfig cfg = build_config(config_file, sigma, curve, rank_b, rank_c);
    auto reports = parallel ? run_suite_parallel(suite, cfg) : run_suite(suite, cfg);
    std::string text = emit_report(reports, cfg, format == "json" ? ReportFormat::Json : ReportFormat::Text);
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out);
      if (!f || !(f << text)) throw Error(ErrorCode::Io, "cannot write " + out);
    }
    return all_passed(reports) ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "verify: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::Io ? 1 : kExitUsage;
  }
}
