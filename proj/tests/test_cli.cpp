#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pllnet/cli/app.hpp"

using namespace pllnet::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pllnet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data_lines(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, kept;
  while (std::getline(in, line))
    if (line.rfind("#", 0) != 0) kept += line + "\n";
  return kept;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pllnet_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("help lists the CSV schemas") {
  const auto r = cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("tau_star, omega, root_branch") != std::string::npos);
  CHECK(cli({"snmap", "--help"}).code == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"bogus"}).code == 2);
  CHECK(cli({"curves", "--K", "1.05", "--mu-grid", "0.4:0.1:10"}).code == 2);
  CHECK(cli({"curves", "--K", "abc", "--mu-grid", "0.1:0.4:10"}).code == 2);
  CHECK(cli({"curves", "--K", "1.05"}).code == 2);
  CHECK(cli({"rightmost", "--K", "2"}).code == 2);
  CHECK(cli({"simulate", "--K", "1.05", "--tau", "1", "--step", "0.5"}).code == 2);
  CHECK(cli({"zero-roots", "--out", "/nonexistent-dir/x.csv"}).code == 2);
  CHECK(cli({"zero-roots", "--config", "/nonexistent-dir/c.json"}).code == 2);
}

TEST_CASE("domain errors exit with 1") {
  const auto r = cli({"snmap", "--K", "0.5", "--mu", "0.3"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("snmap CSV carries parameters, header and crossings") {
  const auto r = cli({"snmap", "--K", "1.05", "--mu", "0.3", "--eq", "minus", "--tau-max", "25"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# model=full-phase N=2 K=1.05 mu=0.29999999999999999 omega_M=1", 0) == 0);
  const auto rows = data_lines(r.out);
  CHECK(rows.rfind("tau_star,omega,root_branch,n,delta,delta_sign,branch_id\n", 0) == 0);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 6);
  CHECK(rows.find("6.34016") != std::string::npos);
  CHECK(r.err.find("5 crossings") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical output") {
  const std::vector<std::string> args{"curves", "--K", "1.05", "--mu-grid", "0.01:0.42:40", "--n", "0:4"};
  auto a = args, b = args;
  a.insert(a.end(), {"--threads", "1"});
  b.insert(b.end(), {"--threads", "4"});
  const auto r1 = cli(a), r2 = cli(a), r3 = cli(b);
  REQUIRE(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out == r3.out);
}

TEST_CASE("free frequency is normalized at the boundary") {
  const auto phys = cli({"snmap", "--K", "2.1", "--mu", "0.6", "--omega-m", "2", "--tau-max", "12.5"});
  const auto norm = cli({"snmap", "--K", "1.05", "--mu", "0.3", "--tau-max", "25"});
  REQUIRE(phys.code == 0);
  CHECK(data_lines(phys.out) == data_lines(norm.out));
  CHECK(phys.out.find("normalized from omega_M=2") != std::string::npos);

  const auto z1 = cli({"zero-roots", "--K", "2", "--omega-m", "2", "--N", "3"});
  const auto z2 = cli({"zero-roots", "--K", "1", "--N", "3"});
  CHECK(data_lines(z1.out) == data_lines(z2.out));
}

TEST_CASE("config file values are overridden by flags") {
  const auto cfg = scratch("run.json");
  std::ofstream(cfg) << R"({"K": 1.05, "mu": 0.9, "eq": "minus", "tau-max": 25})";
  const auto from_file = cli({"snmap", "--config", cfg.string(), "--mu", "0.3"});
  const auto direct = cli({"snmap", "--K", "1.05", "--mu", "0.3", "--tau-max", "25"});
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out == direct.out);
  std::ofstream(cfg) << R"({"K": "x"})";
  CHECK(cli({"snmap", "--config", cfg.string()}).code == 2);
  std::ofstream(cfg) << R"({"K": 1.05,)";
  CHECK(cli({"snmap", "--config", cfg.string()}).code == 2);
}

TEST_CASE("CSV and SVG files") {
  const auto csv = scratch("rm.csv"), svg = scratch("rm.svg");
  const auto r = cli({"rightmost", "--K", "2", "--mu", "0.5", "--eq", "plus", "--tau-grid", "0:10:21", "--out",
                      csv.string(), "--svg", svg.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("rightmost: 21 delays") != std::string::npos);
  const auto text = slurp(csv);
  CHECK(data_lines(text).rfind("tau,re_lambda,im_lambda,certified\n", 0) == 0);
  const auto chart = slurp(svg);
  CHECK(chart.rfind("<svg", 0) == 0);
  CHECK(chart.find("<polyline") != std::string::npos);
  CHECK(chart.find("</svg>") != std::string::npos);
}

TEST_CASE("phase-model commands") {
  const auto rel = cli({"releq", "--K", "1", "--mu", "1", "--tau-window", "0:15.707963267948966"});
  REQUIRE(rel.code == 0);
  CHECK(rel.err.find("11 branches") != std::string::npos);

  const auto sn = cli({"snmap", "--model", "phase", "--block", "fix", "--K", "1", "--mu", "1", "--tau-window",
                       "0:15.707963267948966"});
  REQUIRE(sn.code == 0);
  CHECK(sn.err.find("8 crossings") != std::string::npos);

  const auto rm = cli({"rightmost", "--model", "phase", "--K", "1", "--mu", "1", "--tau-grid", "0:2:5"});
  CHECK(rm.code == 0);

  const auto cc = cli({"releq", "--case-curves", "--mu-grid", "0.1:1:4", "--m", "1:2"});
  REQUIRE(cc.code == 0);
  CHECK(data_lines(cc.out).rfind("m,mu,K\n", 0) == 0);

  const auto samples = cli({"snmap", "--samples", "--model", "phase", "--K", "1", "--mu", "1", "--tau-window", "0:4",
                            "--n", "0:1"});
  REQUIRE(samples.code == 0);
  CHECK(data_lines(samples.out).rfind("branch_id,root_branch,n,tau,s_n\n", 0) == 0);
}

TEST_CASE("phasediff-check reports small mismatches") {
  const auto r = cli({"phasediff-check", "--N", "2", "--K", "1.3", "--mu", "0.7", "--tau", "2.1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("fix_block_mismatch") != std::string::npos);
  const auto r3 = cli({"phasediff-check", "--N", "3", "--K", "1.3", "--mu", "0.7", "--tau", "2.1"});
  REQUIRE(r3.code == 0);
  CHECK(r3.out.find("lambda_minus_mu_fictitious,1") != std::string::npos);
  CHECK(cli({"phasediff-check", "--N", "4", "--tau", "1"}).code == 1);
}

TEST_CASE("simulate writes the trajectory and a summary") {
  const auto r = cli({"simulate", "--N", "2", "--K", "1.05", "--mu", "0.3", "--tau", "2", "--t-end", "20"});
  REQUIRE(r.code == 0);
  CHECK(data_lines(r.out).rfind("t,x1_1,x2_1,x1_2,x2_2\n", 0) == 0);
  CHECK(r.err.find("simulate:") != std::string::npos);
}
