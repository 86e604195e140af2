#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sfg/figures.hpp"
#include "sfg/sweep.hpp"

namespace {

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  Csv csv;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.comments.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      csv.columns = cells;
      have_header = true;
    } else {
      csv.rows.push_back(cells);
    }
  }
  return csv;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SFG_CLI_PATH) + " " + args;
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("fig2a: low-q family reaches unit efficiency at p = pi") {
  nlohmann::json cfg = {
      {"p", {{"min", 0.0}, {"max", 2.0 * M_PI}, {"steps", 97}}},
      {"q_values", {1e-6, 1.0, 100.0}}};
  sfg::figures::fig2('a', cfg, "fig2a_test.csv");
  const Csv csv = read_csv("fig2a_test.csv");
  CHECK(csv.columns.size() == 4);
  CHECK(csv.rows.size() == 97);

  double best = 0.0, best_p = 0.0;
  for (const auto& row : csv.rows) {
    const double p = std::stod(row[0]);
    const double eff = std::stod(row[1]);  // q = 1e-6 family
    if (eff > best) {
      best = eff;
      best_p = p;
    }
  }
  CHECK(best >= 0.99);
  CHECK(std::abs(best_p - M_PI) <= 0.1);
  std::remove("fig2a_test.csv");
}

TEST_CASE("fig2b: delay families lower the peak efficiency") {
  nlohmann::json cfg = {
      {"p", {{"min", 0.0}, {"max", 2.0 * M_PI}, {"steps", 49}}},
      {"T_values", {0.0, 1.0, 2.0}},
      {"q", 1.0}};
  sfg::figures::fig2('b', cfg, "fig2b_test.csv");
  const Csv csv = read_csv("fig2b_test.csv");
  REQUIRE(csv.rows.size() == 49);
  double peak0 = 0.0, peak1 = 0.0, peak2 = 0.0;
  for (const auto& row : csv.rows) {
    peak0 = std::max(peak0, std::stod(row[1]));
    peak1 = std::max(peak1, std::stod(row[2]));
    peak2 = std::max(peak2, std::stod(row[3]));
  }
  CHECK(peak0 == doctest::Approx(0.889).epsilon(5e-3));
  CHECK(peak1 < peak0);
  CHECK(peak2 < peak1);
  std::remove("fig2b_test.csv");
}

TEST_CASE("fig2 output is byte-identical across runs") {
  nlohmann::json cfg = {
      {"p", {{"min", 0.0}, {"max", 4.0}, {"steps", 21}}},
      {"q_values", {0.01, 1.0}}};
  sfg::figures::fig2('a', cfg, "fig2a_det1.csv");
  sfg::figures::fig2('a', cfg, "fig2a_det2.csv");
  CHECK(slurp("fig2a_det1.csv") == slurp("fig2a_det2.csv"));
  std::remove("fig2a_det1.csv");
  std::remove("fig2a_det2.csv");
}

TEST_CASE("fig2c: near-unity plateau at low q, zero delay") {
  nlohmann::json cfg = {
      {"q", {{"min", 1e-3}, {"max", 1e3}, {"steps", 5}, {"scale", "log"}}},
      {"T", {{"min", -3.0}, {"max", 3.0}, {"steps", 5}}}};
  sfg::figures::fig2('c', cfg, "fig2c_test.csv");
  const Csv csv = read_csv("fig2c_test.csv");
  REQUIRE(csv.rows.size() == 25);
  bool found = false;
  for (const auto& row : csv.rows) {
    const double q = std::stod(row[0]);
    const double T = std::stod(row[1]);
    if (std::abs(q - 1e-3) < 1e-9 && std::abs(T) < 1e-12) {
      CHECK(std::stod(row[3]) >= 0.999);
      CHECK(row[4] == "ok");
      found = true;
    }
  }
  CHECK(found);
  std::remove("fig2c_test.csv");
}

TEST_CASE("fig2d: fidelity floor along the zero-delay row") {
  nlohmann::json cfg = {
      {"q", {{"min", 1e-3}, {"max", 1e3}, {"steps", 4}, {"scale", "log"}}},
      {"T", {{"min", -1.0}, {"max", 1.0}, {"steps", 3}}}};
  sfg::figures::fig2('d', cfg, "fig2d_test.csv");
  const Csv csv = read_csv("fig2d_test.csv");
  REQUIRE(csv.rows.size() == 12);
  for (const auto& row : csv.rows) {
    const double T = std::stod(row[1]);
    const double fid = std::stod(row[3]);
    CHECK(fid <= 1.0 + 1e-12);
    if (std::abs(T) < 1e-12) CHECK(fid >= 0.95);
  }
  std::remove("fig2d_test.csv");
}

TEST_CASE("fig3a: the efficiency ceiling is chirp-independent") {
  nlohmann::json cfg = {{"chirps", {1.0, 5.0, 100.0}},
                        {"p_max", 6.0},
                        {"steps", 121}};
  sfg::figures::fig3('a', cfg, "fig3a_test.csv");
  const Csv csv = read_csv("fig3a_test.csv");
  REQUIRE(csv.rows.size() == 3 * 121);
  std::map<std::string, double> best;
  for (const auto& row : csv.rows) {
    best[row[0]] = std::max(best[row[0]], std::stod(row[3]));
  }
  REQUIRE(best.size() == 3);
  for (const auto& [chirp, peak] : best) {
    CHECK(peak == doctest::Approx(0.889).epsilon(2e-3));
  }
  // identical ceilings across chirps
  const double ref = best.begin()->second;
  for (const auto& [chirp, peak] : best) CHECK(peak == doctest::Approx(ref).epsilon(1e-12));
  std::remove("fig3a_test.csv");
}

TEST_CASE("fig3b: accessibility mask and low-q limit") {
  nlohmann::json cfg = {
      {"q0", {{"min", 1e-2}, {"max", 1e2}, {"steps", 5}, {"scale", "log"}}},
      {"q", {{"min", 1e-2}, {"max", 1e2}, {"steps", 5}, {"scale", "log"}}},
      {"n_a", 2048},
      {"n_h", 64}};
  sfg::figures::fig3('b', cfg, "fig3b_test.csv");
  const Csv csv = read_csv("fig3b_test.csv");
  REQUIRE(csv.rows.size() == 25);
  int masked = 0;
  for (const auto& row : csv.rows) {
    const double q0 = std::stod(row[0]);
    const double q = std::stod(row[1]);
    if (row[4] == "inaccessible") {
      ++masked;
      CHECK(!sfg::figures::compression_accessible(q0, q));
      continue;
    }
    const double ratio = std::stod(row[3]);
    CHECK(std::isfinite(ratio));
    if (q0 == q) CHECK(std::stod(row[2]) == 0.0);  // diagonal: zero chirp
    if (q <= 0.011 && q0 <= 0.011) CHECK(ratio == doctest::Approx(1.0).epsilon(0.02));
  }
  CHECK(masked > 0);
  std::remove("fig3b_test.csv");
}

TEST_CASE("fig4: low-q curve sits on the identity line") {
  nlohmann::json cfg = {{"q_values", {1e-3, 10.0}},
                        {"S", {{"min", 0.1}, {"max", 100.0}, {"steps", 7},
                               {"scale", "log"}}}};
  sfg::figures::fig4(cfg, "fig4_test.csv");
  const Csv csv = read_csv("fig4_test.csv");
  REQUIRE(csv.rows.size() == 14);
  for (const auto& row : csv.rows) {
    const double q = std::stod(row[0]);
    const double rin = std::stod(row[3]);
    const double rout = std::stod(row[4]);
    CHECK(rout <= rin + 1e-9);  // never above the input entanglement
    if (q < 0.01) CHECK(std::abs(rout - rin) <= 1e-3);
  }
  std::remove("fig4_test.csv");
}

TEST_CASE("sweep config validation") {
  using sfg::sweep::parse_sweep_config;
  nlohmann::json good = {
      {"quantity", "efficiency"},
      {"axes", {{{"name", "p"}, {"min", 0.0}, {"max", 4.0}, {"steps", 9}}}},
      {"fixed", {{"q", 1.0}, {"T", 0.0}}},
      {"output_path", "sweep_test.csv"}};
  const auto cfg = parse_sweep_config(good);
  CHECK(cfg.axes.size() == 1);

  nlohmann::json bad_steps = good;
  bad_steps["axes"][0]["steps"] = 1;
  CHECK_THROWS_AS(parse_sweep_config(bad_steps), sfg::invalid_parameter);

  nlohmann::json missing_param = good;
  missing_param["fixed"] = {{"q", 1.0}};
  CHECK_THROWS_AS(parse_sweep_config(missing_param), sfg::invalid_parameter);

  nlohmann::json bad_quantity = good;
  bad_quantity["quantity"] = "nonsense";
  CHECK_THROWS_AS(parse_sweep_config(bad_quantity), sfg::invalid_parameter);
}

TEST_CASE("sweep engine writes the expected table") {
  nlohmann::json j = {
      {"quantity", "efficiency"},
      {"axes", {{{"name", "p"}, {"min", 0.0}, {"max", 4.0}, {"steps", 17}}}},
      {"fixed", {{"q", 1.0}, {"T", 0.0}}},
      {"output_path", "sweep_test.csv"}};
  sfg::sweep::run_sweep(sfg::sweep::parse_sweep_config(j));
  const Csv csv = read_csv("sweep_test.csv");
  CHECK(csv.rows.size() == 17);
  // p = 2 row carries the frozen efficiency value
  for (const auto& row : csv.rows)
    if (std::abs(std::stod(row[0]) - 2.0) < 1e-12)
      CHECK(std::stod(row[1]) == doctest::Approx(0.5355152058).epsilon(1e-9));
  std::remove("sweep_test.csv");
}

TEST_CASE("CLI binary: design subcommands and error handling") {
  CHECK(run_cli("design lens --a1 10 --a2 -10 --sigma2 1 > cli_lens.json") ==
        0);
  {
    std::ifstream in("cli_lens.json");
    nlohmann::json j;
    in >> j;
    CHECK(j.at("A3").get<double>() == doctest::Approx(-16010.0).epsilon(1e-9));
    CHECK(j.at("magnification").get<double>() ==
          doctest::Approx(10.0 / 16010.0).epsilon(1e-9));
  }
  std::remove("cli_lens.json");

  CHECK(run_cli("design t2f --a2 -25 --sigma2 1 > cli_t2f.json") == 0);
  {
    std::ifstream in("cli_t2f.json");
    nlohmann::json j;
    in >> j;
    CHECK(j.at("A1").get<double>() ==
          doctest::Approx(10001.0 / 400.0).epsilon(1e-12));
    CHECK(j.at("large_chirp_limit").get<bool>());
  }
  std::remove("cli_t2f.json");

  CHECK(run_cli("design compress --sigma1 1 --sigma2 1 --chirp 5 "
                "> cli_comp.json") == 0);
  {
    std::ifstream in("cli_comp.json");
    nlohmann::json j;
    in >> j;
    CHECK(j.at("sigma3_first_order").get<double>() ==
          doctest::Approx(std::sqrt(2.0 / 401.0)).epsilon(1e-12));
  }
  std::remove("cli_comp.json");

  // afocal lens reports an error and a nonzero exit
  CHECK(run_cli("design lens --a1 0 --a2 -10 --sigma2 1 2> /dev/null") != 0);
  // unknown subcommand
  CHECK(run_cli("frobnicate 2> /dev/null") != 0);
}

TEST_CASE("CLI binary: waveform snapshot from JSON records") {
  {
    std::ofstream p("cli_photon.json");
    p << R"({"sigma1": 1.0, "sigma_h": 1.0, "S": 1e9, "A1": 0.0})";
    std::ofstream e("cli_escort.json");
    e << R"({"sigma2": 1.0, "A2": 0.0, "tau": 0.0})";
  }
  CHECK(run_cli("waveform --photon cli_photon.json --escort cli_escort.json "
                "--gamma 1.0 --mode upconverted --na 128 --nh 64 "
                "--out cli_wave.csv > /dev/null") == 0);
  std::ifstream in("cli_wave.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# domain=time", 0) == 0);
  int rows = 0;
  double peak = 0.0;
  while (std::getline(in, line)) {
    if (line[0] == '#' || line[0] == 'a') continue;
    ++rows;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    peak = std::max(peak, std::hypot(vals[2], vals[3]));
  }
  CHECK(rows == 128 * 64);
  // peak of |f_i| sin(x(t)): maximize u sin(x0 u) over the envelope u
  const double x0 = std::sqrt(2.0 * M_PI) * std::pow(2.0 / M_PI, 0.25);
  double best = 0.0;
  for (double u = 0.0; u <= 1.0; u += 1e-6)
    best = std::max(best, u * std::sin(x0 * u));
  const double expected = std::sqrt(2.0 / M_PI) * best;
  CHECK(peak == doctest::Approx(expected).epsilon(1e-3));
  std::remove("cli_wave.csv");
  std::remove("cli_photon.json");
  std::remove("cli_escort.json");

  // bad mode: nonzero exit
  CHECK(run_cli("waveform --mode nonsense --out never.csv 2> /dev/null") != 0);
}

TEST_CASE("CLI binary: fig2a and sweep round trip") {
  {
    std::ofstream cfg("cli_fig2a_cfg.json");
    cfg << R"({"p": {"min": 0.0, "max": 4.0, "steps": 9},
               "q_values": [1.0]})";
  }
  CHECK(run_cli("fig2 --panel a --out cli_fig2a.csv --config "
                "cli_fig2a_cfg.json > /dev/null") == 0);
  const Csv csv = read_csv("cli_fig2a.csv");
  CHECK(csv.rows.size() == 9);
  std::remove("cli_fig2a.csv");
  std::remove("cli_fig2a_cfg.json");

  {
    std::ofstream cfg("cli_sweep_cfg.json");
    cfg << R"({"quantity": "efficiency",
               "axes": [{"name": "p", "min": 0.0, "max": 4.0, "steps": 5}],
               "fixed": {"q": 1.0, "T": 0.0},
               "output_path": "cli_sweep.csv"})";
  }
  CHECK(run_cli("sweep --config cli_sweep_cfg.json > /dev/null") == 0);
  const Csv swept = read_csv("cli_sweep.csv");
  CHECK(swept.rows.size() == 5);
  std::remove("cli_sweep.csv");
  std::remove("cli_sweep_cfg.json");

  // invalid sweep config: nonzero exit, stderr message
  {
    std::ofstream cfg("cli_bad_cfg.json");
    cfg << R"({"quantity": "efficiency",
               "axes": [{"name": "p", "min": 0.0, "max": 4.0, "steps": 1}],
               "fixed": {"q": 1.0, "T": 0.0},
               "output_path": "never.csv"})";
  }
  CHECK(run_cli("sweep --config cli_bad_cfg.json 2> /dev/null") != 0);
  std::remove("cli_bad_cfg.json");
}
