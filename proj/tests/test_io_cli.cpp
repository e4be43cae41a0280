#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sfem/config.hpp"
#include "sfem/ndgrid.hpp"
#include "sfem/verify.hpp"

using namespace sfem;

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SFEM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parser handles the documented keys") {
  const std::string path = "/tmp/sfem_test_cfg1.txt";
  write_file(path,
             "# demo\n"
             "version = 1\n"
             "dimension = 2\n"
             "case = poisson2d\n"
             "elements = 8 16\n"
             "orders = 2\n"
             "alpha = 1.5\n"
             "algorithm = b\n"
             "residual = true\n");
  const auto cfg = parse_solve_config(path);
  CHECK(cfg.dimension == 2);
  CHECK(cfg.elements == std::vector<int>{8, 16});
  CHECK(cfg.orders == std::vector<int>{2});
  CHECK(cfg.shift == 1.5);
  CHECK(cfg.algorithm == 'b');
  CHECK(cfg.residual);

  const auto spec = problem_from_config(cfg);
  CHECK(spec.orders == std::vector<int>{2, 2});  // broadcast
  CHECK(spec.elements == std::vector<int>{8, 16});
  std::remove(path.c_str());
}

TEST_CASE("config parse errors carry line numbers") {
  const std::string path = "/tmp/sfem_test_cfg2.txt";
  write_file(path, "dimension = 2\nnonsense line\n");
  try {
    parse_solve_config(path);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }

  write_file(path, "dimension = 2\nalgorithm = c\n");
  CHECK_THROWS_AS(parse_solve_config(path), Error);
  write_file(path, "dimension = 2\nwhatkey = 3\n");
  CHECK_THROWS_AS(parse_solve_config(path), Error);
  CHECK_THROWS_AS(parse_solve_config("/tmp/sfem_missing_config.txt"), Error);
  std::remove(path.c_str());
}

TEST_CASE("grid CSV dump writes one row per stored value") {
  GridFunctionND g = GridFunctionND::zeros({AxisSpec{2, 2}, AxisSpec{2, 1}});
  g.classes[0][1 * 3 + 1] = 0.5;
  const std::string path = "/tmp/sfem_test_grid.csv";
  write_grid_csv(g, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "class,index1,component1,index2,component2,value");
  int rows = 0;
  bool found = false;
  while (std::getline(in, line)) {
    ++rows;
    if (line == "nn,1,0,1,0,0.5") found = true;
  }
  CHECK(rows == g.value_count());
  CHECK(found);
  std::remove(path.c_str());
}

TEST_CASE("cli: usage errors exit with 1") {
  CHECK(run_cli("spectrum") == 1);                       // missing required options
  CHECK(run_cli("spectrum -n 0 -K 4") == 1);             // invalid order
  CHECK(run_cli("nonsense") == 1);                       // unknown subcommand
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli: spectrum writes the report CSV") {
  const std::string out = "/tmp/sfem_test_spectrum.csv";
  CHECK(run_cli("spectrum -n 2 -K 4 -o " + out) == 0);
  std::ifstream in(out);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "record,k,l,value");
  int lambda_rows = 0;
  bool has_delta = false, has_cond = false;
  while (std::getline(in, line)) {
    if (line.rfind("lambda,", 0) == 0 || line.rfind("lambda_interior,", 0) == 0) ++lambda_rows;
    if (line.rfind("delta_interior,", 0) == 0) has_delta = true;
    if (line.rfind("cond_interior_stiffness,", 0) == 0) has_cond = true;
  }
  CHECK(lambda_rows == 7);  // 1 interior + 2*3 frequency eigenvalues
  CHECK(has_delta);
  CHECK(has_cond);
  std::remove(out.c_str());
}

TEST_CASE("cli: solve runs a config and honors failure modes") {
  const std::string cfg = "/tmp/sfem_test_solve_cfg.txt";
  const std::string report = "/tmp/sfem_test_solve_report.csv";
  write_file(cfg,
             "dimension = 2\ncase = poisson2d\nelements = 4\norders = 2\nalpha = 1\n"
             "algorithm = a\nreport_out = " + report + "\n");
  CHECK(run_cli("solve -c " + cfg) == 0);
  std::ifstream in(report);
  REQUIRE(in.good());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row.find("poisson2d,a,2,") == 0);
  std::remove(report.c_str());

  // algorithm b in one dimension is rejected as a usage error
  write_file(cfg, "dimension = 1\ncase = sin1d\nelements = 4\norders = 2\nalgorithm = b\nalpha = 0\n");
  CHECK(run_cli("solve -c " + cfg) == 1);

  CHECK(run_cli("solve -c /tmp/sfem_missing.cfg") == 1);
  std::remove(cfg.c_str());
}

TEST_CASE("cli: verify catches a corrupted table cache") {
  const std::string table = "/tmp/sfem_test_verify_table.txt";
  CHECK(run_cli("spectrum -n 3 -K 4 --save-table " + table + " -o /dev/null") == 0);
  CHECK(run_cli("verify --table " + table + " -n 3 -K 4") == 0);

  // corrupt one eigenvalue (keep the format valid)
  {
    std::ifstream in(table);
    std::vector<std::string> lines;
    std::string l;
    while (std::getline(in, l)) lines.push_back(l);
    std::istringstream rec(lines[3]);
    std::string k, lab;
    double lambda;
    rec >> k >> lab >> lambda;
    std::ostringstream patched;
    patched << k << " " << lab << " " << lambda * 1.5;
    std::string rest;
    std::getline(rec, rest);
    patched << rest;
    lines[3] = patched.str();
    std::ofstream out(table);
    for (const auto& line : lines) out << line << "\n";
  }
  CHECK(run_cli("verify --table " + table + " -n 3 -K 4") == 2);
  std::remove(table.c_str());
}

TEST_CASE("table file invariants pass on a fresh cache") {
  const std::string table = "/tmp/sfem_test_table_ok.txt";
  build_and_save_table(2, 6, table, Precision::Double);
  const auto results = verify::check_table_file(table, 2, 6);
  for (const auto& r : results) {
    CAPTURE(r.name);
    CAPTURE(r.detail);
    CHECK(r.pass);
  }
  std::remove(table.c_str());
}
