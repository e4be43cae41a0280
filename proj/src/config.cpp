#include "sfem/config.hpp"

#include <fstream>
#include <sstream>

#include "sfem/cases.hpp"

namespace sfem {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Parser {
  std::string path;
  int line = 0;

  [[noreturn]] void error(const std::string& msg) const {
    fail(path + ":" + std::to_string(line) + ": " + msg);
  }

  std::vector<double> doubles(const std::string& v) const {
    std::istringstream is(v);
    std::vector<double> out;
    double x;
    while (is >> x) out.push_back(x);
    std::string rest;
    if (is.clear(), is >> rest) error("expected numbers, got '" + v + "'");
    if (out.empty()) error("expected at least one number");
    return out;
  }

  std::vector<int> ints(const std::string& v) const {
    std::vector<int> out;
    for (double d : doubles(v)) {
      if (d != static_cast<int>(d)) error("expected integers, got '" + v + "'");
      out.push_back(static_cast<int>(d));
    }
    return out;
  }

  bool boolean(const std::string& v) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    error("expected a boolean, got '" + v + "'");
  }
};

}  // namespace

SolveConfig parse_solve_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config: cannot open '" + path + "'");

  SolveConfig cfg;
  Parser p{path, 0};
  std::string raw;
  bool saw_version = false;
  while (std::getline(in, raw)) {
    ++p.line;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) p.error("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) p.error("empty key");

    if (key == "version") {
      cfg.version = p.ints(value).at(0);
      if (cfg.version != 1) p.error("unsupported config version " + std::to_string(cfg.version));
      saw_version = true;
    } else if (key == "dimension") {
      cfg.dimension = p.ints(value).at(0);
    } else if (key == "lengths") {
      cfg.lengths = p.doubles(value);
    } else if (key == "elements") {
      cfg.elements = p.ints(value);
    } else if (key == "orders") {
      cfg.orders = p.ints(value);
    } else if (key == "alpha") {
      cfg.shift = p.doubles(value).at(0);
    } else if (key == "case") {
      cfg.case_name = value;
    } else if (key == "algorithm") {
      if (value != "a" && value != "b") p.error("algorithm must be 'a' or 'b'");
      cfg.algorithm = value[0];
    } else if (key == "threads") {
      cfg.threads = p.ints(value).at(0);
    } else if (key == "precision") {
      if (value == "double")
        cfg.precision = Precision::Double;
      else if (value == "extended")
        cfg.precision = Precision::Extended;
      else
        p.error("precision must be 'double' or 'extended'");
    } else if (key == "table_cache") {
      cfg.table_cache = value;
    } else if (key == "write_tables") {
      cfg.write_tables = p.boolean(value);
    } else if (key == "solution_out") {
      cfg.solution_out = value;
    } else if (key == "report_out") {
      cfg.report_out = value;
    } else if (key == "residual") {
      cfg.residual = p.boolean(value);
    } else {
      p.error("unknown key '" + key + "'");
    }
  }
  (void)saw_version;

  p.line = 0;
  if (cfg.dimension < 1) fail(path + ": missing or invalid 'dimension'");
  if (cfg.case_name.empty()) fail(path + ": missing 'case'");
  if (cfg.elements.empty()) fail(path + ": missing 'elements'");
  if (cfg.orders.empty()) fail(path + ": missing 'orders'");
  return cfg;
}

ProblemSpec problem_from_config(const SolveConfig& cfg) {
  const ManufacturedCase& c = manufactured_case(cfg.case_name);
  if (c.dimension != cfg.dimension)
    fail("config: case '" + cfg.case_name + "' is " + std::to_string(c.dimension) +
         "-dimensional but dimension = " + std::to_string(cfg.dimension));

  const auto broadcast = [&](auto list, const char* what) {
    if (static_cast<int>(list.size()) == 1) list.assign(cfg.dimension, list[0]);
    if (static_cast<int>(list.size()) != cfg.dimension)
      fail("config: '" + std::string(what) + "' needs 1 or " + std::to_string(cfg.dimension) +
           " entries");
    return list;
  };
  std::vector<double> lengths =
      cfg.lengths.empty() ? std::vector<double>(cfg.dimension, 1.0) : broadcast(cfg.lengths, "lengths");
  return make_problem(c, cfg.shift, broadcast(cfg.elements, "elements"),
                      broadcast(cfg.orders, "orders"), std::move(lengths));
}

}  // namespace sfem
