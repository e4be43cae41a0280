// Command-line front end: spectral reports, solves, convergence and timing
// tables, self-verification. CSV on request, one-line summaries on stdout.
//
// Exit codes: 0 success, 1 usage/config error, 2 verification failure,
// 3 runtime or solver failure.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "sfem/cases.hpp"
#include "sfem/config.hpp"
#include "sfem/eigenbasis.hpp"
#include "sfem/oracle.hpp"
#include "sfem/poisson.hpp"
#include "sfem/verify.hpp"

namespace {

using namespace sfem;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot open '" + path + "' for writing");
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_spectrum(int order, int elements, const std::string& out_path, const std::string& save_table_path,
                 const std::string& load_table_path, bool extended, double separation_tol) {
  const Precision prec = extended ? Precision::Extended : Precision::Double;
  SpectralTable1D table;
  if (!load_table_path.empty())
    table = load_table(load_table_path, order, elements);
  else if (!save_table_path.empty())
    table = build_and_save_table(order, elements, save_table_path, prec);
  else
    table = build_spectral_table(order, elements, prec);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  *os << "record,k,l,value\n";
  for (int k = 1; k < elements; ++k) *os << "theta," << k << ",," << num(table.theta[k - 1]) << "\n";
  for (int l = 1; l < order; ++l)
    *os << "lambda_interior,0," << l << "," << num(table.interior.values[l - 1]) << "\n";
  for (int k = 1; k < elements; ++k)
    for (int l = 1; l <= order; ++l) {
      *os << "lambda," << k << "," << l << "," << num(table.values[table.pair_index(k, l)]) << "\n";
      *os << "norm_sq," << k << "," << l << "," << num(table.norm_sq[table.pair_index(k, l)]) << "\n";
    }

  if (order >= 2) {
    const AssumptionReport rep = verify_assumption_a(order, separation_tol, prec);
    *os << "min_gap_full,,," << num(rep.min_gap_full) << "\n";
    *os << "min_gap_interior,,," << num(rep.min_gap_interior) << "\n";
    *os << "min_cross_distance,,," << num(rep.min_cross_distance) << "\n";
    *os << "delta_full,,," << num(rep.delta_full) << "\n";
    *os << "delta_interior,,," << num(rep.delta_interior) << "\n";
    *os << "assumption_a_pass,,," << (rep.pass ? 1 : 0) << "\n";

    const ElementMatrices em = table.element;
    const auto cond = [](const SmallMat<double>& m) {
      std::vector<double> vals;
      SmallMat<double> vecs;
      jacobi_eigensymm(m, vals, vecs);
      std::sort(vals.begin(), vals.end());
      return vals.back() / vals.front();
    };
    *os << "cond_interior_stiffness,,," << num(cond(em.stiff_blocks.interior)) << "\n";
    *os << "cond_interior_mass,,," << num(cond(em.mass_blocks.interior)) << "\n";
  }
  if (order >= 2 && table.interior.order >= 2)
    *os << "parity_alternating,,," << (table.interior.parity_alternating ? 1 : 0) << "\n";
  return 0;
}

int cmd_solve(const std::string& config_path) {
  SolveConfig cfg;
  try {
    cfg = parse_solve_config(config_path);
    if (cfg.algorithm == 'b' && cfg.dimension < 2)
      fail("config: algorithm 'b' needs dimension >= 2");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const ProblemSpec spec = problem_from_config(cfg);
  TableSet tables(cfg.precision, cfg.table_cache, cfg.write_tables);
  SolveOptions opt;
  opt.algorithm = cfg.algorithm == 'a' ? Algorithm::FullDiagonalization
                                       : Algorithm::PartialDiagonalization;
  opt.threads = cfg.threads;
  opt.compute_residual = cfg.residual;
  opt.table_precision = cfg.precision;
  opt.tables = &tables;

  const SolveReport report = solve(spec, opt);

  std::ostringstream line;
  line << "case=" << cfg.case_name << " algorithm=" << cfg.algorithm
       << " seconds_load=" << report.seconds_load << " seconds_solve=" << report.seconds_solve;
  if (report.error_uniform) line << " error_uniform=" << num(*report.error_uniform);
  if (report.residual_rel) line << " residual_rel=" << num(*report.residual_rel);
  std::cout << line.str() << "\n";

  if (!cfg.solution_out.empty()) write_grid_csv(report.solution, cfg.solution_out);
  if (!cfg.report_out.empty()) {
    auto out = open_out(cfg.report_out);
    out << "case,algorithm,dimension,orders,elements,alpha,seconds_load,seconds_solve,error_uniform,"
           "residual_rel\n";
    out << cfg.case_name << "," << cfg.algorithm << "," << cfg.dimension << ",";
    for (int i = 0; i < spec.dimension; ++i) out << (i ? " " : "") << spec.orders[i];
    out << ",";
    for (int i = 0; i < spec.dimension; ++i) out << (i ? " " : "") << spec.elements[i];
    out << "," << num(spec.shift) << "," << num(report.seconds_load) << ","
        << num(report.seconds_solve) << ","
        << (report.error_uniform ? num(*report.error_uniform) : "") << ","
        << (report.residual_rel ? num(*report.residual_rel) : "") << "\n";
  }
  return 0;
}

int cmd_convergence(const std::string& case_name, std::vector<int> orders, std::vector<int> elements,
                    char algorithm, double alpha, const std::string& out_path, bool extended,
                    int threads) {
  const ManufacturedCase& c = manufactured_case(case_name);
  require(c.exact != nullptr, "convergence: case '" + case_name + "' has no exact solution");
  std::sort(elements.begin(), elements.end());

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  *os << "order,elements,error,ratio\n";

  TableSet tables(extended ? Precision::Extended : Precision::Double);
  for (int n : orders) {
    double prev_error = 0;
    bool have_prev = false;
    for (int K : elements) {
      ProblemSpec spec = make_problem(c, alpha, std::vector<int>(c.dimension, K),
                                      std::vector<int>(c.dimension, n));
      SolveOptions opt;
      opt.algorithm =
          algorithm == 'a' ? Algorithm::FullDiagonalization : Algorithm::PartialDiagonalization;
      opt.tables = &tables;
      opt.threads = threads;
      const SolveReport rep = solve(spec, opt);
      const double err = rep.error_uniform.value();
      *os << n << "," << K << "," << num(err);
      if (have_prev && err > 0)
        *os << "," << num(prev_error / err);
      else
        *os << ",";
      *os << "\n";
      os->flush();
      prev_error = err;
      have_prev = true;
    }
  }
  return 0;
}

int cmd_bench(int dim, std::vector<int> orders, std::vector<int> elements, char algorithm, int reps,
              const std::string& out_path, int threads) {
  require(dim >= 1 && dim <= 3, "bench: dimension must be 1, 2 or 3");
  std::sort(elements.begin(), elements.end());

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  *os << "dimension,algorithm,order,elements,unknowns,median_seconds,ratio\n";

  const ManufacturedCase& c = manufactured_case("constant" + std::to_string(dim) + "d");
  TableSet tables;
  for (int n : orders) {
    double prev = 0;
    bool have_prev = false;
    for (int K : elements) {
      ProblemSpec spec =
          make_problem(c, 1.0, std::vector<int>(dim, K), std::vector<int>(dim, n));
      SolveOptions opt;
      opt.algorithm =
          algorithm == 'a' ? Algorithm::FullDiagonalization : Algorithm::PartialDiagonalization;
      opt.tables = &tables;
      opt.threads = threads;
      // Load averaging and table construction stay outside the timing.
      const GridFunctionND load = fem_load_average(spec);
      std::vector<double> times;
      for (int r = 0; r < reps; ++r)
        times.push_back(solve_with_load(spec, load, tables, opt).seconds_solve);
      const double med = median(times);
      std::int64_t unknowns = 1;
      for (int i = 0; i < dim; ++i) unknowns *= static_cast<std::int64_t>(n) * K - 1;
      *os << dim << "," << algorithm << "," << n << "," << K << "," << unknowns << "," << num(med);
      if (have_prev && prev > 0)
        *os << "," << num(med / prev);
      else
        *os << ",";
      *os << "\n";
      os->flush();
      prev = med;
      have_prev = true;
    }
  }
  return 0;
}

int cmd_verify(const std::string& level, const std::string& table_path, int order, int elements) {
  std::vector<verify::CheckResult> results;
  if (!table_path.empty()) {
    results = verify::check_table_file(table_path, order, elements);
  } else {
    results = verify::run_suite(level == "full" ? verify::Level::Full : verify::Level::Quick);
  }
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.detail << ")\n";
    all = all && r.pass;
  }
  std::cout << (all ? "verification passed" : "verification FAILED") << "\n";
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast tensor-product high-order FEM solver for -Lap(u)+alpha*u=f on boxes"};
  app.require_subcommand(1);

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "Eigenvalue report and table cache handling");
  int sp_n = 0, sp_k = 0;
  std::string sp_out, sp_save, sp_load;
  bool sp_ext = false;
  double sp_tol = 1e-13;
  sp->add_option("-n,--order", sp_n, "polynomial order")->required()->check(CLI::PositiveNumber);
  sp->add_option("-K,--elements", sp_k, "elements per axis")->required()->check(CLI::Range(2, 1 << 24));
  sp->add_option("-o,--out", sp_out, "CSV output path (default stdout)");
  sp->add_option("--save-table", sp_save, "write the spectral table cache file");
  sp->add_option("--load-table", sp_load, "load the table from a cache file instead of building");
  sp->add_flag("--extended", sp_ext, "generate eigenpairs in extended precision");
  sp->add_option("--separation-tol", sp_tol, "assumption-(A) separation tolerance");

  // solve
  auto* so = app.add_subcommand("solve", "Solve a problem described by a config file");
  std::string so_config;
  so->add_option("-c,--config", so_config, "key=value config file")->required();

  // convergence
  auto* cv = app.add_subcommand("convergence", "Error table over mesh refinements");
  std::string cv_case = "poisson2d", cv_out;
  std::vector<int> cv_orders{1, 2, 3}, cv_elems{4, 8, 16, 32};
  std::string cv_alg = "a";
  double cv_alpha = 1.0;
  bool cv_ext = false;
  int cv_threads = 0;
  cv->add_option("--case", cv_case, "built-in case name");
  cv->add_option("--orders", cv_orders, "orders to sweep")->delimiter(',');
  cv->add_option("--elements", cv_elems, "element counts to sweep")->delimiter(',');
  cv->add_option("--algorithm", cv_alg, "a or b")->check(CLI::IsMember({"a", "b"}));
  cv->add_option("--alpha", cv_alpha, "zeroth-order coefficient");
  cv->add_option("-o,--out", cv_out, "CSV output path (default stdout)");
  cv->add_flag("--extended", cv_ext, "extended-precision spectral tables");
  cv->add_option("--threads", cv_threads, "thread cap (0 = default)");

  // bench
  auto* be = app.add_subcommand("bench", "Median solve timings");
  int be_dim = 2, be_reps = 5, be_threads = 0;
  std::vector<int> be_orders{3}, be_elems{64, 128, 256};
  std::string be_alg = "a", be_out;
  be->add_option("--dim", be_dim, "space dimension")->check(CLI::Range(1, 3));
  be->add_option("--orders", be_orders, "orders to time")->delimiter(',');
  be->add_option("--elements", be_elems, "element counts to time")->delimiter(',');
  be->add_option("--algorithm", be_alg, "a or b")->check(CLI::IsMember({"a", "b"}));
  be->add_option("--reps", be_reps, "repetitions per size")->check(CLI::PositiveNumber);
  be->add_option("-o,--out", be_out, "CSV output path (default stdout)");
  be->add_option("--threads", be_threads, "thread cap (0 = default)");

  // verify
  auto* ve = app.add_subcommand("verify", "Run the self-verification suites");
  std::string ve_level = "quick", ve_table;
  int ve_n = 0, ve_k = 0;
  ve->add_option("--level", ve_level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  ve->add_option("--table", ve_table, "validate a table cache file instead");
  ve->add_option("-n,--order", ve_n, "order of the table file");
  ve->add_option("-K,--elements", ve_k, "element count of the table file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (sp->parsed())
      return cmd_spectrum(sp_n, sp_k, sp_out, sp_save, sp_load, sp_ext, sp_tol);
    if (so->parsed()) return cmd_solve(so_config);
    if (cv->parsed())
      return cmd_convergence(cv_case, cv_orders, cv_elems, cv_alg[0], cv_alpha, cv_out, cv_ext,
                             cv_threads);
    if (be->parsed()) return cmd_bench(be_dim, be_orders, be_elems, be_alg[0], be_reps, be_out,
                                       be_threads);
    if (ve->parsed()) {
      if (!ve_table.empty() && (ve_n <= 0 || ve_k < 2)) {
        std::cerr << "error: --table needs --order and --elements\n";
        return 1;
      }
      return cmd_verify(ve_level, ve_table, ve_n, ve_k);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
