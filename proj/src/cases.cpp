#include "sfem/cases.hpp"

#include <cmath>

namespace sfem {

namespace {

const double kPi = M_PI;

// u = sin(pi x) e^x on [0,1]
double sin1d_u(std::span<const double> x) { return std::sin(kPi * x[0]) * std::exp(x[0]); }
double sin1d_lap(std::span<const double> x) {
  return ((1.0 - kPi * kPi) * std::sin(kPi * x[0]) + 2.0 * kPi * std::cos(kPi * x[0])) * std::exp(x[0]);
}

// u = sin(2 pi x1) sin(3 pi x2) cosh(sqrt(2) x1 - x2) on the unit square
double p2d_u(std::span<const double> x) {
  return std::sin(2 * kPi * x[0]) * std::sin(3 * kPi * x[1]) * std::cosh(std::sqrt(2.0) * x[0] - x[1]);
}
double p2d_lap(std::span<const double> x) {
  const double s1 = std::sin(2 * kPi * x[0]), c1 = std::cos(2 * kPi * x[0]);
  const double s2 = std::sin(3 * kPi * x[1]), c2 = std::cos(3 * kPi * x[1]);
  const double w = std::sqrt(2.0) * x[0] - x[1];
  const double ch = std::cosh(w), sh = std::sinh(w);
  // |grad w|^2 = 3, Laplacian of the sine product = -13 pi^2 times itself
  return (-13.0 * kPi * kPi + 3.0) * s1 * s2 * ch +
         2.0 * sh * (2.0 * std::sqrt(2.0) * kPi * c1 * s2 - 3.0 * kPi * s1 * c2);
}

// u = sin(2 pi x1) sin(3 pi x2) sin(4 pi x3) cosh(sqrt(2) x1 - x2 + x3/sqrt(3))
double p3d_u(std::span<const double> x) {
  const double w = std::sqrt(2.0) * x[0] - x[1] + x[2] / std::sqrt(3.0);
  return std::sin(2 * kPi * x[0]) * std::sin(3 * kPi * x[1]) * std::sin(4 * kPi * x[2]) * std::cosh(w);
}
double p3d_lap(std::span<const double> x) {
  const double s1 = std::sin(2 * kPi * x[0]), c1 = std::cos(2 * kPi * x[0]);
  const double s2 = std::sin(3 * kPi * x[1]), c2 = std::cos(3 * kPi * x[1]);
  const double s3 = std::sin(4 * kPi * x[2]), c3 = std::cos(4 * kPi * x[2]);
  const double w = std::sqrt(2.0) * x[0] - x[1] + x[2] / std::sqrt(3.0);
  const double ch = std::cosh(w), sh = std::sinh(w);
  // |grad w|^2 = 2 + 1 + 1/3, sine product eigenvalue -(4+9+16) pi^2
  return (-29.0 * kPi * kPi + 10.0 / 3.0) * s1 * s2 * s3 * ch +
         2.0 * sh *
             (2.0 * std::sqrt(2.0) * kPi * c1 * s2 * s3 - 3.0 * kPi * s1 * c2 * s3 +
              4.0 * kPi / std::sqrt(3.0) * s1 * s2 * c3);
}

std::vector<ManufacturedCase> build_cases() {
  std::vector<ManufacturedCase> cases;
  cases.push_back({"sin1d", 1, sin1d_u, sin1d_lap});
  cases.push_back({"poisson2d", 2, p2d_u, p2d_lap});
  cases.push_back({"poisson3d", 3, p3d_u, p3d_lap});
  for (int d = 1; d <= 3; ++d)
    cases.push_back({"constant" + std::to_string(d) + "d", d, nullptr, nullptr});
  return cases;
}

const std::vector<ManufacturedCase>& cases() {
  static const std::vector<ManufacturedCase> c = build_cases();
  return c;
}

}  // namespace

const ManufacturedCase& manufactured_case(const std::string& name) {
  for (const auto& c : cases())
    if (c.name == name) return c;
  std::string known;
  for (const auto& c : cases()) known += (known.empty() ? "" : ", ") + c.name;
  fail("unknown case '" + name + "' (known: " + known + ")");
}

std::vector<std::string> manufactured_case_names() {
  std::vector<std::string> names;
  for (const auto& c : cases()) names.push_back(c.name);
  return names;
}

ProblemSpec make_problem(const ManufacturedCase& c, double shift, std::vector<int> elements,
                         std::vector<int> orders, std::vector<double> lengths) {
  ProblemSpec spec;
  spec.dimension = c.dimension;
  spec.elements = std::move(elements);
  spec.orders = std::move(orders);
  spec.lengths = lengths.empty() ? std::vector<double>(c.dimension, 1.0) : std::move(lengths);
  spec.shift = shift;
  if (c.laplacian) {
    const ScalarField u = c.exact, lap = c.laplacian;
    spec.rhs = [u, lap, shift](std::span<const double> x) { return -lap(x) + shift * u(x); };
    spec.exact = u;
  } else {
    spec.rhs = [](std::span<const double>) { return 1.0; };
  }
  return spec;
}

}  // namespace sfem
