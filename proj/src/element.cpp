#include "sfem/element.hpp"

namespace sfem {

AssumptionReport verify_assumption_a(int n, double separation_tol, Precision prec) {
  require(n >= 2, "verify_assumption_a: order must be at least 2");
  require(n <= kMaxOrder, "verify_assumption_a: order exceeds supported maximum");
  if (prec == Precision::Extended) return detail::assumption_report_extended(n, separation_tol);
  return detail::assumption_report_impl<double>(n, separation_tol, n > kMaxOrderDouble);
}

}  // namespace sfem
