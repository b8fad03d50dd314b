#ifndef FELLER_QUADRATURE_HPP_
#define FELLER_QUADRATURE_HPP_

#include <functional>
#include <utility>

namespace feller {

struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_subdivisions = 4000;
  // Integrable singularity or sharp layer at (lower, upper). A flagged
  // endpoint gets a polynomial grading map that clusters nodes towards it.
  std::pair<bool, bool> singular_endpoints{false, false};
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
};

// Globally adaptive 15-point Gauss-Kronrod quadrature of f over
// [lower, upper]. `upper` may be +infinity, in which case the interval is
// mapped onto [0, 1) by x = lower + u / (1 - u). Nodes never touch the
// endpoints, so f only has to be finite on the open interval.
//
// Throws NumericError (carrying the best estimate and its error bound) when
// the tolerance is not met within spec.max_subdivisions intervals.
QuadratureResult integrate(const std::function<double(double)>& f,
                           double lower, double upper,
                           const QuadratureSpec& spec = {});

// Convenience wrapper returning only the value.
double integral(const std::function<double(double)>& f, double lower,
                double upper, const QuadratureSpec& spec = {});

}  // namespace feller

#endif  // FELLER_QUADRATURE_HPP_
