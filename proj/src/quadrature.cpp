#include "feller/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "feller/error.hpp"

namespace feller {
namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the embedded 7-point Gauss
// nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod(const F& f, double a, double b, int& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  evaluations += 15;
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f,
                           double lower, double upper,
                           const QuadratureSpec& spec) {
  detail::require(spec.abs_tol > 0.0 && spec.rel_tol > 0.0,
                  "QuadratureSpec: tolerances must be positive");
  detail::require(spec.max_subdivisions >= 1,
                  "QuadratureSpec: max_subdivisions must be >= 1");
  detail::require(std::isfinite(lower), "integrate: lower limit must be finite");
  detail::require(!std::isnan(upper) && upper >= lower,
                  "integrate: require upper >= lower");
  if (upper == lower) return {};

  const bool infinite = std::isinf(upper);
  const bool grade_lo = spec.singular_endpoints.first;
  const bool grade_hi = spec.singular_endpoints.second && !infinite;

  // Compose the optional semi-infinite map with the optional grading map so
  // the adaptive driver always works on a finite interval [lo, hi].
  const double lo = (infinite || grade_lo || grade_hi) ? 0.0 : lower;
  const double hi = (infinite || grade_lo || grade_hi) ? 1.0 : upper;
  const double width = infinite ? 1.0 : upper - lower;

  auto mapped = [&](double v) -> double {
    double u = v;
    double jac = 1.0;
    if (grade_lo && grade_hi) {
      u = v * v * (3.0 - 2.0 * v);
      jac = 6.0 * v * (1.0 - v);
    } else if (grade_lo) {
      u = v * v;
      jac = 2.0 * v;
    } else if (grade_hi) {
      u = 1.0 - (1.0 - v) * (1.0 - v);
      jac = 2.0 * (1.0 - v);
    }
    if (infinite) {
      const double one_minus = 1.0 - u;
      if (one_minus <= 0.0 || jac == 0.0) return 0.0;
      const double x = lower + u / one_minus;
      const double value = f(x);
      return value == 0.0 ? 0.0 : value * jac / (one_minus * one_minus);
    }
    if (grade_lo || grade_hi) {
      if (jac == 0.0) return 0.0;
      return f(lower + width * u) * jac * width;
    }
    return f(u);
  };

  QuadratureResult result;
  std::priority_queue<Panel> panels;
  double total = 0.0;
  double total_error = 0.0;
  // Panels too narrow to split further in floating point are retired here.
  double retired_value = 0.0;
  double retired_error = 0.0;

  const Panel first = gauss_kronrod(mapped, lo, hi, result.evaluations);
  panels.push(first);
  total = first.value;
  total_error = first.error;
  result.subdivisions = 1;

  auto converged = [&] {
    return total_error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  };

  while (!converged()) {
    if (panels.empty()) break;
    if (result.subdivisions >= spec.max_subdivisions) {
      throw NumericError("integrate: tolerance not met at subdivision cap",
                         total, total_error);
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
    if (worst.b - worst.a <= 64.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(scale, 1e-300)) {
      retired_value += worst.value;
      retired_error += worst.error;
      continue;
    }
    const Panel left = gauss_kronrod(mapped, worst.a, mid, result.evaluations);
    const Panel right = gauss_kronrod(mapped, mid, worst.b, result.evaluations);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++result.subdivisions;
  }

  // Re-sum to shed accumulated cancellation in the running totals.
  double value = retired_value;
  double error = retired_error;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  if (!std::isfinite(value)) {
    throw NumericError("integrate: non-finite integrand", value, error);
  }
  result.value = value;
  result.error = error;
  return result;
}

double integral(const std::function<double(double)>& f, double lower,
                double upper, const QuadratureSpec& spec) {
  return integrate(f, lower, upper, spec).value;
}

}  // namespace feller
