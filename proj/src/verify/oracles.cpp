#include "feller/verify/oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "feller/error.hpp"

namespace feller::oracle {

namespace {

using Real50 = boost::multiprecision::cpp_bin_float_50;

// Enumerates the remaining parts of a weak composition and tallies the
// number of nonzero parts.
void enumerate(int remaining, int parts_left, int nonzero,
               std::vector<std::uint64_t>& counts) {
  if (parts_left == 1) {
    ++counts[static_cast<std::size_t>(nonzero + (remaining > 0 ? 1 : 0))];
    return;
  }
  for (int part = 0; part <= remaining; ++part) {
    enumerate(remaining - part, parts_left - 1, nonzero + (part > 0 ? 1 : 0),
              counts);
  }
}

}  // namespace

std::vector<double> polya_aeppli_by_pgf(double nu, double p, int k_max,
                                        int points) {
  detail::require(k_max >= 0 && points > k_max, "polya_aeppli_by_pgf: bad sizes");
  using Complex = std::complex<double>;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Complex> pgf(static_cast<std::size_t>(points));
  for (int m = 0; m < points; ++m) {
    const Complex z = std::polar(1.0, two_pi * m / points);
    const Complex g = (1.0 - p) * z / (1.0 - p * z);
    pgf[static_cast<std::size_t>(m)] = std::exp(nu * (g - 1.0));
  }
  std::vector<double> out(static_cast<std::size_t>(k_max + 1));
  for (int k = 0; k <= k_max; ++k) {
    Complex sum = 0.0;
    for (int m = 0; m < points; ++m) {
      // Reduce the phase index first so the angle stays in [0, 2 pi).
      const int phase = static_cast<int>((static_cast<long long>(k) * m) % points);
      sum += pgf[static_cast<std::size_t>(m)] * std::polar(1.0, -two_pi * phase / points);
    }
    out[static_cast<std::size_t>(k)] = sum.real() / points;
  }
  return out;
}

std::vector<std::uint64_t> composition_counts(int n, int k) {
  detail::require(n >= 0 && k >= 1, "composition_counts: require n >= 0, k >= 1");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n + 1), 0);
  enumerate(n, k, 0, counts);
  return counts;
}

double kummer_m_multiprecision(double a, double b, double z) {
  const Real50 ra = a;
  const Real50 rb = b;
  const Real50 rz = z;
  Real50 term = 1;
  Real50 sum = 1;
  const Real50 tiny = Real50(1e-40);
  for (int i = 0; i < 100000; ++i) {
    term *= (ra + i) / (rb + i) * rz / (i + 1);
    sum += term;
    if (abs(term) < tiny * abs(sum) && Real50(i) > rz) break;
  }
  return static_cast<double>(sum);
}

double log_rising_factorial_multiprecision(double a, std::int64_t n) {
  Real50 product = 1;
  for (std::int64_t i = 0; i < n; ++i) product *= Real50(a) + i;
  return static_cast<double>(log(product));
}

FellerMoments feller_moments(double t, double alpha, double x0) {
  // psi(phi) = phi x0 e^{alpha t} / (1 + phi beta):
  // psi'(0) = x0 e^{alpha t}, psi''(0) = -2 x0 e^{alpha t} beta.
  const double growth = std::exp(alpha * t);
  const double b = alpha == 0.0 ? t / 2.0 : (growth - 1.0) / (2.0 * alpha);
  return {x0 * growth, 2.0 * x0 * growth * b};
}

}  // namespace feller::oracle
