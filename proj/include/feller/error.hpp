#ifndef FELLER_ERROR_HPP_
#define FELLER_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace feller {

// Raised when an argument lies outside the domain of a formula.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised when an iterative numeric procedure (series, quadrature) fails to
// meet its tolerance. Carries the best estimate reached so callers can still
// report it.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double best_estimate,
               double error_bound)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}

  double best_estimate() const { return best_estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

// A branching simulation exceeded its configured population cap.
class PopulationBlowUp : public std::runtime_error {
 public:
  PopulationBlowUp(const std::string& what, long long generation)
      : std::runtime_error(what), generation_(generation) {}

  long long generation() const { return generation_; }

 private:
  long long generation_;
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail

}  // namespace feller

#endif  // FELLER_ERROR_HPP_
