#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "basiscount/rational.hpp"

namespace basiscount {

/// Nonnegative element weights held exactly, with a floating-point mirror.
class Weights {
 public:
  Weights() = default;

  static Weights ones(std::size_t n) { return Weights(std::vector<mpq_class>(n, mpq_class(1))); }

  static Weights from_rationals(std::vector<mpq_class> values) { return Weights(std::move(values)); }

  static Weights from_doubles(const std::vector<double>& values) {
    std::vector<mpq_class> exact;
    exact.reserve(values.size());
    for (double v : values) exact.push_back(rational_from_double(v));
    return Weights(std::move(exact));
  }

  std::size_t size() const noexcept { return exact_.size(); }
  const std::vector<mpq_class>& exact() const noexcept { return exact_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// log(lambda_i); -infinity for a zero weight.
  double log_value(std::size_t i) const {
    if (sgn(exact_[i]) == 0) return -std::numeric_limits<double>::infinity();
    return log_rational(exact_[i]);
  }

  bool all_ones() const {
    for (const auto& q : exact_)
      if (q != 1) return false;
    return true;
  }

  bool all_integral() const {
    for (const auto& q : exact_)
      if (q.get_den() != 1) return false;
    return true;
  }

 private:
  explicit Weights(std::vector<mpq_class> exact) : exact_(std::move(exact)) {
    values_.reserve(exact_.size());
    for (std::size_t i = 0; i < exact_.size(); ++i) {
      exact_[i].canonicalize();
      if (sgn(exact_[i]) < 0) throw std::invalid_argument("weight " + std::to_string(i) + " is negative");
      values_.push_back(exact_[i].get_d());
    }
  }

  std::vector<mpq_class> exact_;
  std::vector<double> values_;
};

}  // namespace basiscount
