#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <complex>
#include <stdexcept>
#include <string>

namespace betheforge {

using cplx = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<long long>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Invalid input (wrong spin range, malformed spec, out-of-range index).
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure (non-convergence, pole proximity, lost accuracy).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A gl(2) spin, stored doubled so half-integers stay exact.
struct Spin {
  int doubled = 0;

  Spin() = default;
  explicit Spin(int d) : doubled(d) {
    if (d < 0) throw domain_error("Spin: doubled value must be >= 0");
  }

  int dimension() const { return doubled + 1; }
  double value() const { return 0.5 * doubled; }

  auto operator<=>(const Spin&) const = default;

  /// "1/2", "3/2" for odd doubled values, "0", "1", "2" otherwise.
  std::string str() const {
    if (doubled % 2 == 0) return std::to_string(doubled / 2);
    return std::to_string(doubled) + "/2";
  }
};

/// Parses "k/2" or plain integer spin labels.
Spin parse_spin(const std::string& text);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace betheforge
