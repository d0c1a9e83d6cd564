#pragma once

#include <boost/rational.hpp>
#include <optional>
#include <string>

namespace til {

using Rational = boost::rational<long long>;

// Numeric values of type tau. Exact rationals and exact rational multiples
// of pi are kept symbolic so that domain conditions such as "cotangent is
// undefined at pi" can be decided without rounding. Everything that leaves
// this fragment (pi + 1, pi * pi, transcendental results) falls back to
// double.
class Number {
 public:
  enum class Form { Exact, PiMultiple, Real };

  Number() : form_(Form::Exact), rat_(0) {}

  static Number integer(long long n) { return Number(Form::Exact, Rational(n)); }
  static Number exact(Rational r) { return Number(Form::Exact, r); }
  static Number pi(Rational coeff) {
    if (coeff == Rational(0)) return exact(Rational(0));
    return Number(Form::PiMultiple, coeff);
  }
  static Number real(double d);

  Form form() const { return form_; }
  // Valid for Exact and PiMultiple forms.
  const Rational& ratio() const { return rat_; }
  double as_double() const;

  // True for 0, pi, -pi, 2pi, ... (the zeros of sine).
  bool is_integer_multiple_of_pi() const;
  bool is_zero() const;

  std::string show() const;

  bool operator==(const Number& o) const;
  bool operator!=(const Number& o) const { return !(*this == o); }
  // Total order for use as a container key; groups by form first.
  bool operator<(const Number& o) const;

 private:
  Number(Form f, Rational r) : form_(f), rat_(r) {}
  explicit Number(double d) : form_(Form::Real), rat_(0), dbl_(d) {}

  Form form_;
  Rational rat_;
  double dbl_ = 0.0;
};

std::optional<Number> add(const Number& a, const Number& b);
std::optional<Number> subtract(const Number& a, const Number& b);
std::optional<Number> multiply(const Number& a, const Number& b);
// Undefined (nullopt) on division by zero.
std::optional<Number> divide(const Number& a, const Number& b);
// Undefined at every integer multiple of pi, exact values on the quarter
// multiples, double elsewhere.
std::optional<Number> cotangent(const Number& x);

}  // namespace til
