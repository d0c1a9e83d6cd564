#include "til/number.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace til {

namespace {

double pi_value() { return 3.14159265358979323846; }

std::string show_rational(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

}  // namespace

Number Number::real(double d) { return Number(d); }

double Number::as_double() const {
  switch (form_) {
    case Form::Exact:
      return boost::rational_cast<double>(rat_);
    case Form::PiMultiple:
      return boost::rational_cast<double>(rat_) * pi_value();
    case Form::Real:
      return dbl_;
  }
  return 0.0;
}

bool Number::is_integer_multiple_of_pi() const {
  if (form_ == Form::Exact) return rat_ == Rational(0);
  if (form_ == Form::PiMultiple) return rat_.denominator() == 1;
  return false;
}

bool Number::is_zero() const {
  if (form_ == Form::Exact) return rat_ == Rational(0);
  if (form_ == Form::Real) return dbl_ == 0.0;
  return false;
}

std::string Number::show() const {
  switch (form_) {
    case Form::Exact:
      return show_rational(rat_);
    case Form::PiMultiple: {
      std::string coeff;
      if (rat_.numerator() == 1) {
        coeff = "pi";
      } else if (rat_.numerator() == -1) {
        coeff = "-pi";
      } else {
        coeff = std::to_string(rat_.numerator()) + "pi";
      }
      if (rat_.denominator() != 1) coeff += "/" + std::to_string(rat_.denominator());
      return coeff;
    }
    case Form::Real: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", dbl_);
      // Keep reals lexically distinct from integer literals.
      if (!std::strpbrk(buf, ".eE")) std::strcat(buf, ".0");
      return buf;
    }
  }
  return "";
}

bool Number::operator==(const Number& o) const {
  if (form_ == o.form_) {
    if (form_ == Form::Real) return dbl_ == o.dbl_;
    return rat_ == o.rat_;
  }
  // Cross-form: exact zero equals real zero etc.; compare numerically,
  // except Exact vs PiMultiple which never coincide (pi is irrational).
  if (form_ != Form::Real && o.form_ != Form::Real) return false;
  return as_double() == o.as_double();
}

bool Number::operator<(const Number& o) const {
  double a = as_double(), b = o.as_double();
  if (a != b) return a < b;
  if (form_ != o.form_) return static_cast<int>(form_) < static_cast<int>(o.form_);
  if (form_ == Form::Real) return false;
  return rat_ < o.rat_;
}

std::optional<Number> add(const Number& a, const Number& b) {
  using F = Number::Form;
  if (a.form() == F::Exact && b.form() == F::Exact)
    return Number::exact(a.ratio() + b.ratio());
  if (a.form() == F::PiMultiple && b.form() == F::PiMultiple)
    return Number::pi(a.ratio() + b.ratio());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Number::real(a.as_double() + b.as_double());
}

std::optional<Number> subtract(const Number& a, const Number& b) {
  using F = Number::Form;
  if (a.form() == F::Exact && b.form() == F::Exact)
    return Number::exact(a.ratio() - b.ratio());
  if (a.form() == F::PiMultiple && b.form() == F::PiMultiple)
    return Number::pi(a.ratio() - b.ratio());
  if (b.is_zero()) return a;
  return Number::real(a.as_double() - b.as_double());
}

std::optional<Number> multiply(const Number& a, const Number& b) {
  using F = Number::Form;
  if (a.form() == F::Exact && b.form() == F::Exact)
    return Number::exact(a.ratio() * b.ratio());
  if (a.form() == F::Exact && b.form() == F::PiMultiple)
    return Number::pi(a.ratio() * b.ratio());
  if (a.form() == F::PiMultiple && b.form() == F::Exact)
    return Number::pi(a.ratio() * b.ratio());
  if (a.is_zero() || b.is_zero()) return Number::integer(0);
  return Number::real(a.as_double() * b.as_double());
}

std::optional<Number> divide(const Number& a, const Number& b) {
  using F = Number::Form;
  if (b.is_zero()) return std::nullopt;
  if (b.form() == F::Exact) {
    if (a.form() == F::Exact) return Number::exact(a.ratio() / b.ratio());
    if (a.form() == F::PiMultiple) return Number::pi(a.ratio() / b.ratio());
  }
  if (a.form() == F::PiMultiple && b.form() == F::PiMultiple)
    return Number::exact(a.ratio() / b.ratio());
  return Number::real(a.as_double() / b.as_double());
}

std::optional<Number> cotangent(const Number& x) {
  if (x.is_integer_multiple_of_pi()) return std::nullopt;
  if (x.form() == Number::Form::PiMultiple) {
    // cot has period pi; reduce the coefficient mod 1 and read off the
    // rational values at the quarter points.
    Rational c = x.ratio();
    long long whole = c.numerator() / c.denominator();
    Rational frac = c - Rational(whole);
    if (frac < Rational(0)) frac += Rational(1);
    if (frac == Rational(1, 4)) return Number::integer(1);
    if (frac == Rational(1, 2)) return Number::integer(0);
    if (frac == Rational(3, 4)) return Number::integer(-1);
  }
  double v = x.as_double();
  double s = std::sin(v);
  if (s == 0.0) return std::nullopt;
  return Number::real(std::cos(v) / s);
}

}  // namespace til
