#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>

namespace sdp {

/// Exact arbitrary-precision rational for sequence positions. Midpoint
/// chains halve intervals indefinitely, so fixed-width arithmetic is out;
/// values serialize as "n" or "n/d" strings.
class Rational {
 public:
  Rational() : v_(0) {}
  explicit Rational(long long n) : v_(n) {}

  static Rational parse(const std::string& s) {
    Rational r;
    r.v_ = boost::multiprecision::cpp_rational(s);
    return r;
  }

  std::string str() const { return v_.str(); }

  Rational midpoint(const Rational& o) const {
    Rational r;
    r.v_ = (v_ + o.v_) / 2;
    return r;
  }

  Rational operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
  }

  Rational plus_one() const {
    Rational r;
    r.v_ = v_ + 1;
    return r;
  }

  Rational minus_one() const {
    Rational r;
    r.v_ = v_ - 1;
    return r;
  }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }
  bool operator>(const Rational& o) const { return v_ > o.v_; }

 private:
  boost::multiprecision::cpp_rational v_;
};

}  // namespace sdp
