#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace collapse {

// Vector in R^d with runtime dimension.
template <class Real>
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t dim) : c_(dim, Real(0)) {}
  Vec(std::initializer_list<Real> init) : c_(init) {}
  explicit Vec(std::vector<Real> c) : c_(std::move(c)) {}

  std::size_t size() const noexcept { return c_.size(); }
  Real& operator[](std::size_t i) { return c_[i]; }
  const Real& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<Real>& data() const noexcept { return c_; }

  Vec& operator+=(const Vec& o) {
    assert(o.size() == size());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    assert(o.size() == size());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(const Real& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Vec& operator/=(const Real& s) {
    for (auto& x : c_) x /= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator-(Vec a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Vec operator*(Vec a, const Real& s) { return a *= s; }
  friend Vec operator*(const Real& s, Vec a) { return a *= s; }
  friend Vec operator/(Vec a, const Real& s) { return a /= s; }

  template <class To>
  Vec<To> cast() const {
    std::vector<To> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(static_cast<To>(x));
    return Vec<To>(std::move(out));
  }

 private:
  std::vector<Real> c_;
};

template <class Real>
Real dot(const Vec<Real>& a, const Vec<Real>& b) {
  assert(a.size() == b.size());
  Real s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class Real>
Real norm2(const Vec<Real>& a) {
  return dot(a, a);
}

template <class Real>
Real norm(const Vec<Real>& a) {
  using std::sqrt;
  return sqrt(norm2(a));
}

template <class Real>
Real max_abs_diff(const Vec<Real>& a, const Vec<Real>& b) {
  using std::abs;
  Real m(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Real d = abs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

}  // namespace collapse
