#pragma once

#include <cmath>
#include <ostream>

#include <Eigen/Core>

namespace mcsafe {

/// First-order scalar carrying a single directional derivative alongside the
/// value. Nest as Dual<Dual<double>> for one extra derivative level.
///
/// Constants lift implicitly from double with zero derivative, so templated
/// expressions can mix Dual terms with plain parameters.
template <class T>
struct Dual {
  T val{};  ///< value
  T dot{};  ///< directional derivative of the value

  Dual() = default;
  Dual(double v) : val(v), dot(0.0) {}  // NOLINT: implicit constant lift
  Dual(T v, T d) : val(std::move(v)), dot(std::move(d)) {}

  Dual& operator+=(const Dual& o) {
    val += o.val;
    dot += o.dot;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    val -= o.val;
    dot -= o.dot;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    dot = dot * o.val + val * o.dot;
    val *= o.val;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    val /= o.val;
    dot = (dot - val * o.dot) / o.val;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return Dual(-a.val, -a.dot); }
  friend Dual operator+(const Dual& a) { return a; }

  // Comparisons act on values only; derivative parts are bookkeeping.
  friend bool operator==(const Dual& a, const Dual& b) { return a.val == b.val; }
  friend bool operator!=(const Dual& a, const Dual& b) { return a.val != b.val; }
  friend bool operator<(const Dual& a, const Dual& b) { return a.val < b.val; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.val <= b.val; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.val > b.val; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.val >= b.val; }

  friend Dual abs(const Dual& a) { return a.val < T(0) ? -a : a; }
  friend Dual sqrt(const Dual& a) {
    using std::sqrt;
    T r = sqrt(a.val);
    return Dual(r, a.dot / (T(2) * r));
  }

  friend std::ostream& operator<<(std::ostream& os, const Dual& a) {
    return os << a.val << "+eps*" << a.dot;
  }
};

/// Innermost value of a (possibly nested) dual scalar.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.val);
}

/// Innermost derivative part (derivative of the value w.r.t. the outermost
/// direction).
template <class T>
T derivative_of(const Dual<T>& x) {
  return x.dot;
}

}  // namespace mcsafe

namespace Eigen {

template <class T>
struct NumTraits<mcsafe::Dual<T>> {
  using Real = mcsafe::Dual<T>;
  using NonInteger = mcsafe::Dual<T>;
  using Nested = mcsafe::Dual<T>;
  using Literal = mcsafe::Dual<T>;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    ReadCost = 2 * NumTraits<double>::ReadCost,
    AddCost = 2 * NumTraits<double>::AddCost,
    MulCost = 3 * NumTraits<double>::MulCost,
    RequireInitialization = 1,
  };

  static Real epsilon() { return Real(NumTraits<double>::epsilon()); }
  static Real dummy_precision() { return Real(NumTraits<double>::dummy_precision()); }
  static Real highest() { return Real(NumTraits<double>::highest()); }
  static Real lowest() { return Real(NumTraits<double>::lowest()); }
  static int digits10() { return NumTraits<double>::digits10(); }
};

// Allow mixed double/Dual coefficients inside Eigen expressions.
template <class T, typename BinaryOp>
struct ScalarBinaryOpTraits<mcsafe::Dual<T>, double, BinaryOp> {
  using ReturnType = mcsafe::Dual<T>;
};
template <class T, typename BinaryOp>
struct ScalarBinaryOpTraits<double, mcsafe::Dual<T>, BinaryOp> {
  using ReturnType = mcsafe::Dual<T>;
};

}  // namespace Eigen
