#pragma once

#include <compare>
#include <iosfwd>
#include <string>

namespace perilimit {

/// A real number or +infinity.
///
/// Infinity is an explicit marker, never a large sentinel, so absorption is
/// exact: inf + x = inf and c * inf = inf for c > 0. By the measure-theoretic
/// convention 0 * inf = 0. NaN and -inf are rejected at construction.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  ExtendedReal(double value);  // NOLINT: implicit by design of the arithmetic

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }
  [[nodiscard]] constexpr bool is_finite() const { return !infinite_; }

  /// Finite value; throws DomainError when infinite.
  [[nodiscard]] double value() const;
  /// Finite value, or +HUGE_VAL when infinite.
  [[nodiscard]] double to_double() const;

  ExtendedReal& operator+=(const ExtendedReal& other);

  friend ExtendedReal operator+(ExtendedReal lhs, const ExtendedReal& rhs) {
    lhs += rhs;
    return lhs;
  }
  /// Scaling by a real; negative factors are only allowed on finite values.
  friend ExtendedReal operator*(double factor, const ExtendedReal& x);
  friend ExtendedReal operator*(const ExtendedReal& x, double factor) { return factor * x; }

  /// x - y; defined unless y is infinite.
  friend ExtendedReal operator-(const ExtendedReal& x, const ExtendedReal& y);

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a,
                                                     const ExtendedReal& b) {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

  [[nodiscard]] std::string to_string() const;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x);

}  // namespace perilimit
