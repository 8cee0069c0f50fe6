#include "perilimit/extended_real.hpp"

#include <cmath>
#include <ostream>

#include "perilimit/errors.hpp"
#include "perilimit/format.hpp"

namespace perilimit {

ExtendedReal::ExtendedReal(double value) {
  if (std::isnan(value)) throw DomainError("ExtendedReal: NaN is not an extended real");
  if (std::isinf(value)) {
    if (value < 0) throw DomainError("ExtendedReal: -inf is not representable");
    infinite_ = true;
    return;
  }
  value_ = value;
}

double ExtendedReal::value() const {
  if (infinite_) throw DomainError("ExtendedReal: value() on +inf");
  return value_;
}

double ExtendedReal::to_double() const { return infinite_ ? HUGE_VAL : value_; }

ExtendedReal& ExtendedReal::operator+=(const ExtendedReal& other) {
  if (infinite_ || other.infinite_) {
    infinite_ = true;
    value_ = 0.0;
  } else {
    value_ += other.value_;
  }
  return *this;
}

ExtendedReal operator*(double factor, const ExtendedReal& x) {
  if (std::isnan(factor)) throw DomainError("ExtendedReal: NaN factor");
  if (!x.infinite_) return ExtendedReal(factor * x.value_);
  if (factor < 0) throw DomainError("ExtendedReal: negative multiple of +inf");
  if (factor == 0) return ExtendedReal(0.0);
  return ExtendedReal::infinity();
}

ExtendedReal operator-(const ExtendedReal& x, const ExtendedReal& y) {
  if (y.infinite_) throw DomainError("ExtendedReal: subtracting +inf is undefined");
  if (x.infinite_) return x;
  return ExtendedReal(x.value_ - y.value_);
}

std::string ExtendedReal::to_string() const {
  return infinite_ ? std::string("inf") : format_double(value_);
}

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) { return os << x.to_string(); }

}  // namespace perilimit
