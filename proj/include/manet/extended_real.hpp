#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace manet {

/// A nonnegative quantity that is either finite or the explicit "infinite"
/// verdict. Arithmetic never produces the sentinel implicitly: an overflowing
/// finite computation is a numeric error, not an infinite value.
class ExtendedReal
{
  public:
    constexpr ExtendedReal() = default;

    static constexpr ExtendedReal finite(double v) { return ExtendedReal(v, false); }
    static constexpr ExtendedReal infinite() { return ExtendedReal(0.0, true); }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }

    double value() const
    {
        if (infinite_)
            throw std::logic_error("value() called on infinite ExtendedReal");
        return value_;
    }

    /// Finite value or +inf, for comparisons and plotting only.
    double as_double() const
    {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

    std::string to_string() const;

    friend constexpr bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

  private:
    constexpr ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}

    double value_ = 0.0;
    bool infinite_ = false;
};

/// exp() of a finite log-value, or Infinite. Throws NumericError if the
/// finite value is not representable.
ExtendedReal exp_extended(const ExtendedReal& log_value);

/// Raised when a numeric routine cannot meet its tolerance or overflows.
class NumericError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Raised for parameters outside a function's mathematical domain.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// Raised when a model combination has no implemented formula or rule.
class UnsupportedModel : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace manet
