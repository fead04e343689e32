#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace augscout {

/// Exact decimal percent with milli-percent (0.001%) resolution.
///
/// Augmentation intensities are decimal values by construction ("13", "12.5"),
/// and the effective-dimension arithmetic must be reproducible bit-for-bit, so
/// they are carried as scaled integers rather than binary floats.
class Percent {
public:
  static constexpr std::int64_t kScale = 1000;  // milli-percent per percent

  constexpr Percent() = default;

  static constexpr Percent from_milli(std::int64_t milli) { return Percent(milli); }
  static constexpr Percent from_int(std::int64_t whole) { return Percent(whole * kScale); }

  /// Parses "13", "12.5", "0.125". At most three decimal places.
  static Percent parse(std::string_view text);

  constexpr std::int64_t milli() const { return milli_; }
  constexpr double value() const { return static_cast<double>(milli_) / kScale; }
  constexpr bool is_integral() const { return milli_ % kScale == 0; }

  /// Decimal rendering with trailing zeros trimmed: "13", "12.5".
  std::string str() const;

  friend constexpr auto operator<=>(const Percent&, const Percent&) = default;

private:
  constexpr explicit Percent(std::int64_t milli) : milli_(milli) {}
  std::int64_t milli_ = 0;
};

}  // namespace augscout
