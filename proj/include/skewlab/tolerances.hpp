#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

/// Numerical thresholds shared by every analysis.
struct Tolerances {
  double rank_rtol = 1e-9;   ///< relative singular-value cutoff
  double skew_atol = 1e-10;  ///< absolute skewness tolerance
  double ode_step = 1e-3;    ///< fixed RK4 step

  void validate() const {
    if (!(rank_rtol > 0.0) || !(skew_atol > 0.0) || !(ode_step > 0.0)) {
      throw std::invalid_argument("tolerances must be strictly positive");
    }
  }
};

/// Minimum ratio between the last kept and first dropped singular value for a
/// dimension decision to count as determinate.
inline constexpr double kMinSpectralGap = 10.0;

/// Raised when a dimension decision falls inside the ambiguous band.
class Indeterminate : public std::runtime_error {
 public:
  Indeterminate(const std::string& what, double gap)
      : std::runtime_error(what + ": indeterminate (singular-value gap " + std::to_string(gap) + ")"),
        gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

}  // namespace skewlab
