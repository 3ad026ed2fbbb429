#include "asmkit/kpi.hpp"

#include <algorithm>
#include <cmath>

#include "asmkit/errors.hpp"

namespace asmkit {

double compute_vi(const std::vector<std::array<double, 3>>& voltages) {
  double worst = 0.0;
  for (const std::array<double, 3>& bus : voltages) {
    const double mean = (bus[0] + bus[1] + bus[2]) / 3.0;
    if (mean <= 0.0) {
      throw PreconditionError("non-positive phase-mean voltage");
    }
    for (double v : bus) {
      worst = std::max(worst, std::abs(v - mean) / mean);
    }
  }
  return worst;
}

double compute_spf(double p_ss, double q_ss, SpfMode mode,
                   bool* pure_reactive) {
  if (p_ss == 0.0) {
    if (pure_reactive != nullptr) *pure_reactive = true;
    return 0.0;
  }
  const double ratio = q_ss / p_ss;
  const double angle = mode == SpfMode::kArctan ? std::atan(ratio)
                                                : std::tanh(ratio);
  return std::abs(std::cos(angle));
}

double compute_vispf(double vi, double spf, bool* clamped) {
  const double raw = (1.0 - vi + spf) / 2.0;
  const double value = std::clamp(raw, 0.0, 1.0);
  if (clamped != nullptr && value != raw) *clamped = true;
  return value;
}

}  // namespace asmkit
