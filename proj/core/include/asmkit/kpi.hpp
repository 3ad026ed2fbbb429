#pragma once

#include <array>
#include <vector>

namespace asmkit {

enum class SpfMode { kArctan, kTanh };

// Voltage imbalance: worst relative deviation of any phase voltage from its
// bus's phase-mean, over all buses. Voltages must be positive magnitudes.
double compute_vi(const std::vector<std::array<double, 3>>& voltages);

// Substation power factor from net active/reactive power. Default uses the
// standard identity |cos(atan(q/p))|; kTanh keeps the literal
// |cos(tanh(q/p))| variant. p == 0 is defined as 0 (pure reactive flow);
// `pure_reactive`, when given, is set in that case.
double compute_spf(double p_ss, double q_ss, SpfMode mode = SpfMode::kArctan,
                   bool* pure_reactive = nullptr);

// Combined KPI (1 - VI + SPF) / 2, clamped to [0, 1]. `clamped`, when
// given, is set if clamping was needed (VI > 1).
double compute_vispf(double vi, double spf, bool* clamped = nullptr);

}  // namespace asmkit
