#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "asmkit/kpi.hpp"
#include "asmkit/scenario.hpp"

namespace asmkit {

// Desk-scale two-feeder radial distribution model. Each feeder is a chain
// of buses hanging off the substation; voltages come from a linearized
// per-phase drop accumulated along the chain, which keeps every result
// reproducible by hand.

struct FeederBus {
  std::string id;
  double r = 0.001;  // series resistance of the edge feeding this bus (pu)
  double x = 0.001;  // series reactance (pu)
};

struct BatteryConfig {
  std::string id;
  std::string bus;
  double rated_power = 0.05;     // pu
  double capacity = 0.2;         // pu-hours
  double initial_soc = 0.5;      // fraction of capacity
  double peak_threshold = 0.0;   // discharge when substation P above this
  double valley_threshold = 0.0; // charge when substation P below this
};

struct CapacitorConfig {
  std::string id;
  std::string bus;
  double q_injection = 0.02;  // pu, spread over the three phases
};

struct FeederConfig {
  std::vector<FeederBus> feeder1;
  std::vector<FeederBus> feeder2;
  std::vector<BatteryConfig> batteries;
  std::vector<CapacitorConfig> capacitors;
  // Normally open tie between the two chain ends; switch_topology closes
  // it and opens the feeder-2 head, re-parenting feeder 2 onto feeder 1.
  bool has_tie_switch = true;
  double tie_r = 0.002;
  double tie_x = 0.002;
  SpfMode spf_mode = SpfMode::kArctan;
  enum class Aggregation { kMean, kMin };
  Aggregation aggregation = Aggregation::kMean;
};

// Impact handlers understood by the bundled model. Regulator actions from
// the source device taxonomy are representable in a CI but rejected here.
const std::vector<std::string>& feeder_supported_handlers();

class FeederSm : public Sm {
 public:
  explicit FeederSm(FeederConfig config);

  KpiResult evaluate(const Scenario& scenario) const override;
  bool supports_handler(const std::string& handler) const override;
  std::string id() const override { return "builtin-feeder"; }

  const FeederConfig& config() const { return config_; }

 private:
  FeederConfig config_;
};

nlohmann::json feeder_config_to_json(const FeederConfig& config);
FeederConfig feeder_config_from_json(const nlohmann::json& doc);

}  // namespace asmkit
