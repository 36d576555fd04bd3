#pragma once

#include <cstdint>
#include <map>

#include <json.hpp>

#include "rrsim/kernels.hpp"
#include "rrsim/simcore.hpp"

namespace rrsim {

// Latency model for the simulated device. The default latencies are
// calibration constants that preserve the qualitative regime
// full >> partial >> context ops; they are not hardware measurements and are
// all overridable from the experiment config file.
struct TimingModel {
  std::uint64_t f_clk_hz = 100'000'000;
  std::map<KernelId, int> cycles_per_pixel = {{KernelId::Gauss1, 10},
                                              {KernelId::Med1, 20},
                                              {KernelId::Med2, 20},
                                              {KernelId::Med3, 20}};
  VirtualTime t_partial_reconfig = VirtualTime::from_ns(30'000'000);
  VirtualTime t_full_reconfig = VirtualTime::from_ns(120'000'000);
  VirtualTime t_setup_fpga = VirtualTime::from_ns(20'000'000);
  VirtualTime t_ctx_save = VirtualTime::from_ns(10'000);
  VirtualTime t_ctx_restore = VirtualTime::from_ns(10'000);
  VirtualTime save_window = VirtualTime::from_ns(1'000);

  // Duration of one work quantum (one image row of one iteration):
  // width * cycles_per_pixel cycles at f_clk, exact in integer nanoseconds.
  VirtualTime quantum(KernelId id, int width) const;

  // Throws std::invalid_argument when a latency is negative or
  // t_full_reconfig does not exceed t_partial_reconfig.
  void validate() const;

  // Reads overrides from a JSON object; keys match the field names
  // (cycles_per_pixel maps kernel names to cycle counts). Unknown timing
  // values are rejected by the experiment config layer, not here.
  void apply_json(const nlohmann::json& obj, const std::string& key);
  static bool is_timing_key(const std::string& key);
};

}  // namespace rrsim
