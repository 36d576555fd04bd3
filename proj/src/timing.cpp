#include "rrsim/timing.hpp"

#include <stdexcept>

namespace rrsim {

VirtualTime TimingModel::quantum(KernelId id, int width) const {
  auto it = cycles_per_pixel.find(id);
  if (it == cycles_per_pixel.end()) {
    throw std::invalid_argument("timing: no cycles_per_pixel entry for " +
                                std::string(kernel_name(id)));
  }
  const unsigned __int128 cycles =
      static_cast<unsigned __int128>(width) * static_cast<unsigned __int128>(it->second);
  const unsigned __int128 ns = cycles * 1'000'000'000u / f_clk_hz;
  return VirtualTime::from_ns(static_cast<std::int64_t>(ns));
}

void TimingModel::validate() const {
  if (f_clk_hz == 0) {
    throw std::invalid_argument("timing: f_clk must be positive");
  }
  for (const auto& [id, cycles] : cycles_per_pixel) {
    if (cycles <= 0) {
      throw std::invalid_argument("timing: cycles_per_pixel for " + std::string(kernel_name(id)) +
                                  " must be positive");
    }
  }
  for (VirtualTime t : {t_partial_reconfig, t_full_reconfig, t_setup_fpga, t_ctx_save,
                        t_ctx_restore, save_window}) {
    if (t < VirtualTime{}) {
      throw std::invalid_argument("timing: latencies must be non-negative");
    }
  }
  if (!(t_full_reconfig > t_partial_reconfig)) {
    throw std::invalid_argument("timing: t_full_reconfig must exceed t_partial_reconfig");
  }
}

bool TimingModel::is_timing_key(const std::string& key) {
  return key == "f_clk" || key == "cycles_per_pixel" || key == "t_partial_reconfig" ||
         key == "t_full_reconfig" || key == "t_setup_fpga" || key == "t_ctx_save" ||
         key == "t_ctx_restore" || key == "save_window";
}

void TimingModel::apply_json(const nlohmann::json& obj, const std::string& key) {
  const auto& value = obj.at(key);
  if (key == "f_clk") {
    f_clk_hz = value.get<std::uint64_t>();
  } else if (key == "cycles_per_pixel") {
    for (const auto& [name, cycles] : value.items()) {
      auto kid = parse_kernel(name);
      if (!kid) {
        throw std::invalid_argument("timing: unknown kernel '" + name + "' in cycles_per_pixel");
      }
      cycles_per_pixel[*kid] = cycles.get<int>();
    }
  } else if (key == "t_partial_reconfig") {
    t_partial_reconfig = VirtualTime::from_seconds(value.get<double>());
  } else if (key == "t_full_reconfig") {
    t_full_reconfig = VirtualTime::from_seconds(value.get<double>());
  } else if (key == "t_setup_fpga") {
    t_setup_fpga = VirtualTime::from_seconds(value.get<double>());
  } else if (key == "t_ctx_save") {
    t_ctx_save = VirtualTime::from_seconds(value.get<double>());
  } else if (key == "t_ctx_restore") {
    t_ctx_restore = VirtualTime::from_seconds(value.get<double>());
  } else if (key == "save_window") {
    save_window = VirtualTime::from_seconds(value.get<double>());
  } else {
    throw std::invalid_argument("timing: '" + key + "' is not a timing key");
  }
}

}  // namespace rrsim
