#include "rrsim/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace rrsim {

int iterations(KernelId id) {
  switch (id) {
    case KernelId::Gauss1:
    case KernelId::Med1:
      return 1;
    case KernelId::Med2:
      return 2;
    case KernelId::Med3:
      return 3;
  }
  throw std::logic_error("iterations: unknown kernel id");
}

std::string_view kernel_name(KernelId id) {
  switch (id) {
    case KernelId::Gauss1:
      return "Gauss1";
    case KernelId::Med1:
      return "Med1";
    case KernelId::Med2:
      return "Med2";
    case KernelId::Med3:
      return "Med3";
  }
  throw std::logic_error("kernel_name: unknown kernel id");
}

std::optional<KernelId> parse_kernel(std::string_view name) {
  for (KernelId id : kAllKernels) {
    if (kernel_name(id) == name) return id;
  }
  return std::nullopt;
}

KernelInterface register_kernel(const std::string& name, const std::vector<std::string>& int_args,
                                const std::vector<std::string>& float_args,
                                const std::vector<std::string>& buffer_args) {
  if (int_args.size() > static_cast<std::size_t>(kMaxIntArgs)) {
    throw std::invalid_argument("register_kernel: " + name + " declares " +
                                std::to_string(int_args.size()) + " int arguments, capacity is " +
                                std::to_string(kMaxIntArgs));
  }
  if (float_args.size() > static_cast<std::size_t>(kMaxFloatArgs)) {
    throw std::invalid_argument("register_kernel: " + name + " declares " +
                                std::to_string(float_args.size()) + " float arguments, capacity is " +
                                std::to_string(kMaxFloatArgs));
  }
  if (buffer_args.size() > static_cast<std::size_t>(kMaxBufferArgs)) {
    throw std::invalid_argument("register_kernel: " + name + " declares " +
                                std::to_string(buffer_args.size()) + " buffer arguments, capacity is " +
                                std::to_string(kMaxBufferArgs));
  }
  KernelInterface iface;
  iface.name = name;
  iface.n_int = static_cast<int>(int_args.size());
  iface.n_float = static_cast<int>(float_args.size());
  iface.n_buffer = static_cast<int>(buffer_args.size());
  std::copy(int_args.begin(), int_args.end(), iface.int_slots.begin());
  std::copy(float_args.begin(), float_args.end(), iface.float_slots.begin());
  std::copy(buffer_args.begin(), buffer_args.end(), iface.buffer_slots.begin());
  return iface;
}

KernelInstance::KernelInstance(KernelId id, int width, int height, bool functional)
    : kernel_(id), width_(width), height_(height), functional_(functional) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("kernel instance needs positive image dimensions");
  }
}

KernelInstance KernelInstance::functional(KernelId id, Image input) {
  KernelInstance inst(id, input.width, input.height, true);
  inst.input_ = std::move(input);
  inst.out_ = Image(inst.width_, inst.height_);
  if (iterations(id) > 1) {
    inst.scratch_ = Image(inst.width_, inst.height_);
  }
  return inst;
}

KernelInstance KernelInstance::timing_only(KernelId id, int width, int height) {
  return KernelInstance(id, width, height, false);
}

const Image& KernelInstance::input() const {
  if (!functional_) throw std::logic_error("timing-only instance has no pixel buffers");
  return input_;
}

const Image& KernelInstance::output() const {
  if (!functional_) throw std::logic_error("timing-only instance has no pixel buffers");
  return out_;
}

const Image& KernelInstance::source_buffer(int k) const {
  if (k == 0) return input_;
  // Destination of the previous iteration.
  return (iterations(kernel_) - k) % 2 == 0 ? out_ : scratch_;
}

Image& KernelInstance::dest_buffer(int k) {
  // The last iteration lands in out_; earlier iterations alternate backwards.
  return (iterations(kernel_) - 1 - k) % 2 == 0 ? out_ : scratch_;
}

void KernelInstance::compute_row(int k, int row) {
  const Image& src = source_buffer(k);
  Image& dst = dest_buffer(k);
  const int r = row - 1;  // cursor rows are 1-based
  if (kernel_ == KernelId::Gauss1) {
    // 3x3 integer mask [1 2 1; 2 4 2; 1 2 1] / 16 with truncating division.
    static constexpr int w[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
    for (int c = 0; c < width_; ++c) {
      std::int64_t acc = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          acc += static_cast<std::int64_t>(w[dr + 1][dc + 1]) * src.clamped(r + dr, c + dc);
        }
      }
      dst.at(r, c) = static_cast<std::int32_t>(acc / 16);
    }
  } else {
    for (int c = 0; c < width_; ++c) {
      std::array<std::int32_t, 9> window;
      int i = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          window[i++] = src.clamped(r + dr, c + dc);
        }
      }
      std::nth_element(window.begin(), window.begin() + 4, window.end());
      dst.at(r, c) = window[4];
    }
  }
}

LoopCursor KernelInstance::prev_cursor() const {
  if (cursor_.row > 1) return {cursor_.k, cursor_.row - 1};
  if (cursor_.k > 0) return {cursor_.k - 1, height_};
  return {0, 1};
}

AdvanceStatus KernelInstance::advance(int quanta) {
  if (finished()) {
    throw std::logic_error("advance: kernel instance already finished");
  }
  for (int q = 0; q < quanta && !finished(); ++q) {
    if (functional_) {
      compute_row(cursor_.k, cursor_.row);
    }
    if (cursor_.row < height_) {
      cursor_.row += 1;
    } else {
      cursor_.k += 1;
      cursor_.row = 1;
    }
    has_checkpoint_ = true;
  }
  return finished() ? AdvanceStatus::finished : AdvanceStatus::running;
}

Context KernelInstance::save_context(bool mid_save) const {
  Context ctx;
  ctx.kernel = kernel_;
  ctx.width = width_;
  ctx.height = height_;
  ctx.init_var = {0, 1, 1, 0};
  ctx.incr_var = {1, 1, 1, 0};
  if (!has_checkpoint_) {
    // Nothing ever committed; a restore falls back to the init values.
    ctx.valid = mid_save ? 0 : 1;
    return ctx;
  }
  const LoopCursor committed = mid_save ? prev_cursor() : cursor_;
  ctx.var[0] = committed.k;
  ctx.var[1] = committed.row;
  ctx.var[2] = 1;  // col commits at row boundaries, i.e. the start of the next row
  ctx.saved = {1, 1, 1, 0};
  ctx.valid = mid_save ? 0 : 1;
  return ctx;
}

void KernelInstance::restore_context(const Context& ctx) {
  if (ctx.kernel != kernel_ || ctx.width != width_ || ctx.height != height_) {
    throw std::runtime_error("restore_context: context mismatch (saved for " +
                             std::string(kernel_name(ctx.kernel)) + " " + std::to_string(ctx.width) +
                             "x" + std::to_string(ctx.height) + ", instance is " +
                             std::string(kernel_name(kernel_)) + " " + std::to_string(width_) + "x" +
                             std::to_string(height_) + ")");
  }
  LoopCursor cur;
  cur.k = ctx.saved[0] ? ctx.var[0] : ctx.init_var[0];
  cur.row = ctx.saved[1] ? ctx.var[1] : ctx.init_var[1];
  const bool live = cur.k >= 0 && cur.k < iterations(kernel_) && cur.row >= 1 && cur.row <= height_;
  const bool done = cur.k == iterations(kernel_) && cur.row == 1;
  if (!live && !done) {
    throw std::runtime_error("restore_context: context mismatch (cursor k=" + std::to_string(cur.k) +
                             " row=" + std::to_string(cur.row) + " out of range)");
  }
  cursor_ = cur;
  has_checkpoint_ = ctx.saved[0] != 0 || ctx.saved[1] != 0 || ctx.saved[2] != 0;
}

}  // namespace rrsim
