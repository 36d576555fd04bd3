#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrsim/image.hpp"

namespace rrsim {

// The four task codes: one Gaussian blur pass, or one/two/three median blur
// passes over the same image.
enum class KernelId { Gauss1, Med1, Med2, Med3 };

inline constexpr std::array<KernelId, 4> kAllKernels = {KernelId::Gauss1, KernelId::Med1,
                                                        KernelId::Med2, KernelId::Med3};

int iterations(KernelId id);
std::string_view kernel_name(KernelId id);
std::optional<KernelId> parse_kernel(std::string_view name);

// Context record capacity: number of integer variables a kernel may nominate
// for checkpointing. Slots are assigned in declaration order: k -> 0,
// row -> 1, col -> 2.
inline constexpr int kContextSlots = 4;

// Saved preemption state for one kernel. `saved[i] == 0` means slot i was
// never checkpointed and a restore falls back to `init_var[i]`. `valid == 0`
// marks a save that was torn by an asynchronous preempt; such a record
// already holds the previously committed checkpoint, so resuming from it
// loses exactly one checkpoint interval.
struct Context {
  std::array<std::int32_t, kContextSlots> var{};
  std::array<std::int32_t, kContextSlots> init_var{};
  std::array<std::int32_t, kContextSlots> incr_var{};
  std::array<std::int32_t, kContextSlots> saved{};
  std::int32_t valid = 1;

  // Bank bookkeeping: which kernel and geometry produced the record. Restore
  // rejects a context from a different kernel or image size.
  KernelId kernel = KernelId::Gauss1;
  std::int32_t width = 0;
  std::int32_t height = 0;

  friend bool operator==(const Context&, const Context&) = default;
};

inline constexpr int kMaxIntArgs = 8;
inline constexpr int kMaxFloatArgs = 8;
inline constexpr int kMaxBufferArgs = 3;

// Shell-compliant uniform kernel signature: user arguments occupy a prefix of
// each slot class, the rest are zero-valued dummies, and a context reference
// is appended for preemption bookkeeping.
struct KernelInterface {
  std::string name;
  std::array<std::string, kMaxIntArgs> int_slots;
  std::array<std::string, kMaxFloatArgs> float_slots;
  std::array<std::string, kMaxBufferArgs> buffer_slots;
  int n_int = 0;
  int n_float = 0;
  int n_buffer = 0;
  bool context_ref = true;
};

// Throws std::invalid_argument when an argument class overflows its slot
// capacity.
KernelInterface register_kernel(const std::string& name, const std::vector<std::string>& int_args,
                                const std::vector<std::string>& float_args,
                                const std::vector<std::string>& buffer_args);

enum class AdvanceStatus { running, finished };

// Committed checkpoint cursor: the next quantum to execute is row `row`
// (1-based) of iteration `k`. Rows normalize at iteration boundaries, so a
// live instance always has 1 <= row <= height; the finished state is
// k == iterations(kernel), row == 1.
struct LoopCursor {
  int k = 0;
  int row = 1;

  friend bool operator==(const LoopCursor&, const LoopCursor&) = default;
  friend auto operator<=>(const LoopCursor&, const LoopCursor&) = default;
};

// A resumable image-filter kernel advancing in row quanta. One quantum is one
// image row of one iteration; a checkpoint commits after every quantum.
//
// Functional instances carry pixel buffers and produce real filter output.
// Timing-only instances track just the cursor arithmetic (pixel content never
// influences the schedule); they exist so desk-scale experiment sweeps do not
// pay for pixel work.
//
// Multi-iteration kernels ping-pong between the output and scratch buffers.
// An iteration's source buffer is immutable while that iteration runs, which
// makes re-running a row after a rollback idempotent.
class KernelInstance {
 public:
  static KernelInstance functional(KernelId id, Image input);
  static KernelInstance timing_only(KernelId id, int width, int height);

  // Executes up to `quanta` row quanta, committing the cursor after each.
  // Calling on a finished instance is a programming error.
  AdvanceStatus advance(int quanta);

  // Snapshot of the committed cursor. With mid_save the returned record
  // simulates a save torn by an asynchronous preempt: valid = 0 and the slots
  // hold the previous committed checkpoint.
  Context save_context(bool mid_save) const;

  // Applies a context snapshot to this instance (honouring saved flags), so
  // the next advance recomputes from the restored cursor. Throws
  // std::runtime_error on a kernel/size mismatch.
  void restore_context(const Context& ctx);

  KernelId kernel() const { return kernel_; }
  int width() const { return width_; }
  int height() const { return height_; }
  bool is_functional() const { return functional_; }

  LoopCursor cursor() const { return cursor_; }
  bool finished() const { return cursor_.k == iterations(kernel_); }
  std::int64_t quanta_done() const {
    return static_cast<std::int64_t>(cursor_.k) * height_ + (cursor_.row - 1);
  }
  std::int64_t total_quanta() const { return static_cast<std::int64_t>(iterations(kernel_)) * height_; }

  const Image& input() const;
  const Image& output() const;

 private:
  KernelInstance(KernelId id, int width, int height, bool functional);

  const Image& source_buffer(int k) const;
  Image& dest_buffer(int k);
  void compute_row(int k, int row);
  LoopCursor prev_cursor() const;

  KernelId kernel_;
  int width_ = 0;
  int height_ = 0;
  bool functional_ = false;
  Image input_;
  Image out_;
  Image scratch_;
  LoopCursor cursor_;
  bool has_checkpoint_ = false;
};

}  // namespace rrsim
