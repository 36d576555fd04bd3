#pragma once

#include <cstdint>
#include <utility>

namespace rrsim {

// State of the three-component combined Tausworthe generator (taus88,
// L'Ecuyer 1996). The component words must satisfy s1 > 1, s2 > 7, s3 > 15
// or the recurrences degenerate.
struct TausState {
  std::uint32_t s1 = 0;
  std::uint32_t s2 = 0;
  std::uint32_t s3 = 0;

  friend bool operator==(const TausState&, const TausState&) = default;
};

bool taus_state_valid(const TausState& s);

// Validating constructor for externally supplied words; throws
// std::invalid_argument on a degenerate state.
TausState make_taus_state(std::uint32_t s1, std::uint32_t s2, std::uint32_t s3);

// One step of the taus88 recurrence. Pure: same state in, same (word, state)
// out. Callers are responsible for state validity (enforced at construction).
std::pair<std::uint32_t, TausState> taus_next(const TausState& s);

// Expands a single 32-bit seed into a full state:
//   s1 = seed, s2 = seed ^ 0x9E3779B9, s3 = seed * 2654435761 mod 2^32,
// then constraint repair (+2 / +8 / +16 if a word is at or below its floor)
// and 8 discarded warm-up draws.
TausState seed_state(std::uint32_t seed);

// Convenience stream over the pure recurrence.
class TausStream {
 public:
  explicit TausStream(std::uint32_t seed) : state_(seed_state(seed)) {}
  explicit TausStream(const TausState& state);

  std::uint32_t next();

  // Uniform draw in [0, n) via the scaled-product method; bias is below
  // n / 2^32 per bucket.
  std::uint64_t next_below(std::uint64_t n);

  const TausState& state() const { return state_; }

 private:
  TausState state_;
};

}  // namespace rrsim
