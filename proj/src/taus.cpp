#include "rrsim/taus.hpp"

#include <stdexcept>

namespace rrsim {

bool taus_state_valid(const TausState& s) {
  return s.s1 > 1 && s.s2 > 7 && s.s3 > 15;
}

TausState make_taus_state(std::uint32_t s1, std::uint32_t s2, std::uint32_t s3) {
  TausState s{s1, s2, s3};
  if (!taus_state_valid(s)) {
    throw std::invalid_argument("taus state words must satisfy s1 > 1, s2 > 7, s3 > 15");
  }
  return s;
}

std::pair<std::uint32_t, TausState> taus_next(const TausState& s) {
  TausState n = s;
  std::uint32_t b;
  b = ((n.s1 << 13) ^ n.s1) >> 19;
  n.s1 = ((n.s1 & 0xFFFFFFFEu) << 12) ^ b;
  b = ((n.s2 << 2) ^ n.s2) >> 25;
  n.s2 = ((n.s2 & 0xFFFFFFF8u) << 4) ^ b;
  b = ((n.s3 << 3) ^ n.s3) >> 11;
  n.s3 = ((n.s3 & 0xFFFFFFF0u) << 17) ^ b;
  return {n.s1 ^ n.s2 ^ n.s3, n};
}

TausState seed_state(std::uint32_t seed) {
  TausState s;
  s.s1 = seed;
  s.s2 = seed ^ 0x9E3779B9u;
  s.s3 = seed * 2654435761u;
  if (s.s1 <= 1) s.s1 += 2;
  if (s.s2 <= 7) s.s2 += 8;
  if (s.s3 <= 15) s.s3 += 16;
  for (int i = 0; i < 8; ++i) {
    s = taus_next(s).second;
  }
  return s;
}

TausStream::TausStream(const TausState& state) : state_(state) {
  if (!taus_state_valid(state_)) {
    throw std::invalid_argument("taus stream constructed from degenerate state");
  }
}

std::uint32_t TausStream::next() {
  auto [value, next_state] = taus_next(state_);
  state_ = next_state;
  return value;
}

std::uint64_t TausStream::next_below(std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next()) * n) >> 32);
}

}  // namespace rrsim
