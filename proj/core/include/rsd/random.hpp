#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace rsd {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32-10 block function.
PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

// Combines a parent key with a tag into a new 64-bit stream id.
std::uint64_t derive_key(std::uint64_t parent, std::uint64_t tag);

// Maps 53 random bits to a double in (0, 1].
double to_unit_open_closed(std::uint64_t bits);

// Counter-based Gaussian noise for one smoothed decision. Sample j of
// decision i is a pure function of (stream key, i, j), so any single
// micro-decision can be replayed in isolation.
class DecisionStream {
 public:
  DecisionStream(std::uint64_t key, std::uint64_t decision) : key_(key), decision_(decision) {}

  // Fills `out` with i.i.d. N(0, 1) draws for micro-decision `sample`.
  void gaussian(std::uint32_t sample, std::span<double> out) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t decision() const { return decision_; }

 private:
  std::uint64_t key_;
  std::uint64_t decision_;
};

// Keyed family of decision streams.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : key_(derive_key(seed, stream_id)) {}

  DecisionStream decision(std::uint64_t index) const { return {key_, index}; }
  RandomStream substream(std::uint64_t tag) const { return RandomStream(key_, tag); }
  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

// Sequential generator over the same Philox block function, for training,
// attack internals and dataset generation. Satisfies
// UniformRandomBitGenerator, but the helpers below are preferred because
// std distributions are not reproducible across standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0)
      : key_(derive_key(seed, stream_id)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  double uniform();                          // (0, 1]
  double uniform(double lo, double hi);      // [lo, hi]
  double normal();                           // N(0, 1)
  std::uint64_t below(std::uint64_t bound);  // [0, bound)

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rsd
