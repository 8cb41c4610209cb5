#include "rsd/random.hpp"

#include <cmath>
#include <numbers>

namespace rsd {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

PhiloxKey split_key(std::uint64_t key) {
  return {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
}

// Two uniforms -> two normals.
inline void box_muller(std::uint64_t a, std::uint64_t b, double& z0, double& z1) {
  const double u1 = to_unit_open_closed(a);
  const double u2 = to_unit_open_closed(b);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  z0 = radius * std::cos(angle);
  z1 = radius * std::sin(angle);
}

inline std::uint64_t join(std::uint32_t lo, std::uint32_t hi) {
  return static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t parent, std::uint64_t tag) {
  return splitmix64(parent ^ splitmix64(tag + 0x632BE59BD9B4E019ull));
}

double to_unit_open_closed(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

void DecisionStream::gaussian(std::uint32_t sample, std::span<double> out) const {
  const PhiloxKey key = split_key(key_);
  const auto dec_lo = static_cast<std::uint32_t>(decision_);
  const auto dec_hi = static_cast<std::uint32_t>(decision_ >> 32);
  std::size_t i = 0;
  for (std::uint32_t block = 0; i < out.size(); ++block) {
    const PhiloxCounter r = philox4x32({block, sample, dec_lo, dec_hi}, key);
    double z0, z1;
    box_muller(join(r[0], r[1]), join(r[2], r[3]), z0, z1);
    out[i++] = z0;
    if (i < out.size()) out[i++] = z1;
  }
}

CounterRng::result_type CounterRng::operator()() {
  if (buffered_ == 0) {
    const PhiloxCounter r =
        philox4x32({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                    0x5EEDu, 0u},
                   split_key(key_));
    ++counter_;
    buffer_ = {join(r[0], r[1]), join(r[2], r[3])};
    buffered_ = 2;
  }
  return buffer_[2 - buffered_--];
}

double CounterRng::uniform() { return to_unit_open_closed((*this)()); }

double CounterRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>((*this)() >> 11) * 0x1.0p-53);
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const std::uint64_t a = (*this)();
  const std::uint64_t b = (*this)();
  double z0, z1;
  box_muller(a, b, z0, z1);
  spare_normal_ = z1;
  has_spare_ = true;
  return z0;
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t v;
  do {
    v = (*this)();
  } while (v >= limit);
  return v % bound;
}

}  // namespace rsd
