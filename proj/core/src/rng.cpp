#include "doclab/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace doclab {

namespace {

constexpr unsigned __int128 kPcgMult =
    (static_cast<unsigned __int128>(2549297995355413924ULL) << 64) |
    4865540595714422341ULL;

inline std::uint64_t rotr64(std::uint64_t v, unsigned rot) {
  return (v >> rot) | (v << ((-rot) & 63));
}

// splitmix64 step; used to disperse seeds and stream ids over the full state
// and increment width. Raw ids must never select the increment directly: two
// increments that agree modulo 2^k keep the low k state bits of their streams
// in lockstep forever.
inline std::uint64_t splitmix64(std::uint64_t& z) {
  z += 0x9E3779B97F4A7C15ULL;
  std::uint64_t r = z;
  r = (r ^ (r >> 30)) * 0xBF58476D1CE4E5B9ULL;
  r = (r ^ (r >> 27)) * 0x94D049BB133111EBULL;
  return r ^ (r >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t s = seed;
  const std::uint64_t state_hi = splitmix64(s);
  const std::uint64_t state_lo = splitmix64(s);
  std::uint64_t t = stream_id;
  const std::uint64_t inc_hi = splitmix64(t);
  const std::uint64_t inc_lo = splitmix64(t);

  inc_ = (((static_cast<unsigned __int128>(inc_hi) << 64) | inc_lo) << 1) | 1;
  state_ = 0;
  next_u64();
  state_ += (static_cast<unsigned __int128>(state_hi) << 64) | state_lo;
  next_u64();
}

std::uint64_t RngStream::next_u64() {
  state_ = state_ * kPcgMult + inc_;
  const std::uint64_t xored =
      static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
  const unsigned rot = static_cast<unsigned>(state_ >> 122);
  return rotr64(xored, rot);
}

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be > 0");
  // Reject the biased low range of the modulo map.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

Eigen::VectorXd sample_unit_sphere(int dim, RngStream& rng) {
  if (dim < 1) throw std::invalid_argument("sample_unit_sphere: dim must be >= 1");
  Eigen::VectorXd v(dim);
  sample_unit_sphere_into(rng, v);
  return v;
}

void sample_unit_sphere_into(RngStream& rng, Eigen::VectorXd& out) {
  for (;;) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = rng.next_normal();
    const double norm = out.norm();
    if (norm > 0.0) {
      out /= norm;
      return;
    }
  }
}

}  // namespace doclab
