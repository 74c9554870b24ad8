#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace doclab {

/// Splittable random stream: a PCG generator with 128-bit state and XSL-RR
/// output. Each (seed, stream_id) pair selects an independent sequence
/// (distinct stream ids choose distinct LCG increments), so any number of
/// logical tasks can own their own stream and reproduce it exactly,
/// independent of how work is scheduled across threads.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 random bits.
  double next_unit();

  /// Standard normal via Box-Muller; the second value of each pair is cached
  /// in the stream, so consumption stays a pure function of the stream state.
  double next_normal();

  /// Unbiased uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }
  result_type operator()() { return next_u64(); }

  /// Generator family, recorded in reports for provenance.
  static const char* generator_name() { return "pcg64"; }

 private:
  unsigned __int128 state_;
  unsigned __int128 inc_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Stream factory; trivially the constructor, named for call sites that care
/// about the (seed, stream_id) contract rather than the generator type.
inline RngStream derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return RngStream(seed, stream_id);
}

/// Uniform draw from the unit sphere S^{dim-1}: dim independent standard
/// normals divided by their Euclidean norm. A zero-norm draw (probability 0)
/// is redrawn.
Eigen::VectorXd sample_unit_sphere(int dim, RngStream& rng);

/// Fills `out` (size = dim) instead of allocating; same draw sequence as
/// sample_unit_sphere.
void sample_unit_sphere_into(RngStream& rng, Eigen::VectorXd& out);

namespace streams {

// Stream-id layout: one logical task, one stream. The stage tag occupies the
// top byte, leaving two index fields for (n, trial)-style addressing. Worker
// threads never share streams, so results are independent of worker count.
enum Stage : std::uint64_t {
  kTestSet = 1,
  kTrainPool = 2,
  kDocSample = 3,
  kQnTrain = 4,
  kQnWeight = 5,
  kVolumeTrain = 6,
  kVolumeProbe = 7,
  kBootstrap = 8,
  kRandomLabels = 9,
};

constexpr std::uint64_t make(std::uint64_t stage, std::uint64_t hi = 0,
                             std::uint64_t lo = 0) {
  return (stage << 56) | ((hi & 0xffffff) << 32) | (lo & 0xffffffff);
}

}  // namespace streams

}  // namespace doclab
