#pragma once

#include <cstdint>

namespace laakso {

/// Counter-based stream: output i is a fixed mix of (seed, stream_index, i).
/// Identical (seed, stream_index, request sequence) gives identical output.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return index_; }

  std::uint64_t next() noexcept;
  /// Uniform in [0, n) by rejection; n > 0.
  std::uint64_t uniform_int(std::uint64_t n) noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() noexcept;

  /// Independent stream keyed by (seed, stream_index, i).
  RandomStream child(std::uint64_t i) const noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace laakso
