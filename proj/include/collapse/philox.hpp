#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A stream is a
// pure function of (key, counter), so any block of samples can be generated
// independently of every other block.

#include <array>
#include <cstdint>

namespace collapse::rng {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Uniform doubles in the open interval (0, 1) and standard normals drawn from
/// a fixed (seed, stream) pair. `stream` selects an independent substream;
/// successive draws advance an internal counter.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream);

  double uniform();
  double normal();

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<double, 2> buffer_{};
  int available_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace collapse::rng
