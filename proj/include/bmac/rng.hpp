#pragma once

#include <array>
#include <cstdint>

namespace bmac {

/// Philox4x32-10 block function: maps a 128-bit counter and 64-bit key to 128 random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// The sequence is a pure function of (master_seed, stream_id): block k of the stream is
/// philox4x32(counter = {k, stream_id}, key = master_seed). Every draw consumes exactly one
/// block, so `counter()` doubles as a draw count.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_seed_(master_seed), stream_id_(stream_id) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  /// Next 128-bit block.
  std::array<std::uint32_t, 4> next_block();

  /// One draw: two independent uniforms on the open interval (0, 1), 53-bit resolution.
  std::array<double, 2> uniform_pair();

  /// One draw: a single uniform on (0, 1). The second half of the block is discarded.
  double uniform() { return uniform_pair()[0]; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
};

/// Child stream keyed only by (parent master seed, child_id); independent of call order.
inline RngStream split_stream(const RngStream& parent, std::uint64_t child_id) {
  return RngStream(parent.master_seed(), child_id);
}

}  // namespace bmac
