#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace purity::ens {

/// A reproducible random stream keyed by (seed, stream id). Two streams with
/// the same key produce bit-identical sequences; distinct ids are independent.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  double normal() { return normal_(engine_); }
  /// Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }
  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  std::complex<double> complex_normal();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace purity::ens
