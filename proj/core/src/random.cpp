#include "purity/random.hpp"

#include <cmath>

namespace purity::ens {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                    0x70757269u};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(seeded_engine(seed, stream_id)) {}

std::complex<double> RandomStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

std::size_t RandomStream::index(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

}  // namespace purity::ens
