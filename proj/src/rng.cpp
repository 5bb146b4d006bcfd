#include "tma/rng.hpp"

namespace tma {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream,
                            StreamPurpose purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, StreamPurpose purpose)
    : engine_(make_engine(seed, stream, purpose)) {}

}  // namespace tma
