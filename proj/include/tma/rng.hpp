#pragma once

#include <cstdint>
#include <random>

namespace tma {

/// Independent substreams under one (seed, stream) pair, so that the
/// innovations of replication k and its limit-distribution draws never share
/// a generator.
enum class StreamPurpose : std::uint32_t {
  Innovations = 0,
  LimitDraws = 1,
  Misc = 2,
};

/// A generator keyed by (seed, stream, purpose). The key is expanded through
/// std::seed_seq, so neighbouring keys yield unrelated states.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream,
      StreamPurpose purpose = StreamPurpose::Innovations);

  std::mt19937_64& engine() { return engine_; }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace tma
