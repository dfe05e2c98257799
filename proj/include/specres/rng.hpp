#pragma once

#include <cstdint>
#include <random>

namespace specres {

// What a substream is used for. Part of the substream key so that e.g. the
// weights of layer 3 never share draws with its gates.
enum class Purpose : std::uint64_t {
  input = 1,
  weights = 2,
  bias = 3,
  gates = 4,
};

// splitmix64 finalizer; used to hash substream keys into engine seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// A single random stream. The engine is std::mt19937_64 seeded from a
// hashed (seed, trial, layer, purpose) key.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t engine_seed) : engine_(engine_seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Derives independent substreams for one Monte Carlo trial. Layer l always
// gets the same draws for a given (seed, trial), whatever the total depth.
class StreamSource {
public:
  StreamSource(std::uint64_t seed, std::uint64_t trial) : seed_(seed), trial_(trial) {}

  RandomStream stream(std::uint64_t layer, Purpose purpose) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t trial() const noexcept { return trial_; }

private:
  std::uint64_t seed_;
  std::uint64_t trial_;
};

} // namespace specres
