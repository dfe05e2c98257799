#include "specres/rng.hpp"

namespace specres {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream StreamSource::stream(std::uint64_t layer, Purpose purpose) const {
  std::uint64_t h = mix64(seed_);
  h = mix64(h ^ trial_);
  h = mix64(h ^ layer);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  return RandomStream(h);
}

} // namespace specres
