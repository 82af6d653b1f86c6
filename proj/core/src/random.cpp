#include "rmtsense/random.hpp"

namespace rmtsense {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = splitmix64(seed);
  for (std::uint64_t index : path) {
    state = splitmix64(state ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  }
  return state;
}

std::uint64_t fresh_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

std::vector<double> real_gaussian_series(std::size_t length, std::uint64_t seed) {
  Engine engine(seed);
  std::normal_distribution<double> normal;
  std::vector<double> out(length);
  for (double& v : out) v = normal(engine);
  return out;
}

}  // namespace rmtsense
