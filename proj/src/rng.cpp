#include "sphtest/rng.hpp"

#include "sphtest/kernels.hpp"

namespace sphtest {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t hash64(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0x6A09E667F3BCC908ull;
    for (std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
    return h;
}

CounterRng CounterRng::from_seed(std::uint64_t seed) {
    const std::uint64_t h = hash64({seed});
    return CounterRng(philox::Key{std::uint32_t(h), std::uint32_t(h >> 32)});
}

double CounterRng::uniform() {
    const auto b = next_block();
    return philox::unit(b[0], b[1]);
}

double CounterRng::uniform_open() { return 1.0 - uniform(); }

double CounterRng::normal() { return normal_pair().first; }

std::pair<double, double> CounterRng::normal_pair() { return philox::box_muller(next_block()); }

void CounterRng::fill_normals(std::span<double> out) {
    kernels::normals(key_, block_, out);
    block_ += (out.size() + 1) / 2;
}

}  // namespace sphtest
