#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>

#include "sphtest/philox.hpp"

namespace sphtest {

std::uint64_t splitmix64(std::uint64_t x);
// Order-sensitive mix of several words into one 64-bit key.
std::uint64_t hash64(std::initializer_list<std::uint64_t> words);

// Counter-based stream: block b of the stream is Philox(counter(b), key).
// Every draw consumes whole blocks, so the stream position is exact and
// bulk fills reproduce scalar draws.
class CounterRng {
public:
    explicit CounterRng(philox::Key key, std::uint64_t block = 0) : key_(key), block_(block) {}
    static CounterRng from_seed(std::uint64_t seed);

    philox::Block next_block() { return philox::generate(philox::counter(block_++), key_); }

    double uniform();       // [0,1)
    double uniform_open();  // (0,1]
    double normal();        // first half of a Box–Muller pair
    std::pair<double, double> normal_pair();
    void fill_normals(std::span<double> out);

    philox::Key key() const { return key_; }
    std::uint64_t position() const { return block_; }

private:
    philox::Key key_;
    std::uint64_t block_;
};

}  // namespace sphtest
