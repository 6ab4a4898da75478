#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qcw/bits.hpp"

namespace qcw {

// splitmix64 finalizer.
uint64_t mix64(uint64_t x);

// Per-session seed for batch index i: mix64(mix64(master) ^ mix64(i + 1)).
// Published so any single session from a batch can be reproduced standalone.
uint64_t derive_seed(uint64_t master, uint64_t index);

// Deterministic RNG around std::mt19937_64 (bit-exact across platforms).
// Sampling helpers are hand-rolled; std::uniform_int_distribution and
// std::normal_distribution are not portable bit-for-bit.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t word() { return gen_(); }
    uint8_t bit() { return static_cast<uint8_t>(gen_() >> 63); }

    uint64_t bits_value(int k);       // k uniform bits, 0 <= k <= 64
    uint64_t below(uint64_t bound);   // uniform in [0, bound), rejection sampled
    double unit();                    // uniform in [0, 1), 53-bit resolution
    double gauss(double sigma);       // Box-Muller, mean 0

    Bits bit_string(size_t n);
    std::vector<size_t> subset(size_t n, size_t k);  // sorted k of {0..n-1}
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Deterministic seed-to-stream expansion (ChaCha20 block function keyed by
// the seed). Serves as the PRG G: {0,1}^n -> {0,1}^{3n} and as the source of
// seed-indexed hash/code families.
Bits chacha_expand(const Bits& seed, size_t n_out);
Bytes chacha_expand_bytes(const Bytes& key_material, size_t n_out);

}  // namespace qcw
