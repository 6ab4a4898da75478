#include "qcw/rng.hpp"

#include <cmath>
#include <numbers>

#include "qcw/errors.hpp"

namespace qcw {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t master, uint64_t index) {
    return mix64(mix64(master) ^ mix64(index + 1));
}

uint64_t Rng::bits_value(int k) {
    if (k < 0 || k > 64)
        throw ParameterError("Rng::bits_value: k out of range");
    if (k == 0) return 0;
    return gen_() >> (64 - k);
}

uint64_t Rng::below(uint64_t bound) {
    if (bound == 0)
        throw ParameterError("Rng::below: zero bound");
    uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        uint64_t x = gen_();
        if (x >= threshold) return (x - threshold) % bound;
    }
}

double Rng::unit() {
    return static_cast<double>(bits_value(53)) * 0x1p-53;
}

double Rng::gauss(double sigma) {
    if (have_spare_) {
        have_spare_ = false;
        return sigma * spare_;
    }
    double u1 = (static_cast<double>(bits_value(53)) + 1.0) * 0x1p-53;  // (0,1]
    double u2 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return sigma * r * std::cos(angle);
}

Bits Rng::bit_string(size_t n) {
    Bits out(n);
    for (size_t i = 0; i < n; ++i) out[i] = bit();
    return out;
}

std::vector<size_t> Rng::subset(size_t n, size_t k) {
    if (k > n)
        throw ParameterError("Rng::subset: k exceeds n");
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    for (size_t i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + below(n - i)]);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

namespace {

inline uint32_t rotl32(uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }

inline void quarter(uint32_t& a, uint32_t& b, uint32_t& c, uint32_t& d) {
    a += b; d ^= a; d = rotl32(d, 16);
    c += d; b ^= c; b = rotl32(b, 12);
    a += b; d ^= a; d = rotl32(d, 8);
    c += d; b ^= c; b = rotl32(b, 7);
}

void chacha_block(const uint32_t key[8], uint32_t counter, uint32_t nonce0,
                  uint32_t nonce1, uint8_t out[64]) {
    uint32_t s[16] = {0x61707865u, 0x3320646eu, 0x79622d32u, 0x6b206574u,
                      key[0], key[1], key[2], key[3],
                      key[4], key[5], key[6], key[7],
                      counter, nonce0, nonce1, 0};
    uint32_t x[16];
    for (int i = 0; i < 16; ++i) x[i] = s[i];
    for (int round = 0; round < 10; ++round) {
        quarter(x[0], x[4], x[8], x[12]);
        quarter(x[1], x[5], x[9], x[13]);
        quarter(x[2], x[6], x[10], x[14]);
        quarter(x[3], x[7], x[11], x[15]);
        quarter(x[0], x[5], x[10], x[15]);
        quarter(x[1], x[6], x[11], x[12]);
        quarter(x[2], x[7], x[8], x[13]);
        quarter(x[3], x[4], x[9], x[14]);
    }
    for (int i = 0; i < 16; ++i) {
        uint32_t v = x[i] + s[i];
        out[4 * i] = static_cast<uint8_t>(v);
        out[4 * i + 1] = static_cast<uint8_t>(v >> 8);
        out[4 * i + 2] = static_cast<uint8_t>(v >> 16);
        out[4 * i + 3] = static_cast<uint8_t>(v >> 24);
    }
}

}  // namespace

Bytes chacha_expand_bytes(const Bytes& key_material, size_t n_out) {
    // Fold arbitrary-length key material into a 256-bit key; the material
    // length rides in the nonce so different-length inputs with equal folded
    // keys still produce distinct streams.
    uint8_t key_bytes[32] = {0};
    for (size_t i = 0; i < key_material.size(); ++i) {
        key_bytes[i % 32] ^= key_material[i];
        if (i >= 32) key_bytes[(i + 13) % 32] += key_material[i];
    }
    uint32_t key[8];
    for (int i = 0; i < 8; ++i)
        key[i] = static_cast<uint32_t>(key_bytes[4 * i]) |
                 static_cast<uint32_t>(key_bytes[4 * i + 1]) << 8 |
                 static_cast<uint32_t>(key_bytes[4 * i + 2]) << 16 |
                 static_cast<uint32_t>(key_bytes[4 * i + 3]) << 24;
    uint32_t nonce0 = static_cast<uint32_t>(key_material.size());
    uint32_t nonce1 = static_cast<uint32_t>(key_material.size() >> 32);

    Bytes out;
    out.reserve(n_out);
    uint8_t block[64];
    uint32_t counter = 0;
    while (out.size() < n_out) {
        chacha_block(key, counter++, nonce0, nonce1, block);
        size_t take = std::min<size_t>(64, n_out - out.size());
        out.insert(out.end(), block, block + take);
    }
    return out;
}

Bits chacha_expand(const Bits& seed, size_t n_out) {
    Bytes material = pack_bits(seed);
    // Distinguish bit lengths that pack to the same byte count.
    put_u64(material, seed.size());
    Bytes stream = chacha_expand_bytes(material, (n_out + 7) / 8);
    return unpack_bits(stream, n_out);
}

}  // namespace qcw
