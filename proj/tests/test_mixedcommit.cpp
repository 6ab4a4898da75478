#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "qcw/errors.hpp"
#include "qcw/hashing.hpp"
#include "qcw/mixedcommit.hpp"
#include "qcw/rng.hpp"
#include "qcw/stats.hpp"

using namespace qcw;

namespace {

// centered representative in (-p/2, p/2]
int64_t center(uint64_t v, uint64_t p) {
    int64_t c = static_cast<int64_t>(v % p);
    if (c > static_cast<int64_t>(p / 2)) c -= static_cast<int64_t>(p);
    return c;
}

}  // namespace

TEST_SUITE("mixedcommit") {

TEST_CASE("naor commitment follows the masking rule") {
    Rng rng(51);
    const size_t n = 16;
    Bits seed = rng.bit_string(n);
    Bits rb = rng.bit_string(3 * n);
    Bits g = chacha_expand(seed, 3 * n);

    // zero bit leaves the expansion unmasked everywhere
    CHECK(naor_commit(0, seed, rb) == g);

    // one bit flips exactly the positions the receiver marked
    Bits one = naor_commit(1, seed, rb);
    for (size_t i = 0; i < 3 * n; ++i)
        CHECK(one[i] == (g[i] ^ rb[i]));

    CHECK_THROWS_AS(naor_commit(0, seed, rng.bit_string(3 * n + 1)), ParameterError);
    CHECK_THROWS_AS(naor_commit(2, seed, rb), ParameterError);
}

TEST_CASE("naor round-trip accepts and tampering rejects") {
    Rng rng(52);
    const size_t n = 16;
    for (int trial = 0; trial < 10000; ++trial) {
        uint8_t a = rng.bit();
        Bits seed = rng.bit_string(n);
        Bits rb = rng.bit_string(3 * n);
        Bits com = naor_commit(a, seed, rb);
        REQUIRE(naor_verify(com, a, seed, rb));
    }
    uint8_t a = 1;
    Bits seed = rng.bit_string(n);
    Bits rb = rng.bit_string(3 * n);
    while (hamming(rb, Bits(3 * n, 0)) == 0) rb = rng.bit_string(3 * n);
    Bits com = naor_commit(a, seed, rb);
    CHECK_FALSE(naor_verify(com, a ^ 1, seed, rb));
    Bits other_seed = seed;
    other_seed[0] ^= 1;
    CHECK_FALSE(naor_verify(com, a, other_seed, rb));
    Bits tampered = com;
    tampered[5] ^= 1;
    CHECK_FALSE(naor_verify(tampered, a, seed, rb));
}

TEST_CASE("naor equivocation at enumerable scale stays near 2^-n") {
    // A receiver vector admits a double opening iff it equals the xor of two
    // distinct seed expansions. Enumerate all of them.
    const size_t n = 8;
    std::vector<Bits> expansions;
    for (uint64_t s = 0; s < (1ull << n); ++s)
        expansions.push_back(chacha_expand(uint_to_bits(s, n), 3 * n));

    std::set<uint64_t> bad_rb;
    for (size_t i = 0; i < expansions.size(); ++i)
        for (size_t j = i + 1; j < expansions.size(); ++j)
            bad_rb.insert(bits_to_uint(xor_bits(expansions[i], expansions[j])));

    double exact = static_cast<double>(bad_rb.size()) / std::pow(2.0, 3 * n);
    CHECK(exact <= 4.0 / 256);  // a few collisions below the 2^{2n}/2^{3n} count

    // constructive witness: an equivocable receiver vector really does admit
    // two verifying openings of opposite bits
    uint64_t rb_val = *bad_rb.begin();
    Bits rb = uint_to_bits(rb_val, 3 * n);
    bool witnessed = false;
    for (uint64_t s1 = 0; s1 < (1ull << n) && !witnessed; ++s1)
        for (uint64_t s2 = 0; s2 < (1ull << n) && !witnessed; ++s2) {
            if (s1 == s2) continue;
            if (bits_to_uint(xor_bits(expansions[s1], expansions[s2])) != rb_val)
                continue;
            Bits com = naor_commit(0, uint_to_bits(s1, n), rb);
            CHECK(naor_verify(com, 0, uint_to_bits(s1, n), rb));
            CHECK(naor_verify(com, 1, uint_to_bits(s2, n), rb));
            witnessed = true;
        }
    CHECK(witnessed);

    // sampled receiver vectors hit the bad set at about the exact rate
    Rng rng(53);
    size_t hits = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t)
        hits += bad_rb.count(rng.bits_value(3 * n));
    CHECK(static_cast<double>(hits) / trials <= 4.0 / 256 + 0.005);
}

TEST_CASE("default parameter derivation and validation") {
    LweParams p16 = lwe_params_for(16);
    CHECK(p16.p == 257);
    CHECK(p16.m_samples == 306);  // 2 * 17 * ceil(log2 257)
    CHECK(p16.err_sigma == doctest::Approx(257.0 / (8 * std::sqrt(306.0))));

    LweParams p4 = lwe_params_for(4);
    CHECK(p4.p >= 16);
    CHECK(p4.p <= 32);

    Rng rng(54);
    LweParams bad = p16;
    bad.p = 256;  // not prime
    CHECK_THROWS_AS(gen_hiding(bad, rng), ParameterError);
    bad = p16;
    bad.p = 521;  // prime but above 2 n^2
    CHECK_THROWS_AS(gen_hiding(bad, rng), ParameterError);
    bad = p16;
    bad.m_samples = 100;  // below the 2(n+1)log p floor
    CHECK_THROWS_AS(gen_hiding(bad, rng), ParameterError);
}

TEST_CASE("binding keys have residuals that can never wrap a quarter period") {
    Rng rng(55);
    LweParams params = lwe_params_for(16);
    for (int trial = 0; trial < 3; ++trial) {
        CommitKey key = gen_binding(params, rng);
        REQUIRE(key.mode == KeyMode::binding);
        REQUIRE(key.sk.size() == params.n_dim);

        int64_t pos_sum = 0, neg_sum = 0;
        for (size_t i = 0; i < params.m_samples; ++i) {
            uint64_t as = 0;
            for (size_t j = 0; j < params.n_dim; ++j)
                as += key.a_matrix[i][j] * key.sk[j] % params.p;
            int64_t e = center((key.b[i] + params.p - as % params.p) % params.p, params.p);
            CHECK(std::abs(e) < static_cast<int64_t>(params.p / 8));
            if (e > 0) pos_sum += e;
            if (e < 0) neg_sum += e;
        }
        // worst-case subset error in either direction stays under p/4
        CHECK(pos_sum < static_cast<int64_t>(params.p) / 4 + 1);
        CHECK(-neg_sum < static_cast<int64_t>(params.p) / 4 + 1);
        CHECK(4 * pos_sum < static_cast<int64_t>(params.p));
        CHECK(-4 * neg_sum < static_cast<int64_t>(params.p));
    }
}

TEST_CASE("hiding key entries are uniform per chi-square") {
    Rng rng(56);
    LweParams params = lwe_params_for(16);
    std::vector<uint64_t> counts(params.p, 0);
    size_t drawn = 0;
    while (drawn < 100000) {
        CommitKey key = gen_hiding(params, rng);
        CHECK(key.sk.empty());
        for (const auto& row : key.a_matrix)
            for (uint64_t v : row) {
                counts[v]++;
                ++drawn;
            }
        for (uint64_t v : key.b) {
            counts[v]++;
            ++drawn;
        }
    }
    CHECK(uniformity_pass(counts));
}

TEST_CASE("deterministic recompute matches the commit definition") {
    Rng rng(57);
    LweParams params = lwe_params_for(16);
    CommitKey key = gen_hiding(params, rng);

    // empty subset: the frozen trivial outputs
    Bits empty(params.m_samples, 0);
    auto c0 = lwe_commit_with(key, 0, empty);
    CHECK(c0.a_vec == std::vector<uint64_t>(params.n_dim, 0));
    CHECK(c0.c_val == 0);
    auto c1 = lwe_commit_with(key, 1, empty);
    CHECK(c1.a_vec == std::vector<uint64_t>(params.n_dim, 0));
    CHECK(c1.c_val == params.p / 2);

    // random subsets: compare against a direct summation oracle
    for (int trial = 0; trial < 200; ++trial) {
        uint8_t bit = rng.bit();
        Bits subset = rng.bit_string(params.m_samples);
        auto com = lwe_commit_with(key, bit, subset);
        std::vector<uint64_t> a(params.n_dim, 0);
        uint64_t c = bit ? params.p / 2 : 0;
        for (size_t i = 0; i < params.m_samples; ++i) {
            if (!subset[i]) continue;
            for (size_t j = 0; j < params.n_dim; ++j)
                a[j] = (a[j] + key.a_matrix[i][j]) % params.p;
            c = (c + key.b[i]) % params.p;
        }
        REQUIRE(com.a_vec == a);
        REQUIRE(com.c_val == c);
    }
}

TEST_CASE("verify accepts honest openings and rejects manipulation") {
    Rng rng(58);
    LweParams params = lwe_params_for(16);
    CommitKey key = gen_binding(params, rng);
    for (int trial = 0; trial < 2000; ++trial) {
        uint8_t bit = rng.bit();
        auto [com, opening] = lwe_commit(key, bit, rng);
        REQUIRE(lwe_verify(key, com, opening));

        LweOpening flipped = opening;
        flipped.bit ^= 1;
        REQUIRE_FALSE(lwe_verify(key, com, flipped));
    }
    auto [com, opening] = lwe_commit(key, 1, rng);
    LweCommitment corrupt = com;
    corrupt.a_vec[3] = (corrupt.a_vec[3] + 1) % params.p;
    CHECK_FALSE(lwe_verify(key, corrupt, opening));
    LweOpening other = opening;
    other.subset[7] ^= 1;
    CHECK_FALSE(lwe_verify(key, com, other));
}

TEST_CASE("extraction recovers the bit under a binding key") {
    Rng rng(59);
    LweParams params = lwe_params_for(16);
    CommitKey key = gen_binding(params, rng);
    for (int trial = 0; trial < 2000; ++trial) {
        uint8_t bit = rng.bit();
        auto [com, opening] = lwe_commit(key, bit, rng);
        REQUIRE(lwe_extract(key, com) == bit);
    }

    Bits empty(params.m_samples, 0);
    CHECK(lwe_extract(key, lwe_commit_with(key, 0, empty)) == 0);
    CHECK(lwe_extract(key, lwe_commit_with(key, 1, empty)) == 1);

    CommitKey hiding = gen_hiding(params, rng);
    auto [hcom, hop] = lwe_commit(hiding, 0, rng);
    CHECK_THROWS_AS(lwe_extract(hiding, hcom), UsageError);
}

TEST_CASE("accepted openings always agree with extraction") {
    Rng rng(60);
    LweParams params = lwe_params_for(16);
    CommitKey key = gen_binding(params, rng);
    for (int trial = 0; trial < 10000; ++trial) {
        // adversarially arbitrary opening data, not just honest ones
        uint8_t bit = rng.bit();
        Bits subset = rng.bit_string(params.m_samples);
        auto com = lwe_commit_with(key, bit, subset);
        LweOpening opening{bit, subset};
        REQUIRE(lwe_verify(key, com, opening));
        REQUIRE(lwe_extract(key, com) == bit);
    }
}

TEST_CASE("hiding commitments to 0 and 1 look alike on the bucket projection") {
    Rng rng(61);
    LweParams params = lwe_params_for(16);
    CommitKey key = gen_hiding(params, rng);
    std::vector<std::string> proj0, proj1;
    for (int trial = 0; trial < 10000; ++trial) {
        for (uint8_t bit : {0, 1}) {
            auto [com, opening] = lwe_commit(key, bit, rng);
            uint64_t cell = (com.a_vec[0] % 8) * 8 + com.c_val * 8 / params.p;
            (bit ? proj1 : proj0).push_back(std::to_string(cell));
        }
    }
    CHECK(empirical_tvd(proj0, proj1) < 0.08);
}

TEST_CASE("key serialization round-trips and rejects truncation") {
    Rng rng(62);
    LweParams params = lwe_params_for(8);
    for (KeyMode mode : {KeyMode::binding, KeyMode::hiding}) {
        CommitKey key = mode == KeyMode::binding ? gen_binding(params, rng)
                                                 : gen_hiding(params, rng);
        Bytes blob = serialize_key(key);
        CommitKey back = deserialize_key(blob);
        CHECK(back.mode == key.mode);
        CHECK(back.params.p == key.params.p);
        CHECK(back.params.n_dim == key.params.n_dim);
        CHECK(back.params.m_samples == key.params.m_samples);
        CHECK(back.a_matrix == key.a_matrix);
        CHECK(back.b == key.b);
        CHECK(back.sk == key.sk);

        Bytes cut(blob.begin(), blob.end() - 5);
        CHECK_THROWS_AS(deserialize_key(cut), FormatError);
    }
}

}  // TEST_SUITE
