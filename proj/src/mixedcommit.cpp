#include "qcw/mixedcommit.hpp"

#include <cmath>

#include "qcw/errors.hpp"

namespace qcw {

Bits naor_commit(uint8_t a, const Bits& seed, const Bits& rb) {
    if (a > 1)
        throw ParameterError("naor_commit: bit must be 0 or 1");
    if (seed.empty() || rb.size() != 3 * seed.size())
        throw ParameterError("naor_commit: receiver vector must be 3x the seed length");
    Bits out = chacha_expand(seed, rb.size());
    if (a)
        for (size_t i = 0; i < out.size(); ++i) out[i] ^= rb[i];
    return out;
}

bool naor_verify(const Bits& commitment, uint8_t a, const Bits& seed,
                 const Bits& rb) {
    if (a > 1)
        throw ParameterError("naor_verify: bit must be 0 or 1");
    if (seed.empty() || rb.size() != 3 * seed.size())
        throw ParameterError("naor_verify: receiver vector must be 3x the seed length");
    if (commitment.size() != rb.size()) return false;
    return naor_commit(a, seed, rb) == commitment;
}

namespace {

bool is_prime(uint64_t v) {
    if (v < 2) return false;
    for (uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

size_t ceil_log2(uint64_t v) {
    size_t k = 0;
    while ((1ull << k) < v) ++k;
    return k;
}

bool params_valid(const LweParams& params) {
    if (params.n_dim < 2 || params.n_dim > 64) return false;
    uint64_t n2 = static_cast<uint64_t>(params.n_dim) * params.n_dim;
    if (!is_prime(params.p) || params.p < n2 || params.p > 2 * n2) return false;
    if (params.m_samples < 2 * (params.n_dim + 1) * ceil_log2(params.p)) return false;
    if (params.m_samples > 1 << 20) return false;
    return true;
}

void require_valid(const LweParams& params, const char* op) {
    if (!params_valid(params))
        throw ParameterError(std::string(op) + ": invalid parameters");
}

std::vector<std::vector<uint64_t>> uniform_matrix(const LweParams& params, Rng& rng) {
    std::vector<std::vector<uint64_t>> a(params.m_samples,
                                         std::vector<uint64_t>(params.n_dim));
    for (auto& row : a)
        for (auto& v : row) v = rng.below(params.p);
    return a;
}

}  // namespace

LweParams lwe_params_for(size_t n_dim) {
    if (n_dim < 2 || n_dim > 64)
        throw ParameterError("lwe_params_for: dimension outside [2, 64]");
    LweParams params;
    params.n_dim = n_dim;
    uint64_t n2 = static_cast<uint64_t>(n_dim) * n_dim;
    params.p = n2;
    while (!is_prime(params.p)) ++params.p;
    params.m_samples = 2 * (n_dim + 1) * ceil_log2(params.p);
    params.err_sigma =
        static_cast<double>(params.p) / (8.0 * std::sqrt(static_cast<double>(params.m_samples)));
    require_valid(params, "lwe_params_for");
    return params;
}

CommitKey gen_binding(const LweParams& params, Rng& rng) {
    if (params.err_sigma <= 0)
        throw ParameterError("gen_binding: err_sigma must be positive");
    require_valid(params, "gen_binding");
    CommitKey key;
    key.mode = KeyMode::binding;
    key.params = params;
    key.a_matrix = uniform_matrix(params, rng);
    key.sk.resize(params.n_dim);
    for (auto& v : key.sk) v = rng.below(params.p);

    const int64_t p = static_cast<int64_t>(params.p);
    std::vector<int64_t> e(params.m_samples);
    double sigma = params.err_sigma;
    size_t attempts = 0;
    for (;;) {
        int64_t pos_sum = 0, neg_sum = 0;
        bool ok = true;
        for (auto& v : e) {
            v = std::llround(rng.gauss(sigma));
            if (8 * std::abs(v) >= p) {
                ok = false;
                break;
            }
            if (v > 0) pos_sum += v;
            if (v < 0) neg_sum -= v;
        }
        if (ok && 4 * pos_sum + 2 <= p && 4 * neg_sum + 2 <= p) break;
        if (++attempts % 64 == 0) sigma /= 2;
    }

    key.b.resize(params.m_samples);
    for (size_t i = 0; i < params.m_samples; ++i) {
        uint64_t as = 0;
        for (size_t j = 0; j < params.n_dim; ++j)
            as = (as + key.a_matrix[i][j] * key.sk[j]) % params.p;
        key.b[i] = (as + static_cast<uint64_t>(e[i] + p)) % params.p;
    }
    return key;
}

CommitKey gen_hiding(const LweParams& params, Rng& rng) {
    require_valid(params, "gen_hiding");
    CommitKey key;
    key.mode = KeyMode::hiding;
    key.params = params;
    key.a_matrix = uniform_matrix(params, rng);
    key.b.resize(params.m_samples);
    for (auto& v : key.b) v = rng.below(params.p);
    return key;
}

LweCommitment lwe_commit_with(const CommitKey& key, uint8_t bit, const Bits& subset) {
    if (bit > 1)
        throw ParameterError("lwe_commit_with: bit must be 0 or 1");
    if (subset.size() != key.params.m_samples)
        throw ParameterError("lwe_commit_with: subset mask length mismatch");
    const uint64_t p = key.params.p;
    LweCommitment com;
    com.a_vec.assign(key.params.n_dim, 0);
    com.c_val = bit ? p / 2 : 0;
    for (size_t i = 0; i < subset.size(); ++i) {
        if (!subset[i]) continue;
        const auto& row = key.a_matrix[i];
        for (size_t j = 0; j < com.a_vec.size(); ++j) {
            com.a_vec[j] += row[j];
            if (com.a_vec[j] >= p) com.a_vec[j] -= p;
        }
        com.c_val += key.b[i];
        if (com.c_val >= p) com.c_val -= p;
    }
    return com;
}

std::pair<LweCommitment, LweOpening> lwe_commit(const CommitKey& key, uint8_t bit,
                                                Rng& rng) {
    LweOpening opening{bit, rng.bit_string(key.params.m_samples)};
    return {lwe_commit_with(key, bit, opening.subset), opening};
}

bool lwe_verify(const CommitKey& key, const LweCommitment& com,
                const LweOpening& opening) {
    if (com.a_vec.size() != key.params.n_dim)
        throw ParameterError("lwe_verify: commitment dimension mismatch");
    return lwe_commit_with(key, opening.bit, opening.subset) == com;
}

uint8_t lwe_extract(const CommitKey& key, const LweCommitment& com) {
    if (key.mode != KeyMode::binding)
        throw UsageError("lwe_extract: needs a binding key");
    if (com.a_vec.size() != key.params.n_dim)
        throw ParameterError("lwe_extract: commitment dimension mismatch");
    const uint64_t p = key.params.p;
    uint64_t as = 0;
    for (size_t j = 0; j < key.params.n_dim; ++j)
        as = (as + com.a_vec[j] % p * key.sk[j]) % p;
    int64_t d = static_cast<int64_t>((com.c_val % p + p - as) % p);
    if (d > static_cast<int64_t>(p / 2)) d -= static_cast<int64_t>(p);
    return 4 * std::abs(d) < static_cast<int64_t>(p) ? 0 : 1;
}

Bytes serialize_commitment(const LweCommitment& com) {
    Bytes out;
    put_u64_vec(out, com.a_vec);
    put_u64(out, com.c_val);
    return out;
}

Bytes serialize_opening(const LweOpening& opening) {
    Bytes out;
    out.push_back(opening.bit);
    put_u64(out, opening.subset.size());
    Bytes packed = pack_bits(opening.subset);
    out.insert(out.end(), packed.begin(), packed.end());
    return out;
}

Bytes serialize_key(const CommitKey& key) {
    Bytes out;
    put_u64(out, key.params.p);
    put_u64(out, key.params.n_dim);
    put_u64(out, key.params.m_samples);
    std::vector<uint64_t> flat;
    flat.reserve(key.params.m_samples * key.params.n_dim);
    for (const auto& row : key.a_matrix)
        flat.insert(flat.end(), row.begin(), row.end());
    put_u64_vec(out, flat);
    put_u64_vec(out, key.b);
    put_u64_vec(out, key.sk);
    return out;
}

CommitKey deserialize_key(const Bytes& blob) {
    size_t pos = 0;
    CommitKey key;
    key.params.p = get_u64(blob, pos);
    key.params.n_dim = get_u64(blob, pos);
    key.params.m_samples = get_u64(blob, pos);
    key.params.err_sigma =
        static_cast<double>(key.params.p) /
        (8.0 * std::sqrt(std::max(1.0, static_cast<double>(key.params.m_samples))));
    if (!params_valid(key.params))
        throw FormatError("deserialize_key: invalid parameters");

    std::vector<uint64_t> flat = get_u64_vec(blob, pos);
    std::vector<uint64_t> b = get_u64_vec(blob, pos);
    std::vector<uint64_t> sk = get_u64_vec(blob, pos);
    if (pos != blob.size())
        throw FormatError("deserialize_key: trailing bytes");
    if (flat.size() != key.params.m_samples * key.params.n_dim ||
        b.size() != key.params.m_samples ||
        (sk.size() != 0 && sk.size() != key.params.n_dim))
        throw FormatError("deserialize_key: section size mismatch");
    for (uint64_t v : flat)
        if (v >= key.params.p) throw FormatError("deserialize_key: entry out of range");
    for (uint64_t v : b)
        if (v >= key.params.p) throw FormatError("deserialize_key: entry out of range");
    for (uint64_t v : sk)
        if (v >= key.params.p) throw FormatError("deserialize_key: entry out of range");

    key.a_matrix.assign(key.params.m_samples, std::vector<uint64_t>(key.params.n_dim));
    for (size_t i = 0; i < key.params.m_samples; ++i)
        for (size_t j = 0; j < key.params.n_dim; ++j)
            key.a_matrix[i][j] = flat[i * key.params.n_dim + j];
    key.b = std::move(b);
    key.sk = std::move(sk);
    key.mode = key.sk.empty() ? KeyMode::hiding : KeyMode::binding;
    return key;
}

}  // namespace qcw
