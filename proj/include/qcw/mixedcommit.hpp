#pragma once

#include <utility>
#include <vector>

#include "qcw/bits.hpp"
#include "qcw/rng.hpp"

namespace qcw {

// Naor bit commitment from a length-tripling PRG. The receiver supplies the
// 3n-bit vector rb before the committer moves; the session layer enforces
// that order.
Bits naor_commit(uint8_t a, const Bits& seed, const Bits& rb);
bool naor_verify(const Bits& commitment, uint8_t a, const Bits& seed,
                 const Bits& rb);

struct LweParams {
    size_t n_dim = 0;
    uint64_t p = 0;        // prime with n_dim^2 <= p <= 2*n_dim^2
    size_t m_samples = 0;  // at least 2*(n_dim+1)*ceil(log2 p)
    double err_sigma = 0;  // Gaussian width for binding-key noise
};

// Smallest prime at least n_dim^2, sample count at the floor, and
// err_sigma = p / (8*sqrt(m_samples)).
LweParams lwe_params_for(size_t n_dim);

enum class KeyMode { hiding, binding };

struct CommitKey {
    KeyMode mode = KeyMode::hiding;
    LweParams params;
    std::vector<std::vector<uint64_t>> a_matrix;  // m rows of n entries mod p
    std::vector<uint64_t> b;                      // m entries mod p
    std::vector<uint64_t> sk;                     // n entries, binding mode only
};

struct LweCommitment {
    std::vector<uint64_t> a_vec;
    uint64_t c_val = 0;
    bool operator==(const LweCommitment&) const = default;
};

struct LweOpening {
    uint8_t bit = 0;
    Bits subset;  // bitmask over the m samples
};

// Binding: b = A*s + e with noise resampled until no subset sum of the
// errors can reach p/4 in either direction (and every |e| < p/8), so
// extraction can never decode wrongly. The working Gaussian width starts at
// err_sigma and halves after every 64 rejected noise vectors; the width that
// satisfies the subset rule depends on p and m, not on the caller's wish.
CommitKey gen_binding(const LweParams& params, Rng& rng);

// Hiding: (A, b) uniform, no secret.
CommitKey gen_hiding(const LweParams& params, Rng& rng);

// Deterministic commitment from explicit subset randomness:
// a_vec = sum of selected rows, c_val = sum of selected b plus bit*floor(p/2).
LweCommitment lwe_commit_with(const CommitKey& key, uint8_t bit, const Bits& subset);

std::pair<LweCommitment, LweOpening> lwe_commit(const CommitKey& key, uint8_t bit,
                                                Rng& rng);

// Accept iff recomputing from the opening reproduces the commitment exactly.
bool lwe_verify(const CommitKey& key, const LweCommitment& com,
                const LweOpening& opening);

// Binding keys only: centered c - <a, s> decodes to 0 inside (-p/4, p/4),
// else 1.
uint8_t lwe_extract(const CommitKey& key, const LweCommitment& com);

Bytes serialize_key(const CommitKey& key);
CommitKey deserialize_key(const Bytes& blob);

// Wire forms used wherever commitments or openings enter a transcript.
Bytes serialize_commitment(const LweCommitment& com);
Bytes serialize_opening(const LweOpening& opening);

}  // namespace qcw
