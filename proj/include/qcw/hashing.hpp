#pragma once

#include <string>
#include <vector>

#include "qcw/bits.hpp"
#include "qcw/fieldmath.hpp"
#include "qcw/rng.hpp"

namespace qcw {

// Binary matrix hash x -> Mx (+ offset when strong), a two-universal family;
// with the offset it is strongly two-universal.
struct HashFunc {
    size_t n = 0;
    size_t ell = 0;
    bool strong = false;
    std::vector<Bits> rows;  // ell rows of n bits
    Bits offset;             // ell bits, zero unless strong
};

HashFunc sample_hash(size_t n, size_t ell, bool strong, Rng& rng);  // 1 <= ell <= n

// Inputs shorter than n are zero-padded; longer inputs are a parameter error.
Bits apply_hash(const HashFunc& h, const Bits& x);

Bytes serialize_hash(const HashFunc& h);
HashFunc deserialize_hash(const Bytes& blob);

// Distance-from-uniform bound for ell extracted bits given hmin bits of
// source min-entropy and h0 bits held by the adversary:
//   (1/2) * 2^{-(hmin - h0 - ell)/2}
// May exceed 1, in which case it is vacuous and reported as-is.
double pa_bound(double hmin, double h0, size_t ell);

double empirical_tvd(const std::vector<std::string>& a,
                     const std::vector<std::string>& b);

struct PaResult {
    double empirical = 0;  // mean over sampled hashes of the exact distance
    double std_err = 0;
    double bound = 0;
};

// Samples `trials` hash functions; for each, computes the exact distance of
// the hash output from uniform, conditioned on the leaked positions and
// averaged over their values. Support limited to 2^16 outcomes.
PaResult pa_experiment(const Distribution& dist_x,
                       const std::vector<size_t>& leak_positions, size_t ell,
                       size_t trials, Rng& rng);

}  // namespace qcw
