#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qcw/bits.hpp"

namespace qcw {

// Element of GF(2^kappa), kappa in {3, 4, 8, 16, 32}.
struct FieldElem {
    uint32_t value = 0;
    int kappa = 0;
    bool operator==(const FieldElem&) const = default;
};

bool gf_supported(int kappa);
uint64_t gf_modulus(int kappa);  // reduction polynomial, top term included
FieldElem fe(uint32_t value, int kappa);

FieldElem gf_add(FieldElem a, FieldElem b);
FieldElem gf_mul(FieldElem a, FieldElem b);
FieldElem gf_pow(FieldElem a, uint64_t e);
FieldElem gf_inv(FieldElem a);

// coefficient vector, low degree first
using Poly = std::vector<FieldElem>;

FieldElem poly_eval(const Poly& p, FieldElem x);

// Unique polynomial of degree < n through n points with pairwise-distinct x.
// Returns exactly n coefficients.
Poly lagrange_interpolate(const std::vector<std::pair<FieldElem, FieldElem>>& points);

// Evaluation points for secret-sharing: t -> t + sigma, defined for
// -sigma+1 <= t <= 4*sigma. Needs 2^kappa > 5*sigma so all points are
// distinct and nonzero.
FieldElem enc_point(int64_t t, int sigma, int kappa);

size_t hamming(const Bits& a, const Bits& b);
double relative_hamming(const Bits& a, const Bits& b);  // nonempty inputs

double binary_entropy(double mu);  // mu in [0, 1/2], log base 2

struct BallBound {
    uint64_t exact;  // number of strings within relative distance mu of zero
    double bound;    // 2^{h(mu) * n}
};
BallBound hamming_ball_bound(size_t n, double mu);  // n <= 60

// Finite distribution over bit-strings of width `bits`.
struct Distribution {
    int bits = 0;
    std::map<uint64_t, double> probs;
};

double min_entropy(const Distribution& d);          // -log2 of the heaviest outcome
double max_entropy_support(const Distribution& d);  // log2 of the support size

struct JointDistribution {
    int bits0 = 0;
    int bits1 = 0;
    std::map<std::pair<uint64_t, uint64_t>, double> probs;
};

double joint_min_entropy(const JointDistribution& j);

// Entropy-splitting witness: a binary tag K computed from one marginal such
// that, with alpha the joint min-entropy, for both k in {0,1}
//     max_x P[X_k = x and K = k]  <=  2^{-alpha/2}.
// assignment maps realizations of marginal `split_var` to the index k of the
// variable that keeps the entropy. The canonical heavy/light rule always
// satisfies the guarantee; found=false would mean the internal verification
// falsified it.
struct SplitWitness {
    bool found = false;
    int split_var = 1;
    std::map<uint64_t, int> assignment;
    double alpha = 0.0;
    double bound = 1.0;
};

SplitWitness min_entropy_split_witness(const JointDistribution& joint);

}  // namespace qcw
