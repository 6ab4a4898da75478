#include "qcw/fieldmath.hpp"

#include <cmath>

#include "qcw/errors.hpp"

namespace qcw {

bool gf_supported(int kappa) {
    return kappa == 3 || kappa == 4 || kappa == 8 || kappa == 16 || kappa == 32;
}

uint64_t gf_modulus(int kappa) {
    switch (kappa) {
        case 3:  return 0xBull;          // x^3 + x + 1
        case 4:  return 0x13ull;         // x^4 + x + 1
        case 8:  return 0x11Bull;        // x^8 + x^4 + x^3 + x + 1
        case 16: return 0x1002Bull;      // x^16 + x^5 + x^3 + x + 1
        case 32: return 0x10000008Dull;  // x^32 + x^7 + x^3 + x^2 + 1
        default: throw ParameterError("gf_modulus: unsupported field width");
    }
}

FieldElem fe(uint32_t value, int kappa) {
    if (!gf_supported(kappa))
        throw ParameterError("fe: unsupported field width");
    if (kappa < 32 && value >= (1u << kappa))
        throw ParameterError("fe: value outside the field");
    return FieldElem{value, kappa};
}

static void require_same_field(FieldElem a, FieldElem b, const char* op) {
    if (a.kappa != b.kappa)
        throw ParameterError(std::string(op) + ": operands from different fields");
    if (!gf_supported(a.kappa))
        throw ParameterError(std::string(op) + ": unsupported field width");
}

FieldElem gf_add(FieldElem a, FieldElem b) {
    require_same_field(a, b, "gf_add");
    return FieldElem{a.value ^ b.value, a.kappa};
}

FieldElem gf_mul(FieldElem a, FieldElem b) {
    require_same_field(a, b, "gf_mul");
    int kappa = a.kappa;
    uint64_t mod = gf_modulus(kappa);
    uint64_t acc = 0;
    uint64_t av = a.value;
    uint32_t bv = b.value;
    while (bv) {
        if (bv & 1) acc ^= av;
        av <<= 1;
        bv >>= 1;
    }
    for (int i = 62; i >= kappa; --i)
        if ((acc >> i) & 1) acc ^= mod << (i - kappa);
    return FieldElem{static_cast<uint32_t>(acc), kappa};
}

FieldElem gf_pow(FieldElem a, uint64_t e) {
    if (!gf_supported(a.kappa))
        throw ParameterError("gf_pow: unsupported field width");
    FieldElem result{1, a.kappa};
    FieldElem base = a;
    while (e) {
        if (e & 1) result = gf_mul(result, base);
        base = gf_mul(base, base);
        e >>= 1;
    }
    return result;
}

FieldElem gf_inv(FieldElem a) {
    if (a.value == 0)
        throw ParameterError("gf_inv: zero has no inverse");
    uint64_t order = a.kappa == 32 ? 0xFFFFFFFFull : (1ull << a.kappa) - 1;
    return gf_pow(a, order - 1);
}

FieldElem poly_eval(const Poly& p, FieldElem x) {
    FieldElem acc{0, x.kappa};
    for (size_t i = p.size(); i-- > 0;)
        acc = gf_add(gf_mul(acc, x), p[i]);
    return acc;
}

Poly lagrange_interpolate(const std::vector<std::pair<FieldElem, FieldElem>>& points) {
    if (points.empty())
        throw ParameterError("lagrange_interpolate: no points");
    int kappa = points[0].first.kappa;
    for (const auto& [x, y] : points)
        if (x.kappa != kappa || y.kappa != kappa)
            throw ParameterError("lagrange_interpolate: mixed field widths");
    size_t n = points.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (points[i].first.value == points[j].first.value)
                throw ParameterError("lagrange_interpolate: duplicate x");

    Poly result(n, FieldElem{0, kappa});
    Poly basis;
    for (size_t i = 0; i < n; ++i) {
        // basis poly prod_{j != i} (x + x_j), denominator prod (x_i + x_j)
        basis.assign(1, FieldElem{1, kappa});
        FieldElem denom{1, kappa};
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            FieldElem xj = points[j].first;
            basis.push_back(FieldElem{0, kappa});
            for (size_t d = basis.size() - 1; d > 0; --d)
                basis[d] = gf_add(basis[d - 1], gf_mul(basis[d], xj));
            basis[0] = gf_mul(basis[0], xj);
            denom = gf_mul(denom, gf_add(points[i].first, xj));
        }
        FieldElem scale = gf_mul(points[i].second, gf_inv(denom));
        for (size_t d = 0; d < basis.size(); ++d)
            result[d] = gf_add(result[d], gf_mul(basis[d], scale));
    }
    return result;
}

FieldElem enc_point(int64_t t, int sigma, int kappa) {
    if (!gf_supported(kappa))
        throw ParameterError("enc_point: unsupported field width");
    if (sigma < 1)
        throw ParameterError("enc_point: sigma must be positive");
    uint64_t field_size = kappa == 32 ? (1ull << 32) : (1ull << kappa);
    if (5ull * static_cast<uint64_t>(sigma) >= field_size)
        throw ParameterError("enc_point: field too small for 5*sigma points");
    if (t < -static_cast<int64_t>(sigma) + 1 || t > 4ll * sigma)
        throw ParameterError("enc_point: t outside the point range");
    return FieldElem{static_cast<uint32_t>(t + sigma), kappa};
}

size_t hamming(const Bits& a, const Bits& b) {
    if (a.size() != b.size())
        throw ParameterError("hamming: length mismatch");
    size_t d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += (a[i] ^ b[i]) & 1;
    return d;
}

double relative_hamming(const Bits& a, const Bits& b) {
    if (a.empty())
        throw ParameterError("relative_hamming: empty input");
    return static_cast<double>(hamming(a, b)) / static_cast<double>(a.size());
}

double binary_entropy(double mu) {
    if (mu < 0.0 || mu > 0.5)
        throw ParameterError("binary_entropy: mu outside [0, 1/2]");
    if (mu == 0.0) return 0.0;
    return -mu * std::log2(mu) - (1.0 - mu) * std::log2(1.0 - mu);
}

BallBound hamming_ball_bound(size_t n, double mu) {
    if (n == 0 || n > 60)
        throw ParameterError("hamming_ball_bound: n outside [1, 60]");
    double h = binary_entropy(mu);  // also validates mu
    size_t radius = static_cast<size_t>(mu * static_cast<double>(n) + 1e-9);
    // cumulative binomial row
    std::vector<uint64_t> row(n + 1, 0);
    row[0] = 1;
    for (size_t i = 1; i <= n; ++i)
        for (size_t j = i; j >= 1; --j) row[j] += row[j - 1];
    uint64_t exact = 0;
    for (size_t k = 0; k <= radius; ++k) exact += row[k];
    return BallBound{exact, std::pow(2.0, h * static_cast<double>(n))};
}

static double snap_log(double v) {
    double r = std::round(v);
    return std::abs(v - r) < 1e-12 ? r : v;
}

static void validate_probs(double sum, size_t n, const char* op) {
    if (n == 0)
        throw ParameterError(std::string(op) + ": empty distribution");
    if (std::abs(sum - 1.0) > 1e-9)
        throw ParameterError(std::string(op) + ": probabilities do not sum to 1");
}

double min_entropy(const Distribution& d) {
    double sum = 0, max_p = 0;
    for (const auto& [v, p] : d.probs) {
        if (p < -1e-12)
            throw ParameterError("min_entropy: negative probability");
        sum += p;
        max_p = std::max(max_p, p);
    }
    validate_probs(sum, d.probs.size(), "min_entropy");
    return snap_log(-std::log2(max_p));
}

double max_entropy_support(const Distribution& d) {
    double sum = 0;
    size_t support = 0;
    for (const auto& [v, p] : d.probs) {
        if (p < -1e-12)
            throw ParameterError("max_entropy_support: negative probability");
        sum += p;
        if (p > 0) ++support;
    }
    validate_probs(sum, d.probs.size(), "max_entropy_support");
    return snap_log(std::log2(static_cast<double>(support)));
}

double joint_min_entropy(const JointDistribution& j) {
    double sum = 0, max_p = 0;
    for (const auto& [xy, p] : j.probs) {
        if (p < -1e-12)
            throw ParameterError("joint_min_entropy: negative probability");
        sum += p;
        max_p = std::max(max_p, p);
    }
    validate_probs(sum, j.probs.size(), "joint_min_entropy");
    return snap_log(-std::log2(max_p));
}

namespace {

// max over x of P[X_k = x and K = k], for both k, compared against bound
bool witness_holds(const JointDistribution& joint, int split_var,
                   const std::map<uint64_t, int>& assignment, double bound) {
    std::map<std::pair<int, uint64_t>, double> mass;
    for (const auto& [xy, p] : joint.probs) {
        uint64_t sv = split_var == 0 ? xy.first : xy.second;
        int k = assignment.at(sv);
        uint64_t xk = k == 0 ? xy.first : xy.second;
        mass[{k, xk}] += p;
    }
    for (const auto& [key, p] : mass)
        if (p > bound * (1 + 1e-9) + 1e-12) return false;
    return true;
}

// Heavy/light rule: realizations of the split marginal with probability
// above 2^{-alpha/2} push the entropy to the other variable.
std::map<uint64_t, int> canonical_assignment(const JointDistribution& joint,
                                             int split_var, double bound) {
    std::map<uint64_t, double> marginal;
    for (const auto& [xy, p] : joint.probs)
        marginal[split_var == 0 ? xy.first : xy.second] += p;
    std::map<uint64_t, int> assignment;
    for (const auto& [v, p] : marginal)
        assignment[v] = p > bound ? (1 - split_var) : split_var;
    return assignment;
}

}  // namespace

SplitWitness min_entropy_split_witness(const JointDistribution& joint) {
    SplitWitness w;
    w.alpha = joint_min_entropy(joint);  // validates the distribution
    w.bound = std::pow(2.0, -w.alpha / 2.0);

    for (int split_var : {1, 0}) {
        auto assignment = canonical_assignment(joint, split_var, w.bound);
        if (witness_holds(joint, split_var, assignment, w.bound)) {
            w.found = true;
            w.split_var = split_var;
            w.assignment = std::move(assignment);
            return w;
        }
    }

    // exhaustive fallback over all binary taggings of either marginal
    for (int split_var : {1, 0}) {
        std::map<uint64_t, double> marginal;
        for (const auto& [xy, p] : joint.probs)
            marginal[split_var == 0 ? xy.first : xy.second] += p;
        if (marginal.size() > 20) continue;
        std::vector<uint64_t> values;
        for (const auto& [v, p] : marginal) values.push_back(v);
        for (uint64_t mask = 0; mask < (1ull << values.size()); ++mask) {
            std::map<uint64_t, int> assignment;
            for (size_t i = 0; i < values.size(); ++i)
                assignment[values[i]] = static_cast<int>((mask >> i) & 1);
            if (witness_holds(joint, split_var, assignment, w.bound)) {
                w.found = true;
                w.split_var = split_var;
                w.assignment = std::move(assignment);
                return w;
            }
        }
    }

    w.found = false;
    return w;
}

}  // namespace qcw
