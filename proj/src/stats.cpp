#include "qcw/stats.hpp"

#include <cmath>

#include "qcw/errors.hpp"

namespace qcw {

void MeanVar::add(double x) {
    ++n;
    double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
}

double MeanVar::variance() const {
    return n ? m2 / static_cast<double>(n) : 0.0;
}

double MeanVar::std_err() const {
    if (n < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(n));
}

double chi_square_stat(const std::vector<uint64_t>& counts) {
    if (counts.size() < 2)
        throw ParameterError("chi_square_stat: need at least two cells");
    uint64_t total = 0;
    for (uint64_t c : counts) total += c;
    if (total == 0)
        throw ParameterError("chi_square_stat: empty sample");
    double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double stat = 0;
    for (uint64_t c : counts) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

double chi_square_z(double stat, size_t df) {
    if (df == 0)
        throw ParameterError("chi_square_z: zero degrees of freedom");
    double k = static_cast<double>(df);
    double spread = std::sqrt(2.0 / (9.0 * k));
    return (std::cbrt(stat / k) - (1.0 - 2.0 / (9.0 * k))) / spread;
}

double chi_square_crit(size_t df) {
    if (df == 0)
        throw ParameterError("chi_square_crit: zero degrees of freedom");
    double k = static_cast<double>(df);
    double base = 1.0 - 2.0 / (9.0 * k) + 3.09 * std::sqrt(2.0 / (9.0 * k));
    return k * base * base * base;
}

bool uniformity_pass(const std::vector<uint64_t>& counts) {
    return chi_square_stat(counts) <= chi_square_crit(counts.size() - 1);
}

double mutual_information_bits(const std::vector<std::vector<uint64_t>>& joint) {
    if (joint.empty() || joint[0].empty())
        throw ParameterError("mutual_information_bits: empty table");
    size_t cols = joint[0].size();
    std::vector<double> row_sum(joint.size(), 0), col_sum(cols, 0);
    double total = 0;
    for (size_t r = 0; r < joint.size(); ++r) {
        if (joint[r].size() != cols)
            throw ParameterError("mutual_information_bits: ragged table");
        for (size_t c = 0; c < cols; ++c) {
            row_sum[r] += static_cast<double>(joint[r][c]);
            col_sum[c] += static_cast<double>(joint[r][c]);
            total += static_cast<double>(joint[r][c]);
        }
    }
    if (total <= 0)
        throw ParameterError("mutual_information_bits: zero total");
    double mi = 0;
    for (size_t r = 0; r < joint.size(); ++r)
        for (size_t c = 0; c < cols; ++c) {
            if (joint[r][c] == 0) continue;
            double p = static_cast<double>(joint[r][c]) / total;
            mi += p * std::log2(p * total * total / (row_sum[r] * col_sum[c]));
        }
    return mi;
}

}  // namespace qcw
