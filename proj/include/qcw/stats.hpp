#pragma once

#include <cstdint>
#include <vector>

namespace qcw {

// Running mean / standard error accumulator (Welford).
struct MeanVar {
    size_t n = 0;
    double mean = 0;
    double m2 = 0;

    void add(double x);
    double variance() const;  // population variance
    double std_err() const;   // of the mean; 0 for n < 2 or zero variance
};

// Pearson statistic of observed counts against the uniform distribution over
// all cells. Needs at least two cells and a positive total.
double chi_square_stat(const std::vector<uint64_t>& counts);

// Wilson-Hilferty normal approximation of the chi-square tail. z_score maps
// the statistic to a standard normal; the 0.001-significance test passes
// while z <= 3.09. Accurate to about a percent for df >= 3 and slightly
// conservative below that.
double chi_square_z(double stat, size_t df);
double chi_square_crit(size_t df);  // statistic value where z = 3.09
bool uniformity_pass(const std::vector<uint64_t>& counts);

// Plug-in mutual information in bits from a joint count table (rows x cols).
// Needs a positive total; empty rows or columns contribute nothing.
double mutual_information_bits(const std::vector<std::vector<uint64_t>>& joint);

}  // namespace qcw
