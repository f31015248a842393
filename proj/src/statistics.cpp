#include "qsdc/statistics.hpp"

#include <algorithm>
#include <cmath>

namespace qsdc::stats {

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
    if (n == 0) {
        return {0.0, 1.0};
    }
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::clamp(centre - half, 0.0, 1.0), std::clamp(centre + half, 0.0, 1.0)};
}

double standard_error(double p, std::uint64_t n) {
    if (n == 0) {
        return 0.0;
    }
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

std::optional<double> z_score(double estimate, double expected, std::uint64_t n) {
    const double se = standard_error(expected, n);
    if (se == 0.0) {
        if (estimate == expected) {
            return 0.0;
        }
        return std::nullopt;
    }
    return (estimate - expected) / se;
}

double JointCounts::mutual_information() const {
    if (total_ == 0) {
        return 0.0;
    }
    std::map<int, std::uint64_t> left;
    std::map<int, std::uint64_t> right;
    for (const auto& [key, c] : counts_) {
        left[key.first] += c;
        right[key.second] += c;
    }
    const double n = static_cast<double>(total_);
    double mi = 0.0;
    for (const auto& [key, c] : counts_) {
        const double pab = static_cast<double>(c) / n;
        const double pa = static_cast<double>(left[key.first]) / n;
        const double pb = static_cast<double>(right[key.second]) / n;
        mi += pab * std::log2(pab / (pa * pb));
    }
    return std::max(mi, 0.0);
}

} // namespace qsdc::stats
