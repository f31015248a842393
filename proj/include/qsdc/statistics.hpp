#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

namespace qsdc::stats {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double low = 0.0;
    double high = 0.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Wilson score interval for `successes` out of `n`. [0, 1] when n == 0.
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = kZ95);

/// Binomial standard error sqrt(p(1-p)/n) at the hypothesized p.
double standard_error(double p, std::uint64_t n);

/// (estimate - expected) / standard_error(expected, n). When the standard
/// error is zero the score is 0 for an exact match and empty otherwise.
std::optional<double> z_score(double estimate, double expected, std::uint64_t n);

/// Joint frequency table over two small discrete alphabets.
class JointCounts {
public:
    void add(int a, int b, std::uint64_t n = 1) {
        counts_[{a, b}] += n;
        total_ += n;
    }
    std::uint64_t total() const { return total_; }

    /// Plug-in mutual information estimate in bits.
    double mutual_information() const;

private:
    std::map<std::pair<int, int>, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

} // namespace qsdc::stats
