#ifndef IVOTE_STATS_HPP
#define IVOTE_STATS_HPP

#include <cstdint>
#include <vector>

namespace ivote::sim {

// Bernoulli success counter with normal-approximation confidence bands.
struct RateStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;

    void add(bool success) {
        ++trials;
        if (success) ++successes;
    }
    double rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(successes) / trials;
    }

    struct Band {
        double lo = 0.0;
        double hi = 0.0;
    };
    /// k-sigma band around the observed rate, clamped to [0,1].
    Band band(double k = 3.0) const;

    /// Standard deviation of an empirical rate around a hypothesized p.
    static double sigma_for(double p, std::uint64_t n);
    /// |rate - p| <= k * sigma_for(p, trials)
    bool within_sigma_of(double p, double k = 3.0) const;

    RateStats& operator+=(const RateStats& o) {
        trials += o.trials;
        successes += o.successes;
        return *this;
    }
};

struct ChiSquareResult {
    double statistic = 0.0;
    unsigned dof = 0;
    double p_value = 1.0;
};

/// Two-sample Pearson chi-square on equal-bin histograms (same-distribution
/// null). Bins empty in both samples are dropped from the dof.
ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b);

}  // namespace ivote::sim

#endif
