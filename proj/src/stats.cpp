#include "ivote/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace ivote::sim {

RateStats::Band RateStats::band(double k) const {
    if (trials == 0) return {0.0, 1.0};
    double p = rate();
    double s = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return {std::max(0.0, p - k * s), std::min(1.0, p + k * s)};
}

double RateStats::sigma_for(double p, std::uint64_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

bool RateStats::within_sigma_of(double p, double k) const {
    return std::abs(rate() - p) <= k * sigma_for(p, trials);
}

ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("histograms must have equal nonzero size");
    }
    double total_a = 0, total_b = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total_a += static_cast<double>(a[i]);
        total_b += static_cast<double>(b[i]);
    }
    if (total_a == 0 || total_b == 0) {
        throw std::invalid_argument("empty sample");
    }

    ChiSquareResult r;
    unsigned used_bins = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double pooled = static_cast<double>(a[i] + b[i]);
        if (pooled == 0) continue;
        ++used_bins;
        double ea = pooled * total_a / (total_a + total_b);
        double eb = pooled * total_b / (total_a + total_b);
        double da = a[i] - ea;
        double db = b[i] - eb;
        r.statistic += da * da / ea + db * db / eb;
    }
    if (used_bins < 2) throw std::invalid_argument("needs at least 2 occupied bins");
    r.dof = used_bins - 1;

    boost::math::chi_squared dist(r.dof);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

}  // namespace ivote::sim
