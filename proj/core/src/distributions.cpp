#include "rscan/distributions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rscan/parallel.hpp"
#include "rscan/rng.hpp"

namespace rscan {

double chisq_cdf(double x, unsigned df) {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(df / 2.0, x / 2.0);
}

double chisq_sf(double x, unsigned df) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double chisq_quantile(double prob, unsigned df) {
    if (!(prob >= 0.0 && prob < 1.0)) {
        throw std::invalid_argument("probability must lie in [0,1)");
    }
    if (prob == 0.0) return 0.0;
    return 2.0 * boost::math::gamma_p_inv(df / 2.0, prob);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double two_sided_normal_pvalue(double z) {
    return std::erfc(std::fabs(z) / std::numbers::sqrt2);
}

double min2_joint_cdf(JointCdfQuery q) {
    if (!(q.t1 >= 0.0) || !(q.t2 >= 0.0)) {
        throw std::invalid_argument("thresholds must be nonnegative");
    }
    if (q.t1 >= q.t2) return std::clamp(1.0 - std::exp(-q.t2 / 2.0), 0.0, 1.0);

    const double t1 = q.t1, t2 = q.t2;
    const auto integrand = [t1](double v) {
        const double arg = std::clamp(2.0 * t1 / v - 1.0, -1.0, 1.0);
        return std::exp(-v / 2.0) * std::asin(arg);
    };
    // The integrand is bounded (|asin| <= pi/2); only its derivative is
    // singular at v = t1, which adaptive Gauss-Kronrod absorbs.
    double error = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, t1, t2, 18, 1e-12, &error);

    const double value = 1.0 - 0.5 * std::exp(-t1 / 2.0) - 0.5 * std::exp(-t2 / 2.0) +
                         integral / (2.0 * std::numbers::pi);
    return std::clamp(value, 0.0, 1.0);
}

double min2_pvalue(double min2) {
    if (!(min2 > 0.0 && min2 <= 1.0)) {
        throw std::invalid_argument("MIN2 must lie in (0,1]");
    }
    const double t1 = chisq_quantile(1.0 - min2, 1);
    const double t2 = chisq_quantile(1.0 - min2, 2);
    return 1.0 - min2_joint_cdf({t1, t2});
}

namespace {

double bootstrap_statistic(const GenotypeCounts& c, Method method) {
    switch (method) {
        case Method::MAX3: return max3(c).statistic;
        case Method::GMS: return std::fabs(gms(c).statistic);
        default:
            throw std::invalid_argument("bootstrap p-values cover MAX3 and GMS only");
    }
}

}  // namespace

double bootstrap_pvalue(const GenotypeCounts& c, Method method,
                        const BootstrapConfig& cfg) {
    if (cfg.replicates < 100) {
        throw std::invalid_argument("bootstrap needs at least 100 replicates");
    }
    const std::int64_t n = c.n();
    if (n <= 0) throw DegenerateTable("empty table");
    const GenotypeDist pooled = {
        static_cast<double>(c.n0()) / static_cast<double>(n),
        static_cast<double>(c.n1()) / static_cast<double>(n),
        static_cast<double>(c.n2()) / static_cast<double>(n)};

    const double observed = bootstrap_statistic(c, method);
    const std::int64_t cases = c.r();
    const std::int64_t controls = c.s();
    const std::size_t reps = static_cast<std::size_t>(cfg.replicates);

    // Degenerate draws are redrawn from the same substream; a fixed
    // per-replicate budget keeps the 10x-replicates global cap while
    // staying independent of the parallel schedule.
    constexpr int kRedrawsPerReplicate = 10;
    std::atomic<std::int64_t> exceed{0};
    parallel_for(reps, [&](std::size_t b) {
        auto rng = substream(cfg.seed, b);
        for (int attempt = 0;; ++attempt) {
            const GenotypeCounts boot = sample_counts(rng, cases, controls, pooled, pooled);
            try {
                if (bootstrap_statistic(boot, method) >= observed) {
                    exceed.fetch_add(1, std::memory_order_relaxed);
                }
                break;
            } catch (const std::runtime_error&) {
                if (attempt >= kRedrawsPerReplicate) {
                    throw DegenerateTable("bootstrap redraw budget exhausted");
                }
            }
        }
    });

    return static_cast<double>(1 + exceed.load()) /
           static_cast<double>(cfg.replicates + 1);
}

}  // namespace rscan
