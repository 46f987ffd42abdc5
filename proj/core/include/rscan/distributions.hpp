#pragma once

// Null distributions and p-values: chi-square / normal helpers, the joint
// null CDF of (Z^2_1/2, T_chi2) behind the MIN2 p-value, and parametric
// bootstrap nulls for the statistics without a closed form here.

#include <cstdint>

#include "rscan/stats.hpp"

namespace rscan {

double chisq_cdf(double x, unsigned df);
double chisq_sf(double x, unsigned df);
/// Inverse CDF; relative accuracy ~1e-14 (inverse regularized incomplete gamma).
double chisq_quantile(double prob, unsigned df);

double normal_cdf(double z);
double two_sided_normal_pvalue(double z);

/// Thresholds for the joint null CDF query Pr(Z^2_1/2 < t1, T_chi2 < t2).
struct JointCdfQuery {
    double t1 = 0.0;
    double t2 = 0.0;
};

/// Joint asymptotic null CDF of the squared trend statistic and Pearson's
/// statistic. For t1 < t2:
///   1 - e^{-t1/2}/2 - e^{-t2/2}/2
///     + (1/2pi) * integral_{t1}^{t2} e^{-v/2} asin(2 t1 / v - 1) dv,
/// for t1 >= t2 simply 1 - e^{-t2/2}. The integral is evaluated by
/// adaptive quadrature to absolute error well below 1e-9; the result is
/// clamped to [0,1].
double min2_joint_cdf(JointCdfQuery q);

/// p-value of an observed MIN2 value m in (0,1]:
///   1 - min2_joint_cdf(chi2_1-quantile(1-m), chi2_2-quantile(1-m)).
/// Always >= m and strictly increasing in m, so ranking by MIN2 and by
/// its p-value coincide.
double min2_pvalue(double min2);

struct BootstrapConfig {
    std::int64_t replicates = 10000;  ///< must be >= 100
    std::uint64_t seed = 0;
};

/// Parametric bootstrap p-value for MAX3 or GMS (absolute phase-2
/// statistic). Both arms are resampled from the pooled genotype
/// proportions; the add-one estimator (1 + #{boot >= observed}) /
/// (replicates + 1) never returns zero. Replicates are drawn from
/// per-index substreams, so the result is deterministic for a given seed
/// under any parallel schedule. Degenerate bootstrap tables are redrawn;
/// the total number of redraws is capped at 10x replicates.
double bootstrap_pvalue(const GenotypeCounts& c, Method method,
                        const BootstrapConfig& cfg);

}  // namespace rscan
