#include "rscan/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "rscan/distributions.hpp"

namespace rscan {

namespace {

Method catt_method_tag(double x) {
    if (x == 0.0) return Method::CATT0;
    if (x == 1.0) return Method::CATT1;
    return Method::CATT_HALF;
}

// delta-method variance of the sample HWD coefficient at genotype
// proportions (g1, g2), per observation
double hwd_delta_variance(double g1, double g2) {
    const double b = g2 + g1 / 2.0;
    const double d1 = -b;
    const double d2 = 1.0 - 2.0 * b;
    return d1 * d1 * g1 * (1.0 - g1) + d2 * d2 * g2 * (1.0 - g2) -
           2.0 * d1 * d2 * g1 * g2;
}

// HWD trend statistic studentized with the pooled-proportion variance;
// the GMS phase-1 selection statistic
double hwd_trend_pooled(const GenotypeCounts& c) {
    const double r = static_cast<double>(c.r());
    const double s = static_cast<double>(c.s());
    const double n = static_cast<double>(c.n());
    if (!(r > 0.0) || !(s > 0.0)) throw DegenerateTable("a study arm is empty");

    const auto delta = [](double g1, double g2, double total) {
        const double b = (g2 + g1 / 2.0) / total;
        return g2 / total - b * b;
    };
    const double d1 = delta(static_cast<double>(c.r1), static_cast<double>(c.r2), r);
    const double d0 = delta(static_cast<double>(c.s1), static_cast<double>(c.s2), s);

    const double variance =
        hwd_delta_variance(static_cast<double>(c.n1()) / n,
                           static_cast<double>(c.n2()) / n) *
        (1.0 / r + 1.0 / s);
    if (!(variance > 0.0)) throw DegenerateTable("HWD variance estimate is zero");
    return (d1 - d0) / std::sqrt(variance);
}

}  // namespace

const char* to_string(Method method) {
    switch (method) {
        case Method::CATT0: return "CATT0";
        case Method::CATT_HALF: return "CATT_HALF";
        case Method::CATT1: return "CATT1";
        case Method::PEARSON: return "PEARSON";
        case Method::MAX3: return "MAX3";
        case Method::MIN2: return "MIN2";
        case Method::GMS: return "GMS";
        case Method::HWDTT: return "HWDTT";
    }
    return "?";
}

const char* to_string(GmsModel model) {
    switch (model) {
        case GmsModel::REC: return "REC";
        case GmsModel::ADDMUL: return "ADDMUL";
        case GmsModel::DOM: return "DOM";
    }
    return "?";
}

TestResult catt(const GenotypeCounts& c, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("score must lie in [0,1]");

    const double r = static_cast<double>(c.r());
    const double s = static_cast<double>(c.s());
    const double n = static_cast<double>(c.n());
    const double n1 = static_cast<double>(c.n1());
    const double n2 = static_cast<double>(c.n2());

    // scores (0, x, 1)
    const double sum_xr = x * static_cast<double>(c.r1) + static_cast<double>(c.r2);
    const double sum_xn = x * n1 + n2;
    const double sum_xxn = x * x * n1 + n2;

    const double num = n * sum_xr - r * sum_xn;
    const double var = r * s * (n * sum_xxn - sum_xn * sum_xn);
    if (!(var > 0.0)) throw ZeroVariance("trend test variance is zero");

    const double z = std::sqrt(n) * num / std::sqrt(var);
    return {z, two_sided_normal_pvalue(z), catt_method_tag(x)};
}

TestResult pearson(const GenotypeCounts& c) {
    const double r = static_cast<double>(c.r());
    const double s = static_cast<double>(c.s());
    const double n = static_cast<double>(c.n());
    if (!(r > 0.0) || !(s > 0.0)) throw DegenerateTable("a study arm is empty");

    const std::int64_t ri[3] = {c.r0, c.r1, c.r2};
    const std::int64_t si[3] = {c.s0, c.s1, c.s2};

    double t = 0.0;
    int occupied = 0;
    for (int i = 0; i < 3; ++i) {
        const double ni = static_cast<double>(ri[i] + si[i]);
        if (ni == 0.0) continue;
        ++occupied;
        const double er = ni * r / n;
        const double es = ni * s / n;
        const double dr = static_cast<double>(ri[i]) - er;
        const double ds = static_cast<double>(si[i]) - es;
        t += dr * dr / er + ds * ds / es;
    }
    if (occupied < 2) throw DegenerateTable("fewer than two genotype columns occupied");

    const unsigned df = static_cast<unsigned>(occupied - 1);
    return {t, chisq_sf(t, df), Method::PEARSON};
}

TestResult max3(const GenotypeCounts& c) {
    double best = -1.0;
    for (double x : {0.0, 0.5, 1.0}) {
        try {
            best = std::max(best, std::fabs(catt(c, x).statistic));
        } catch (const ZeroVariance&) {
            // component undefined on this table; the max runs over the rest
        }
    }
    if (best < 0.0) throw DegenerateTable("no trend component is computable");
    return {best, std::nullopt, Method::MAX3};
}

TestResult min2(const GenotypeCounts& c) {
    const double p_trend = *catt(c, 0.5).p_value;
    const double p_pearson = *pearson(c).p_value;
    return {std::min(p_trend, p_pearson), std::nullopt, Method::MIN2};
}

TestResult hwdtt(const GenotypeCounts& c) {
    const double r = static_cast<double>(c.r());
    const double s = static_cast<double>(c.s());
    const double n = static_cast<double>(c.n());
    if (!(r > 0.0) || !(s > 0.0)) throw DegenerateTable("a study arm is empty");

    const double phat = (static_cast<double>(c.n2()) +
                         static_cast<double>(c.n1()) / 2.0) / n;
    const double denom = (1.0 - phat) * phat;
    if (!(denom > 0.0)) throw DegenerateTable("pooled allele frequency is degenerate");

    const auto delta = [](double g1, double g2, double total) {
        const double b = (g2 + g1 / 2.0) / total;
        return g2 / total - b * b;
    };
    const double d1 = delta(static_cast<double>(c.r1), static_cast<double>(c.r2), r);
    const double d0 = delta(static_cast<double>(c.s1), static_cast<double>(c.s2), s);

    const double z = std::sqrt(r * s / n) * (d1 - d0) / denom;
    return {z, two_sided_normal_pvalue(z), Method::HWDTT};
}

std::pair<GenotypeCounts, bool> orient_risk_allele(const GenotypeCounts& c) {
    const double z = catt(c, 0.5).statistic;
    if (z < 0.0) return {c.reversed(), true};
    return {c, false};
}

GmsResult gms(const GenotypeCounts& c, double threshold) {
    const auto [oriented, swapped] = orient_risk_allele(c);
    const double z_hwdtt = hwd_trend_pooled(oriented);

    GmsModel model = GmsModel::ADDMUL;
    double score = 0.5;
    if (z_hwdtt > threshold) {
        model = GmsModel::REC;
        score = 0.0;
    } else if (z_hwdtt < -threshold) {
        model = GmsModel::DOM;
        score = 1.0;
    }
    const double stat = catt(oriented, score).statistic;
    return {model, z_hwdtt, stat, swapped};
}

}  // namespace rscan
