#pragma once

// Single-table association statistics for a 2x3 case-control genotype
// count table. Everything here is a pure function of the counts; p-values
// that need a nontrivial null distribution (MAX3, GMS, MIN2) are supplied
// by the distributions layer.

#include <cstdint>
#include <optional>
#include <utility>

#include "rscan/errors.hpp"

namespace rscan {

/// Case genotype counts (r0, r1, r2) and control counts (s0, s1, s2),
/// columns ordered by the number of B alleles.
struct GenotypeCounts {
    std::int64_t r0 = 0, r1 = 0, r2 = 0;
    std::int64_t s0 = 0, s1 = 0, s2 = 0;

    std::int64_t r() const { return r0 + r1 + r2; }
    std::int64_t s() const { return s0 + s1 + s2; }
    std::int64_t n() const { return r() + s(); }
    std::int64_t n0() const { return r0 + s0; }
    std::int64_t n1() const { return r1 + s1; }
    std::int64_t n2() const { return r2 + s2; }

    /// Columns G0 and G2 swapped (allele relabeling).
    GenotypeCounts reversed() const { return {r2, r1, r0, s2, s1, s0}; }

    bool operator==(const GenotypeCounts&) const = default;
};

enum class Method {
    CATT0,
    CATT_HALF,
    CATT1,
    PEARSON,
    MAX3,
    MIN2,
    GMS,
    HWDTT,
};

const char* to_string(Method method);

struct TestResult {
    double statistic = 0.0;
    std::optional<double> p_value;
    Method method = Method::CATT_HALF;
};

/// Model chosen by the two-phase selection procedure.
enum class GmsModel { REC, ADDMUL, DOM };

const char* to_string(GmsModel model);

struct GmsResult {
    GmsModel selected_model = GmsModel::ADDMUL;
    /// Phase-1 HWD trend statistic on the oriented counts, studentized by
    /// the delta-method variance at the pooled genotype proportions (see
    /// gms() below).
    double z_hwdtt = 0.0;
    /// Trend statistic optimal for the selected model, computed on the
    /// risk-allele-oriented counts.
    double statistic = 0.0;
    bool oriented = false;
};

/// Cochran-Armitage trend statistic with genotype scores (0, x, 1),
/// normalized so that it is asymptotically N(0,1) under the null for
/// every x in [0,1]. Two-sided normal p-value.
/// Throws ZeroVariance when the pooled score variance vanishes.
TestResult catt(const GenotypeCounts& c, double score);

/// Pearson chi-square on the 2x3 table. Empty genotype columns contribute
/// nothing and reduce the degrees of freedom by one each.
/// Throws DegenerateTable when fewer than two columns are occupied.
TestResult pearson(const GenotypeCounts& c);

/// max{|Z_0|, |Z_1/2|, |Z_1|}; components with zero variance are skipped.
/// No p-value at this layer.
TestResult max3(const GenotypeCounts& c);

/// min of the Pearson and Z_1/2 p-values. The raw minimum is not itself a
/// p-value; see min2_pvalue in distributions.hpp.
TestResult min2(const GenotypeCounts& c);

/// Hardy-Weinberg disequilibrium trend test
///   Z = sqrt(rs/n) (D1 - D0) / [(1 - n2/n - n1/(2n)) (n2/n + n1/(2n))]
/// with D1, D0 the sample HWD coefficients in cases and controls.
/// Asymptotically N(0,1) under the null; two-sided normal p-value.
TestResult hwdtt(const GenotypeCounts& c);

/// Relabels the alleles so that B is the risk allele: when Z_1/2 < 0 the
/// genotype columns are reversed. A tie (Z_1/2 == 0) keeps the table as is.
std::pair<GenotypeCounts, bool> orient_risk_allele(const GenotypeCounts& c);

/// Two-phase statistic: orient the risk allele, select REC / ADD-MUL / DOM
/// from the HWD trend statistic against +-threshold, then apply the trend
/// test with the score optimal for the selected model (0, 1/2 or 1) on the
/// oriented counts.
///
/// Phase 1 studentizes D1 - D0 with the full multinomial delta-method
/// variance evaluated at the pooled genotype proportions. Under the null
/// at HWE this coincides asymptotically with hwdtt()'s simplified
/// denominator, but at low MAF the simplified form is anticonservative
/// about REC and blunts DOM selection in finite samples.
GmsResult gms(const GenotypeCounts& c, double threshold = 1.645);

}  // namespace rscan
