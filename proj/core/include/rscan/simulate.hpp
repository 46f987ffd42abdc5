#pragma once

// Monte Carlo harness: model-selection frequency studies and genome-wide
// ranking scans. All randomness flows through per-(replicate, SNP)
// substreams, so every result is bit-identical for a given seed under any
// worker count.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rscan/genetics.hpp"
#include "rscan/stats.hpp"

namespace rscan {

/// One SNP with a true association: the genetic model lives at the
/// functional locus; the marker sees it through LD.
struct TrueSnpSpec {
    GeneticModel model = GeneticModel::ADD;
    double maf_marker = 0.3;
    double maf_functional = 0.3;
    double grr_lambda2_star = 1.5;
    double d_prime = 1.0;
};

/// Full parameterization of a simulated genome-wide scan.
struct ScanConfig {
    std::int64_t total_snps = 0;
    std::vector<TrueSnpSpec> true_snps;
    double null_maf_low = 0.1;
    double null_maf_high = 0.5;
    std::int64_t cases = 0;
    std::int64_t controls = 0;
    double prevalence = 0.1;
    std::int64_t replicates = 0;
    std::int64_t top_l = 0;
    std::uint64_t seed = 0;
};

/// The five competing ranking methods, in report order.
inline constexpr Method kScanMethods[] = {Method::CATT_HALF, Method::GMS,
                                          Method::MAX3, Method::MIN2,
                                          Method::PEARSON};
inline constexpr std::size_t kScanMethodCount = 5;

struct MethodCriteria {
    Method method = Method::CATT_HALF;
    /// Fraction of replicates with at least one true SNP in the top L.
    double prob_at_least_one = 0.0;
    /// Mean number of true SNPs in the top L, over all replicates.
    double avg_true_in_top = 0.0;
    /// Mean of the minimum true-SNP rank, over replicates where at least
    /// one true SNP made the top L; NaN when no replicate did.
    double mean_min_rank = 0.0;
    std::int64_t replicates_with_hit = 0;
};

struct CriteriaReport {
    ScanConfig config;
    std::vector<MethodCriteria> methods;  // kScanMethods order
};

struct ModelSelectionConfig {
    std::vector<double> maf_grid;
    std::vector<GeneticModel> model_grid;
    std::vector<double> d_prime_grid;
    double prevalence = 0.1;
    double lambda2_star = 2.0;
    double threshold = 1.645;
    std::int64_t cases = 250;
    std::int64_t controls = 250;
    std::int64_t replicates = 10000;
    std::uint64_t seed = 0;
};

struct ModelSelectionCell {
    double maf = 0.0;
    GeneticModel true_model = GeneticModel::REC;
    double d_prime = 1.0;
    /// Selection fractions; the underlying counts sum to the replicate count.
    double freq_rec = 0.0, freq_addmul = 0.0, freq_dom = 0.0;
};

struct ModelSelectionReport {
    ModelSelectionConfig config;
    std::vector<ModelSelectionCell> cells;  // maf-major, then model, then d'
};

/// Case/control genotype distributions at the marker implied by a true-SNP
/// spec (penetrance mapping through LD plus the prevalence identity).
std::pair<GenotypeDist, GenotypeDist> snp_sampling_dists(const TrueSnpSpec& spec,
                                                         double prevalence);

/// Draws case/control genotype counts at the marker for a true SNP.
GenotypeCounts simulate_true_snp_counts(const TrueSnpSpec& spec, double prevalence,
                                        std::int64_t cases, std::int64_t controls,
                                        std::mt19937_64& rng);

/// Draws both arms from the same HWE genotype distribution (null SNP).
GenotypeCounts simulate_null_snp_counts(double maf, std::int64_t cases,
                                        std::int64_t controls, std::mt19937_64& rng);

/// Scalar ranking key, larger = more significant: |Z_1/2| for CATT_HALF,
/// T for PEARSON, the MAX3 value, -MIN2 for MIN2, |phase-2 statistic| for
/// GMS. Tables where the method is not computable get -infinity (rank
/// last, ties in input order).
double rank_key(const GenotypeCounts& c, Method method);

/// 1-based ranks from keys: descending key, ties broken by index.
std::vector<std::int64_t> ranks_from_keys(std::span<const double> keys);

/// All SNP tables of one replicate: true SNPs first (config order), then
/// null SNPs with MAF ~ U(null_maf_low, null_maf_high). Every table is
/// drawn from substream(seed, replicate, snp_index).
std::vector<GenotypeCounts> simulate_replicate_tables(const ScanConfig& config,
                                                      std::int64_t replicate);

/// Runs the full ranking study and aggregates the three criteria per method.
CriteriaReport run_scan(const ScanConfig& config);

/// Selection-frequency study over a (maf x model x d') grid.
ModelSelectionReport run_model_selection_study(const ModelSelectionConfig& config);

/// The six marker MAFs used by the shipped ranking presets.
std::vector<double> true_snp_maf_defaults();

/// Preset true-SNP mixes for the two shipped ranking studies:
///   mix A: REC, REC, ADD, MUL, DOM, DOM
///   mix B: REC, ADD, ADD, MUL, MUL, DOM
/// Marker MAFs come from true_snp_maf_defaults(); the functional MAF is
/// functional_maf for every SNP unless it is <= 0, in which case it equals
/// the marker MAF (the d' = 1 convention).
std::vector<TrueSnpSpec> ranking_mix_a(double grr, double d_prime,
                                       double functional_maf = 0.0);
std::vector<TrueSnpSpec> ranking_mix_b(double grr, double d_prime,
                                       double functional_maf = 0.0);

}  // namespace rscan
