#include "rscan/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rscan/parallel.hpp"
#include "rscan/rng.hpp"

namespace rscan {

namespace {

void validate(const ScanConfig& c) {
    const auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
    if (c.total_snps <= 0) fail("total_snps must be positive");
    if (static_cast<std::int64_t>(c.true_snps.size()) > c.total_snps) {
        fail("more true SNPs than total SNPs");
    }
    if (c.top_l <= 0 || c.top_l > c.total_snps) fail("top_l must lie in [1, total_snps]");
    if (c.cases <= 0 || c.controls <= 0) fail("cases and controls must be positive");
    if (!(c.prevalence > 0.0 && c.prevalence < 1.0)) fail("prevalence must lie in (0,1)");
    if (c.replicates <= 0) fail("replicates must be positive");
    if (!(c.null_maf_low > 0.0 && c.null_maf_high < 1.0 &&
          c.null_maf_low <= c.null_maf_high)) {
        fail("null MAF range must satisfy 0 < low <= high < 1");
    }
}

}  // namespace

std::pair<GenotypeDist, GenotypeDist> snp_sampling_dists(const TrueSnpSpec& spec,
                                                         double prevalence) {
    const GrrPair grr_star = grr_from_model(spec.model, spec.grr_lambda2_star);
    const double f0_star = baseline_penetrance(prevalence, spec.maf_functional, grr_star);
    const PenetranceTriple f_star{f0_star, f0_star * grr_star.lambda1,
                                  f0_star * grr_star.lambda2};
    const HaplotypeTable h =
        haplotype_table({spec.maf_marker, spec.maf_functional}, spec.d_prime);
    const PenetranceTriple f = marker_penetrances(f_star, h);
    return case_control_dists(f, spec.maf_marker, prevalence);
}

GenotypeCounts simulate_true_snp_counts(const TrueSnpSpec& spec, double prevalence,
                                        std::int64_t cases, std::int64_t controls,
                                        std::mt19937_64& rng) {
    const auto [case_dist, control_dist] = snp_sampling_dists(spec, prevalence);
    return sample_counts(rng, cases, controls, case_dist, control_dist);
}

GenotypeCounts simulate_null_snp_counts(double maf, std::int64_t cases,
                                        std::int64_t controls, std::mt19937_64& rng) {
    const GenotypeDist g = hwe_genotype_dist(maf);
    return sample_counts(rng, cases, controls, g, g);
}

double rank_key(const GenotypeCounts& c, Method method) {
    try {
        switch (method) {
            case Method::CATT_HALF: return std::fabs(catt(c, 0.5).statistic);
            case Method::PEARSON: return pearson(c).statistic;
            case Method::MAX3: return max3(c).statistic;
            case Method::MIN2: return -min2(c).statistic;
            case Method::GMS: return std::fabs(gms(c).statistic);
            default:
                throw std::invalid_argument("no ranking key for this method");
        }
    } catch (const std::runtime_error&) {
        return -std::numeric_limits<double>::infinity();
    }
}

std::vector<std::int64_t> ranks_from_keys(std::span<const double> keys) {
    const std::size_t n = keys.size();
    std::vector<std::int64_t> order(n);
    std::iota(order.begin(), order.end(), std::int64_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        return keys[static_cast<std::size_t>(a)] > keys[static_cast<std::size_t>(b)];
    });
    std::vector<std::int64_t> ranks(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        ranks[static_cast<std::size_t>(order[pos])] = static_cast<std::int64_t>(pos) + 1;
    }
    return ranks;
}

std::vector<GenotypeCounts> simulate_replicate_tables(const ScanConfig& config,
                                                      std::int64_t replicate) {
    validate(config);
    const std::size_t n_true = config.true_snps.size();
    const std::size_t total = static_cast<std::size_t>(config.total_snps);

    // penetrance mapping is deterministic per spec; do it once
    std::vector<std::pair<GenotypeDist, GenotypeDist>> true_dists;
    true_dists.reserve(n_true);
    for (const TrueSnpSpec& spec : config.true_snps) {
        true_dists.push_back(snp_sampling_dists(spec, config.prevalence));
    }

    std::vector<GenotypeCounts> tables(total);
    const auto rep = static_cast<std::uint64_t>(replicate);
    for (std::size_t i = 0; i < total; ++i) {
        auto rng = substream(config.seed, rep, static_cast<std::uint64_t>(i));
        if (i < n_true) {
            tables[i] = sample_counts(rng, config.cases, config.controls,
                                      true_dists[i].first, true_dists[i].second);
        } else {
            std::uniform_real_distribution<double> maf(config.null_maf_low,
                                                       config.null_maf_high);
            tables[i] = simulate_null_snp_counts(maf(rng), config.cases,
                                                 config.controls, rng);
        }
    }
    return tables;
}

CriteriaReport run_scan(const ScanConfig& config) {
    validate(config);
    const std::size_t reps = static_cast<std::size_t>(config.replicates);
    const std::size_t n_true = config.true_snps.size();

    struct RepOutcome {
        std::array<std::int64_t, kScanMethodCount> true_in_top{};
        std::array<std::int64_t, kScanMethodCount> min_rank{};  // 0 = no hit
    };
    std::vector<RepOutcome> outcomes(reps);

    parallel_for(reps, [&](std::size_t rep) {
        const auto tables =
            simulate_replicate_tables(config, static_cast<std::int64_t>(rep));
        std::vector<double> keys(tables.size());
        for (std::size_t m = 0; m < kScanMethodCount; ++m) {
            for (std::size_t i = 0; i < tables.size(); ++i) {
                keys[i] = rank_key(tables[i], kScanMethods[m]);
            }
            const auto ranks = ranks_from_keys(keys);
            std::int64_t in_top = 0;
            std::int64_t best = 0;
            for (std::size_t t = 0; t < n_true; ++t) {
                const std::int64_t rank = ranks[t];
                if (rank <= config.top_l) {
                    ++in_top;
                    if (best == 0 || rank < best) best = rank;
                }
            }
            outcomes[rep].true_in_top[m] = in_top;
            outcomes[rep].min_rank[m] = best;
        }
    });

    CriteriaReport report;
    report.config = config;
    for (std::size_t m = 0; m < kScanMethodCount; ++m) {
        MethodCriteria mc;
        mc.method = kScanMethods[m];
        std::int64_t hits = 0, total_in_top = 0, min_rank_sum = 0;
        for (const RepOutcome& o : outcomes) {
            total_in_top += o.true_in_top[m];
            if (o.min_rank[m] > 0) {
                ++hits;
                min_rank_sum += o.min_rank[m];
            }
        }
        mc.replicates_with_hit = hits;
        mc.prob_at_least_one = static_cast<double>(hits) / static_cast<double>(reps);
        mc.avg_true_in_top =
            static_cast<double>(total_in_top) / static_cast<double>(reps);
        mc.mean_min_rank = hits > 0 ? static_cast<double>(min_rank_sum) /
                                          static_cast<double>(hits)
                                    : std::numeric_limits<double>::quiet_NaN();
        report.methods.push_back(mc);
    }
    return report;
}

ModelSelectionReport run_model_selection_study(const ModelSelectionConfig& config) {
    if (config.maf_grid.empty() || config.model_grid.empty() ||
        config.d_prime_grid.empty()) {
        throw std::invalid_argument("model-selection grids must be nonempty");
    }
    if (config.replicates <= 0) throw std::invalid_argument("replicates must be positive");
    if (config.cases <= 0 || config.controls <= 0) {
        throw std::invalid_argument("cases and controls must be positive");
    }

    const std::size_t n_cells = config.maf_grid.size() * config.model_grid.size() *
                                config.d_prime_grid.size();
    const std::size_t reps = static_cast<std::size_t>(config.replicates);

    std::vector<TrueSnpSpec> specs(n_cells);
    {
        std::size_t cell = 0;
        for (double maf : config.maf_grid) {
            for (GeneticModel model : config.model_grid) {
                for (double dp : config.d_prime_grid) {
                    specs[cell++] = {model, maf, maf, config.lambda2_star, dp};
                }
            }
        }
    }

    // selections[cell * reps + rep] in {0 = REC, 1 = ADDMUL, 2 = DOM}
    std::vector<std::uint8_t> selections(n_cells * reps);
    parallel_for(n_cells * reps, [&](std::size_t task) {
        const std::size_t cell = task / reps;
        const std::size_t rep = task % reps;
        auto rng = substream(config.seed, cell, rep);
        const GenotypeCounts counts = simulate_true_snp_counts(
            specs[cell], config.prevalence, config.cases, config.controls, rng);
        const GmsResult g = gms(counts, config.threshold);
        selections[task] = g.selected_model == GmsModel::REC      ? 0
                           : g.selected_model == GmsModel::ADDMUL ? 1
                                                                  : 2;
    });

    ModelSelectionReport report;
    report.config = config;
    report.cells.reserve(n_cells);
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        std::int64_t tally[3] = {0, 0, 0};
        for (std::size_t rep = 0; rep < reps; ++rep) {
            ++tally[selections[cell * reps + rep]];
        }
        ModelSelectionCell out;
        out.maf = specs[cell].maf_marker;
        out.true_model = specs[cell].model;
        out.d_prime = specs[cell].d_prime;
        out.freq_rec = static_cast<double>(tally[0]) / static_cast<double>(reps);
        out.freq_addmul = static_cast<double>(tally[1]) / static_cast<double>(reps);
        out.freq_dom = static_cast<double>(tally[2]) / static_cast<double>(reps);
        report.cells.push_back(out);
    }
    return report;
}

std::vector<double> true_snp_maf_defaults() {
    return {0.1821, 0.2943, 0.1078, 0.4459, 0.1620, 0.1825};
}

namespace {

std::vector<TrueSnpSpec> make_mix(const std::array<GeneticModel, 6>& models,
                                  double grr, double d_prime, double functional_maf) {
    const std::vector<double> mafs = true_snp_maf_defaults();
    std::vector<TrueSnpSpec> specs;
    specs.reserve(6);
    for (std::size_t i = 0; i < 6; ++i) {
        TrueSnpSpec spec;
        spec.model = models[i];
        spec.maf_marker = mafs[i];
        spec.maf_functional = functional_maf > 0.0 ? functional_maf : mafs[i];
        spec.grr_lambda2_star = grr;
        spec.d_prime = d_prime;
        specs.push_back(spec);
    }
    return specs;
}

}  // namespace

std::vector<TrueSnpSpec> ranking_mix_a(double grr, double d_prime,
                                       double functional_maf) {
    using enum GeneticModel;
    return make_mix({REC, REC, ADD, MUL, DOM, DOM}, grr, d_prime, functional_maf);
}

std::vector<TrueSnpSpec> ranking_mix_b(double grr, double d_prime,
                                       double functional_maf) {
    using enum GeneticModel;
    return make_mix({REC, ADD, ADD, MUL, MUL, DOM}, grr, d_prime, functional_maf);
}

}  // namespace rscan
