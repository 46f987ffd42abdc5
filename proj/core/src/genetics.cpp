#include "rscan/genetics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rscan {

namespace {

constexpr double kProbTol = 1e-12;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double clamp_nonneg(double x) {
    // haplotype cells can come out a few ulp below zero at |D'| = 1
    return (x < 0.0 && x > -1e-14) ? 0.0 : x;
}

}  // namespace

const char* to_string(GeneticModel model) {
    switch (model) {
        case GeneticModel::REC: return "REC";
        case GeneticModel::ADD: return "ADD";
        case GeneticModel::MUL: return "MUL";
        case GeneticModel::DOM: return "DOM";
    }
    return "?";
}

GeneticModel genetic_model_from_string(const std::string& name) {
    if (name == "REC") return GeneticModel::REC;
    if (name == "ADD") return GeneticModel::ADD;
    if (name == "MUL") return GeneticModel::MUL;
    if (name == "DOM") return GeneticModel::DOM;
    throw std::invalid_argument("unknown genetic model: " + name);
}

bool in_constrained_space(GrrPair grr) {
    return grr.lambda2 >= grr.lambda1 && grr.lambda2 > 1.0;
}

GrrPair grr_from_model(GeneticModel model, double lambda2) {
    require(std::isfinite(lambda2) && lambda2 >= 1.0, "lambda2 must be >= 1");
    switch (model) {
        case GeneticModel::REC: return {1.0, lambda2};
        case GeneticModel::ADD: return {(1.0 + lambda2) / 2.0, lambda2};
        case GeneticModel::MUL: return {std::sqrt(lambda2), lambda2};
        case GeneticModel::DOM: return {lambda2, lambda2};
    }
    throw std::invalid_argument("unknown genetic model");
}

GenotypeDist hwe_genotype_dist(double p) {
    require(p > 0.0 && p < 1.0, "allele frequency must lie in (0,1)");
    const double pc = 1.0 - p;
    return {pc * pc, 2.0 * p * pc, p * p};
}

HaplotypeTable haplotype_table(AlleleFreqs freqs, double d_prime) {
    const double p = freqs.p, q = freqs.q;
    require(p > 0.0 && p < 1.0, "marker allele frequency must lie in (0,1)");
    require(q > 0.0 && q < 1.0, "functional allele frequency must lie in (0,1)");
    require(std::isfinite(d_prime) && std::fabs(d_prime) <= 1.0,
            "d_prime must lie in [-1,1]");

    const double pc = 1.0 - p, qc = 1.0 - q;
    const double d = d_prime >= 0.0 ? d_prime * std::min(qc * p, pc * q)
                                    : d_prime * std::min(qc * pc, p * q);

    HaplotypeTable h;
    h.p_aa = clamp_nonneg(pc * qc + d);
    h.p_ab = clamp_nonneg(pc * q - d);
    h.p_ba = clamp_nonneg(p * qc - d);
    h.p_bb = clamp_nonneg(p * q + d);
    h.d = d;
    h.d_prime = d_prime;
    return h;
}

double allele_correlation(const HaplotypeTable& h) {
    const double p = h.marker_freq();
    const double q = h.functional_freq();
    const double denom = std::sqrt(p * (1.0 - p) * q * (1.0 - q));
    require(denom > 0.0, "degenerate haplotype table");
    return (h.p_aa * h.p_bb - h.p_ab * h.p_ba) / denom;
}

TransitionMatrix transition_matrix(const HaplotypeTable& h) {
    const double p = h.marker_freq();
    const double pc = 1.0 - p;
    require(pc * pc >= kProbTol && 2.0 * p * pc >= kProbTol && p * p >= kProbTol,
            "marker genotype probability is degenerate");

    TransitionMatrix t;
    t.f1 = h.p_aa / pc;  // Pr(a|A)
    t.f2 = h.p_ba / p;   // Pr(a|B)
    t.f3 = h.p_ab / pc;  // Pr(b|A)
    t.f4 = h.p_bb / p;   // Pr(b|B)

    const double f1 = t.f1, f2 = t.f2, f3 = t.f3, f4 = t.f4;
    t.pr[0] = {f1 * f1, f1 * f2, f2 * f2};
    t.pr[1] = {2.0 * f1 * f3, f1 * f4 + f2 * f3, 2.0 * f2 * f4};
    t.pr[2] = {f3 * f3, f3 * f4, f4 * f4};
    return t;
}

PenetranceTriple marker_penetrances(const PenetranceTriple& functional,
                                    const HaplotypeTable& h) {
    require(functional.f0 >= 0.0 && functional.f0 <= 1.0 &&
                functional.f1 >= 0.0 && functional.f1 <= 1.0 &&
                functional.f2 >= 0.0 && functional.f2 <= 1.0,
            "functional penetrances must lie in [0,1]");
    const TransitionMatrix t = transition_matrix(h);
    const double fs[3] = {functional.f0, functional.f1, functional.f2};
    double f[3];
    for (int i = 0; i < 3; ++i) {
        f[i] = t.pr[0][i] * fs[0] + t.pr[1][i] * fs[1] + t.pr[2][i] * fs[2];
    }
    return {f[0], f[1], f[2]};
}

double baseline_penetrance(double prevalence, double q, GrrPair grr_functional) {
    require(prevalence > 0.0 && prevalence < 1.0, "prevalence must lie in (0,1)");
    require(q > 0.0 && q < 1.0, "allele frequency must lie in (0,1)");
    const double l1 = grr_functional.lambda1, l2 = grr_functional.lambda2;
    require(l1 >= 0.0 && l2 >= 0.0, "GRRs must be nonnegative");

    const double qc = 1.0 - q;
    const double denom = qc * qc + 2.0 * q * qc * l1 + q * q * l2;
    const double f0 = prevalence / denom;
    require(f0 > 0.0 && f0 < 1.0, "baseline penetrance leaves (0,1)");
    require(f0 * l1 <= 1.0 && f0 * l2 <= 1.0,
            "implied penetrance exceeds 1 for these parameters");
    return f0;
}

GrrPair marker_grr(GeneticModel model, double lambda2_functional,
                   AlleleFreqs freqs, double d_prime, double prevalence) {
    const GrrPair grr_star = grr_from_model(model, lambda2_functional);
    const double f0_star = baseline_penetrance(prevalence, freqs.q, grr_star);
    const PenetranceTriple f_star{f0_star, f0_star * grr_star.lambda1,
                                  f0_star * grr_star.lambda2};
    const HaplotypeTable h = haplotype_table(freqs, d_prime);
    const PenetranceTriple f = marker_penetrances(f_star, h);
    require(f.f0 > 0.0, "marker baseline penetrance is zero");
    return {f.f1 / f.f0, f.f2 / f.f0};
}

std::pair<GenotypeDist, GenotypeDist> case_control_dists(
    const PenetranceTriple& f, double p, double prevalence) {
    require(prevalence > 0.0 && prevalence < 1.0, "prevalence must lie in (0,1)");
    const GenotypeDist g = hwe_genotype_dist(p);
    const double fi[3] = {f.f0, f.f1, f.f2};
    const double implied = g[0] * fi[0] + g[1] * fi[1] + g[2] * fi[2];
    require(std::fabs(implied - prevalence) <= 1e-9,
            "penetrances are inconsistent with the prevalence");

    GenotypeDist cases, controls;
    for (int i = 0; i < 3; ++i) {
        cases[i] = g[i] * fi[i] / prevalence;
        controls[i] = g[i] * (1.0 - fi[i]) / (1.0 - prevalence);
    }
    return {cases, controls};
}

HwdPair hwd_coefficients(const GenotypeDist& cases, const GenotypeDist& controls) {
    const auto delta = [](const GenotypeDist& d) {
        const double b = d[2] + d[1] / 2.0;
        return d[2] - b * b;
    };
    return {delta(cases), delta(controls)};
}

}  // namespace rscan
