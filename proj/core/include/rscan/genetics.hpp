#pragma once

// Population-genetics layer for a biallelic marker in linkage disequilibrium
// with a biallelic functional locus.
//
// Conventions used throughout:
//   marker alleles     A / B, Pr(B) = p, risk allele candidate is B
//   functional alleles a / b, Pr(b) = q, risk allele is b
//   genotypes G0=AA, G1=AB, G2=BB (index = number of B alleles), same for
//   the functional locus with a/b.
// All probabilities are population quantities under Hardy-Weinberg
// proportions at both loci.

#include <array>
#include <string>
#include <utility>

namespace rscan {

/// Genotype probability triple (G0, G1, G2).
using GenotypeDist = std::array<double, 3>;

enum class GeneticModel { REC, ADD, MUL, DOM };

const char* to_string(GeneticModel model);
GeneticModel genetic_model_from_string(const std::string& name);

/// Risk-allele frequencies at the two loci, each strictly inside (0,1).
struct AlleleFreqs {
    double p;  ///< marker risk allele B
    double q;  ///< functional risk allele b
};

/// Joint haplotype probabilities of the marker/functional allele pairs,
/// together with the raw LD coefficient D and its normalized form D'.
///
/// Cell layout (rows = marker allele, columns = functional allele):
///     Aa  Ab      row sums  (1-p, p)
///     Ba  Bb      col sums  (1-q, q)
struct HaplotypeTable {
    double p_aa, p_ab, p_ba, p_bb;
    double d;
    double d_prime;

    double marker_freq() const { return p_ba + p_bb; }      // Pr(B)
    double functional_freq() const { return p_ab + p_bb; }  // Pr(b)
};

/// Conditional distribution of the functional genotype given the marker
/// genotype, pr[i][j] = Pr(G*_i | G_j). Each column is a distribution.
/// The four haplotype-ratio coefficients are kept alongside:
///   f1 = Pr(a|A), f2 = Pr(a|B), f3 = Pr(b|A), f4 = Pr(b|B).
struct TransitionMatrix {
    std::array<std::array<double, 3>, 3> pr;
    double f1, f2, f3, f4;
};

/// Genotype relative risks (lambda1, lambda2) = (f1/f0, f2/f0).
struct GrrPair {
    double lambda1;
    double lambda2;
};

/// Penetrances Pr(case | G_i) for i = 0, 1, 2.
struct PenetranceTriple {
    double f0, f1, f2;
};

/// Hardy-Weinberg disequilibrium coefficients in cases and controls.
struct HwdPair {
    double delta_case;     // Delta_1
    double delta_control;  // Delta_0
};

/// Membership in the constrained model space: lambda2 >= lambda1 and
/// lambda2 > 1 (risk allele known, effect ordered).
bool in_constrained_space(GrrPair grr);

/// (lambda1, lambda2) implied by one of the four named models.
/// Throws std::invalid_argument when lambda2 < 1.
GrrPair grr_from_model(GeneticModel model, double lambda2);

/// HWE genotype distribution ((1-p)^2, 2p(1-p), p^2).
GenotypeDist hwe_genotype_dist(double p);

/// Builds the joint haplotype table from allele frequencies and D'.
/// D = d_prime * min((1-q)p, (1-p)q) when d_prime >= 0 and
/// D = d_prime * min((1-q)(1-p), pq) otherwise.
/// Throws std::invalid_argument for |d_prime| > 1 or degenerate frequencies.
HaplotypeTable haplotype_table(AlleleFreqs freqs, double d_prime);

/// Correlation between the marker and functional alleles,
/// (p_aa*p_bb - p_ab*p_ba) / sqrt(p(1-p)q(1-q)). Equals d_prime when p = q.
double allele_correlation(const HaplotypeTable& h);

/// Conditional probabilities Pr(G*_i | G_j) under HWE at both loci.
/// Throws std::invalid_argument when a marker genotype probability is
/// below 1e-12 (the conditional would be undefined).
TransitionMatrix transition_matrix(const HaplotypeTable& h);

/// Penetrances induced at the marker: f_i = sum_j Pr(G*_j | G_i) f*_j.
PenetranceTriple marker_penetrances(const PenetranceTriple& functional,
                                    const HaplotypeTable& h);

/// Baseline penetrance f*0 that yields population prevalence k at the
/// functional locus under HWE:
///   f*0 = k / ((1-q)^2 + 2q(1-q)lambda1 + q^2 lambda2).
/// Throws std::invalid_argument when any implied penetrance leaves (0,1].
double baseline_penetrance(double prevalence, double q, GrrPair grr_functional);

/// GRRs induced at the marker for a named functional-locus model, obtained
/// by composing grr_from_model, baseline_penetrance and marker_penetrances.
GrrPair marker_grr(GeneticModel model, double lambda2_functional,
                   AlleleFreqs freqs, double d_prime, double prevalence);

/// Case and control genotype distributions at a locus with penetrances f,
/// HWE frequencies for allele frequency p, and prevalence k:
///   p_i = g_i f_i / k,  q_i = g_i (1 - f_i) / (1 - k).
/// Requires sum_i g_i f_i == k within 1e-9.
std::pair<GenotypeDist, GenotypeDist> case_control_dists(
    const PenetranceTriple& f, double p, double prevalence);

/// HWD coefficients Delta_1 = p2 - (p2 + p1/2)^2 and the same for controls.
HwdPair hwd_coefficients(const GenotypeDist& cases, const GenotypeDist& controls);

}  // namespace rscan
