#pragma once

#include <optional>

#include "qidlab/subsets.hpp"
#include "qidlab/transmission.hpp"

namespace qidlab {

/// Witness that all binary tests descend from one POVM by coarse-graining:
/// tests[j] = sum over groups[j] of base effects.
struct SimultaneityWitness {
    SubPovm base;
    std::vector<std::vector<int>> groups;

    json to_json() const;
    static SimultaneityWitness from_json(const json& j);
};

/// Identification code: per-message signal state and binary-test effect over
/// n uses of a channel.
struct IdCode {
    KrausChannel channel;  // single copy
    int block_n;
    std::vector<DensityOperator> states;
    std::vector<Mat> tests;
    std::optional<SimultaneityWitness> simultaneity;
    bool zero_entropy = false;

    IdCode(KrausChannel ch, int n, std::vector<DensityOperator> states_, std::vector<Mat> tests_,
           std::optional<SimultaneityWitness> witness, bool zero_entropy_);

    int messages() const { return static_cast<int>(states.size()); }
    KrausChannel blocked_channel() const { return channel.tensor_power(block_n); }

    json to_json() const;
    static IdCode from_json(const json& j);
};

struct IdErrorReport {
    double lambda1_max = 0.0;  // worst error of first kind
    double lambda2_max = 0.0;  // worst error of second kind
    std::pair<int, int> worst_pair{-1, -1};
    std::vector<double> histogram;  // 20-bin counts of cross Born values in [0,1]

    json to_json() const;
    static IdErrorReport from_json(const json& j);
};

/// Full N x N evaluation of both error kinds.
IdErrorReport verify_id_code(const IdCode& code);

/// Mixture construction: states are uniform mixtures over the family's
/// subsets, tests the matching sums of decoder effects. With transmission
/// max error lambda and family overlap fraction <= lambda this yields
/// errors (lambda, 2*lambda).
IdCode build_loeber_code(const TransmissionCode& tcode, const SubsetFamily& family);

enum class PhasePolicy { uniform, zeros };

struct ZeroEntropyBuildStats {
    double delta = 0.0;             // max error of the input code, sets the thresholds
    std::vector<int> rejections;    // per message
    int total_rejections() const;

    json to_json() const;
};

/// Superposition construction: for each subset, search i.i.d. uniform phase
/// vectors until the state passes Tr phi_j (1 - E~_j) <= 3*delta and
/// Tr phi_j E~_k <= 5*delta against every other test, where E~ are the
/// Heisenberg-picture test images. Input must be pure and mutually
/// orthogonal. Throws PhaseSearchExhausted after `trials` rejections.
std::pair<IdCode, ZeroEntropyBuildStats> build_zero_entropy_code(const TransmissionCode& ocode,
                                                                 const SubsetFamily& family,
                                                                 PhasePolicy policy, uint64_t seed,
                                                                 int trials = 200);

/// Exact torus average of the superposition state for one subset; equals the
/// mixture state of the same subset (the off-diagonal phase integrals vanish).
Mat phase_average_state(const TransmissionCode& ocode, const std::vector<int>& subset);

struct ConcentrationStats {
    double p_first_tail = 0.0;        // Pr[X_j > 3*delta]
    double p_second_tail_max = 0.0;   // max_k Pr[X_k > 5*delta]
    double median_first = 0.0;        // med(X_j)
    double median_second_max = 0.0;   // max_k med(X_k)
    double mean_first = 0.0;
    int samples = 0;

    json to_json() const;
};

/// Monte Carlo over i.i.d. phase vectors for message j of the family.
ConcentrationStats estimate_concentration(const TransmissionCode& ocode, const SubsetFamily& family,
                                          int j, double delta, int samples, uint64_t seed);

/// Analytic tail ceiling exp(-delta^4 L / (128 pi^2)).
double concentration_ceiling(double delta, int L);

struct SizeBoundCheck {
    int N = 0;
    double pure_bound = 0.0;     // may be +inf in double range
    double general_bound = 0.0;  // may be +inf
    double log2_pure_bound = 0.0;
    double log2_general_bound = 0.0;
    bool satisfied = false;

    json to_json() const;
};

/// Dimension bounds N <= (5/(1-l1-l2))^(2d) for pure codes and ^(2d^2) in
/// general. d defaults to the codeword dimension in_dim^n; pass d_override
/// to use another dimension. Throws TrivialRegime when l1 + l2 >= 1.
SizeBoundCheck check_size_bounds(const IdCode& code, const IdErrorReport& report, int d_override = -1);

/// Purify every signal state of a code over the identity channel with an
/// ancilla of dimension dC^n and route the ancilla into a discarding channel.
/// The error report is unchanged.
IdCode purify_and_extend(const IdCode& code, int dC);

}  // namespace qidlab
