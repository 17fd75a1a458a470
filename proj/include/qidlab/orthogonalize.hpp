#pragma once

#include "qidlab/transmission.hpp"

namespace qidlab {

/// Pretty-good measurement of a list of PSD operators: F_m = S^{-1/2} rho_m
/// S^{-1/2} with S = sum_m rho_m and the inverse square root taken on the
/// support of S. The effects sum to the support projector of S.
SubPovm pgm(const std::vector<Mat>& states);

/// Replace every codeword by the eigenvector that maximizes its own decoding
/// probability. Never increases any per-message error.
TransmissionCode purify_codewords(const TransmissionCode& code);

/// Greedy maximal linearly independent subset: walk `order`, keep an index
/// when adding its vector keeps the Gram matrix's smallest eigenvalue above
/// rank_tol. Returned indices are in acceptance order.
std::vector<int> greedy_independent_set(const std::vector<Vec>& vectors, const std::vector<int>& order);

/// Rank selection for the pure-code pipeline: messages are visited by
/// decreasing success probability (given the Heisenberg-picture effects),
/// so the kept sub-code is biased toward low error. Throws RankDeficient
/// when fewer than two independent states exist.
std::vector<int> select_linearly_independent(const std::vector<Vec>& vectors,
                                             const std::vector<Mat>& heisenberg_effects);

/// Symmetric orthogonalization |phi_m> = T^{-1/2}|psi_m>, T = sum |psi_m><psi_m|.
/// Requires linear independence; output is orthonormal with each <psi_m|phi_m>
/// made real and nonnegative.
std::vector<Vec> orthogonalize_states(const std::vector<Vec>& vectors);

struct OrthogonalizationReport {
    int M = 0;        // input messages
    int L = 0;        // linearly independent states kept
    int M_prime = 0;  // messages after expurgation
    double eps_in = 0.0;
    double delta_out = 0.0;
    double bound_delta = 0.0;  // 2 sqrt(5 eps) / (1 - eps)^2, clamped to 1
    double gram_deviation = 0.0;
    // avg errors after: input, purification, selection, orthogonalization;
    // last entry is the final max error.
    std::vector<double> per_stage_errors;

    json to_json() const;
    static OrthogonalizationReport from_json(const json& j);
};

double orthogonal_code_error_bound(double eps);

/// Average-error-eps transmission code -> pure mutually orthogonal code with
/// the original decoder restricted to the kept messages. The report records
/// sizes, measured errors and the analytic bound.
std::pair<TransmissionCode, OrthogonalizationReport> orthogonalize_code(const TransmissionCode& code);

}  // namespace qidlab
