#pragma once

#include <cstdint>

#include "qidlab/quantum.hpp"

namespace qidlab {

/// Adversarial complete POVM for which the all-equal-phase uniform
/// superposition of the first K basis states is never detected by the
/// coarse-grained effect D = sum_{m<=K} F_m, even though every F_m decodes
/// its own basis state with error at most 2/K.
struct CounterexampleInstance {
    int K = 0;
    int M = 0;                  // ambient dimension, M >= K+1
    std::vector<Vec> basis;     // computational basis of C^M
    SubPovm povm;               // complete
    Vec psi;                    // uniform superposition of the first K
    Mat detection;              // D = sum of the first K effects

    json to_json() const;
};

CounterexampleInstance build_counterexample(int K, int M);

/// Tr psi D; exactly zero up to floating error.
double fixed_phase_failure(const CounterexampleInstance& inst);

struct DetectionResult {
    double tr_detection = 0.0;  // Tr psi' D
    double closed_form = 0.0;   // 1 - |<psi|psi'>|^2
};

/// Detection probability of the re-phased superposition
/// psi' = (1/sqrt(K)) sum exp(i a_m) |m>, against the closed form.
DetectionResult random_phase_detection(const CounterexampleInstance& inst,
                                       const std::vector<double>& phases);

/// Monte Carlo mean of the detection probability over uniform phases;
/// converges to 1 - 1/K.
double mean_random_phase_detection(const CounterexampleInstance& inst, int samples, uint64_t seed);

}  // namespace qidlab
