#include "qidlab/counterexample.hpp"

#include <cmath>

#include "qidlab/errors.hpp"
#include "qidlab/rng.hpp"

namespace qidlab {

json CounterexampleInstance::to_json() const {
    return json{{"K", K},
                {"M", M},
                {"povm", povm.to_json()},
                {"tr_psi_D", fixed_phase_failure(*this)}};
}

CounterexampleInstance build_counterexample(int K, int M) {
    if (K < 2 || M < K + 1) throw BadParams("counterexample needs K >= 2 and M >= K+1");
    if (M > tol::dim_guard) throw DimGuardExceeded("counterexample dimension exceeds guard");

    std::vector<Vec> basis;
    basis.reserve(static_cast<size_t>(M));
    for (int m = 0; m < M; ++m) {
        Vec e = Vec::Zero(M);
        e[m] = 1.0;
        basis.push_back(std::move(e));
    }
    Vec psi = Vec::Zero(M);
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(K));
    for (int m = 0; m < K; ++m) psi[m] = inv_sqrt;

    std::vector<Mat> effects;
    effects.reserve(static_cast<size_t>(M));
    for (int m = 0; m < K; ++m) {
        const Vec nu = basis[static_cast<size_t>(m)] - inv_sqrt * psi;
        effects.push_back(projector(nu));
    }
    for (int m = K; m < M - 1; ++m) effects.push_back(projector(basis[static_cast<size_t>(m)]));
    effects.push_back(projector(basis[static_cast<size_t>(M - 1)]) + projector(psi));
    SubPovm povm(std::move(effects), true);

    Mat detection = Mat::Zero(M, M);
    for (int m = 0; m < K; ++m) detection += povm.effect(m);
    detection = hermitize(detection);
    return CounterexampleInstance{K, M, std::move(basis), std::move(povm), std::move(psi),
                                  std::move(detection)};
}

double fixed_phase_failure(const CounterexampleInstance& inst) {
    return std::real(inst.psi.dot(inst.detection * inst.psi));
}

DetectionResult random_phase_detection(const CounterexampleInstance& inst,
                                       const std::vector<double>& phases) {
    if (static_cast<int>(phases.size()) != inst.K) throw BadParams("need exactly K phases");
    Vec psi_prime = Vec::Zero(inst.M);
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(inst.K));
    for (int m = 0; m < inst.K; ++m) psi_prime[m] = inv_sqrt * std::polar(1.0, phases[static_cast<size_t>(m)]);
    DetectionResult result;
    result.tr_detection = std::real(psi_prime.dot(inst.detection * psi_prime));
    result.closed_form = 1.0 - std::norm(inst.psi.dot(psi_prime));
    return result;
}

double mean_random_phase_detection(const CounterexampleInstance& inst, int samples, uint64_t seed) {
    if (samples < 1) throw BadParams("samples must be >= 1");
    double sum = 0.0;
    for (int t = 0; t < samples; ++t) {
        Rng rng(derive_seed(seed, "counterexample", static_cast<uint64_t>(t)));
        std::vector<double> phases(static_cast<size_t>(inst.K));
        for (auto& a : phases) a = rng.angle();
        sum += random_phase_detection(inst, phases).tr_detection;
    }
    return sum / samples;
}

}  // namespace qidlab
