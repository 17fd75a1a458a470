#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace qidlab {

// Bit-exact reproducibility across machines requires avoiding
// std::uniform_real_distribution and friends (their output is
// implementation-defined). The engine itself (mt19937_64) is fully
// specified by the standard, so we keep it and roll our own variates.

uint64_t mix64(uint64_t x);

// Labeled seed derivation: one root seed, independent streams per label.
uint64_t derive_seed(uint64_t root, uint64_t a);
uint64_t derive_seed(uint64_t root, uint64_t a, uint64_t b);
uint64_t derive_seed(uint64_t root, std::string_view label);
uint64_t derive_seed(uint64_t root, std::string_view label, uint64_t a);

class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform in (0,1), 53-bit resolution, never exactly 0 or 1.
    double uniform01() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform angle in [0, 2*pi).
    double angle() { return static_cast<double>(eng_() >> 11) * 0x1p-53 * 6.283185307179586476925286766559; }

    // Unbiased integer in [0, n).
    uint64_t uniform_int(uint64_t n);

    // Standard normal via Box-Muller (cosine branch only).
    double gaussian();

    std::complex<double> gaussian_complex() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

  private:
    std::mt19937_64 eng_;
};

// Haar-uniform unit vector in C^dim (normalized complex Gaussian).
Eigen::VectorXcd haar_vector(Rng& rng, int dim);

}  // namespace qidlab
