#include "qidlab/rng.hpp"

#include <cmath>

namespace qidlab {

uint64_t mix64(uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

static uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t derive_seed(uint64_t root, uint64_t a) { return mix64(mix64(root) ^ mix64(a)); }

uint64_t derive_seed(uint64_t root, uint64_t a, uint64_t b) {
    return mix64(derive_seed(root, a) ^ mix64(b + 0x517cc1b727220a95ULL));
}

uint64_t derive_seed(uint64_t root, std::string_view label) { return derive_seed(root, fnv1a(label)); }

uint64_t derive_seed(uint64_t root, std::string_view label, uint64_t a) {
    return derive_seed(root, fnv1a(label), a);
}

uint64_t Rng::uniform_int(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % n;
}

double Rng::gaussian() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

Eigen::VectorXcd haar_vector(Rng& rng, int dim) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.gaussian_complex();
    v.normalize();
    return v;
}

}  // namespace qidlab
