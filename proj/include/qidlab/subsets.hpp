#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qidlab/json_io.hpp"

namespace qidlab {

/// Family of floor(eps*M)-subsets of {0,...,M-1} with pairwise intersections
/// bounded by lambda * floor(eps*M).
struct SubsetFamily {
    int ground_M = 0;
    int subset_size = 0;
    double eps = 0.0;
    double lambda = 0.0;
    std::vector<std::vector<int>> subsets;  // each sorted ascending

    int overlap_bound() const;  // largest allowed intersection size
    double overlap_fraction() const { return static_cast<double>(overlap_bound()) / subset_size; }

    json to_json() const;
    static SubsetFamily from_json(const json& j);
};

struct FamilyCheck {
    bool ok = true;
    std::pair<int, int> worst_pair{-1, -1};
    int worst_overlap = 0;
};

/// Sufficient condition from the probabilistic existence proof:
/// lambda * log2(1/eps - 1) > 2.
bool family_condition_holds(double eps, double lambda);

/// Rejection sampling: draw uniform subsets, accept while the pairwise bound
/// holds against everything accepted so far. Deterministic given the seed.
/// max_attempts < 0 means 1000 * N_target.
SubsetFamily generate_family(int M, double eps, double lambda, int N_target, uint64_t seed,
                             long long max_attempts = -1);

/// Exhaustive mode for M <= 20: enumerate all subsets in lexicographic order
/// and greedily accept the qualifying ones.
SubsetFamily exhaustive_family(int M, double eps, double lambda, int N_target);

/// Exhaustive pairwise check; reports the worst pair.
FamilyCheck verify_family(const SubsetFamily& family);

}  // namespace qidlab
