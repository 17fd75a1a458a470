#include "qidlab/subsets.hpp"

#include <algorithm>
#include <cmath>

#include "qidlab/errors.hpp"
#include "qidlab/rng.hpp"

namespace qidlab {

int SubsetFamily::overlap_bound() const {
    // integer intersection sizes, so the real bound floors
    return static_cast<int>(std::floor(lambda * subset_size + 1e-12));
}

json SubsetFamily::to_json() const {
    return json{{"M", ground_M}, {"size", subset_size}, {"eps", eps}, {"lambda", lambda}, {"subsets", subsets}};
}

SubsetFamily SubsetFamily::from_json(const json& j) {
    SubsetFamily f;
    f.ground_M = j.at("M").get<int>();
    f.subset_size = j.at("size").get<int>();
    f.eps = j.at("eps").get<double>();
    f.lambda = j.at("lambda").get<double>();
    f.subsets = j.at("subsets").get<std::vector<std::vector<int>>>();
    for (auto& s : f.subsets) {
        std::sort(s.begin(), s.end());
        if (static_cast<int>(s.size()) != f.subset_size) throw BadParams("family JSON: wrong subset size");
        for (int v : s)
            if (v < 0 || v >= f.ground_M) throw BadParams("family JSON: index out of range");
    }
    return f;
}

bool family_condition_holds(double eps, double lambda) {
    if (eps <= 0.0 || eps >= 1.0) return false;
    return lambda * std::log2(1.0 / eps - 1.0) > 2.0;
}

namespace {

int sorted_overlap(const std::vector<int>& a, const std::vector<int>& b) {
    int count = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++count;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return count;
}

void check_params(int M, double eps, double lambda, int N_target, int& size) {
    if (M < 1 || N_target < 1) throw BadParams("family: M and N_target must be positive");
    if (eps <= 0.0 || eps > 1.0) throw BadParams("family: eps must be in (0,1]");
    if (lambda < 0.0 || lambda > 1.0) throw BadParams("family: lambda must be in [0,1]");
    size = static_cast<int>(std::floor(eps * M + 1e-12));
    if (size < 1) throw BadParams("family: floor(eps*M) must be >= 1");
}

bool fits(const std::vector<int>& cand, const std::vector<std::vector<int>>& accepted, int bound) {
    for (const auto& s : accepted)
        if (sorted_overlap(cand, s) > bound) return false;
    return true;
}

}  // namespace

SubsetFamily generate_family(int M, double eps, double lambda, int N_target, uint64_t seed,
                             long long max_attempts) {
    SubsetFamily fam;
    check_params(M, eps, lambda, N_target, fam.subset_size);
    fam.ground_M = M;
    fam.eps = eps;
    fam.lambda = lambda;
    if (max_attempts < 0) max_attempts = 1000LL * N_target;
    const int bound = fam.overlap_bound();

    Rng rng(derive_seed(seed, "subset-family"));
    std::vector<int> pool(static_cast<size_t>(M));
    long long attempts = 0;
    while (static_cast<int>(fam.subsets.size()) < N_target) {
        if (attempts++ >= max_attempts)
            throw TargetUnreachable("family: " + std::to_string(fam.subsets.size()) + " of " +
                                    std::to_string(N_target) + " subsets after " +
                                    std::to_string(max_attempts) + " attempts");
        // partial Fisher-Yates draw of a uniform subset
        for (int i = 0; i < M; ++i) pool[static_cast<size_t>(i)] = i;
        std::vector<int> cand(static_cast<size_t>(fam.subset_size));
        for (int i = 0; i < fam.subset_size; ++i) {
            const auto j = i + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(M - i)));
            std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
            cand[static_cast<size_t>(i)] = pool[static_cast<size_t>(i)];
        }
        std::sort(cand.begin(), cand.end());
        if (fits(cand, fam.subsets, bound)) fam.subsets.push_back(std::move(cand));
    }
    return fam;
}

SubsetFamily exhaustive_family(int M, double eps, double lambda, int N_target) {
    if (M > 20) throw BadParams("exhaustive mode is limited to M <= 20");
    SubsetFamily fam;
    check_params(M, eps, lambda, N_target, fam.subset_size);
    fam.ground_M = M;
    fam.eps = eps;
    fam.lambda = lambda;
    const int bound = fam.overlap_bound();
    const int k = fam.subset_size;

    std::vector<int> cand(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) cand[static_cast<size_t>(i)] = i;
    while (true) {
        if (fits(cand, fam.subsets, bound)) {
            fam.subsets.push_back(cand);
            if (static_cast<int>(fam.subsets.size()) == N_target) return fam;
        }
        // next k-combination in lexicographic order
        int i = k - 1;
        while (i >= 0 && cand[static_cast<size_t>(i)] == M - k + i) --i;
        if (i < 0) break;
        ++cand[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) cand[static_cast<size_t>(j)] = cand[static_cast<size_t>(j - 1)] + 1;
    }
    throw TargetUnreachable("exhaustive family found only " + std::to_string(fam.subsets.size()) +
                            " of " + std::to_string(N_target) + " subsets");
}

FamilyCheck verify_family(const SubsetFamily& family) {
    FamilyCheck result;
    const int bound = family.overlap_bound();
    int worst = -1;
    for (size_t j = 0; j < family.subsets.size(); ++j) {
        for (size_t k = j + 1; k < family.subsets.size(); ++k) {
            const int ov = sorted_overlap(family.subsets[j], family.subsets[k]);
            if (ov > worst) {
                worst = ov;
                result.worst_pair = {static_cast<int>(j), static_cast<int>(k)};
            }
            if (ov > bound) result.ok = false;
        }
    }
    result.worst_overlap = std::max(worst, 0);
    return result;
}

}  // namespace qidlab
