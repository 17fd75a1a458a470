#include "qidlab/idcodes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qidlab/errors.hpp"
#include "qidlab/parallel.hpp"
#include "qidlab/rng.hpp"

namespace qidlab {

json SimultaneityWitness::to_json() const { return json{{"base", base.to_json()}, {"groups", groups}}; }

SimultaneityWitness SimultaneityWitness::from_json(const json& j) {
    return SimultaneityWitness{SubPovm::from_json(j.at("base")),
                               j.at("groups").get<std::vector<std::vector<int>>>()};
}

IdCode::IdCode(KrausChannel ch, int n, std::vector<DensityOperator> states_, std::vector<Mat> tests_,
               std::optional<SimultaneityWitness> witness, bool zero_entropy_)
    : channel(std::move(ch)),
      block_n(n),
      states(std::move(states_)),
      tests(std::move(tests_)),
      simultaneity(std::move(witness)),
      zero_entropy(zero_entropy_) {
    if (block_n < 1) throw BadParams("block length must be >= 1");
    if (states.empty() || states.size() != tests.size())
        throw SizeMismatch("ID code: state and test counts differ");
    long long din = 1, dout = 1;
    for (int i = 0; i < block_n; ++i) {
        din *= channel.in_dim();
        dout *= channel.out_dim();
    }
    for (const auto& s : states)
        if (s.dim() != din) throw DimMismatch("ID code: state dimension != in_dim^n");
    for (auto& e : tests) {
        if (e.rows() != dout || e.cols() != dout) throw DimMismatch("ID code: test dimension != out_dim^n");
        e = hermitize(e);
        const Eigh ed = eigh(e);
        if (ed.values[ed.values.size() - 1] < -tol::psd ||
            ed.values[0] > 1.0 + tol::psd)
            throw BadParams("ID code: test effect outside [0, I]");
    }
    if (simultaneity) {
        if (simultaneity->groups.size() != tests.size())
            throw SizeMismatch("simultaneity witness: group count != test count");
        for (size_t j = 0; j < tests.size(); ++j) {
            Mat sum = Mat::Zero(dout, dout);
            for (int m : simultaneity->groups[j]) sum += simultaneity->base.effect(m);
            if (op_norm_herm(sum - tests[j]) > tol::recon)
                throw BadParams("simultaneity witness does not reproduce test " + std::to_string(j));
        }
    }
    if (zero_entropy) {
        for (const auto& s : states)
            if (!s.is_pure()) throw BadParams("zero-entropy code contains a mixed state");
    }
}

json IdCode::to_json() const {
    json st = json::array(), ts = json::array();
    for (const auto& s : states) st.push_back(s.to_json());
    for (const auto& e : tests) ts.push_back(mat_to_json(e));
    json j{{"channel", channel.to_json()},
           {"block_n", block_n},
           {"states", st},
           {"tests", ts},
           {"zero_entropy", zero_entropy}};
    if (simultaneity) j["simultaneity"] = simultaneity->to_json();
    return j;
}

IdCode IdCode::from_json(const json& j) {
    std::vector<DensityOperator> states;
    std::vector<Mat> tests;
    for (const auto& s : j.at("states")) states.push_back(DensityOperator::from_json(s));
    for (const auto& e : j.at("tests")) tests.push_back(mat_from_json(e));
    std::optional<SimultaneityWitness> witness;
    if (j.contains("simultaneity")) witness = SimultaneityWitness::from_json(j["simultaneity"]);
    return IdCode(KrausChannel::from_json(j.at("channel")), j.at("block_n").get<int>(), std::move(states),
                  std::move(tests), std::move(witness), j.at("zero_entropy").get<bool>());
}

json IdErrorReport::to_json() const {
    return json{{"lambda1_max", lambda1_max},
                {"lambda2_max", lambda2_max},
                {"worst_pair", {worst_pair.first, worst_pair.second}},
                {"histogram", histogram}};
}

IdErrorReport IdErrorReport::from_json(const json& j) {
    IdErrorReport r;
    r.lambda1_max = j.at("lambda1_max").get<double>();
    r.lambda2_max = j.at("lambda2_max").get<double>();
    r.worst_pair = {j.at("worst_pair")[0].get<int>(), j.at("worst_pair")[1].get<int>()};
    r.histogram = j.at("histogram").get<std::vector<double>>();
    return r;
}

IdErrorReport verify_id_code(const IdCode& code) {
    const int n = code.messages();
    const KrausChannel blocked = code.blocked_channel();
    std::vector<Mat> outputs(static_cast<size_t>(n));
    parallel_for(static_cast<size_t>(n),
                 [&](size_t j) { outputs[j] = blocked.apply_raw(code.states[j].mat()); });

    std::vector<double> first(static_cast<size_t>(n));
    std::vector<double> cross(static_cast<size_t>(n) * n, 0.0);
    parallel_for(static_cast<size_t>(n), [&](size_t j) {
        for (int k = 0; k < n; ++k) {
            const double p = born_raw(outputs[j], code.tests[static_cast<size_t>(k)]);
            if (static_cast<int>(j) == k)
                first[j] = 1.0 - p;
            else
                cross[j * static_cast<size_t>(n) + static_cast<size_t>(k)] = p;
        }
    });

    IdErrorReport report;
    report.histogram.assign(20, 0.0);
    for (int j = 0; j < n; ++j) report.lambda1_max = std::max(report.lambda1_max, clamp01(first[static_cast<size_t>(j)]));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            const double p = clamp01(cross[static_cast<size_t>(j) * n + static_cast<size_t>(k)]);
            if (p > report.lambda2_max) {
                report.lambda2_max = p;
                report.worst_pair = {j, k};
            }
            const int bin = std::min(19, static_cast<int>(p * 20.0));
            report.histogram[static_cast<size_t>(bin)] += 1.0;
        }
    return report;
}

IdCode build_loeber_code(const TransmissionCode& tcode, const SubsetFamily& family) {
    if (family.ground_M != tcode.messages())
        throw SizeMismatch("family ground set != transmission code size");
    const double inv = 1.0 / family.subset_size;
    std::vector<DensityOperator> states;
    std::vector<Mat> tests;
    states.reserve(family.subsets.size());
    tests.reserve(family.subsets.size());
    const int dout = tcode.decoder.dim();
    for (const auto& subset : family.subsets) {
        Mat rho = Mat::Zero(tcode.codewords.front().dim(), tcode.codewords.front().dim());
        Mat test = Mat::Zero(dout, dout);
        for (int m : subset) {
            rho += inv * tcode.codewords[static_cast<size_t>(m)].mat();
            test += tcode.decoder.effect(m);
        }
        states.emplace_back(std::move(rho));
        tests.push_back(hermitize(test));
    }
    SimultaneityWitness witness{tcode.decoder, family.subsets};
    return IdCode(tcode.channel, tcode.block_n, std::move(states), std::move(tests), std::move(witness),
                  false);
}

int ZeroEntropyBuildStats::total_rejections() const {
    return std::accumulate(rejections.begin(), rejections.end(), 0);
}

json ZeroEntropyBuildStats::to_json() const {
    return json{{"delta", delta}, {"rejections", rejections}, {"total_rejections", total_rejections()}};
}

namespace {

// Guard for comparisons of exact-zero thresholds against rounding noise.
constexpr double kAcceptGuard = 1e-12;

std::vector<Vec> orthogonal_code_vectors(const TransmissionCode& ocode) {
    std::vector<Vec> vecs;
    vecs.reserve(ocode.codewords.size());
    for (const auto& w : ocode.codewords) {
        if (!w.is_pure()) throw BadParams("code state is not pure");
        vecs.push_back(w.to_vector());
    }
    if (gram_deviation(vecs) > tol::orth)
        throw BadParams("code states are not mutually orthogonal");
    return vecs;
}

Vec superposition(const std::vector<Vec>& basis, const std::vector<int>& subset,
                  const std::vector<double>& phases) {
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(subset.size()));
    Vec v = Vec::Zero(basis.front().size());
    for (size_t t = 0; t < subset.size(); ++t)
        v += inv_sqrt * std::polar(1.0, phases[t]) * basis[static_cast<size_t>(subset[t])];
    return v;
}

}  // namespace

std::pair<IdCode, ZeroEntropyBuildStats> build_zero_entropy_code(const TransmissionCode& ocode,
                                                                 const SubsetFamily& family,
                                                                 PhasePolicy policy, uint64_t seed,
                                                                 int trials) {
    if (family.ground_M != ocode.messages())
        throw SizeMismatch("family ground set != orthogonal code size");
    if (trials < 1) throw BadParams("trials must be >= 1");
    const std::vector<Vec> basis = orthogonal_code_vectors(ocode);

    ZeroEntropyBuildStats stats;
    stats.delta = max_error(ocode);
    const double thr1 = 3.0 * stats.delta + kAcceptGuard;
    const double thr2 = 5.0 * stats.delta + kAcceptGuard;

    // Heisenberg images of the candidate tests, hoisted once.
    const KrausChannel blocked = ocode.blocked_channel();
    const int n_msgs = static_cast<int>(family.subsets.size());
    std::vector<Mat> dtilde(static_cast<size_t>(ocode.messages()));
    parallel_for(dtilde.size(),
                 [&](size_t m) { dtilde[m] = blocked.adjoint_apply(ocode.decoder.effect(static_cast<int>(m))); });
    std::vector<Mat> etilde(static_cast<size_t>(n_msgs));
    for (int j = 0; j < n_msgs; ++j) {
        Mat sum = Mat::Zero(basis.front().size(), basis.front().size());
        for (int m : family.subsets[static_cast<size_t>(j)]) sum += dtilde[static_cast<size_t>(m)];
        etilde[static_cast<size_t>(j)] = sum;
    }

    const int L = family.subset_size;
    stats.rejections.assign(static_cast<size_t>(n_msgs), 0);
    std::vector<Vec> accepted(static_cast<size_t>(n_msgs));
    for (int j = 0; j < n_msgs; ++j) {
        bool found = false;
        for (int trial = 0; trial < trials; ++trial) {
            std::vector<double> phases(static_cast<size_t>(L), 0.0);
            if (policy == PhasePolicy::uniform) {
                Rng rng(derive_seed(seed, static_cast<uint64_t>(j), static_cast<uint64_t>(trial)));
                for (auto& a : phases) a = rng.angle();
            }
            const Vec phi = superposition(basis, family.subsets[static_cast<size_t>(j)], phases);
            const double miss = 1.0 - std::real(phi.dot(etilde[static_cast<size_t>(j)] * phi));
            bool ok = miss <= thr1;
            for (int k = 0; ok && k < n_msgs; ++k) {
                if (k == j) continue;
                ok = std::real(phi.dot(etilde[static_cast<size_t>(k)] * phi)) <= thr2;
            }
            if (ok) {
                accepted[static_cast<size_t>(j)] = phi;
                found = true;
                break;
            }
            ++stats.rejections[static_cast<size_t>(j)];
            if (policy == PhasePolicy::zeros) break;  // nothing new to try
        }
        if (!found)
            throw PhaseSearchExhausted(j, "no phase vector for message " + std::to_string(j) + " after " +
                                              std::to_string(trials) + " trials");
    }

    std::vector<DensityOperator> states;
    std::vector<Mat> tests;
    states.reserve(static_cast<size_t>(n_msgs));
    tests.reserve(static_cast<size_t>(n_msgs));
    const int dout = ocode.decoder.dim();
    for (int j = 0; j < n_msgs; ++j) {
        states.push_back(DensityOperator::from_vector(accepted[static_cast<size_t>(j)]));
        Mat test = Mat::Zero(dout, dout);
        for (int m : family.subsets[static_cast<size_t>(j)]) test += ocode.decoder.effect(m);
        tests.push_back(hermitize(test));
    }
    SimultaneityWitness witness{ocode.decoder, family.subsets};
    IdCode code(ocode.channel, ocode.block_n, std::move(states), std::move(tests), std::move(witness), true);
    return {std::move(code), std::move(stats)};
}

Mat phase_average_state(const TransmissionCode& ocode, const std::vector<int>& subset) {
    const std::vector<Vec> basis = orthogonal_code_vectors(ocode);
    const double inv = 1.0 / static_cast<double>(subset.size());
    const Eigen::Index d = basis.front().size();
    Mat avg = Mat::Zero(d, d);
    // E exp(i(a_m - a_m')) over independent uniform angles is 1 for m = m'
    // and 0 otherwise, so only the diagonal terms of the double sum survive.
    for (int m : subset) avg += inv * projector(basis[static_cast<size_t>(m)]);
    return avg;
}

json ConcentrationStats::to_json() const {
    return json{{"p_first_tail", p_first_tail},
                {"p_second_tail_max", p_second_tail_max},
                {"median_first", median_first},
                {"median_second_max", median_second_max},
                {"mean_first", mean_first},
                {"samples", samples}};
}

double concentration_ceiling(double delta, int L) {
    const double pi = 3.14159265358979323846;
    return std::exp(-std::pow(delta, 4) * L / (128.0 * pi * pi));
}

namespace {

double median_of(std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end());
    const size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

ConcentrationStats estimate_concentration(const TransmissionCode& ocode, const SubsetFamily& family,
                                          int j, double delta, int samples, uint64_t seed) {
    if (j < 0 || j >= static_cast<int>(family.subsets.size())) throw BadParams("message index out of range");
    if (samples < 1) throw BadParams("samples must be >= 1");
    const std::vector<Vec> basis = orthogonal_code_vectors(ocode);
    const KrausChannel blocked = ocode.blocked_channel();
    const int n_msgs = static_cast<int>(family.subsets.size());
    std::vector<Mat> dtilde(static_cast<size_t>(ocode.messages()));
    parallel_for(dtilde.size(),
                 [&](size_t m) { dtilde[m] = blocked.adjoint_apply(ocode.decoder.effect(static_cast<int>(m))); });
    std::vector<Mat> etilde(static_cast<size_t>(n_msgs));
    for (int k = 0; k < n_msgs; ++k) {
        Mat sum = Mat::Zero(basis.front().size(), basis.front().size());
        for (int m : family.subsets[static_cast<size_t>(k)]) sum += dtilde[static_cast<size_t>(m)];
        etilde[static_cast<size_t>(k)] = sum;
    }

    const int L = family.subset_size;
    std::vector<double> xj(static_cast<size_t>(samples));
    std::vector<std::vector<double>> xk(static_cast<size_t>(n_msgs));
    for (auto& v : xk) v.resize(static_cast<size_t>(samples));
    parallel_for(static_cast<size_t>(samples), [&](size_t t) {
        Rng rng(derive_seed(seed, static_cast<uint64_t>(j), static_cast<uint64_t>(t)));
        std::vector<double> phases(static_cast<size_t>(L));
        for (auto& a : phases) a = rng.angle();
        const Vec phi = superposition(basis, family.subsets[static_cast<size_t>(j)], phases);
        xj[t] = 1.0 - std::real(phi.dot(etilde[static_cast<size_t>(j)] * phi));
        for (int k = 0; k < n_msgs; ++k) {
            if (k == j) continue;
            xk[static_cast<size_t>(k)][t] = std::real(phi.dot(etilde[static_cast<size_t>(k)] * phi));
        }
    });

    ConcentrationStats stats;
    stats.samples = samples;
    int count1 = 0;
    double sum1 = 0.0;
    for (double x : xj) {
        if (x > 3.0 * delta) ++count1;
        sum1 += x;
    }
    stats.p_first_tail = static_cast<double>(count1) / samples;
    stats.mean_first = sum1 / samples;
    stats.median_first = median_of(xj);
    for (int k = 0; k < n_msgs; ++k) {
        if (k == j) continue;
        auto& v = xk[static_cast<size_t>(k)];
        int count2 = 0;
        for (double x : v)
            if (x > 5.0 * delta) ++count2;
        stats.p_second_tail_max = std::max(stats.p_second_tail_max, static_cast<double>(count2) / samples);
        stats.median_second_max = std::max(stats.median_second_max, median_of(v));
    }
    return stats;
}

json SizeBoundCheck::to_json() const {
    return json{{"N", N},
                {"pure_bound", pure_bound},
                {"general_bound", general_bound},
                {"log2_pure_bound", log2_pure_bound},
                {"log2_general_bound", log2_general_bound},
                {"satisfied", satisfied}};
}

SizeBoundCheck check_size_bounds(const IdCode& code, const IdErrorReport& report, int d_override) {
    const double slack = 1.0 - report.lambda1_max - report.lambda2_max;
    if (slack <= 0.0)
        throw TrivialRegime("lambda1 + lambda2 >= 1: any number of messages is trivially encodable");
    long long d = d_override;
    if (d_override < 0) {
        d = 1;
        for (int i = 0; i < code.block_n; ++i) d *= code.channel.in_dim();
    }
    SizeBoundCheck check;
    check.N = code.messages();
    const double log2_base = std::log2(5.0 / slack);
    check.log2_pure_bound = 2.0 * static_cast<double>(d) * log2_base;
    check.log2_general_bound = 2.0 * static_cast<double>(d) * static_cast<double>(d) * log2_base;
    check.pure_bound = std::exp2(check.log2_pure_bound);
    check.general_bound = std::exp2(check.log2_general_bound);
    // compare in log space; the double bounds can overflow to +inf
    const double log2_n = std::log2(static_cast<double>(check.N));
    const double relevant = code.zero_entropy ? check.log2_pure_bound : check.log2_general_bound;
    check.satisfied = log2_n <= relevant;
    return check;
}

IdCode purify_and_extend(const IdCode& code, int dC) {
    if (dC < 1) throw BadParams("purify_and_extend: dC must be >= 1");
    if (code.channel.in_dim() != code.channel.out_dim())
        throw BadParams("purify_and_extend expects a code over the identity channel");
    if (code.channel.kraus_ops().size() != 1 ||
        (code.channel.kraus_ops().front() - Mat::Identity(code.channel.in_dim(), code.channel.in_dim()))
                .cwiseAbs()
                .maxCoeff() > tol::recon)
        throw BadParams("purify_and_extend expects a code over the identity channel");

    long long d = 1, dc_block = 1;
    for (int i = 0; i < code.block_n; ++i) {
        d *= code.channel.in_dim();
        dc_block *= dC;
    }
    if (d * dc_block > tol::dim_guard) throw DimGuardExceeded("purified dimension exceeds guard");

    std::vector<DensityOperator> purified;
    purified.reserve(code.states.size());
    for (const auto& s : code.states) {
        const Eigh ed = eigh(s.mat());
        const double cutoff = tol::rank_tol * std::abs(ed.values[0]);
        int rank = 0;
        for (int i = 0; i < ed.values.size(); ++i)
            if (ed.values[i] > cutoff) ++rank;
        if (rank > dc_block)
            throw RankTooHigh("state rank " + std::to_string(rank) + " exceeds ancilla dimension " +
                              std::to_string(dc_block));
        Vec psi = Vec::Zero(d * dc_block);
        for (int i = 0; i < rank; ++i) {
            Vec anc = Vec::Zero(dc_block);
            anc[i] = 1.0;
            psi += std::sqrt(ed.values[i]) * tensor(Vec(ed.vectors.col(i)), anc);
        }
        psi.normalize();
        purified.push_back(DensityOperator::from_vector(psi));
    }

    // One extended block: the channel keeps the A part and discards the ancilla.
    KrausChannel extended = make_extended_channel(static_cast<int>(d), static_cast<int>(dc_block));
    return IdCode(std::move(extended), 1, std::move(purified), code.tests, code.simultaneity, true);
}

}  // namespace qidlab
