#include "qidlab/orthogonalize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qidlab/errors.hpp"

namespace qidlab {

SubPovm pgm(const std::vector<Mat>& states) {
    if (states.empty()) throw BadParams("pgm: no states");
    Mat s = Mat::Zero(states.front().rows(), states.front().cols());
    for (const auto& r : states) s += r;
    if (s.trace().real() <= tol::psd) throw AllZero("pgm: all states have zero trace");
    const Mat sm12 = func_on_support(s, [](double x) { return 1.0 / std::sqrt(x); });
    std::vector<Mat> effects;
    effects.reserve(states.size());
    for (const auto& r : states) effects.push_back(hermitize(sm12 * r * sm12, tol::recon));
    return SubPovm(std::move(effects));
}

TransmissionCode purify_codewords(const TransmissionCode& code) {
    const KrausChannel blocked = code.blocked_channel();
    std::vector<DensityOperator> pure;
    pure.reserve(code.codewords.size());
    for (size_t m = 0; m < code.codewords.size(); ++m) {
        const Mat heis = blocked.adjoint_apply(code.decoder.effect(static_cast<int>(m)));
        const Eigh ed = eigh(code.codewords[m].mat());
        int best = 0;
        double best_p = -1.0;
        for (int i = 0; i < ed.values.size(); ++i) {
            if (ed.values[i] <= tol::rank_tol * std::abs(ed.values[0])) continue;
            const Vec v = ed.vectors.col(i);
            const double p = std::real(v.dot(heis * v));
            if (p > best_p + 1e-15) {
                best_p = p;
                best = i;
            }
        }
        Vec v = ed.vectors.col(best);
        // deterministic global phase
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (std::abs(v[imax]) > 0.0) v *= std::conj(v[imax]) / std::abs(v[imax]);
        pure.push_back(DensityOperator::from_vector(v));
    }
    return TransmissionCode(code.channel, code.block_n, std::move(pure), code.decoder);
}

std::vector<int> greedy_independent_set(const std::vector<Vec>& vectors, const std::vector<int>& order) {
    std::vector<int> accepted;
    std::vector<Vec> kept;
    for (int idx : order) {
        kept.push_back(vectors[static_cast<size_t>(idx)]);
        const Eigh ed = eigh(gram_matrix(kept));
        if (ed.values[ed.values.size() - 1] > tol::rank_tol) {
            accepted.push_back(idx);
        } else {
            kept.pop_back();
        }
    }
    return accepted;
}

std::vector<int> select_linearly_independent(const std::vector<Vec>& vectors,
                                             const std::vector<Mat>& heisenberg_effects) {
    if (vectors.size() != heisenberg_effects.size())
        throw SizeMismatch("select: states and effects differ in count");
    std::vector<double> success(vectors.size());
    for (size_t m = 0; m < vectors.size(); ++m)
        success[m] = std::real(vectors[m].dot(heisenberg_effects[m] * vectors[m]));
    std::vector<int> order(vectors.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return success[a] > success[b]; });
    std::vector<int> sel = greedy_independent_set(vectors, order);
    if (sel.size() < 2)
        throw RankDeficient("only " + std::to_string(sel.size()) + " linearly independent codewords");
    std::sort(sel.begin(), sel.end());
    return sel;
}

std::vector<Vec> orthogonalize_states(const std::vector<Vec>& vectors) {
    if (vectors.empty()) throw BadParams("orthogonalize: no states");
    const Eigen::Index d = vectors.front().size();
    Mat t = Mat::Zero(d, d);
    for (const auto& v : vectors) t += projector(v);
    if (support_rank(t) < static_cast<int>(vectors.size()))
        throw RankDeficient("orthogonalize: states are not linearly independent");
    const Mat tm12 = func_on_support(t, [](double x) { return 1.0 / std::sqrt(x); });
    std::vector<Vec> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) {
        Vec w = tm12 * v;
        w.normalize();
        const cxd overlap = v.dot(w);
        if (std::abs(overlap) > 0.0) w *= std::conj(overlap) / std::abs(overlap);
        out.push_back(std::move(w));
    }
    return out;
}

json OrthogonalizationReport::to_json() const {
    return json{{"M", M},
                {"L", L},
                {"M_prime", M_prime},
                {"eps_in", eps_in},
                {"delta_out", delta_out},
                {"bound_delta", bound_delta},
                {"gram_deviation", gram_deviation},
                {"per_stage_errors", per_stage_errors}};
}

OrthogonalizationReport OrthogonalizationReport::from_json(const json& j) {
    OrthogonalizationReport r;
    r.M = j.at("M").get<int>();
    r.L = j.at("L").get<int>();
    r.M_prime = j.at("M_prime").get<int>();
    r.eps_in = j.at("eps_in").get<double>();
    r.delta_out = j.at("delta_out").get<double>();
    r.bound_delta = j.at("bound_delta").get<double>();
    r.gram_deviation = j.at("gram_deviation").get<double>();
    r.per_stage_errors = j.at("per_stage_errors").get<std::vector<double>>();
    return r;
}

double orthogonal_code_error_bound(double eps) {
    const double one_minus = 1.0 - eps;
    return 2.0 * std::sqrt(5.0 * eps) / (one_minus * one_minus);
}

std::pair<TransmissionCode, OrthogonalizationReport> orthogonalize_code(const TransmissionCode& code) {
    OrthogonalizationReport report;
    report.M = code.messages();
    report.eps_in = avg_error(code);
    if (report.eps_in >= 1.0) throw PipelineFailure("input", "average error is 1");
    report.bound_delta = std::min(1.0, orthogonal_code_error_bound(report.eps_in));
    report.per_stage_errors.push_back(report.eps_in);

    TransmissionCode pure = [&] {
        try {
            return purify_codewords(code);
        } catch (const Error& e) {
            throw PipelineFailure("purify", e.what());
        }
    }();
    report.per_stage_errors.push_back(avg_error(pure));

    const KrausChannel blocked = pure.blocked_channel();
    std::vector<Vec> psis;
    std::vector<Mat> heis;
    psis.reserve(pure.codewords.size());
    heis.reserve(pure.codewords.size());
    for (size_t m = 0; m < pure.codewords.size(); ++m) {
        psis.push_back(pure.codewords[m].to_vector());
        heis.push_back(blocked.adjoint_apply(pure.decoder.effect(static_cast<int>(m))));
    }
    std::vector<int> sel = [&] {
        try {
            return select_linearly_independent(psis, heis);
        } catch (const Error& e) {
            throw PipelineFailure("select", e.what());
        }
    }();
    report.L = static_cast<int>(sel.size());

    std::vector<Vec> kept;
    kept.reserve(sel.size());
    for (int m : sel) kept.push_back(psis[static_cast<size_t>(m)]);
    {
        std::vector<DensityOperator> words;
        for (const auto& v : kept) words.push_back(DensityOperator::from_vector(v));
        TransmissionCode selected(pure.channel, pure.block_n, std::move(words),
                                  pure.decoder.restricted(sel));
        report.per_stage_errors.push_back(avg_error(selected));
    }

    std::vector<Vec> phis = [&] {
        try {
            return orthogonalize_states(kept);
        } catch (const Error& e) {
            throw PipelineFailure("orthogonalize", e.what());
        }
    }();
    std::vector<DensityOperator> ortho_words;
    ortho_words.reserve(phis.size());
    for (const auto& v : phis) ortho_words.push_back(DensityOperator::from_vector(v));
    TransmissionCode ortho(pure.channel, pure.block_n, std::move(ortho_words), pure.decoder.restricted(sel));
    const double eps_ortho = avg_error(ortho);
    report.per_stage_errors.push_back(eps_ortho);

    TransmissionCode final_code = [&] {
        try {
            return expurgate(ortho, eps_ortho);
        } catch (const Error& e) {
            throw PipelineFailure("expurgate", e.what());
        }
    }();
    report.M_prime = final_code.messages();
    report.delta_out = max_error(final_code);
    report.per_stage_errors.push_back(report.delta_out);

    std::vector<Vec> final_vecs;
    for (const auto& w : final_code.codewords) final_vecs.push_back(w.to_vector());
    report.gram_deviation = gram_deviation(final_vecs);

    return {std::move(final_code), std::move(report)};
}

}  // namespace qidlab
