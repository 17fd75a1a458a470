#include "qidlab/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qidlab/errors.hpp"
#include "qidlab/orthogonalize.hpp"
#include "qidlab/rng.hpp"

namespace qidlab {

TransmissionCode::TransmissionCode(KrausChannel ch, int n, std::vector<DensityOperator> words, SubPovm dec)
    : channel(std::move(ch)), block_n(n), codewords(std::move(words)), decoder(std::move(dec)) {
    if (block_n < 1) throw BadParams("block length must be >= 1");
    if (codewords.empty()) throw EmptyCode("transmission code has no codewords");
    if (static_cast<int>(codewords.size()) != decoder.size())
        throw SizeMismatch("codeword count != decoder effect count");
    long long din = 1, dout = 1;
    for (int i = 0; i < block_n; ++i) {
        din *= channel.in_dim();
        dout *= channel.out_dim();
    }
    for (const auto& w : codewords)
        if (w.dim() != din) throw DimMismatch("codeword dimension != in_dim^n");
    if (decoder.dim() != dout) throw DimMismatch("decoder dimension != out_dim^n");
}

json TransmissionCode::to_json() const {
    json words = json::array();
    for (const auto& w : codewords) words.push_back(w.to_json());
    return json{{"channel", channel.to_json()},
                {"block_n", block_n},
                {"codewords", words},
                {"decoder", decoder.to_json()}};
}

TransmissionCode TransmissionCode::from_json(const json& j) {
    std::vector<DensityOperator> words;
    for (const auto& w : j.at("codewords")) words.push_back(DensityOperator::from_json(w));
    return TransmissionCode(KrausChannel::from_json(j.at("channel")), j.at("block_n").get<int>(),
                            std::move(words), SubPovm::from_json(j.at("decoder")));
}

std::vector<double> per_message_success(const TransmissionCode& code) {
    const KrausChannel blocked = code.blocked_channel();
    std::vector<double> p(code.codewords.size());
    for (size_t m = 0; m < code.codewords.size(); ++m) {
        const Mat out = blocked.apply_raw(code.codewords[m].mat());
        p[m] = born_raw(out, code.decoder.effect(static_cast<int>(m)));
    }
    return p;
}

double max_error(const TransmissionCode& code) {
    const auto p = per_message_success(code);
    double worst = 0.0;
    for (double x : p) worst = std::max(worst, 1.0 - x);
    return clamp01(worst);
}

double avg_error(const TransmissionCode& code) {
    const auto p = per_message_success(code);
    double sum = 0.0;
    for (double x : p) sum += 1.0 - x;
    return clamp01(sum / static_cast<double>(p.size()));
}

TransmissionCode expurgate(const TransmissionCode& code, double eps_avg) {
    if (code.codewords.empty()) throw EmptyCode("cannot expurgate an empty code");
    const double measured = avg_error(code);
    if (measured > eps_avg + tol::fvg)
        throw BadParams("expurgate: average error " + std::to_string(measured) + " exceeds stated " +
                        std::to_string(eps_avg));
    const auto p = per_message_success(code);
    std::vector<int> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return (1.0 - p[a]) < (1.0 - p[b]); });
    const size_t keep = (p.size() + 1) / 2;
    std::vector<int> kept(order.begin(), order.begin() + static_cast<long>(keep));
    std::sort(kept.begin(), kept.end());
    std::vector<DensityOperator> words;
    words.reserve(keep);
    for (int m : kept) words.push_back(code.codewords[static_cast<size_t>(m)]);
    return TransmissionCode(code.channel, code.block_n, std::move(words), code.decoder.restricted(kept));
}

CodeKind code_kind_from_string(const std::string& s) {
    if (s == "basis") return CodeKind::basis;
    if (s == "haar") return CodeKind::haar;
    throw BadParams("unknown code kind: " + s);
}

DecoderKind decoder_kind_from_string(const std::string& s) {
    if (s == "pgm") return DecoderKind::pgm;
    if (s == "projective") return DecoderKind::projective;
    throw BadParams("unknown decoder kind: " + s);
}

namespace {

// Rank-1 projective decoder: Loewdin-orthonormalize the dominant output
// vectors and project onto them.
SubPovm projective_decoder(const std::vector<Mat>& outputs) {
    std::vector<Vec> tops;
    tops.reserve(outputs.size());
    for (const auto& o : outputs) tops.push_back(dominant_eigenvector(o));
    Mat t = Mat::Zero(outputs.front().rows(), outputs.front().cols());
    for (const auto& v : tops) t += projector(v);
    if (support_rank(t) < static_cast<int>(tops.size()))
        throw RankDeficient("projective decoder needs linearly independent output vectors");
    const Mat tm12 = func_on_support(t, [](double x) { return 1.0 / std::sqrt(x); });
    std::vector<Mat> effects;
    effects.reserve(tops.size());
    for (const auto& v : tops) {
        Vec w = tm12 * v;
        w.normalize();
        effects.push_back(projector(w));
    }
    return SubPovm(std::move(effects));
}

}  // namespace

TransmissionCode random_code(const KrausChannel& channel, int n, int M, CodeKind kind,
                             DecoderKind decoder, uint64_t seed) {
    if (M < 1) throw BadParams("need at least one message");
    long long din = 1;
    for (int i = 0; i < n; ++i) {
        din *= channel.in_dim();
        if (din > tol::dim_guard) throw DimGuardExceeded("codeword dimension exceeds guard");
    }
    std::vector<DensityOperator> words;
    words.reserve(static_cast<size_t>(M));
    if (kind == CodeKind::basis) {
        if (M > din) throw BadParams("basis code needs M <= in_dim^n");
        for (int m = 0; m < M; ++m) {
            Vec v = Vec::Zero(din);
            v[m] = 1.0;
            words.push_back(DensityOperator::from_vector(v));
        }
    } else {
        Rng rng(derive_seed(seed, "codewords"));
        for (int m = 0; m < M; ++m)
            words.push_back(DensityOperator::from_vector(haar_vector(rng, static_cast<int>(din))));
    }
    const KrausChannel blocked = channel.tensor_power(n);
    std::vector<Mat> outputs;
    outputs.reserve(words.size());
    for (const auto& w : words) outputs.push_back(blocked.apply_raw(w.mat()));
    SubPovm dec = decoder == DecoderKind::pgm ? pgm(outputs) : projective_decoder(outputs);
    return TransmissionCode(channel, n, std::move(words), std::move(dec));
}

}  // namespace qidlab
