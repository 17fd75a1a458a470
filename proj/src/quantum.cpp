#include "qidlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qidlab/errors.hpp"

namespace qidlab {

DensityOperator::DensityOperator(Mat m) : mat_(hermitize(std::move(m))) {
    const Eigh ed = eigh(mat_);
    const double lam_max = ed.values.size() > 0 ? ed.values[0] : 0.0;
    const double lam_min = ed.values[ed.values.size() - 1];
    if (lam_min < -tol::psd * std::abs(lam_max))
        throw NotPsd("density operator has eigenvalue " + std::to_string(lam_min));
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > tol::norm)
        throw BadParams("density operator trace " + std::to_string(tr) + " != 1");
    const double purity = (mat_ * mat_).trace().real();
    pure_ = purity >= 1.0 - tol::pure;
}

DensityOperator DensityOperator::from_vector(const Vec& v) {
    const double n = v.norm();
    if (std::abs(n - 1.0) > tol::norm) throw BadParams("state vector norm " + std::to_string(n) + " != 1");
    return DensityOperator(projector(v));
}

json DensityOperator::to_json() const { return json{{"kind", "density"}, {"mat", mat_to_json(mat_)}}; }

DensityOperator DensityOperator::from_json(const json& j) {
    if (j.value("kind", "density") != "density") throw BadParams("state JSON: unknown kind");
    return DensityOperator(mat_from_json(j.at("mat")));
}

SubPovm::SubPovm(std::vector<Mat> effects, bool require_complete) : effects_(std::move(effects)) {
    if (effects_.empty()) throw BadParams("sub-POVM needs at least one effect");
    const Eigen::Index d = effects_.front().rows();
    Mat sum = Mat::Zero(d, d);
    for (auto& e : effects_) {
        if (e.rows() != d || e.cols() != d) throw DimMismatch("sub-POVM effects have mixed dimensions");
        e = hermitize(e);
        const Eigh ed = eigh(e);
        const double lam_max = ed.values[0];
        const double lam_min = ed.values[ed.values.size() - 1];
        if (lam_min < -tol::psd * std::max(std::abs(lam_max), 1.0))
            throw NotPsd("effect has eigenvalue " + std::to_string(lam_min));
        if (lam_max > 1.0 + tol::psd)
            throw BadParams("effect exceeds identity: max eigenvalue " + std::to_string(lam_max));
        sum += e;
    }
    const Eigh sd = eigh(sum);
    if (sd.values[0] > 1.0 + tol::psd)
        throw BadParams("sub-POVM sum exceeds identity: max eigenvalue " + std::to_string(sd.values[0]));
    complete_ = op_norm_herm(sum - Mat::Identity(d, d)) <= tol::recon;
    if (require_complete && !complete_) throw BadParams("POVM does not sum to identity");
}

SubPovm SubPovm::restricted(const std::vector<int>& indices) const {
    std::vector<Mat> kept;
    kept.reserve(indices.size());
    for (int i : indices) kept.push_back(effects_.at(static_cast<size_t>(i)));
    return SubPovm(std::move(kept));
}

SubPovm SubPovm::completed() const {
    if (complete_) return *this;
    const Eigen::Index d = effects_.front().rows();
    Mat rest = Mat::Identity(d, d);
    for (const auto& e : effects_) rest -= e;
    std::vector<Mat> all = effects_;
    all.push_back(hermitize(rest));
    return SubPovm(std::move(all), true);
}

json SubPovm::to_json() const {
    json arr = json::array();
    for (const auto& e : effects_) arr.push_back(mat_to_json(e));
    return json{{"effects", arr}, {"complete", complete_}};
}

SubPovm SubPovm::from_json(const json& j) {
    std::vector<Mat> effects;
    for (const auto& e : j.at("effects")) effects.push_back(mat_from_json(e));
    SubPovm p(std::move(effects));
    if (j.contains("complete") && j["complete"].get<bool>() != p.is_complete())
        throw BadParams("POVM JSON: completeness flag does not match effects");
    return p;
}

KrausChannel::KrausChannel(int in_dim, int out_dim, std::vector<Mat> kraus_ops)
    : in_dim_(in_dim), out_dim_(out_dim), kraus_(std::move(kraus_ops)) {
    if (in_dim_ < 1 || out_dim_ < 1) throw BadParams("channel dimensions must be positive");
    if (kraus_.empty()) throw BadParams("channel needs at least one Kraus operator");
    Mat sum = Mat::Zero(in_dim_, in_dim_);
    for (const auto& k : kraus_) {
        if (k.rows() != out_dim_ || k.cols() != in_dim_)
            throw DimMismatch("Kraus operator shape does not match channel dims");
        sum += k.adjoint() * k;
    }
    const double defect = op_norm_herm(sum - Mat::Identity(in_dim_, in_dim_));
    if (defect > tol::recon)
        throw BadParams("channel is not trace preserving: defect " + std::to_string(defect));
}

Mat KrausChannel::apply_raw(const Mat& rho) const {
    if (rho.rows() != in_dim_ || rho.cols() != in_dim_)
        throw DimMismatch("channel input dimension mismatch");
    Mat out = Mat::Zero(out_dim_, out_dim_);
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
}

DensityOperator KrausChannel::apply(const DensityOperator& rho) const {
    return DensityOperator(apply_raw(rho.mat()));
}

Mat KrausChannel::adjoint_apply(const Mat& effect) const {
    if (effect.rows() != out_dim_ || effect.cols() != out_dim_)
        throw DimMismatch("adjoint input dimension mismatch");
    Mat out = Mat::Zero(in_dim_, in_dim_);
    for (const auto& k : kraus_) out += k.adjoint() * effect * k;
    return out;
}

SubPovm KrausChannel::adjoint_apply(const SubPovm& povm) const {
    std::vector<Mat> images;
    images.reserve(povm.effects().size());
    for (const auto& e : povm.effects()) images.push_back(adjoint_apply(e));
    return SubPovm(std::move(images));
}

KrausChannel KrausChannel::tensor_power(int n, int dim_guard) const {
    if (n < 1) throw BadParams("tensor_power: n must be >= 1");
    if (n == 1) return *this;
    long long in = 1, out = 1;
    for (int i = 0; i < n; ++i) {
        in *= in_dim_;
        out *= out_dim_;
        if (in > dim_guard || out > dim_guard)
            throw DimGuardExceeded("channel tensor power exceeds dimension guard");
    }
    std::vector<Mat> ops = kraus_;
    for (int i = 1; i < n; ++i) {
        std::vector<Mat> next;
        next.reserve(ops.size() * kraus_.size());
        for (const auto& a : ops)
            for (const auto& b : kraus_) next.push_back(tensor(a, b, dim_guard));
        ops = std::move(next);
    }
    return KrausChannel(static_cast<int>(in), static_cast<int>(out), std::move(ops));
}

json KrausChannel::to_json() const {
    json arr = json::array();
    for (const auto& k : kraus_) arr.push_back(rect_to_json(k));
    return json{{"in_dim", in_dim_}, {"out_dim", out_dim_}, {"kraus", arr}};
}

KrausChannel KrausChannel::from_json(const json& j) {
    std::vector<Mat> ops;
    for (const auto& k : j.at("kraus")) ops.push_back(rect_from_json(k));
    return KrausChannel(j.at("in_dim").get<int>(), j.at("out_dim").get<int>(), std::move(ops));
}

double born_raw(const Mat& rho, const Mat& effect) {
    if (rho.rows() != effect.rows() || rho.cols() != effect.cols())
        throw DimMismatch("born: state and effect dimensions differ");
    return (rho * effect).trace().real();
}

double born(const DensityOperator& rho, const Mat& effect) {
    const double p = born_raw(rho.mat(), effect);
    if (p < -tol::psd || p > 1.0 + tol::psd)
        throw Error("Born value " + std::to_string(p) + " outside [0,1] tolerance band");
    return p;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

KrausChannel make_identity_channel(int d) {
    if (d < 1) throw BadParams("identity channel: d must be >= 1");
    return KrausChannel(d, d, {Mat::Identity(d, d)});
}

KrausChannel make_trace_channel(int d) {
    if (d < 1) throw BadParams("trace channel: d must be >= 1");
    std::vector<Mat> ops;
    ops.reserve(d);
    for (int i = 0; i < d; ++i) {
        Mat bra = Mat::Zero(1, d);
        bra(0, i) = 1.0;
        ops.push_back(bra);
    }
    return KrausChannel(d, 1, std::move(ops));
}

KrausChannel make_extended_channel(int dA, int dC, int dim_guard) {
    if (dA < 1 || dC < 1) throw BadParams("extended channel: dims must be >= 1");
    if (static_cast<long long>(dA) * dC > dim_guard)
        throw DimGuardExceeded("extended channel input dimension exceeds guard");
    std::vector<Mat> ops;
    ops.reserve(dC);
    const Mat idA = Mat::Identity(dA, dA);
    for (int i = 0; i < dC; ++i) {
        Mat bra = Mat::Zero(1, dC);
        bra(0, i) = 1.0;
        ops.push_back(tensor(idA, bra, dim_guard));
    }
    return KrausChannel(dA * dC, dA, std::move(ops));
}

namespace {

void check_distribution(const std::vector<double>& p) {
    double sum = 0.0;
    for (double x : p) {
        if (x < -tol::norm) throw BadDistribution("negative probability");
        sum += x;
    }
    if (std::abs(sum - 1.0) > tol::norm) throw BadDistribution("probabilities sum to " + std::to_string(sum));
}

}  // namespace

KrausChannel classical_channel_as_cq(const std::vector<std::vector<double>>& w) {
    if (w.empty() || w.front().empty()) throw NotStochastic("empty transition matrix");
    const int nx = static_cast<int>(w.size());
    const int ny = static_cast<int>(w.front().size());
    for (const auto& row : w) {
        if (static_cast<int>(row.size()) != ny) throw NotStochastic("ragged transition matrix");
        double sum = 0.0;
        for (double v : row) {
            if (v < -tol::norm) throw NotStochastic("negative transition probability");
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol::norm) throw NotStochastic("row sums to " + std::to_string(sum));
    }
    // K_{x,y} = sqrt(W(y|x)) |y><x|
    std::vector<Mat> ops;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            if (w[x][y] <= 0.0) continue;
            Mat k = Mat::Zero(ny, nx);
            k(y, x) = std::sqrt(w[x][y]);
            ops.push_back(k);
        }
    return KrausChannel(nx, ny, std::move(ops));
}

double shannon_entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log2(x);
    return h;
}

double vn_entropy_bits(const Mat& rho) {
    const Eigh ed = eigh(rho);
    double h = 0.0;
    for (int i = 0; i < ed.values.size(); ++i)
        if (ed.values[i] > 0.0) h -= ed.values[i] * std::log2(ed.values[i]);
    return h;
}

double mutual_information_bits(const std::vector<double>& p, const std::vector<std::vector<double>>& w) {
    check_distribution(p);
    if (p.size() != w.size()) throw DimMismatch("input distribution and channel rows differ");
    classical_channel_as_cq(w);  // validates stochasticity
    const size_t ny = w.front().size();
    std::vector<double> out(ny, 0.0);
    double h_cond = 0.0;
    for (size_t x = 0; x < p.size(); ++x) {
        for (size_t y = 0; y < ny; ++y) out[y] += p[x] * w[x][y];
        h_cond += p[x] * shannon_entropy_bits(w[x]);
    }
    return shannon_entropy_bits(out) - h_cond;
}

double holevo_information_bits(const Ensemble& ensemble, const KrausChannel& channel) {
    if (ensemble.probs.size() != ensemble.states.size())
        throw BadDistribution("ensemble sizes do not match");
    check_distribution(ensemble.probs);
    Mat avg = Mat::Zero(channel.out_dim(), channel.out_dim());
    double h_members = 0.0;
    for (size_t i = 0; i < ensemble.probs.size(); ++i) {
        const Mat out = channel.apply_raw(ensemble.states[i].mat());
        avg += ensemble.probs[i] * out;
        h_members += ensemble.probs[i] * vn_entropy_bits(out);
    }
    return vn_entropy_bits(avg) - h_members;
}

}  // namespace qidlab
