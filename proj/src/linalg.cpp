#include "qidlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qidlab/errors.hpp"

namespace qidlab {

double hermiticity_defect(const Mat& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& a, double tol) { return a.rows() == a.cols() && hermiticity_defect(a) <= tol; }

Mat hermitize(const Mat& a, double tol) {
    const double defect = hermiticity_defect(a);
    if (!(defect <= tol))
        throw NotHermitian("matrix deviates from Hermiticity by " + std::to_string(defect));
    return 0.5 * (a + a.adjoint());
}

Eigh eigh(const Mat& a) {
    const Mat h = hermitize(a);
    Eigen::SelfAdjointEigenSolver<Mat> solver(h);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed to converge");
    const int d = static_cast<int>(h.rows());
    Eigh out;
    out.values.resize(d);
    out.vectors.resize(d, d);
    // Eigen returns ascending order; flip to descending.
    for (int i = 0; i < d; ++i) {
        out.values[i] = solver.eigenvalues()[d - 1 - i];
        out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    }
    return out;
}

Mat func_on_support(const Mat& a, const std::function<double(double)>& f) {
    const Eigh ed = eigh(a);
    const double lam_max = ed.values.size() > 0 ? ed.values[0] : 0.0;
    const double lam_min = ed.values.size() > 0 ? ed.values[ed.values.size() - 1] : 0.0;
    if (lam_min < -tol::psd * std::abs(lam_max))
        throw NotPsd("matrix not PSD: min eigenvalue " + std::to_string(lam_min));
    const double cutoff = tol::rank_tol * std::abs(lam_max);
    Mat out = Mat::Zero(a.rows(), a.cols());
    for (int i = 0; i < ed.values.size(); ++i) {
        if (ed.values[i] > cutoff) {
            out += f(ed.values[i]) * (ed.vectors.col(i) * ed.vectors.col(i).adjoint());
        }
    }
    return 0.5 * (out + out.adjoint());
}

int support_rank(const Mat& a) {
    const Eigh ed = eigh(a);
    const double lam_max = ed.values.size() > 0 ? ed.values[0] : 0.0;
    const double cutoff = tol::rank_tol * std::abs(lam_max);
    int r = 0;
    for (int i = 0; i < ed.values.size(); ++i)
        if (ed.values[i] > cutoff) ++r;
    return r;
}

double trace_distance(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw DimMismatch("trace_distance: operands have different dimensions");
    const Eigh ed = eigh(rho - sigma);
    double sum = 0.0;
    for (int i = 0; i < ed.values.size(); ++i) sum += std::abs(ed.values[i]);
    return 0.5 * sum;
}

double fidelity(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw DimMismatch("fidelity: operands have different dimensions");
    const Mat sqrt_rho = func_on_support(rho, [](double x) { return std::sqrt(x); });
    const Mat inner = hermitize(sqrt_rho * sigma * sqrt_rho, tol::recon);
    const Eigh ed = eigh(inner);
    double sum = 0.0;
    for (int i = 0; i < ed.values.size(); ++i)
        if (ed.values[i] > 0.0) sum += std::sqrt(ed.values[i]);
    return sum;
}

double op_norm_herm(const Mat& a) {
    const Eigh ed = eigh(a);
    double m = 0.0;
    for (int i = 0; i < ed.values.size(); ++i) m = std::max(m, std::abs(ed.values[i]));
    return m;
}

namespace {

void check_guard(long long rows, long long cols, int dim_guard) {
    if (rows > dim_guard || cols > dim_guard)
        throw DimGuardExceeded("composite dimension " + std::to_string(std::max(rows, cols)) +
                               " exceeds guard " + std::to_string(dim_guard));
}

}  // namespace

Mat tensor(const Mat& a, const Mat& b, int dim_guard) {
    check_guard(a.rows() * b.rows(), a.cols() * b.cols(), dim_guard);
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vec tensor(const Vec& a, const Vec& b, int dim_guard) {
    check_guard(a.size() * b.size(), 1, dim_guard);
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

Mat tensor_power(const Mat& a, int n, int dim_guard) {
    if (n < 1) throw BadParams("tensor_power: n must be >= 1");
    Mat out = a;
    for (int k = 1; k < n; ++k) out = tensor(out, a, dim_guard);
    return out;
}

Mat partial_trace(const Mat& a, int d1, int d2, int which_factor) {
    if (a.rows() != a.cols() || a.rows() != static_cast<Eigen::Index>(d1) * d2)
        throw DimMismatch("partial_trace: matrix is not (d1*d2) square");
    if (which_factor == 2) {
        Mat out = Mat::Zero(d1, d1);
        for (int i = 0; i < d1; ++i)
            for (int j = 0; j < d1; ++j)
                for (int k = 0; k < d2; ++k) out(i, j) += a(i * d2 + k, j * d2 + k);
        return out;
    }
    if (which_factor == 1) {
        Mat out = Mat::Zero(d2, d2);
        for (int k = 0; k < d2; ++k)
            for (int l = 0; l < d2; ++l)
                for (int i = 0; i < d1; ++i) out(k, l) += a(i * d2 + k, i * d2 + l);
        return out;
    }
    throw BadParams("partial_trace: which_factor must be 1 or 2");
}

Mat projector(const Vec& v) { return v * v.adjoint(); }

Vec dominant_eigenvector(const Mat& a) {
    const Eigh ed = eigh(a);
    Vec v = ed.vectors.col(0);
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double m = std::abs(v[i]);
        if (m > best + 1e-15) {
            best = m;
            imax = i;
        }
    }
    if (best > 0.0) v *= std::conj(v[imax]) / std::abs(v[imax]);
    return v;
}

Mat gram_matrix(const std::vector<Vec>& vs) {
    const int n = static_cast<int>(vs.size());
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = vs[i].dot(vs[j]);
    return g;
}

double gram_deviation(const std::vector<Vec>& vs) {
    const Mat g = gram_matrix(vs);
    return (g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace qidlab
