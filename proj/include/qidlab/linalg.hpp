#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "qidlab/tolerances.hpp"

namespace qidlab {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Maximum absolute deviation from Hermiticity, max_ij |A_ij - conj(A_ji)|.
double hermiticity_defect(const Mat& a);

bool is_hermitian(const Mat& a, double tol = tol::herm);

/// Symmetrize (A + A^dagger)/2; throws NotHermitian if the defect exceeds tol.
Mat hermitize(const Mat& a, double tol = tol::herm);

struct Eigh {
    Eigen::VectorXd values;  // descending
    Mat vectors;             // columns, orthonormal, aligned with values
};

/// Hermitian eigendecomposition, eigenvalues sorted descending.
Eigh eigh(const Mat& a);

/// Apply f to the spectrum on the support of a PSD matrix: eigenvalues below
/// rank_tol * lambda_max map to 0, the rest to f(lambda). Throws NotPsd when
/// the most negative eigenvalue is below -tol::psd * lambda_max.
Mat func_on_support(const Mat& a, const std::function<double(double)>& f);

/// Numerical rank of a PSD matrix: eigenvalues above rank_tol * lambda_max.
int support_rank(const Mat& a);

/// (1/2) Tr |rho - sigma|.
double trace_distance(const Mat& rho, const Mat& sigma);

/// || sqrt(rho) sqrt(sigma) ||_1 = Tr sqrt( sqrt(rho) sigma sqrt(rho) ).
double fidelity(const Mat& rho, const Mat& sigma);

/// Operator norm of a Hermitian matrix (max |eigenvalue|).
double op_norm_herm(const Mat& a);

Mat tensor(const Mat& a, const Mat& b, int dim_guard = tol::dim_guard);
Vec tensor(const Vec& a, const Vec& b, int dim_guard = tol::dim_guard);
Mat tensor_power(const Mat& a, int n, int dim_guard = tol::dim_guard);

/// Trace out one tensor factor of a (d1*d2)x(d1*d2) matrix.
/// which_factor = 1 discards the first factor, 2 the second.
Mat partial_trace(const Mat& a, int d1, int d2, int which_factor);

Mat projector(const Vec& v);

/// Eigenvector of the largest eigenvalue, with the entry of largest modulus
/// made real and positive (deterministic global phase).
Vec dominant_eigenvector(const Mat& a);

/// Gram matrix G_ij = <v_i|v_j> of a list of vectors.
Mat gram_matrix(const std::vector<Vec>& vs);

/// max_ij |G_ij - I_ij| for the Gram matrix of vs.
double gram_deviation(const std::vector<Vec>& vs);

}  // namespace qidlab
