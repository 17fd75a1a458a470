#pragma once

// Numerical tolerances used across the library. All matrix work is dense
// double precision; these are an order of magnitude above accumulated
// eigensolver error at the dimensions we target (d <= 4096).

namespace qidlab::tol {

// Relative support cutoff: eigenvalues below rank_tol * lambda_max count as zero.
inline constexpr double rank_tol = 1e-10;

inline constexpr double herm = 1e-9;   // Hermiticity deviation
inline constexpr double psd = 1e-9;    // negative-eigenvalue allowance
inline constexpr double recon = 1e-8;  // reconstruction / equality of operators
inline constexpr double orth = 1e-8;   // orthonormality of vector systems
inline constexpr double fvg = 1e-7;    // scalar identities (distances, traces)
inline constexpr double norm = 1e-9;   // trace / vector-norm deviation
inline constexpr double pure = 1e-9;   // purity threshold on Tr(rho^2)

// Composite dimension limit for tensor products; keeps dense
// eigendecompositions tractable.
inline constexpr int dim_guard = 4096;

}  // namespace qidlab::tol
