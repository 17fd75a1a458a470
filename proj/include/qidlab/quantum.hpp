#pragma once

#include <optional>
#include <vector>

#include "qidlab/json_io.hpp"
#include "qidlab/linalg.hpp"

namespace qidlab {

/// Unit-trace positive semidefinite operator. Immutable after validation.
class DensityOperator {
  public:
    explicit DensityOperator(Mat m);
    static DensityOperator from_vector(const Vec& v);

    const Mat& mat() const { return mat_; }
    int dim() const { return static_cast<int>(mat_.rows()); }
    bool is_pure() const { return pure_; }

    /// Dominant eigenvector with deterministic phase; for pure states this
    /// recovers the state vector.
    Vec to_vector() const { return dominant_eigenvector(mat_); }

    json to_json() const;
    static DensityOperator from_json(const json& j);

  private:
    Mat mat_;
    bool pure_;
};

/// Finite list of effects with sum at most the identity.
class SubPovm {
  public:
    explicit SubPovm(std::vector<Mat> effects, bool require_complete = false);

    int size() const { return static_cast<int>(effects_.size()); }
    int dim() const { return static_cast<int>(effects_.front().rows()); }
    const Mat& effect(int i) const { return effects_[static_cast<size_t>(i)]; }
    const std::vector<Mat>& effects() const { return effects_; }
    bool is_complete() const { return complete_; }

    /// Sub-POVM keeping only the listed effects.
    SubPovm restricted(const std::vector<int>& indices) const;

    /// Append the rest effect I - sum so the result is a complete POVM.
    SubPovm completed() const;

    json to_json() const;
    static SubPovm from_json(const json& j);

  private:
    std::vector<Mat> effects_;
    bool complete_;
};

/// Completely positive trace-preserving map in Kraus form.
class KrausChannel {
  public:
    KrausChannel(int in_dim, int out_dim, std::vector<Mat> kraus_ops);

    int in_dim() const { return in_dim_; }
    int out_dim() const { return out_dim_; }
    const std::vector<Mat>& kraus_ops() const { return kraus_; }

    Mat apply_raw(const Mat& rho) const;
    DensityOperator apply(const DensityOperator& rho) const;

    /// Heisenberg-picture image of an effect: sum_k K^dag E K. Completely
    /// positive and unital; maps (sub-)POVMs to (sub-)POVMs.
    Mat adjoint_apply(const Mat& effect) const;
    SubPovm adjoint_apply(const SubPovm& povm) const;

    KrausChannel tensor_power(int n, int dim_guard = tol::dim_guard) const;

    json to_json() const;
    static KrausChannel from_json(const json& j);

  private:
    int in_dim_, out_dim_;
    std::vector<Mat> kraus_;
};

/// Born rule Tr(rho E). Raw real value, validated to lie in
/// [-tol::psd, 1 + tol::psd]; reports clamp to [0,1] via clamp01.
double born(const DensityOperator& rho, const Mat& effect);
double born_raw(const Mat& rho, const Mat& effect);
double clamp01(double x);

KrausChannel make_identity_channel(int d);
KrausChannel make_trace_channel(int d);
/// id_A tensor Tr_C : S(A x C) -> S(A).
KrausChannel make_extended_channel(int dA, int dC, int dim_guard = tol::dim_guard);

/// Classical channel W(y|x) as a cq Kraus channel with diagonal outputs.
KrausChannel classical_channel_as_cq(const std::vector<std::vector<double>>& w);

double shannon_entropy_bits(const std::vector<double>& p);
double vn_entropy_bits(const Mat& rho);

double mutual_information_bits(const std::vector<double>& p, const std::vector<std::vector<double>>& w);

struct Ensemble {
    std::vector<double> probs;
    std::vector<DensityOperator> states;
};

/// Holevo information of a fixed ensemble seen through a channel:
/// H(sum p N(rho)) - sum p H(N(rho)), in bits.
double holevo_information_bits(const Ensemble& ensemble, const KrausChannel& channel);

}  // namespace qidlab
