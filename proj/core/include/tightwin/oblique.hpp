#pragma once

#include <cstdint>
#include <memory>

#include <Eigen/Dense>

#include "tightwin/spectral.hpp"
#include "tightwin/types.hpp"

namespace tightwin {

// Tolerances for the manifold geometry checks.
inline constexpr double kOnManifoldTol = 1e-12;     // |sqrt(a)*||w_l|| - 1|
inline constexpr double kTangencyTol = 1e-10;       // |w_l^T v_l| / ||v||
inline constexpr double kStepTangencyTol = 1e-8;    // ||W^T v|| / ||v|| after solve
inline constexpr double kZeroBlockTol = 1e-14;      // ||w_l + v_l|| in retraction

/// Block-permuted window w~ = (w_0^T, ..., w_{a-1}^T)^T where
/// w_l = (w[l], w[l+a], ..., w[l+a(J-1)]). On the oblique manifold
/// (S^{J-1}_{1/sqrt(a)})^a iff every block has norm 1/sqrt(a).
struct SortedWindow {
    Eigen::VectorXd data;
    GaborParams params;

    int blocks() const { return params.a(); }
    int block_len() const { return params.J(); }
    auto block(int l) { return data.segment(static_cast<Eigen::Index>(l) * block_len(), block_len()); }
    auto block(int l) const { return data.segment(static_cast<Eigen::Index>(l) * block_len(), block_len()); }

    /// max_l |sqrt(a) * ||w_l||_2 - 1|
    double manifold_deviation() const;
    bool on_manifold(double tol = kOnManifoldTol) const { return manifold_deviation() <= tol; }
};

/// Element of the tangent space at a SortedWindow: blockwise orthogonal to the
/// base point. Carries the base point's content hash for staleness checks.
struct TangentVector {
    Eigen::VectorXd data;
    std::uint64_t base_hash = 0;
};

/// Iteration-invariant snapshot of the Newton linearization at one base point:
///   q = Q~ w~,   h_l = w_l^T q_l,
///   U = Q~ - a * blockdiag(h_0 I_J, ..., h_{a-1} I_J),
///   W = blockdiag(w_0, ..., w_{a-1})  (K x a).
struct NewtonSystem {
    Eigen::MatrixXd U;
    Eigen::MatrixXd W;
    Eigen::VectorXd h;
    Eigen::VectorXd q;
    std::shared_ptr<const Eigen::MatrixXd> Qtilde;
    std::uint64_t base_hash = 0;
};

/// FNV-1a over the raw bytes; identifies a base point in staleness checks.
std::uint64_t content_hash(const Eigen::VectorXd& v);

/// Stride permutation to block order and its inverse. Norm-preserving and
/// mutually inverse; the identity when a == 1.
SortedWindow sort_window(const Window& w);
Window unsort_window(const SortedWindow& sw);

/// Applies the sort permutation congruently: Q~[i][j] = Q[pi(i)][pi(j)], so
/// w^T Q w = w~^T Q~ w~ for every window.
Eigen::MatrixXd permute_q(const ConcentrationMatrix& Q, const GaborParams& params);

NewtonSystem build_newton_system(const SortedWindow& w,
                                 std::shared_ptr<const Eigen::MatrixXd> Qtilde);

/// Metric projection onto the tangent space, blockwise u_l - a (w_l^T u_l) w_l
/// (the block-diagonal projector I_K - a W W^T). Requires an on-manifold base.
TangentVector project_tangent(const SortedWindow& w, const Eigen::VectorXd& u);

/// Riemannian gradient of h(w~) = -1/2 w~^T Q~ w~:  g = -U w~.
TangentVector riemannian_gradient(const SortedWindow& w, const NewtonSystem& sys);

/// Riemannian Hessian applied to a tangent vector:
///   H v = -(U - a W W^T Q~) v.
/// The result is again tangent since W^T W = (1/a) I_a.
TangentVector hessian_apply(const SortedWindow& w, const NewtonSystem& sys,
                            const TangentVector& v);

/// Newton step: solves (U - a W W^T Q~) v = g with a partial-pivoted dense
/// factorization. With refine enabled, iterative refinement steps with a
/// compensated (double-double) residual are applied while the residual
/// improves; this recovers accurate steps on the severely ill-conditioned
/// systems that arise for large p. The solution is validated (residual and
/// tangency) and re-projected onto the tangent space before return. Throws
/// SingularSystem when validation fails.
TangentVector newton_step(const SortedWindow& w, const NewtonSystem& sys,
                          bool refine = true);

/// Blockwise metric projection back to the manifold:
///   w_l <- (w_l + v_l) / (sqrt(a) ||w_l + v_l||).
/// Throws ZeroBlock when a block of w + v vanishes.
SortedWindow retract(const SortedWindow& w, const TangentVector& v);

/// Objective h(w~) = -1/2 w~^T Q~ w~ evaluated from the system snapshot.
double objective(const SortedWindow& w, const NewtonSystem& sys);

}  // namespace tightwin
