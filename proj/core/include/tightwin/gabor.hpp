#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "tightwin/types.hpp"

namespace tightwin {

/// Gabor coefficient matrix, M rows (frequency channel) by N columns (frame).
struct GaborCoefficients {
    Eigen::MatrixXcd values;
};

/// Discrete Gabor transform of a length-L signal:
///   X[m,n] = sum_{l=0}^{K-1} x[(l + a n) mod L] w[l] exp(-2 pi i m l / M).
/// The signal is treated periodically. Frames are evaluated with an M-point
/// FFT when M is a power of two; the direct transform otherwise.
GaborCoefficients dgt(const Eigen::VectorXcd& x, const Window& w,
                      const GaborParams& params);

/// Inverse transform with synthesis window gamma:
///   x[l] = sum_{n=ceil((l-K+1)/a)}^{floor(l/a)} gamma[l - a n]
///          sum_{m=0}^{M-1} X[m,n] exp(2 pi i m (l - a n) / M),
/// where negative frame indices wrap periodically, X[m,-n] = X[m,N-n].
Eigen::VectorXcd idgt(const GaborCoefficients& X, const Window& gamma,
                      const GaborParams& params);

/// Diagonal of the frame operator:
///   S[l] = M * sum_{n=-floor(l/a)}^{floor((K-l-1)/a)} w[l + a n]^2.
/// When K % a == 0 the entries depend only on l mod a. Entries may be zero
/// for degenerate windows.
Eigen::VectorXd frame_operator_diag(const Window& w, const GaborParams& params);

/// Tight projection sqrt(lambda) * S_w^{-1/2} * w (entrywise; S_w is diagonal).
/// Throws ZeroFrameDiagonal when a residue class carries no energy.
Window canonical_tight(const Window& w, double lambda, const GaborParams& params);

struct TightnessReport {
    bool tight = false;
    double lambda = 0.0;        // mean of the residue-class energies M*||w_l||^2
    double max_rel_deviation = 0.0;
};

/// Tightness test: w is tight iff M*||w_l||^2 is the same constant lambda for
/// every residue class l in [0, a). Deviations are measured relative to the
/// mean.
TightnessReport is_tight(const Window& w, const GaborParams& params,
                         double tol = 1e-10);

/// Round-trip check for a tight window: analyzes and resynthesizes `trials`
/// pseudorandom complex signals with gamma = w / lambda and returns the
/// maximum relative l2 error. Throws NotTight if w fails is_tight.
double verify_reconstruction(const Window& w, const GaborParams& params,
                             int trials, std::uint64_t seed);

}  // namespace tightwin
