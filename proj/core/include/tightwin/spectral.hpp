#pragma once

#include <Eigen/Dense>

namespace tightwin {

/// The K-by-K spectral concentration matrix for mainlobe proportion p:
///   Q[l][l'] = sin(pi p (l - l')) / (pi (l - l'))  for l != l',
///   Q[l][l]  = p.
/// Symmetric Toeplitz and positive definite for p in (0,1); Q_1 = I.
struct ConcentrationMatrix {
    Eigen::MatrixXd entries;
    double p = 0.0;
    int K = 0;
};

/// Peak-normalized magnitude spectrum samples on [-1/2, 1/2).
struct SpectrumSamples {
    Eigen::VectorXd freqs;          // cycles per sample
    Eigen::VectorXd magnitudes_db;  // 20*log10(|w^|/peak), max entry is 0
};

/// Builds Q_p. Requires p in (0, 1] and K >= 2; entries at integral p*(l-l')
/// are exact zeros so that Q_1 is exactly the identity.
ConcentrationMatrix build_q(double p, int K);

/// The Slepian window: unit-norm principal eigenvector of Q_p, sign fixed so
/// the coefficient sum is positive. The true eigenvector is symmetric
/// (w[l] = w[K-1-l]); the returned vector is symmetrized to remove rounding
/// contamination from the antisymmetric eigenspace.
Eigen::VectorXd slepian(double p, int K);

/// Mainlobe energy fraction (w^T Q_p w) / (w^T w) in (0, 1]. The sidelobe
/// energy fraction is one minus this value.
double concentration_ratio(const Eigen::VectorXd& w, const ConcentrationMatrix& Q);

/// |w^(f)| sampled at f_k = k/num_points - 1/2 for k = 0..num_points-1, where
/// w^(f) = sum_l w[l] exp(-2 pi i f l). Peak-normalized decibels, floored at
/// -400 dB. Requires num_points >= K.
SpectrumSamples spectrum(const Eigen::VectorXd& w, int num_points);

}  // namespace tightwin
