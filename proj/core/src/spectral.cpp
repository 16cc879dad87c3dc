#include "tightwin/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "tightwin/errors.hpp"

namespace tightwin {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDbFloor = 1e-20;  // -400 dB relative to peak
}  // namespace

ConcentrationMatrix build_q(double p, int K) {
    if (!(p > 0.0) || p > 1.0) {
        throw std::domain_error("build_q requires p in (0, 1]");
    }
    if (K < 2) {
        throw std::invalid_argument("build_q requires K >= 2");
    }

    // First column of the Toeplitz matrix; integral p*d gives an exact zero
    // (this makes Q_1 exactly the identity).
    Eigen::VectorXd col(K);
    col[0] = p;
    for (int d = 1; d < K; ++d) {
        const double m = p * d;
        col[d] = (m == std::nearbyint(m)) ? 0.0 : std::sin(kPi * m) / (kPi * d);
    }

    ConcentrationMatrix Q;
    Q.p = p;
    Q.K = K;
    Q.entries.resize(K, K);
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
            Q.entries(i, j) = col[std::abs(i - j)];
        }
    }
    return Q;
}

Eigen::VectorXd slepian(double p, int K) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("slepian requires p in (0, 1)");
    }
    const ConcentrationMatrix Q = build_q(p, K);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q.entries);
    if (es.info() != Eigen::Success) {
        throw EigenSolverFailure("eigendecomposition of Q_p did not converge");
    }
    Eigen::VectorXd w = es.eigenvectors().col(K - 1);  // eigenvalues ascend

    // The principal eigenvector is symmetric; averaging with its reversal
    // projects out antisymmetric rounding contamination, which dominates when
    // the top eigenvalues cluster (large p*K).
    w = 0.5 * (w + w.reverse().eval());
    const double norm = w.norm();
    if (!(norm > 0.5)) {
        throw EigenSolverFailure("principal eigenvector collapsed under symmetrization");
    }
    w /= norm;
    if (w.sum() < 0.0) w = -w;
    return w;
}

double concentration_ratio(const Eigen::VectorXd& w, const ConcentrationMatrix& Q) {
    if (w.size() != Q.K) {
        throw DimensionMismatch("window length does not match the order of Q_p");
    }
    const double wtw = w.squaredNorm();
    if (!(wtw > 0.0)) {
        throw std::invalid_argument("concentration_ratio of the zero window");
    }
    return w.dot(Q.entries * w) / wtw;
}

SpectrumSamples spectrum(const Eigen::VectorXd& w, int num_points) {
    const int K = static_cast<int>(w.size());
    if (num_points < K) {
        throw std::invalid_argument("spectrum requires num_points >= K");
    }
    if (!(w.norm() > 0.0)) {
        throw std::invalid_argument("spectrum of the zero window");
    }

    SpectrumSamples s;
    s.freqs.resize(num_points);
    s.magnitudes_db.resize(num_points);

    Eigen::VectorXd mag(num_points);
    for (int k = 0; k < num_points; ++k) {
        const double f = static_cast<double>(k) / num_points - 0.5;
        std::complex<double> acc(0.0, 0.0);
        for (int l = 0; l < K; ++l) {
            acc += w[l] * std::polar(1.0, -2.0 * kPi * f * l);
        }
        s.freqs[k] = f;
        mag[k] = std::abs(acc);
    }

    const double peak = mag.maxCoeff();
    for (int k = 0; k < num_points; ++k) {
        s.magnitudes_db[k] = 20.0 * std::log10(std::max(mag[k] / peak, kDbFloor));
    }
    return s;
}

}  // namespace tightwin
