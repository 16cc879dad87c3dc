#pragma once

#include <optional>

#include <Eigen/Dense>

#include "tightwin/errors.hpp"

namespace tightwin {

/// Gabor lattice geometry: signal length L, window length K, time shift a and
/// M frequency channels. Requires L % a == 0, K % a == 0 and 0 < a < K <= M <= L,
/// so the number of frames N = L/a and the taps per residue class J = K/a are
/// integers.
class GaborParams {
public:
    GaborParams(int L, int K, int a, int M);

    int L() const { return L_; }
    int K() const { return K_; }
    int a() const { return a_; }
    int M() const { return M_; }
    int N() const { return L_ / a_; }
    int J() const { return K_ / a_; }

    friend bool operator==(const GaborParams&, const GaborParams&) = default;

private:
    int L_;
    int K_;
    int a_;
    int M_;
};

/// Real analysis/synthesis window of length K tied to a lattice. `p` records
/// the mainlobe proportion the window was designed for, `lambda` the tightness
/// constant, when known.
struct Window {
    Window(Eigen::VectorXd coeffs_in, GaborParams params_in);

    Eigen::VectorXd coeffs;
    GaborParams params;
    std::optional<double> p;
    std::optional<double> lambda;
};

}  // namespace tightwin
