#include "tightwin/gabor.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tightwin {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

// In-place radix-2 FFT, unnormalized; inverse uses the e^{+2 pi i} kernel.
void fft_pow2(std::vector<cd>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const cd wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cd w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cd u = a[i + k];
                const cd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Unnormalized DFT for channel counts that are not powers of two.
void dft_naive(std::vector<cd>& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    std::vector<cd> out(a.size(), cd(0.0, 0.0));
    const double s = (inverse ? 2.0 : -2.0) * kPi / n;
    for (int m = 0; m < n; ++m) {
        cd acc(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
            acc += a[k] * std::polar(1.0, s * static_cast<double>(m) * k);
        }
        out[m] = acc;
    }
    a = std::move(out);
}

void transform(std::vector<cd>& a, bool inverse) {
    if (is_pow2(static_cast<int>(a.size()))) {
        fft_pow2(a, inverse);
    } else {
        dft_naive(a, inverse);
    }
}

long long mod_pos(long long v, long long m) {
    const long long r = v % m;
    return r < 0 ? r + m : r;
}

long long floor_div(long long x, long long y) {  // y > 0
    long long q = x / y;
    if ((x % y != 0) && (x < 0)) --q;
    return q;
}

long long ceil_div(long long x, long long y) {  // y > 0
    long long q = x / y;
    if ((x % y != 0) && (x > 0)) ++q;
    return q;
}

// Deterministic standard normals (xorshift64* + Box-Muller); the stdlib
// distributions are implementation-defined and would break reproducibility
// across toolchains.
struct NormalSource {
    explicit NormalSource(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    double uniform() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        const std::uint64_t z = state * 0x2545F4914F6CDD1DULL;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    std::uint64_t state;
};

void check_window(const Window& w, const GaborParams& params) {
    if (w.coeffs.size() != params.K()) {
        throw DimensionMismatch("window length " + std::to_string(w.coeffs.size()) +
                                " does not match lattice K=" + std::to_string(params.K()));
    }
}

}  // namespace

GaborParams::GaborParams(int L, int K, int a, int M) : L_(L), K_(K), a_(a), M_(M) {
    if (a <= 0 || !(a < K) || !(K <= M) || !(M <= L)) {
        throw std::invalid_argument("GaborParams requires 0 < a < K <= M <= L, got L=" +
                                    std::to_string(L) + " K=" + std::to_string(K) + " a=" +
                                    std::to_string(a) + " M=" + std::to_string(M));
    }
    if (L % a != 0) {
        throw std::invalid_argument("GaborParams requires L divisible by a");
    }
    if (K % a != 0) {
        throw std::invalid_argument("GaborParams requires K divisible by a");
    }
}

Window::Window(Eigen::VectorXd coeffs_in, GaborParams params_in)
    : coeffs(std::move(coeffs_in)), params(params_in) {
    if (coeffs.size() != params.K()) {
        throw DimensionMismatch("window has " + std::to_string(coeffs.size()) +
                                " coefficients, expected K=" + std::to_string(params.K()));
    }
    if (!coeffs.allFinite()) {
        throw std::invalid_argument("window coefficients must be finite");
    }
}

GaborCoefficients dgt(const Eigen::VectorXcd& x, const Window& w,
                      const GaborParams& params) {
    check_window(w, params);
    if (x.size() != params.L()) {
        throw DimensionMismatch("signal length " + std::to_string(x.size()) +
                                " does not match L=" + std::to_string(params.L()));
    }
    const int L = params.L(), K = params.K(), a = params.a(), M = params.M(), N = params.N();

    GaborCoefficients out;
    out.values.resize(M, N);
    std::vector<cd> buf(static_cast<std::size_t>(M));
    for (int n = 0; n < N; ++n) {
        std::fill(buf.begin(), buf.end(), cd(0.0, 0.0));
        for (int l = 0; l < K; ++l) {  // K <= M, so no folding is needed
            const auto idx = mod_pos(static_cast<long long>(l) + static_cast<long long>(a) * n, L);
            buf[static_cast<std::size_t>(l)] = x[static_cast<Eigen::Index>(idx)] * w.coeffs[l];
        }
        transform(buf, /*inverse=*/false);
        for (int m = 0; m < M; ++m) out.values(m, n) = buf[static_cast<std::size_t>(m)];
    }
    return out;
}

Eigen::VectorXcd idgt(const GaborCoefficients& X, const Window& gamma,
                      const GaborParams& params) {
    check_window(gamma, params);
    const int L = params.L(), K = params.K(), a = params.a(), M = params.M(), N = params.N();
    if (X.values.rows() != M || X.values.cols() != N) {
        throw DimensionMismatch("coefficient shape " + std::to_string(X.values.rows()) + "x" +
                                std::to_string(X.values.cols()) + " does not match M x N = " +
                                std::to_string(M) + "x" + std::to_string(N));
    }

    // Per-frame unnormalized inverse DFT: z_n[k] = sum_m X[m,n] e^{2 pi i m k / M}.
    std::vector<std::vector<cd>> z(static_cast<std::size_t>(N));
    std::vector<cd> buf(static_cast<std::size_t>(M));
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < M; ++m) buf[static_cast<std::size_t>(m)] = X.values(m, n);
        transform(buf, /*inverse=*/true);
        z[static_cast<std::size_t>(n)] = buf;
    }

    const long long max_wrap = (static_cast<long long>(K) - 1) / a;
    Eigen::VectorXcd x(L);
    for (int l = 0; l < L; ++l) {
        const long long n_lo = ceil_div(static_cast<long long>(l) - K + 1, a);
        const long long n_hi = floor_div(l, a);
        cd acc(0.0, 0.0);
        for (long long n = n_lo; n <= n_hi; ++n) {
            long long frame = n;
            if (n < 0) {
                // The periodic wrap X[m,-n] := X[m,N-n] is specified for
                // n = 1..floor((K-1)/a); anything beyond would be a logic error.
                if (-n > max_wrap) {
                    throw std::logic_error("idgt: negative frame index beyond the periodic wrap");
                }
                frame = n + N;
            }
            const long long k = static_cast<long long>(l) - static_cast<long long>(a) * n;
            acc += gamma.coeffs[static_cast<Eigen::Index>(k)] *
                   z[static_cast<std::size_t>(frame)][static_cast<std::size_t>(k)];
        }
        x[l] = acc;
    }
    return x;
}

Eigen::VectorXd frame_operator_diag(const Window& w, const GaborParams& params) {
    check_window(w, params);
    const int K = params.K(), a = params.a(), M = params.M();
    Eigen::VectorXd diag(K);
    for (int l = 0; l < K; ++l) {
        const long long n_lo = -floor_div(l, a);
        const long long n_hi = floor_div(static_cast<long long>(K) - l - 1, a);
        double s = 0.0;
        for (long long n = n_lo; n <= n_hi; ++n) {
            const double v = w.coeffs[static_cast<Eigen::Index>(l + a * n)];
            s += v * v;
        }
        diag[l] = static_cast<double>(M) * s;
    }
    return diag;
}

Window canonical_tight(const Window& w, double lambda, const GaborParams& params) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("canonical_tight requires lambda > 0");
    }
    const Eigen::VectorXd diag = frame_operator_diag(w, params);
    const double floor = 1e-12 * diag.maxCoeff();
    for (Eigen::Index l = 0; l < diag.size(); ++l) {
        if (!(diag[l] > floor)) {
            throw ZeroFrameDiagonal("frame-operator diagonal entry " + std::to_string(l) +
                                    " is zero: the window does not cover residue class " +
                                    std::to_string(l % params.a()));
        }
    }
    Window out(w.coeffs.array() * (std::sqrt(lambda) / diag.array().sqrt()), params);
    out.p = w.p;
    out.lambda = lambda;
    return out;
}

TightnessReport is_tight(const Window& w, const GaborParams& params, double tol) {
    check_window(w, params);
    const int K = params.K(), a = params.a(), M = params.M();
    Eigen::VectorXd energy = Eigen::VectorXd::Zero(a);
    for (int l = 0; l < K; ++l) {
        energy[l % a] += w.coeffs[l] * w.coeffs[l];
    }
    energy *= static_cast<double>(M);

    TightnessReport report;
    report.lambda = energy.mean();
    if (!(report.lambda > 0.0)) {
        report.tight = false;
        report.max_rel_deviation = std::numeric_limits<double>::infinity();
        return report;
    }
    report.max_rel_deviation =
        (energy.array() - report.lambda).abs().maxCoeff() / report.lambda;
    report.tight = report.max_rel_deviation <= tol;
    return report;
}

double verify_reconstruction(const Window& w, const GaborParams& params,
                             int trials, std::uint64_t seed) {
    if (trials <= 0) {
        throw std::invalid_argument("verify_reconstruction requires trials >= 1");
    }
    const TightnessReport report = is_tight(w, params);
    if (!report.tight) {
        throw NotTight("verify_reconstruction requires a tight window (max relative "
                       "block deviation " + std::to_string(report.max_rel_deviation) + ")");
    }
    Window gamma(w.coeffs / report.lambda, params);

    NormalSource rng(seed);
    const int L = params.L();
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXcd x(L);
        for (int l = 0; l < L; ++l) {
            x[l] = cd(rng.normal(), rng.normal());
        }
        const Eigen::VectorXcd back = idgt(dgt(x, w, params), gamma, params);
        worst = std::max(worst, (back - x).norm() / x.norm());
    }
    return worst;
}

}  // namespace tightwin
