#include "tightwin/oblique.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

#include "tightwin/errors.hpp"

namespace tightwin {

namespace {

// sorted index i = l*J + j  <->  original index l + a*j
std::vector<Eigen::Index> sort_permutation(const GaborParams& params) {
    const int a = params.a(), J = params.J();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(params.K()));
    for (int l = 0; l < a; ++l) {
        for (int j = 0; j < J; ++j) {
            perm[static_cast<std::size_t>(l) * J + j] = l + static_cast<Eigen::Index>(a) * j;
        }
    }
    return perm;
}

void check_base(const SortedWindow& w, const NewtonSystem& sys) {
    if (sys.base_hash != content_hash(w.data)) {
        throw StaleSystem("NewtonSystem was built at a different base point");
    }
}

void check_base(const SortedWindow& w, const TangentVector& v) {
    if (v.base_hash != content_hash(w.data)) {
        throw StaleSystem("tangent vector belongs to a different base point");
    }
}

inline void two_sum(double x, double y, double& s, double& e) {
    s = x + y;
    const double z = s - x;
    e = (x - (s - z)) + (y - z);
}

inline void two_prod(double x, double y, double& p, double& e) {
    p = x * y;
    e = std::fma(x, y, -p);
}

// r = g - A v accumulated in double-double; the extra precision is what makes
// iterative refinement effective on the severely ill-conditioned systems.
Eigen::VectorXd compensated_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& v,
                                     const Eigen::VectorXd& g) {
    const Eigen::Index n = A.rows();
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = g[i];
        double c = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            double p, pe;
            two_prod(-A(i, j), v[j], p, pe);
            double t, te;
            two_sum(s, p, t, te);
            s = t;
            c += te + pe;
        }
        r[i] = s + c;
    }
    return r;
}

}  // namespace

double SortedWindow::manifold_deviation() const {
    const double root_a = std::sqrt(static_cast<double>(params.a()));
    double worst = 0.0;
    for (int l = 0; l < blocks(); ++l) {
        worst = std::max(worst, std::abs(root_a * block(l).norm() - 1.0));
    }
    return worst;
}

std::uint64_t content_hash(const Eigen::VectorXd& v) {
    std::uint64_t h = 1469598103934665603ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
    const std::size_t n = static_cast<std::size_t>(v.size()) * sizeof(double);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

SortedWindow sort_window(const Window& w) {
    const auto perm = sort_permutation(w.params);
    Eigen::VectorXd data(w.coeffs.size());
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        data[i] = w.coeffs[perm[static_cast<std::size_t>(i)]];
    }
    return SortedWindow{std::move(data), w.params};
}

Window unsort_window(const SortedWindow& sw) {
    const auto perm = sort_permutation(sw.params);
    Eigen::VectorXd coeffs(sw.data.size());
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
        coeffs[perm[static_cast<std::size_t>(i)]] = sw.data[i];
    }
    return Window(std::move(coeffs), sw.params);
}

Eigen::MatrixXd permute_q(const ConcentrationMatrix& Q, const GaborParams& params) {
    if (Q.K != params.K()) {
        throw DimensionMismatch("concentration matrix order does not match K");
    }
    const auto perm = sort_permutation(params);
    const int K = params.K();
    Eigen::MatrixXd out(K, K);
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
            out(i, j) = Q.entries(perm[static_cast<std::size_t>(i)],
                                  perm[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

NewtonSystem build_newton_system(const SortedWindow& w,
                                 std::shared_ptr<const Eigen::MatrixXd> Qtilde) {
    const int K = w.params.K(), a = w.params.a(), J = w.params.J();
    if (!Qtilde || Qtilde->rows() != K || Qtilde->cols() != K) {
        throw DimensionMismatch("Qtilde must be K x K");
    }

    NewtonSystem sys;
    sys.Qtilde = std::move(Qtilde);
    sys.q = (*sys.Qtilde) * w.data;
    sys.h.resize(a);
    sys.U = *sys.Qtilde;
    sys.W = Eigen::MatrixXd::Zero(K, a);
    for (int l = 0; l < a; ++l) {
        const auto seg = Eigen::seqN(static_cast<Eigen::Index>(l) * J, J);
        sys.h[l] = w.block(l).dot(sys.q(seg));
        sys.U.diagonal()(seg).array() -= static_cast<double>(a) * sys.h[l];
        sys.W.col(l)(seg) = w.block(l);
    }
    sys.base_hash = content_hash(w.data);
    return sys;
}

TangentVector project_tangent(const SortedWindow& w, const Eigen::VectorXd& u) {
    if (u.size() != w.data.size()) {
        throw DimensionMismatch("vector length does not match K");
    }
    if (!w.on_manifold()) {
        throw OffManifoldError("project_tangent: base point is off the manifold");
    }
    const double a = static_cast<double>(w.params.a());
    TangentVector v;
    v.data.resize(u.size());
    const int J = w.params.J();
    for (int l = 0; l < w.params.a(); ++l) {
        const auto seg = Eigen::seqN(static_cast<Eigen::Index>(l) * J, J);
        const auto wl = w.block(l);
        v.data(seg) = u(seg) - a * wl.dot(u(seg)) * wl;
    }
    v.base_hash = content_hash(w.data);
    return v;
}

TangentVector riemannian_gradient(const SortedWindow& w, const NewtonSystem& sys) {
    check_base(w, sys);
    const double a = static_cast<double>(w.params.a());
    const int J = w.params.J();
    TangentVector g;
    g.data.resize(w.data.size());
    // g = -U w~ expanded blockwise: -(q_l - a h_l w_l).
    for (int l = 0; l < w.params.a(); ++l) {
        const auto seg = Eigen::seqN(static_cast<Eigen::Index>(l) * J, J);
        g.data(seg) = -(sys.q(seg) - a * sys.h[l] * w.block(l));
    }
    g.base_hash = sys.base_hash;
    return g;
}

TangentVector hessian_apply(const SortedWindow& w, const NewtonSystem& sys,
                            const TangentVector& v) {
    check_base(w, sys);
    check_base(w, v);
    const double vnorm = v.data.norm();
    const int J = w.params.J();
    for (int l = 0; l < w.params.a(); ++l) {
        if (std::abs(w.block(l).dot(v.data.segment(static_cast<Eigen::Index>(l) * J, J))) >
            kTangencyTol * std::max(vnorm, 1e-300)) {
            throw NotTangent("hessian_apply: vector is not tangent at the base point");
        }
    }
    const double a = static_cast<double>(w.params.a());
    TangentVector out;
    out.data = -(sys.U * v.data -
                 a * (sys.W * (sys.W.transpose() * ((*sys.Qtilde) * v.data))));
    out.base_hash = sys.base_hash;
    return out;
}

TangentVector newton_step(const SortedWindow& w, const NewtonSystem& sys, bool refine) {
    check_base(w, sys);
    const double a = static_cast<double>(w.params.a());
    const TangentVector g = riemannian_gradient(w, sys);

    Eigen::MatrixXd A = sys.U - a * (sys.W * (sys.W.transpose() * (*sys.Qtilde)));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd v = lu.solve(g.data);

    const double a_inf = A.cwiseAbs().rowwise().sum().maxCoeff();
    if (refine) {
        double prev_rn = std::numeric_limits<double>::infinity();
        for (int pass = 0; pass < 4; ++pass) {
            const Eigen::VectorXd r = compensated_residual(A, v, g.data);
            const double rn = r.norm();
            const double scale = std::max(g.data.norm(), a_inf * v.norm());
            if (!std::isfinite(rn) || rn <= 1e-12 * scale || rn >= prev_rn) break;
            prev_rn = rn;
            v += lu.solve(r);
        }
    }

    const double rn = compensated_residual(A, v, g.data).norm();
    const double scale = std::max(g.data.norm(), a_inf * v.norm());
    if (!v.allFinite() || !(rn <= 1e-6 * std::max(scale, 1e-300))) {
        throw SingularSystem("Newton system solve failed (relative residual " +
                             std::to_string(rn / std::max(scale, 1e-300)) + ")");
    }
    const double vnorm = v.norm();
    if (vnorm > 0.0 && (sys.W.transpose() * v).norm() > kStepTangencyTol * vnorm) {
        throw SingularSystem("Newton step left the tangent space");
    }

    // Scrub the numerical drift: the step is tangent analytically, the
    // computed one only approximately.
    TangentVector out = project_tangent(w, v);
    return out;
}

SortedWindow retract(const SortedWindow& w, const TangentVector& v) {
    check_base(w, v);
    const double root_a = std::sqrt(static_cast<double>(w.params.a()));
    SortedWindow out{Eigen::VectorXd(w.data.size()), w.params};
    const int J = w.params.J();
    for (int l = 0; l < w.params.a(); ++l) {
        const auto seg = Eigen::seqN(static_cast<Eigen::Index>(l) * J, J);
        const Eigen::VectorXd b = w.data(seg) + v.data(seg);
        const double norm = b.norm();
        if (norm < kZeroBlockTol) {
            throw ZeroBlock("retraction hit a vanishing block (l=" + std::to_string(l) + ")");
        }
        out.data(seg) = b / (root_a * norm);
    }
    return out;
}

double objective(const SortedWindow& w, const NewtonSystem& sys) {
    check_base(w, sys);
    return -0.5 * w.data.dot(sys.q);
}

}  // namespace tightwin
