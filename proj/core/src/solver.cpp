#include "tightwin/solver.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "tightwin/oblique.hpp"
#include "tightwin/spectral.hpp"

namespace tightwin {

namespace {

void check_config(const SolverConfig& cfg) {
    if (!(cfg.delta > 0.0)) {
        throw std::invalid_argument("SolverConfig.delta must be > 0");
    }
    if (cfg.i_max < 1) {
        throw std::invalid_argument("SolverConfig.i_max must be >= 1");
    }
    if (cfg.stagnation_window < 1) {
        throw std::invalid_argument("SolverConfig.stagnation_window must be >= 1");
    }
}

}  // namespace

const char* to_string(SolverStatus status) {
    switch (status) {
        case SolverStatus::Converged: return "Converged";
        case SolverStatus::IterationCap: return "IterationCap";
        case SolverStatus::Stagnated: return "Stagnated";
        case SolverStatus::SingularSystem: return "SingularSystem";
    }
    return "Unknown";
}

Window init_from_slepian(double p, const GaborParams& params) {
    Window w(slepian(p, params.K()), params);
    w.p = p;
    const double lambda = static_cast<double>(params.M()) / params.a();
    return canonical_tight(w, lambda, params);
}

SolveResult solve(const Window& w0, double p, const GaborParams& params,
                  const SolverConfig& cfg) {
    check_config(cfg);
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("solve requires p in (0, 1)");
    }

    SortedWindow sw = sort_window(Window(w0.coeffs, params));
    if (sw.manifold_deviation() > 1e-8) {
        throw OffManifoldError("solve: start window is not tight (block norms deviate by " +
                               std::to_string(sw.manifold_deviation()) + ")");
    }
    // Metric projection onto the manifold scrubs start-up drift exactly.
    const double root_a = std::sqrt(static_cast<double>(params.a()));
    for (int l = 0; l < sw.blocks(); ++l) {
        sw.block(l) /= root_a * sw.block(l).norm();
    }

    auto Qtilde = std::make_shared<const Eigen::MatrixXd>(
        permute_q(build_q(p, params.K()), params));

    NewtonSystem sys = build_newton_system(sw, Qtilde);
    SolverTrace trace;
    trace.grad_norms.push_back(riemannian_gradient(sw, sys).data.norm());
    trace.objective.push_back(objective(sw, sys));

    SortedWindow best_sw = sw;
    double best_norm = trace.grad_norms.back();
    int best_iter = 0;
    int i = 0;
    bool failed = false;

    while (trace.grad_norms.back() > cfg.delta && i < cfg.i_max) {
        TangentVector v;
        try {
            v = newton_step(sw, sys, cfg.refine);
        } catch (const SingularSystem&) {
            trace.status = SolverStatus::SingularSystem;
            failed = true;
            break;
        }
        sw = retract(sw, v);  // ZeroBlock aborts the solve
        sys = build_newton_system(sw, Qtilde);
        ++i;
        trace.grad_norms.push_back(riemannian_gradient(sw, sys).data.norm());
        trace.objective.push_back(objective(sw, sys));
        if (trace.grad_norms.back() < best_norm) {
            best_norm = trace.grad_norms.back();
            best_iter = i;
            best_sw = sw;
        } else if (i - best_iter >= cfg.stagnation_window) {
            trace.status = SolverStatus::Stagnated;
            failed = true;
            break;
        }
    }

    trace.iterations = i;
    if (!failed) {
        trace.status = trace.grad_norms.back() <= cfg.delta ? SolverStatus::Converged
                                                            : SolverStatus::IterationCap;
    }

    const bool converged = trace.status == SolverStatus::Converged;
    trace.returned_iteration = converged ? i : best_iter;
    if (converged) {
        const double obj0 = trace.objective.front();
        const double slack = 1e-14 * std::max(1.0, std::abs(obj0));
        trace.objective_increased = trace.objective.back() > obj0 + slack;
    }

    Window out = unsort_window(converged ? sw : best_sw);
    out.p = p;
    out.lambda = static_cast<double>(params.M()) / params.a();
    return SolveResult{std::move(out), std::move(trace)};
}

std::vector<SweepEntry> sweep(const std::vector<double>& p_list,
                              const GaborParams& params, const SolverConfig& cfg) {
    if (p_list.empty()) {
        throw std::invalid_argument("sweep requires a nonempty p list");
    }
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        if (!(p_list[i] > 0.0 && p_list[i] < 1.0)) {
            throw std::domain_error("sweep requires every p in (0, 1)");
        }
        if (i > 0 && !(p_list[i] > p_list[i - 1])) {
            throw std::invalid_argument("sweep requires p_list sorted ascending");
        }
    }

    const auto entry_ok = [](const SolverTrace& t) {
        return t.status == SolverStatus::Converged && !t.objective_increased;
    };
    const auto returned_objective = [](const SolverTrace& t) {
        return t.objective[static_cast<std::size_t>(t.returned_iteration)];
    };

    std::vector<SweepEntry> entries;
    entries.reserve(p_list.size());
    std::optional<Window> warm;

    for (const double p : p_list) {
        const bool warm_started = warm.has_value();
        SolveResult res = solve(warm_started ? *warm : init_from_slepian(p, params),
                                p, params, cfg);
        bool used_fallback = false;

        if (warm_started && !entry_ok(res.trace)) {
            // The warm start failed or landed on a worse stationary point;
            // try the other recommended initialization and keep the better run.
            SolveResult retry = solve(init_from_slepian(p, params), p, params, cfg);
            const bool keep_retry =
                entry_ok(retry.trace) != entry_ok(res.trace)
                    ? entry_ok(retry.trace)
                    : returned_objective(retry.trace) < returned_objective(res.trace);
            if (keep_retry) {
                res = std::move(retry);
                used_fallback = true;
            }
        }

        if (entry_ok(res.trace)) {
            warm = res.window;
        } else {
            warm.reset();  // next entry starts fresh from the Slepian init
        }
        entries.push_back(SweepEntry{p, std::move(res.window), std::move(res.trace),
                                     used_fallback});
    }
    return entries;
}

}  // namespace tightwin
