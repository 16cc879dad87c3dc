#pragma once

#include <vector>

#include "tightwin/gabor.hpp"
#include "tightwin/types.hpp"

namespace tightwin {

enum class SolverStatus {
    Converged,       // gradient norm reached delta
    IterationCap,    // i_max loop bodies completed without convergence
    Stagnated,       // no new best gradient norm for stagnation_window iterations
    SingularSystem,  // a Newton system failed to solve; best iterate returned
};

const char* to_string(SolverStatus status);

struct SolverConfig {
    double delta = 1e-15;        // gradient-norm stopping threshold
    int i_max = 1000;            // iteration cap
    int stagnation_window = 300; // iterations without a new best before giving up
    bool refine = true;          // iterative refinement in the Newton solve
};

/// Per-iteration record of a solve. grad_norms[i] and objective[i] belong to
/// iterate i, so both have length iterations + 1 (entry 0 is the start point).
struct SolverTrace {
    std::vector<double> grad_norms;
    std::vector<double> objective;
    int iterations = 0;          // completed while-loop bodies
    int returned_iteration = 0;  // index of the iterate actually returned
    SolverStatus status = SolverStatus::Converged;
    bool objective_increased = false;  // converged, but final objective > initial
};

struct SolveResult {
    Window window;
    SolverTrace trace;
};

/// The tight window obtained by projecting the Slepian window, with
/// lambda = M/a: every block norm is 1/sqrt(a) and the total norm is 1.
Window init_from_slepian(double p, const GaborParams& params);

/// Riemannian Newton iteration on the oblique manifold: from a tight start,
/// repeatedly solve the Newton system, retract blockwise, and rebuild the
/// linearization, until ||g|| <= delta or a cap is hit. Pure Newton steps, no
/// damping. On non-converged statuses the best iterate (smallest gradient
/// norm) is returned. Deterministic: identical inputs produce identical
/// traces.
SolveResult solve(const Window& w0, double p, const GaborParams& params,
                  const SolverConfig& cfg = {});

struct SweepEntry {
    double p = 0.0;
    Window window;
    SolverTrace trace;
    bool used_fallback = false;  // entry was re-run from the Slepian init
};

/// Warm-started sweep over an ascending list of mainlobe proportions. The
/// first entry starts from init_from_slepian; later entries start from the
/// previous entry's window. An entry that fails to converge, or converges
/// with a worse objective than its own start (a saddle landing), is retried
/// once from the Slepian init -- the other initialization recommended for the
/// method -- and the better result is kept. After a failed entry the next one
/// starts fresh from the Slepian init.
std::vector<SweepEntry> sweep(const std::vector<double>& p_list,
                              const GaborParams& params,
                              const SolverConfig& cfg = {});

}  // namespace tightwin
