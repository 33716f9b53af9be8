#pragma once

#include <filesystem>

#include "core.hpp"

namespace eadam {

// Gradient history g_1..g_T, one entry per step. All entries must share one
// dimension and be finite.
using GradientLog = std::vector<ParamVector>;

void validate_log(const GradientLog& log);

// Direct (non-recursive) evaluation of the second-moment accumulator from the
// whole gradient history:
//   Adam:  v_t = (1-b2) * sum_{i=1..t} b2^(t-i) * g_i^2
//   EAdam: the same plus epsilon * (1-b2^t)/(1-b2)
// Serves as the independent oracle for the recursive accumulators kept by the
// step functions. Sums are compensated (Neumaier) so 1e-12 comparisons stay
// robust out to t = 1000.
ParamVector closed_form_v(const GradientLog& log, double beta2, double epsilon, Variant variant,
                          std::uint64_t t);

// Bias-corrected squared-gradient average G_t = (1-b2)/(1-b2^t) * sum b2^(t-i) g_i^2.
// The EAdam-corrected value is G_t + epsilon/(1-b2), composed by the caller.
ParamVector bias_corrected_G(const GradientLog& log, double beta2, std::uint64_t t);

// Per-coordinate adaptive stepsize as a function of G_t:
//   Adam:  alpha / (sqrt(G) + epsilon)
//   EAdam: alpha / sqrt(G + epsilon/(1-b2))
// Negative G entries are rejected.
ParamVector effective_stepsize(const ParamVector& G, double alpha, double epsilon, double beta2,
                               Variant variant);

// Gradient-vanishing limit of the stepsize (G -> 0):
//   Adam: alpha/epsilon, EAdam: alpha/sqrt(epsilon/(1-b2)).
double limit_stepsize(double alpha, double epsilon, double beta2, Variant variant);

// Per-step stepsize analytics over a gradient history. epsilon_prime is the
// unique additive constant that makes the Adam-form denominator reproduce
// EAdam at that step:
//   eps'_t = sqrt(G_t + epsilon/(1-b2)) - sqrt(G_t)
// evaluated in the cancellation-free form c / (sqrt(G_t + c) + sqrt(G_t)).
struct StepsizeTrace {
    std::vector<ParamVector> G;
    std::vector<ParamVector> adam_stepsize;
    std::vector<ParamVector> eadam_stepsize;
    std::vector<ParamVector> epsilon_prime;
};

StepsizeTrace adaptive_epsilon_trace(const GradientLog& log, double alpha, double beta2,
                                     double epsilon);

// Writes a trace in the harness CSV conventions (shortest round-trip floats,
// LF endings): step,coord,G,adam_stepsize,eadam_stepsize,epsilon_prime.
void trace_to_csv(const StepsizeTrace& trace, const std::filesystem::path& path);

// Runs the same gradient log through (a) EAdam's recursion and (b) Adam-form
// updates that substitute the per-step epsilon_prime from
// adaptive_epsilon_trace, and reports the largest absolute deviation between
// the two parameter trajectories (infinity norm over steps and coordinates).
// The reconstruction is algebraically exact, so the deviation measures pure
// rounding. Requires cfg.variant == EAdam and cfg.weight_decay == 0 (decayed
// gradients would feed back the parameter difference into G_t).
struct EquivalenceReport {
    double max_deviation = 0.0;
    std::uint64_t steps = 0;
    std::size_t dim = 0;
};

EquivalenceReport verify_equivalence(const GradientLog& log, const OptimizerConfig& cfg,
                                     std::uint64_t T);

}  // namespace eadam
