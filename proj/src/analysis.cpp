#include "analysis.hpp"

#include <cmath>
#include <fstream>

#include "format.hpp"
#include "optimizers.hpp"

namespace eadam {

namespace {

// Neumaier variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

void check_beta2(double beta2) {
    if (!(beta2 > 0.0 && beta2 < 1.0)) {
        throw Error(errc::invalid_argument, "beta2 must lie in (0, 1)");
    }
}

void check_epsilon(double epsilon) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw Error(errc::invalid_argument, "epsilon must be non-negative and finite");
    }
}

void check_t_in_range(const GradientLog& log, std::uint64_t t) {
    if (t == 0 || t > log.size()) {
        throw Error(errc::invalid_argument,
                    "step index " + std::to_string(t) + " outside gradient log of length " +
                        std::to_string(log.size()));
    }
}

// sum_{i=1..t} b2^(t-i) * g_i^2, compensated, one accumulator per coordinate.
ParamVector weighted_square_sum(const GradientLog& log, double beta2, std::uint64_t t) {
    const std::size_t dim = log.front().size();
    std::vector<CompensatedSum> acc(dim);
    double weight = 1.0;  // b2^(t-i), walking i = t down to 1
    for (std::uint64_t i = t; i >= 1; --i) {
        const ParamVector& g = log[i - 1];
        for (std::size_t k = 0; k < dim; ++k) acc[k].add(weight * g[k] * g[k]);
        weight *= beta2;
    }
    ParamVector out(dim);
    for (std::size_t k = 0; k < dim; ++k) out[k] = acc[k].value();
    return out;
}

}  // namespace

void validate_log(const GradientLog& log) {
    if (log.empty()) {
        throw Error(errc::invalid_argument, "gradient log is empty");
    }
    const std::size_t dim = log.front().size();
    for (const ParamVector& g : log) {
        if (g.size() != dim) {
            throw Error(errc::length_mismatch, "gradient log entries differ in length");
        }
        require_finite(g, "gradient log entry");
    }
}

ParamVector closed_form_v(const GradientLog& log, double beta2, double epsilon, Variant variant,
                          std::uint64_t t) {
    validate_log(log);
    check_beta2(beta2);
    check_epsilon(epsilon);
    check_t_in_range(log, t);
    if (variant != Variant::Adam && variant != Variant::EAdam) {
        throw Error(errc::invalid_argument, "closed_form_v is defined for adam and eadam only");
    }
    ParamVector v = weighted_square_sum(log, beta2, t);
    for (double& x : v) x *= (1.0 - beta2);
    if (variant == Variant::EAdam) {
        const double injected =
            epsilon * (1.0 - std::pow(beta2, static_cast<double>(t))) / (1.0 - beta2);
        for (double& x : v) x += injected;
    }
    return v;
}

ParamVector bias_corrected_G(const GradientLog& log, double beta2, std::uint64_t t) {
    validate_log(log);
    check_beta2(beta2);
    check_t_in_range(log, t);
    ParamVector G = weighted_square_sum(log, beta2, t);
    const double factor =
        (1.0 - beta2) / (1.0 - std::pow(beta2, static_cast<double>(t)));
    for (double& x : G) x *= factor;
    return G;
}

ParamVector effective_stepsize(const ParamVector& G, double alpha, double epsilon, double beta2,
                               Variant variant) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(errc::invalid_argument, "alpha must be positive and finite");
    }
    check_epsilon(epsilon);
    ParamVector out(G.size());
    if (variant == Variant::Adam) {
        for (std::size_t i = 0; i < G.size(); ++i) {
            if (G[i] < 0.0) throw Error(errc::invalid_argument, "G must be non-negative");
            out[i] = alpha / (std::sqrt(G[i]) + epsilon);
        }
    } else if (variant == Variant::EAdam) {
        check_beta2(beta2);
        const double c = epsilon / (1.0 - beta2);
        for (std::size_t i = 0; i < G.size(); ++i) {
            if (G[i] < 0.0) throw Error(errc::invalid_argument, "G must be non-negative");
            out[i] = alpha / std::sqrt(G[i] + c);
        }
    } else {
        throw Error(errc::invalid_argument,
                    "effective_stepsize is defined for adam and eadam only");
    }
    return out;
}

double limit_stepsize(double alpha, double epsilon, double beta2, Variant variant) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(errc::invalid_argument, "alpha must be positive and finite");
    }
    check_epsilon(epsilon);
    if (variant == Variant::Adam) return alpha / epsilon;
    if (variant == Variant::EAdam) {
        check_beta2(beta2);
        return alpha / std::sqrt(epsilon / (1.0 - beta2));
    }
    throw Error(errc::invalid_argument, "limit_stepsize is defined for adam and eadam only");
}

StepsizeTrace adaptive_epsilon_trace(const GradientLog& log, double alpha, double beta2,
                                     double epsilon) {
    validate_log(log);
    check_beta2(beta2);
    check_epsilon(epsilon);
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(errc::invalid_argument, "alpha must be positive and finite");
    }
    const double c = epsilon / (1.0 - beta2);
    const std::size_t dim = log.front().size();
    StepsizeTrace trace;
    trace.G.reserve(log.size());
    trace.adam_stepsize.reserve(log.size());
    trace.eadam_stepsize.reserve(log.size());
    trace.epsilon_prime.reserve(log.size());
    for (std::uint64_t t = 1; t <= log.size(); ++t) {
        ParamVector G = bias_corrected_G(log, beta2, t);
        ParamVector adam_ss(dim);
        ParamVector eadam_ss(dim);
        ParamVector eps_prime(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const double root_g = std::sqrt(G[i]);
            const double root_gc = std::sqrt(G[i] + c);
            adam_ss[i] = alpha / (root_g + epsilon);
            eadam_ss[i] = alpha / root_gc;
            eps_prime[i] = c > 0.0 ? c / (root_gc + root_g) : 0.0;
        }
        trace.G.push_back(std::move(G));
        trace.adam_stepsize.push_back(std::move(adam_ss));
        trace.eadam_stepsize.push_back(std::move(eadam_ss));
        trace.epsilon_prime.push_back(std::move(eps_prime));
    }
    return trace;
}

void trace_to_csv(const StepsizeTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(errc::io, "cannot open " + path.string() + " for writing");
    }
    out << "step,coord,G,adam_stepsize,eadam_stepsize,epsilon_prime\n";
    for (std::size_t t = 0; t < trace.G.size(); ++t) {
        for (std::size_t i = 0; i < trace.G[t].size(); ++i) {
            out << (t + 1) << ',' << i << ',' << format_double(trace.G[t][i]) << ','
                << format_double(trace.adam_stepsize[t][i]) << ','
                << format_double(trace.eadam_stepsize[t][i]) << ','
                << format_double(trace.epsilon_prime[t][i]) << '\n';
        }
    }
    if (!out.flush()) {
        throw Error(errc::io, "write failure on " + path.string());
    }
}

EquivalenceReport verify_equivalence(const GradientLog& log, const OptimizerConfig& cfg,
                                     std::uint64_t T) {
    validate_log(log);
    validate(cfg);
    if (cfg.variant != Variant::EAdam) {
        throw Error(errc::invalid_argument, "verify_equivalence requires the eadam variant");
    }
    if (cfg.weight_decay != 0.0) {
        throw Error(errc::invalid_argument,
                    "verify_equivalence requires weight_decay == 0 (decay feeds the parameter "
                    "difference back into the gradients)");
    }
    check_t_in_range(log, T);

    const std::size_t dim = log.front().size();
    const StepsizeTrace trace = adaptive_epsilon_trace(log, cfg.alpha, cfg.beta2, cfg.epsilon);

    // Route (a): the EAdam recursion as implemented.
    ParamVector theta_a(dim, 0.0);
    OptimizerState state_a = initial_state(dim);

    // Route (b): Adam-form update with the per-step adaptive constant.
    ParamVector theta_b(dim, 0.0);
    ParamVector m(dim, 0.0);
    ParamVector v(dim, 0.0);

    EquivalenceReport report;
    report.steps = T;
    report.dim = dim;
    for (std::uint64_t t = 1; t <= T; ++t) {
        const ParamVector& g = log[t - 1];
        StepResult res = eadam_step(theta_a, g, state_a, cfg, cfg.alpha);
        theta_a = std::move(res.new_params);
        state_a = std::move(res.new_state);

        const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
        const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
        const ParamVector& eps_prime = trace.epsilon_prime[t - 1];
        for (std::size_t i = 0; i < dim; ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            theta_b[i] -= cfg.alpha * m_hat / (std::sqrt(v_hat) + eps_prime[i]);
        }

        for (std::size_t i = 0; i < dim; ++i) {
            report.max_deviation = std::max(report.max_deviation, std::abs(theta_a[i] - theta_b[i]));
        }
    }
    return report;
}

}  // namespace eadam
