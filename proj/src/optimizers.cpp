#include "optimizers.hpp"

#include <cmath>

namespace eadam {

namespace {

void check_step_inputs(const ParamVector& params, const ParamVector& grad,
                       const OptimizerState& state, const OptimizerConfig& cfg, double lr) {
    validate(cfg);
    require_same_size(params, grad, "step");
    require_same_size(params, state.m, "step: state.m");
    require_same_size(params, state.v, "step: state.v");
    require_finite(params, "params");
    require_finite(grad, "grad");
    if (!(lr > 0.0) || !std::isfinite(lr)) {
        throw Error(errc::invalid_argument, "lr must be positive and finite");
    }
}

StepResult begin_step(const ParamVector& params, const OptimizerState& state) {
    StepResult res;
    res.new_params = params;
    res.new_state = state;
    res.new_state.t = state.t + 1;
    res.effective_step.assign(params.size(), 0.0);
    return res;
}

}  // namespace

StepResult adam_step(const ParamVector& params, const ParamVector& grad,
                     const OptimizerState& state, const OptimizerConfig& cfg, double lr) {
    check_step_inputs(params, grad, state, cfg, lr);
    StepResult res = begin_step(params, state);
    const double t = static_cast<double>(res.new_state.t);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, t);
    ParamVector& m = res.new_state.m;
    ParamVector& v = res.new_state.v;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i] + cfg.weight_decay * params[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        const double denom = std::sqrt(v_hat) + cfg.epsilon;
        const double scale = denom > 0.0 ? lr / denom : 0.0;
        res.new_params[i] -= scale * m_hat;
        res.effective_step[i] = scale;
    }
    require_finite(res.new_params, "updated params");
    return res;
}

StepResult eadam_step(const ParamVector& params, const ParamVector& grad,
                      const OptimizerState& state, const OptimizerConfig& cfg, double lr) {
    check_step_inputs(params, grad, state, cfg, lr);
    StepResult res = begin_step(params, state);
    const double t = static_cast<double>(res.new_state.t);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, t);
    ParamVector& m = res.new_state.m;
    ParamVector& v = res.new_state.v;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i] + cfg.weight_decay * params[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g + cfg.epsilon;
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        const double denom = std::sqrt(v_hat);
        const double scale = denom > 0.0 ? lr / denom : 0.0;
        res.new_params[i] -= scale * m_hat;
        res.effective_step[i] = scale;
    }
    require_finite(res.new_params, "updated params");
    return res;
}

StepResult sgdm_step(const ParamVector& params, const ParamVector& grad,
                     const OptimizerState& state, const OptimizerConfig& cfg, double lr) {
    check_step_inputs(params, grad, state, cfg, lr);
    StepResult res = begin_step(params, state);
    ParamVector& m = res.new_state.m;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i] + cfg.weight_decay * params[i];
        m[i] = cfg.beta1 * m[i] + g;
        res.new_params[i] -= lr * m[i];
        res.effective_step[i] = lr;
    }
    require_finite(res.new_params, "updated params");
    return res;
}

StepResult radam_step(const ParamVector& params, const ParamVector& grad,
                      const OptimizerState& state, const OptimizerConfig& cfg, double lr) {
    check_step_inputs(params, grad, state, cfg, lr);
    StepResult res = begin_step(params, state);
    const double t = static_cast<double>(res.new_state.t);
    const double beta2_t = std::pow(cfg.beta2, t);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - beta2_t;
    const double rho_inf = 2.0 / (1.0 - cfg.beta2) - 1.0;
    const double rho_t = rho_inf - 2.0 * t * beta2_t / bc2;
    const bool rectified = rho_t > 4.0;
    double rect = 1.0;
    if (rectified) {
        rect = std::sqrt((rho_t - 4.0) * (rho_t - 2.0) * rho_inf /
                         ((rho_inf - 4.0) * (rho_inf - 2.0) * rho_t));
    }
    ParamVector& m = res.new_state.m;
    ParamVector& v = res.new_state.v;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i] + cfg.weight_decay * params[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
        const double m_hat = m[i] / bc1;
        double scale = lr;
        if (rectified) {
            const double v_hat = v[i] / bc2;
            const double denom = std::sqrt(v_hat) + cfg.epsilon;
            scale = denom > 0.0 ? lr * rect / denom : 0.0;
        }
        res.new_params[i] -= scale * m_hat;
        res.effective_step[i] = scale;
    }
    require_finite(res.new_params, "updated params");
    return res;
}

StepResult adabelief_step(const ParamVector& params, const ParamVector& grad,
                          const OptimizerState& state, const OptimizerConfig& cfg, double lr) {
    check_step_inputs(params, grad, state, cfg, lr);
    StepResult res = begin_step(params, state);
    const double t = static_cast<double>(res.new_state.t);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, t);
    ParamVector& m = res.new_state.m;
    ParamVector& s = res.new_state.v;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i] + cfg.weight_decay * params[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        const double dev = g - m[i];
        s[i] = cfg.beta2 * s[i] + (1.0 - cfg.beta2) * dev * dev + cfg.epsilon;
        const double m_hat = m[i] / bc1;
        const double s_hat = s[i] / bc2;
        const double denom = std::sqrt(s_hat) + cfg.epsilon;
        const double scale = denom > 0.0 ? lr / denom : 0.0;
        res.new_params[i] -= scale * m_hat;
        res.effective_step[i] = scale;
    }
    require_finite(res.new_params, "updated params");
    return res;
}

StepResult step(const ParamVector& params, const ParamVector& grad,
                const OptimizerState& state, const OptimizerConfig& cfg, double lr) {
    switch (cfg.variant) {
        case Variant::Sgdm: return sgdm_step(params, grad, state, cfg, lr);
        case Variant::Adam: return adam_step(params, grad, state, cfg, lr);
        case Variant::EAdam: return eadam_step(params, grad, state, cfg, lr);
        case Variant::RAdam: return radam_step(params, grad, state, cfg, lr);
        case Variant::AdaBelief: return adabelief_step(params, grad, state, cfg, lr);
    }
    throw Error(errc::unknown_variant, "unknown optimizer variant");
}

}  // namespace eadam
