#pragma once

#include "core.hpp"

namespace eadam {

// Result of one optimizer step. Step functions are pure: state goes in by
// const reference and comes back advanced by exactly one step.
//
// effective_step holds the per-coordinate multiplier applied to the
// bias-corrected momentum in the update (lr / denominator), i.e. the adaptive
// stepsize diagnostic. For SGDM and RAdam's momentum branch it is lr itself.
// A zero denominator (only possible with epsilon = 0 and an all-zero gradient
// history) yields 0 rather than infinity.
struct StepResult {
    ParamVector new_params;
    OptimizerState new_state;
    ParamVector effective_step;
};

// Adam (Kingma & Ba, 2014). Update per coordinate:
//   m_t = b1*m_{t-1} + (1-b1)*g_t
//   v_t = b2*v_{t-1} + (1-b2)*g_t^2
//   theta -= lr * mhat_t / (sqrt(vhat_t) + epsilon)
// with mhat = m/(1-b1^t), vhat = v/(1-b2^t). Weight decay enters the gradient
// first (g += weight_decay * theta), identically for every variant below.
StepResult adam_step(const ParamVector& params, const ParamVector& grad,
                     const OptimizerState& state, const OptimizerConfig& cfg, double lr);

// EAdam: identical to Adam except epsilon is added into the accumulator each
// step, before bias correction, and the denominator carries no additive term:
//   v_t = b2*v_{t-1} + (1-b2)*g_t^2 + epsilon
//   theta -= lr * mhat_t / sqrt(vhat_t)
// After t steps the accumulated epsilon contributes epsilon*(1-b2^t)/(1-b2)
// to v_t, so vhat_t is floored at epsilon/(1-b2).
StepResult eadam_step(const ParamVector& params, const ParamVector& grad,
                      const OptimizerState& state, const OptimizerConfig& cfg, double lr);

// Classical momentum SGD: m_t = b1*m_{t-1} + g_t, theta -= lr * m_t.
// beta1 = 0 gives plain SGD.
StepResult sgdm_step(const ParamVector& params, const ParamVector& grad,
                     const OptimizerState& state, const OptimizerConfig& cfg, double lr);

// RAdam (Liu et al., 2019, "On the Variance of the Adaptive Learning Rate and
// Beyond"). Moment updates as in Adam, then with b2t = b2^t:
//   rho_inf = 2/(1-b2) - 1
//   rho_t   = rho_inf - 2*t*b2t/(1-b2t)
// If rho_t > 4 the variance rectification applies:
//   r_t = sqrt( ((rho_t-4)*(rho_t-2)*rho_inf) / ((rho_inf-4)*(rho_inf-2)*rho_t) )
//   theta -= lr * r_t * mhat_t / (sqrt(vhat_t) + epsilon)
// otherwise the un-adapted momentum update is taken:
//   theta -= lr * mhat_t
// With b2 = 0.999 the first rectified step is t = 5 (rho_5 = 5).
StepResult radam_step(const ParamVector& params, const ParamVector& grad,
                      const OptimizerState& state, const OptimizerConfig& cfg, double lr);

// AdaBelief (Zhuang et al., 2020). The second accumulator tracks the squared
// deviation of the gradient from its EMA, with epsilon folded in each step:
//   s_t = b2*s_{t-1} + (1-b2)*(g_t - m_t)^2 + epsilon
//   theta -= lr * mhat_t / (sqrt(shat_t) + epsilon)
// The belief accumulator s is stored in OptimizerState.v.
StepResult adabelief_step(const ParamVector& params, const ParamVector& grad,
                          const OptimizerState& state, const OptimizerConfig& cfg, double lr);

// Dispatches on cfg.variant. Throws Error{unknown_variant} for values outside
// the enum.
StepResult step(const ParamVector& params, const ParamVector& grad,
                const OptimizerState& state, const OptimizerConfig& cfg, double lr);

}  // namespace eadam
