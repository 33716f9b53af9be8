#pragma once

#include <memory>

#include "core.hpp"

namespace eadam {

// Synthetic dataset description. Generation is a pure function of seed, so a
// spec fully determines the data.
struct DatasetSpec {
    std::size_t n_samples = 1000;
    double noise_sigma = 0.0;
    std::uint64_t seed = 42;
    std::size_t batch_size = 128;
    double separation = 4.0;  // cluster distance for the classification sets
};

void validate(const DatasetSpec& spec);

// Identifies the minibatch used by a stochastic evaluation. Deterministic
// problems ignore it.
struct StepKey {
    std::uint64_t seed = 0;
    std::uint64_t step = 1;  // 1-based optimization step
};

// Minibatch composition for a given step: shuffled-without-replacement epochs,
// each epoch's permutation drawn from the counter-based generator keyed by
// (seed, epoch). Indices come back sorted so the evaluation order (and its
// rounding) does not depend on the position within the epoch. Pure function,
// independent of the optimizer, which is what keeps gradient streams paired
// across variants.
std::vector<std::uint32_t> batch_indices(std::size_t n_samples, std::size_t batch_size,
                                         std::uint64_t seed, std::uint64_t step);

struct EvalResult {
    double loss = 0.0;
    ParamVector grad;
};

class Problem {
public:
    virtual ~Problem() = default;

    const std::string& name() const { return name_; }
    std::size_t dim() const { return dim_; }
    bool deterministic() const { return deterministic_; }

    // Canonical start used by the harness.
    virtual ParamVector initial_point() const = 0;

    // Loss and analytic gradient at theta; stochastic problems evaluate the
    // minibatch selected by `key`.
    virtual EvalResult eval(const ParamVector& theta, const StepKey& key) const = 0;

    // Loss and gradient over the whole dataset (identical to eval for
    // deterministic problems).
    virtual EvalResult full_eval(const ParamVector& theta) const;

protected:
    Problem(std::string name, std::size_t dim, bool deterministic);
    void check_theta(const ParamVector& theta) const;

private:
    std::string name_;
    std::size_t dim_;
    bool deterministic_;
};

// f(theta) = 1/2 sum lambda_i theta_i^2 with eigenvalues log-spaced in
// [1, condition_number].
std::unique_ptr<Problem> make_quadratic(std::size_t dim, double condition_number);

// f(x, y) = (1-x)^2 + 100 (y - x^2)^2, started at the classic (-1.2, 1).
std::unique_ptr<Problem> make_rosenbrock();

// Mean-squared error on y = X w* + noise; exact minibatch gradients.
std::unique_ptr<Problem> make_linear_regression(const DatasetSpec& spec, std::size_t dim);

// Binary cross-entropy on two Gaussian clusters with a guaranteed margin
// (the noise component along the separating direction is clipped), so the
// data are linearly separable for every seed. Parameters are [w, bias],
// dim() == feature_dim + 1.
std::unique_ptr<Problem> make_logistic_regression(const DatasetSpec& spec, std::size_t feature_dim);

// One-hidden-layer tanh network with a sigmoid read-out on the same cluster
// data; manual backprop. Parameters are [W1 (h x d), b1, w2, b2].
std::unique_ptr<Problem> make_mlp(const DatasetSpec& spec, std::size_t feature_dim,
                                  std::size_t hidden);

// Central-difference check of the analytic gradient at theta with the batch
// frozen by `key`; returns the max per-coordinate relative error, falling back
// to absolute error where |grad_i| < 1e-8.
double fd_gradient_check(const Problem& problem, const ParamVector& theta, double h,
                         const StepKey& key);

}  // namespace eadam
