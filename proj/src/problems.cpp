#include "problems.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace eadam {

namespace {

// Substream tags for dataset generation.
constexpr std::uint64_t kStreamX = 1;
constexpr std::uint64_t kStreamTruth = 2;
constexpr std::uint64_t kStreamNoise = 3;
constexpr std::uint64_t kStreamDirection = 4;
constexpr std::uint64_t kStreamInit = 5;
constexpr std::uint64_t kStreamShuffle = 6;

double stable_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow; equals the BCE loss ln(1+e^z) - y*z up to
// the label term.
double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

}  // namespace

void validate(const DatasetSpec& spec) {
    if (spec.n_samples == 0) {
        throw Error(errc::invalid_argument, "n_samples must be positive");
    }
    if (spec.batch_size == 0 || spec.batch_size > spec.n_samples) {
        throw Error(errc::invalid_argument, "batch_size must lie in [1, n_samples]");
    }
    if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
        throw Error(errc::invalid_argument, "noise_sigma must be non-negative and finite");
    }
    if (!(spec.separation > 0.0) || !std::isfinite(spec.separation)) {
        throw Error(errc::invalid_argument, "separation must be positive and finite");
    }
}

std::vector<std::uint32_t> batch_indices(std::size_t n_samples, std::size_t batch_size,
                                         std::uint64_t seed, std::uint64_t step) {
    if (n_samples == 0 || batch_size == 0 || batch_size > n_samples) {
        throw Error(errc::invalid_argument, "batch_indices: invalid sizes");
    }
    if (step == 0) {
        throw Error(errc::invalid_argument, "batch_indices: step is 1-based");
    }
    const std::uint64_t per_epoch = (n_samples + batch_size - 1) / batch_size;
    const std::uint64_t epoch = (step - 1) / per_epoch;
    const std::uint64_t slot = (step - 1) % per_epoch;
    const std::uint64_t perm_seed = rng::at(rng::substream(seed, kStreamShuffle), epoch);
    const std::vector<std::uint32_t> perm = rng::permutation(n_samples, perm_seed);
    const std::size_t begin = static_cast<std::size_t>(slot) * batch_size;
    const std::size_t end = std::min(n_samples, begin + batch_size);
    std::vector<std::uint32_t> batch(perm.begin() + begin, perm.begin() + end);
    std::sort(batch.begin(), batch.end());
    return batch;
}

Problem::Problem(std::string name, std::size_t dim, bool deterministic)
    : name_(std::move(name)), dim_(dim), deterministic_(deterministic) {}

void Problem::check_theta(const ParamVector& theta) const {
    if (theta.size() != dim_) {
        throw Error(errc::length_mismatch,
                    name_ + ": theta has length " + std::to_string(theta.size()) +
                        ", expected " + std::to_string(dim_));
    }
    require_finite(theta, "theta");
}

EvalResult Problem::full_eval(const ParamVector& theta) const {
    return eval(theta, StepKey{});
}

namespace {

class QuadraticProblem final : public Problem {
public:
    QuadraticProblem(std::size_t dim, double condition)
        : Problem("quadratic", dim, true), lambda_(dim) {
        for (std::size_t i = 0; i < dim; ++i) {
            lambda_[i] = dim > 1
                             ? std::pow(condition, static_cast<double>(i) /
                                                       static_cast<double>(dim - 1))
                             : 1.0;
        }
    }

    ParamVector initial_point() const override { return ParamVector(dim(), 1.0); }

    EvalResult eval(const ParamVector& theta, const StepKey&) const override {
        check_theta(theta);
        EvalResult out;
        out.grad.resize(dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            out.loss += 0.5 * lambda_[i] * theta[i] * theta[i];
            out.grad[i] = lambda_[i] * theta[i];
        }
        return out;
    }

private:
    ParamVector lambda_;
};

class RosenbrockProblem final : public Problem {
public:
    RosenbrockProblem() : Problem("rosenbrock", 2, true) {}

    ParamVector initial_point() const override { return {-1.2, 1.0}; }

    EvalResult eval(const ParamVector& theta, const StepKey&) const override {
        check_theta(theta);
        const double x = theta[0];
        const double y = theta[1];
        const double a = 1.0 - x;
        const double b = y - x * x;
        EvalResult out;
        out.loss = a * a + 100.0 * b * b;
        out.grad = {-2.0 * a - 400.0 * x * b, 200.0 * b};
        return out;
    }
};

struct ClusterData {
    std::vector<ParamVector> x;
    std::vector<double> y;  // labels in {0, 1}
};

// Two Gaussian clusters at +-(separation/2) along a random unit direction.
// The noise component along that direction is clipped to 0.9 of the
// half-distance, which leaves a hard margin of 0.1 * separation.
ClusterData make_clusters(const DatasetSpec& spec, std::size_t feature_dim) {
    const std::uint64_t dir_seed = rng::substream(spec.seed, kStreamDirection);
    ParamVector u(feature_dim);
    double norm = 0.0;
    for (std::size_t j = 0; j < feature_dim; ++j) {
        u[j] = rng::gaussian(dir_seed, j);
        norm += u[j] * u[j];
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) norm = 1.0;
    for (double& c : u) c /= norm;

    const double half = 0.5 * spec.separation;
    const double clip = 0.9 * half;
    const std::uint64_t x_seed = rng::substream(spec.seed, kStreamX);
    ClusterData data;
    data.x.resize(spec.n_samples);
    data.y.resize(spec.n_samples);
    for (std::size_t i = 0; i < spec.n_samples; ++i) {
        const double label = static_cast<double>(i % 2);
        ParamVector z(feature_dim);
        double along = 0.0;
        for (std::size_t j = 0; j < feature_dim; ++j) {
            z[j] = rng::gaussian(x_seed, i * feature_dim + j);
            along += z[j] * u[j];
        }
        const double clipped = std::clamp(along, -clip, clip);
        const double sign = label > 0.5 ? 1.0 : -1.0;
        data.x[i].resize(feature_dim);
        for (std::size_t j = 0; j < feature_dim; ++j) {
            data.x[i][j] = sign * half * u[j] + z[j] + (clipped - along) * u[j];
        }
        data.y[i] = label;
    }
    return data;
}

class LinearRegressionProblem final : public Problem {
public:
    LinearRegressionProblem(const DatasetSpec& spec, std::size_t dim)
        : Problem("linreg", dim, spec.batch_size == spec.n_samples), spec_(spec) {
        validate(spec);
        const std::uint64_t x_seed = rng::substream(spec.seed, kStreamX);
        const std::uint64_t w_seed = rng::substream(spec.seed, kStreamTruth);
        const std::uint64_t n_seed = rng::substream(spec.seed, kStreamNoise);
        w_star_.resize(dim);
        for (std::size_t j = 0; j < dim; ++j) w_star_[j] = rng::gaussian(w_seed, j);
        x_.resize(spec.n_samples);
        y_.resize(spec.n_samples);
        for (std::size_t i = 0; i < spec.n_samples; ++i) {
            x_[i].resize(dim);
            double dot = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                x_[i][j] = rng::gaussian(x_seed, i * dim + j);
                dot += x_[i][j] * w_star_[j];
            }
            y_[i] = dot + spec.noise_sigma * rng::gaussian(n_seed, i);
        }
    }

    ParamVector initial_point() const override { return ParamVector(dim(), 0.0); }

    const ParamVector& true_weights() const { return w_star_; }

    EvalResult eval(const ParamVector& theta, const StepKey& key) const override {
        check_theta(theta);
        const auto batch = batch_indices(spec_.n_samples, spec_.batch_size, key.seed, key.step);
        return eval_on(theta, batch);
    }

    EvalResult full_eval(const ParamVector& theta) const override {
        check_theta(theta);
        std::vector<std::uint32_t> all(spec_.n_samples);
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
        return eval_on(theta, all);
    }

private:
    EvalResult eval_on(const ParamVector& theta, const std::vector<std::uint32_t>& batch) const {
        EvalResult out;
        out.grad.assign(dim(), 0.0);
        const double inv = 1.0 / static_cast<double>(batch.size());
        for (std::uint32_t idx : batch) {
            const ParamVector& x = x_[idx];
            double r = -y_[idx];
            for (std::size_t j = 0; j < dim(); ++j) r += x[j] * theta[j];
            out.loss += r * r;
            const double c = 2.0 * r;
            for (std::size_t j = 0; j < dim(); ++j) out.grad[j] += c * x[j];
        }
        out.loss *= inv;
        for (double& g : out.grad) g *= inv;
        return out;
    }

    DatasetSpec spec_;
    std::vector<ParamVector> x_;
    std::vector<double> y_;
    ParamVector w_star_;
};

class LogisticRegressionProblem final : public Problem {
public:
    LogisticRegressionProblem(const DatasetSpec& spec, std::size_t feature_dim)
        : Problem("logreg", feature_dim + 1, spec.batch_size == spec.n_samples),
          spec_(spec),
          feature_dim_(feature_dim) {
        validate(spec);
        data_ = make_clusters(spec, feature_dim);
    }

    ParamVector initial_point() const override { return ParamVector(dim(), 0.0); }

    EvalResult eval(const ParamVector& theta, const StepKey& key) const override {
        check_theta(theta);
        const auto batch = batch_indices(spec_.n_samples, spec_.batch_size, key.seed, key.step);
        return eval_on(theta, batch);
    }

    EvalResult full_eval(const ParamVector& theta) const override {
        check_theta(theta);
        std::vector<std::uint32_t> all(spec_.n_samples);
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
        return eval_on(theta, all);
    }

private:
    EvalResult eval_on(const ParamVector& theta, const std::vector<std::uint32_t>& batch) const {
        EvalResult out;
        out.grad.assign(dim(), 0.0);
        const double inv = 1.0 / static_cast<double>(batch.size());
        const double bias = theta[feature_dim_];
        for (std::uint32_t idx : batch) {
            const ParamVector& x = data_.x[idx];
            const double y = data_.y[idx];
            double z = bias;
            for (std::size_t j = 0; j < feature_dim_; ++j) z += theta[j] * x[j];
            out.loss += softplus(z) - y * z;
            const double dz = stable_sigmoid(z) - y;
            for (std::size_t j = 0; j < feature_dim_; ++j) out.grad[j] += dz * x[j];
            out.grad[feature_dim_] += dz;
        }
        out.loss *= inv;
        for (double& g : out.grad) g *= inv;
        return out;
    }

    DatasetSpec spec_;
    std::size_t feature_dim_;
    ClusterData data_;
};

class MlpProblem final : public Problem {
public:
    MlpProblem(const DatasetSpec& spec, std::size_t feature_dim, std::size_t hidden)
        : Problem("mlp", hidden * feature_dim + 2 * hidden + 1,
                  spec.batch_size == spec.n_samples),
          spec_(spec),
          d_(feature_dim),
          h_(hidden) {
        validate(spec);
        if (hidden == 0 || hidden > 64) {
            throw Error(errc::invalid_argument, "mlp hidden size must lie in [1, 64]");
        }
        data_ = make_clusters(spec, feature_dim);
    }

    // Small seeded uniform weights; biases start at zero.
    ParamVector initial_point() const override {
        const std::uint64_t seed = rng::substream(spec_.seed, kStreamInit);
        ParamVector theta(dim(), 0.0);
        const double w1_scale = 1.0 / std::sqrt(static_cast<double>(d_));
        const double w2_scale = 1.0 / std::sqrt(static_cast<double>(h_));
        std::uint64_t ctr = 0;
        for (std::size_t i = 0; i < h_ * d_; ++i) {
            theta[i] = rng::uniform(seed, ctr++, -w1_scale, w1_scale);
        }
        for (std::size_t i = 0; i < h_; ++i) {
            theta[w2_offset() + i] = rng::uniform(seed, ctr++, -w2_scale, w2_scale);
        }
        return theta;
    }

    EvalResult eval(const ParamVector& theta, const StepKey& key) const override {
        check_theta(theta);
        const auto batch = batch_indices(spec_.n_samples, spec_.batch_size, key.seed, key.step);
        return eval_on(theta, batch);
    }

    EvalResult full_eval(const ParamVector& theta) const override {
        check_theta(theta);
        std::vector<std::uint32_t> all(spec_.n_samples);
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
        return eval_on(theta, all);
    }

private:
    // Layout: [W1 (h x d, row-major) | b1 (h) | w2 (h) | b2 (1)].
    std::size_t b1_offset() const { return h_ * d_; }
    std::size_t w2_offset() const { return h_ * d_ + h_; }
    std::size_t b2_offset() const { return h_ * d_ + 2 * h_; }

    EvalResult eval_on(const ParamVector& theta, const std::vector<std::uint32_t>& batch) const {
        EvalResult out;
        out.grad.assign(dim(), 0.0);
        const double inv = 1.0 / static_cast<double>(batch.size());
        std::vector<double> act(h_);
        for (std::uint32_t idx : batch) {
            const ParamVector& x = data_.x[idx];
            const double y = data_.y[idx];
            double z = theta[b2_offset()];
            for (std::size_t k = 0; k < h_; ++k) {
                double a = theta[b1_offset() + k];
                for (std::size_t j = 0; j < d_; ++j) a += theta[k * d_ + j] * x[j];
                act[k] = std::tanh(a);
                z += theta[w2_offset() + k] * act[k];
            }
            out.loss += softplus(z) - y * z;
            const double dz = stable_sigmoid(z) - y;
            out.grad[b2_offset()] += dz;
            for (std::size_t k = 0; k < h_; ++k) {
                out.grad[w2_offset() + k] += dz * act[k];
                const double da = dz * theta[w2_offset() + k] * (1.0 - act[k] * act[k]);
                out.grad[b1_offset() + k] += da;
                for (std::size_t j = 0; j < d_; ++j) out.grad[k * d_ + j] += da * x[j];
            }
        }
        out.loss *= inv;
        for (double& g : out.grad) g *= inv;
        return out;
    }

    DatasetSpec spec_;
    std::size_t d_;
    std::size_t h_;
    ClusterData data_;
};

}  // namespace

std::unique_ptr<Problem> make_quadratic(std::size_t dim, double condition_number) {
    if (dim == 0) {
        throw Error(errc::invalid_argument, "quadratic dim must be >= 1");
    }
    if (!(condition_number >= 1.0) || !std::isfinite(condition_number)) {
        throw Error(errc::invalid_argument, "condition_number must be >= 1");
    }
    return std::make_unique<QuadraticProblem>(dim, condition_number);
}

std::unique_ptr<Problem> make_rosenbrock() { return std::make_unique<RosenbrockProblem>(); }

std::unique_ptr<Problem> make_linear_regression(const DatasetSpec& spec, std::size_t dim) {
    if (dim == 0) {
        throw Error(errc::invalid_argument, "linreg dim must be >= 1");
    }
    return std::make_unique<LinearRegressionProblem>(spec, dim);
}

std::unique_ptr<Problem> make_logistic_regression(const DatasetSpec& spec,
                                                  std::size_t feature_dim) {
    if (feature_dim == 0) {
        throw Error(errc::invalid_argument, "logreg feature dim must be >= 1");
    }
    return std::make_unique<LogisticRegressionProblem>(spec, feature_dim);
}

std::unique_ptr<Problem> make_mlp(const DatasetSpec& spec, std::size_t feature_dim,
                                  std::size_t hidden) {
    if (feature_dim == 0) {
        throw Error(errc::invalid_argument, "mlp feature dim must be >= 1");
    }
    return std::make_unique<MlpProblem>(spec, feature_dim, hidden);
}

double fd_gradient_check(const Problem& problem, const ParamVector& theta, double h,
                         const StepKey& key) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw Error(errc::invalid_argument, "fd step h must be positive and finite");
    }
    const EvalResult base = problem.eval(theta, key);
    if (!std::isfinite(base.loss)) {
        throw Error(errc::not_finite, "loss is not finite at theta");
    }
    ParamVector probe = theta;
    double max_err = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        probe[i] = theta[i] + h;
        const double f_plus = problem.eval(probe, key).loss;
        probe[i] = theta[i] - h;
        const double f_minus = problem.eval(probe, key).loss;
        probe[i] = theta[i];
        if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
            throw Error(errc::not_finite, "finite-difference probe produced a non-finite loss");
        }
        const double fd = (f_plus - f_minus) / (2.0 * h);
        const double g = base.grad[i];
        const double abs_err = std::abs(fd - g);
        const double err = std::abs(g) >= 1e-8 ? abs_err / std::abs(g) : abs_err;
        max_err = std::max(max_err, err);
    }
    return max_err;
}

}  // namespace eadam
