#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eadam {

// Error category used across the library. The C API maps these 1:1 onto
// status codes, so keep the numbering stable.
enum class errc : int {
    ok = 0,
    invalid_argument = 1,
    length_mismatch = 2,
    not_finite = 3,
    io = 4,
    parse = 5,
    unknown_variant = 6,
    verify_failed = 7,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

// Flat parameter/gradient carrier. All element-wise operations require equal
// lengths and finite entries; step functions validate both.
using ParamVector = std::vector<double>;

bool all_finite(const ParamVector& v);
void require_finite(const ParamVector& v, const char* what);
void require_same_size(const ParamVector& a, const ParamVector& b, const char* what);
double l2_norm(const ParamVector& v);

enum class Variant : int {
    Sgdm = 0,
    Adam = 1,
    EAdam = 2,
    RAdam = 3,
    AdaBelief = 4,
};

const char* variant_name(Variant v);
Variant variant_from_string(const std::string& name);

struct OptimizerConfig {
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 0.0;
    Variant variant = Variant::Adam;
};

// Throws Error{invalid_argument} unless alpha > 0, 0 <= beta1 < 1,
// 0 < beta2 < 1, epsilon >= 0 and weight_decay >= 0. beta1 = 0 is allowed so
// SGDM degenerates to plain SGD.
void validate(const OptimizerConfig& cfg);

struct OptimizerState {
    std::uint64_t t = 0;
    ParamVector m;
    ParamVector v;
    ParamVector extra;  // reserved for variants that need a third accumulator
};

OptimizerState initial_state(std::size_t dim);

// Piecewise-constant step decay: lr(t) = base_alpha * factor^(#milestones <= t).
struct LrSchedule {
    double base_alpha = 1e-3;
    std::vector<std::uint64_t> milestones;  // sorted ascending
    double factor = 0.1;
};

double lr_at(const LrSchedule& schedule, std::uint64_t t);

// Removes the zero-initialization bias of an exponential moving average:
// raw / (1 - beta^t). Requires t >= 1.
double bias_correction(double raw, double beta, std::uint64_t t);
ParamVector bias_correction(const ParamVector& raw, double beta, std::uint64_t t);

}  // namespace eadam
