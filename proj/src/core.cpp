#include "core.hpp"

#include <algorithm>
#include <cmath>

namespace eadam {

bool all_finite(const ParamVector& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

void require_finite(const ParamVector& v, const char* what) {
    if (!all_finite(v)) {
        throw Error(errc::not_finite, std::string(what) + " contains a non-finite element");
    }
}

void require_same_size(const ParamVector& a, const ParamVector& b, const char* what) {
    if (a.size() != b.size()) {
        throw Error(errc::length_mismatch,
                    std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
    }
}

double l2_norm(const ParamVector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Sgdm: return "sgdm";
        case Variant::Adam: return "adam";
        case Variant::EAdam: return "eadam";
        case Variant::RAdam: return "radam";
        case Variant::AdaBelief: return "adabelief";
    }
    throw Error(errc::unknown_variant, "unknown optimizer variant");
}

Variant variant_from_string(const std::string& name) {
    if (name == "sgdm") return Variant::Sgdm;
    if (name == "adam") return Variant::Adam;
    if (name == "eadam") return Variant::EAdam;
    if (name == "radam") return Variant::RAdam;
    if (name == "adabelief") return Variant::AdaBelief;
    throw Error(errc::unknown_variant, "unknown optimizer variant '" + name + "'");
}

void validate(const OptimizerConfig& cfg) {
    if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) {
        throw Error(errc::invalid_argument, "alpha must be positive and finite");
    }
    if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0)) {
        throw Error(errc::invalid_argument, "beta1 must lie in [0, 1)");
    }
    if (!(cfg.beta2 > 0.0 && cfg.beta2 < 1.0)) {
        throw Error(errc::invalid_argument, "beta2 must lie in (0, 1)");
    }
    if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) {
        throw Error(errc::invalid_argument, "epsilon must be non-negative and finite");
    }
    if (!(cfg.weight_decay >= 0.0) || !std::isfinite(cfg.weight_decay)) {
        throw Error(errc::invalid_argument, "weight_decay must be non-negative and finite");
    }
    variant_name(cfg.variant);  // rejects out-of-range enum values
}

OptimizerState initial_state(std::size_t dim) {
    OptimizerState s;
    s.t = 0;
    s.m.assign(dim, 0.0);
    s.v.assign(dim, 0.0);
    return s;
}

double lr_at(const LrSchedule& schedule, std::uint64_t t) {
    double lr = schedule.base_alpha;
    for (std::uint64_t milestone : schedule.milestones) {
        if (milestone <= t) lr *= schedule.factor;
    }
    return lr;
}

double bias_correction(double raw, double beta, std::uint64_t t) {
    if (t == 0) {
        throw Error(errc::invalid_argument, "bias_correction requires t >= 1");
    }
    if (!(beta > 0.0 && beta < 1.0)) {
        throw Error(errc::invalid_argument, "bias_correction requires beta in (0, 1)");
    }
    return raw / (1.0 - std::pow(beta, static_cast<double>(t)));
}

ParamVector bias_correction(const ParamVector& raw, double beta, std::uint64_t t) {
    if (t == 0) {
        throw Error(errc::invalid_argument, "bias_correction requires t >= 1");
    }
    if (!(beta > 0.0 && beta < 1.0)) {
        throw Error(errc::invalid_argument, "bias_correction requires beta in (0, 1)");
    }
    const double factor = 1.0 - std::pow(beta, static_cast<double>(t));
    ParamVector out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / factor;
    return out;
}

}  // namespace eadam
