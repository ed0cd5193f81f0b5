#include "herdecon/power.hpp"

#include <cmath>
#include <string>

#include "herdecon/errors.hpp"

namespace herdecon {

void PowerSpec::validate() const {
    if (!(treat_prop > 0.0 && treat_prop < 1.0))
        throw ValidationError("treat_prop must be strictly inside (0, 1)");
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw ValidationError("variance must be finite and > 0");
    if (sample_size < 2) throw ValidationError("sample_size must be >= 2");
    if (!std::isfinite(t_power) || !std::isfinite(t_alpha))
        throw ValidationError("quantiles must be finite");
}

double minimum_detectable_effect(const PowerSpec& spec) {
    spec.validate();
    return (spec.t_power + spec.t_alpha) *
           std::sqrt(1.0 / (spec.treat_prop * (1.0 - spec.treat_prop))) *
           std::sqrt(spec.variance / static_cast<double>(spec.sample_size));
}

long required_sample_size(double target_effect, double t_power, double t_alpha,
                          double treat_prop, double variance) {
    if (!(target_effect > 0.0))
        throw ValidationError("target_effect must be > 0");
    PowerSpec probe{t_power, t_alpha, treat_prop, variance, 2};
    probe.validate();

    const double q = t_power + t_alpha;
    const double exact = q * q * variance /
                         (treat_prop * (1.0 - treat_prop) * target_effect * target_effect);
    // Guard the ceil against the inversion landing a few ulps above an
    // integer when target_effect came from minimum_detectable_effect.
    long n = static_cast<long>(std::ceil(exact * (1.0 - 1e-12)));
    if (n < 2) n = 2;
    probe.sample_size = n;
    while (minimum_detectable_effect(probe) > target_effect * (1.0 + 1e-12)) {
        probe.sample_size = ++n;
    }
    return n;
}

}  // namespace herdecon
