#ifndef HERDECON_POWER_HPP
#define HERDECON_POWER_HPP

namespace herdecon {

// Inputs for the minimum-detectable-effect calculation of a two-arm trial.
// t_power and t_alpha are standard-normal quantiles supplied by the caller
// (e.g. 0.84 for 80% power, 1.96 for a two-sided 5% test).
struct PowerSpec {
    double t_power = 0.84;
    double t_alpha = 1.96;
    double treat_prop = 0.5;  // P, fraction assigned to treatment, in (0, 1)
    double variance = 1.0;    // outcome variance
    long sample_size = 2;     // N, total across both arms

    void validate() const;  // throws ValidationError
};

// MDE = (t_power + t_alpha) * sqrt(1 / (P(1-P))) * sqrt(variance / N).
double minimum_detectable_effect(const PowerSpec& spec);

// Smallest integer N (>= 2) whose MDE does not exceed target_effect.
long required_sample_size(double target_effect, double t_power, double t_alpha,
                          double treat_prop, double variance);

}  // namespace herdecon

#endif
