#ifndef HERDECON_LOSSES_HPP
#define HERDECON_LOSSES_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace herdecon {

// Per-group epidemiological and production inputs for one species group
// (e.g. cows or buffaloes). Quantities are liters, money is rupees.
struct GroupParameters {
    std::string label;
    double total_animals = 0.0;             // T, herd census count (0 = not supplied)
    double prop_in_milk = 1.0;              // P_IM, fraction of T in milk
    double in_milk = 0.0;                   // A_IM, may be fractional
    double mf_incidence = 0.0;              // P_MF, cases per in-milk animal
    double case_fatality = 0.0;             // P_D, deaths per case
    double daily_yield = 0.0;               // Y, L/day (informational)
    double lactation_yield = 0.0;           // Y_L, L per lactation
    double affected_days_frac = 0.0;        // P_MFD, fraction of lactation days affected
    double yield_reduction_frac = 0.0;      // P_MYR, fraction of daily yield lost on affected days
    double milk_price = 0.0;                // P, Rs/L
    double animal_value = 0.0;              // V, Rs/animal
    double treatment_cost_per_case = 0.0;   // TC, Rs/case (vet fee + medicine)
    double prevention_cost_per_animal = 0.0;  // Rs/animal/year

    // Throws ValidationError on any out-of-range field or on an
    // inconsistent (total_animals, prop_in_milk, in_milk) triple.
    void validate() const;

    // Case survival ratio S = 1/P_D - 1, survivors per death among cases.
    // Display-only; nullopt when there are no deaths (S is infinite).
    std::optional<double> survival_ratio() const;
};

// Rates derived from raw survey counts.
struct RateSet {
    double mf_incidence = 0.0;       // morbid / in_milk
    double case_fatality = 0.0;      // deaths / morbid (0 when morbid == 0)
    double death_rate_in_milk = 0.0; // deaths / in_milk
    std::optional<double> survival_ratio;  // (morbid-deaths)/deaths, nullopt when deaths == 0
};

RateSet derive_rates(double morbid, double deaths, double in_milk);

// Component shares of the total loss; defined only when the total is nonzero.
struct LossShares {
    double mortality = 0.0;
    double milk_value = 0.0;
    double treatment = 0.0;
};

struct LossBreakdown {
    std::string label;
    double milk_loss_liters = 0.0;   // Y_loss
    double milk_loss_tonnes = 0.0;   // Y_loss / 1000 (1 L of milk counted as 1 kg)
    double mortality_loss = 0.0;     // M_L, Rs
    double milk_value_loss = 0.0;    // Y_V, Rs
    double treatment_cost = 0.0;     // T_C, Rs
    double total = 0.0;              // TEL = M_L + Y_V + T_C, Rs
    double deaths = 0.0;             // D, expected count
    double morbid = 0.0;             // A, expected count
    std::optional<LossShares> shares;  // nullopt when total == 0
};

// Yearly milk lost to the disease, in liters:
//   A_IM * P_MF * Y_L * [P_D + (1-P_D) * P_MFD * P_MYR].
// The bracket equals P_D * [1 + S*P_MFD*P_MYR] with S = (1-P_D)/P_D but
// stays defined at P_D = 0.
double milk_production_loss(const GroupParameters& g);

double mortality_loss(const GroupParameters& g);   // A_IM*P_MF*P_D*V
double milk_value_loss(const GroupParameters& g);  // milk_production_loss * P
double treatment_cost(const GroupParameters& g);   // A_IM*P_MF*(1-P_D)*TC, survivors only

LossBreakdown total_economic_loss(const GroupParameters& g);

// Component-wise sum of per-group breakdowns; shares recomputed from the
// summed components.
LossBreakdown aggregate(std::span<const LossBreakdown> groups);

// Pools group parameters into a single synthetic group: counts are summed,
// rates recomputed from pooled counts, per-animal quantities are in-milk
// weighted means. Offered for comparison with published pooled columns;
// aggregate() is the economically meaningful default.
GroupParameters pool_parameters(std::span<const GroupParameters> groups);

struct PreventionEconomics {
    double total_cost = 0.0;                   // sum over groups of A_IM * cost/animal
    std::optional<double> cost_to_loss;        // total_cost / TEL, nullopt when TEL == 0
    std::optional<double> loss_to_cost;        // TEL / total_cost, nullopt when cost == 0
};

// cost_per_animal overrides each group's prevention_cost_per_animal when
// nonnegative; pass a negative value to use the per-group figures.
PreventionEconomics prevention_economics(std::span<const GroupParameters> groups,
                                         double cost_per_animal,
                                         double total_economic_loss);

}  // namespace herdecon

#endif
