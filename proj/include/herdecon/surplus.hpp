#ifndef HERDECON_SURPLUS_HPP
#define HERDECON_SURPLUS_HPP

#include <span>
#include <string>
#include <vector>

namespace herdecon {

// Open-economy market environment for one milk supply. With no demand
// restriction the whole efficiency gain accrues to producers, so the
// producer-surplus change below is also the total-surplus change.
struct MarketParameters {
    double supply_elasticity = 0.0;      // e > 0
    double demand_elasticity_abs = 0.0;  // eta > 0, absolute value
    double base_price = 0.0;             // P0, Rs/L
    double base_quantity = 0.0;          // Q0, L/year
    double success_rate = 0.9;           // fraction of prevented cases that stay prevented

    void validate() const;  // throws ValidationError
};

struct SurplusResult {
    std::string label;
    double counterfactual_quantity = 0.0;  // Q1, L/year
    double pct_supply_change = 0.0;        // (Q1-Q0)/Q0, a fraction
    double supply_shift = 0.0;             // K, vertical shift relative to P0
    double price_reduction = 0.0;          // Z, relative equilibrium price fall
    double surplus_gain = 0.0;             // delta PS = delta TS, Rs/year
};

// Q1 = Q0 + Y_loss: supply if the disease were fully prevented.
double counterfactual_supply(double base_quantity, double milk_loss_liters);

// K = ((Q1 - Q0) / Q0) / e, the proportionate supply shift per unit of
// supply elasticity.
double supply_shift_k(double base_quantity, double counterfactual_quantity,
                      double supply_elasticity);

// Z = K * e / (e + eta).
double price_reduction_z(double supply_shift, double supply_elasticity,
                         double demand_elasticity_abs);

// delta PS = K * P0 * Q0 * (1 + 0.5 * Z * e) * success_rate.
double producer_surplus(const MarketParameters& m, double supply_shift,
                        double price_reduction);

// Runs the full chain Q1 -> K -> Z -> delta PS for one market.
SurplusResult efficiency_gain(const MarketParameters& m, double milk_loss_liters,
                              std::string label = {});

struct AdoptionPoint {
    double rate = 0.0;  // adoption fraction
    double gain = 0.0;  // Rs/year
};

// Gains scale linearly with the adoption rate.
std::vector<AdoptionPoint> adoption_sweep(double full_gain, std::span<const double> rates);

}  // namespace herdecon

#endif
