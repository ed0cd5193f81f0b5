#include "herdecon/surplus.hpp"

#include <cmath>
#include <sstream>

#include "herdecon/errors.hpp"

namespace herdecon {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace

void MarketParameters::validate() const {
    require(std::isfinite(supply_elasticity) && supply_elasticity > 0.0,
            "supply_elasticity must be > 0");
    require(std::isfinite(demand_elasticity_abs) && demand_elasticity_abs > 0.0,
            "demand_elasticity_abs must be > 0 (pass the absolute value)");
    require(std::isfinite(base_price) && base_price > 0.0, "base_price must be > 0");
    require(std::isfinite(base_quantity) && base_quantity > 0.0, "base_quantity must be > 0");
    require(success_rate >= 0.0 && success_rate <= 1.0, "success_rate must be in [0, 1]");
}

double counterfactual_supply(double base_quantity, double milk_loss_liters) {
    require(base_quantity > 0.0, "base_quantity must be > 0");
    require(milk_loss_liters >= 0.0, "milk loss must be >= 0");
    return base_quantity + milk_loss_liters;
}

double supply_shift_k(double base_quantity, double counterfactual_quantity,
                      double supply_elasticity) {
    require(base_quantity > 0.0, "base_quantity must be > 0");
    require(counterfactual_quantity >= base_quantity,
            "counterfactual quantity must be >= base quantity");
    if (supply_elasticity <= 0.0)
        throw ValidationError("supply_elasticity must be > 0 (degenerate supply)");
    const double pct_change = (counterfactual_quantity - base_quantity) / base_quantity;
    return pct_change / supply_elasticity;
}

double price_reduction_z(double supply_shift, double supply_elasticity,
                         double demand_elasticity_abs) {
    require(supply_elasticity + demand_elasticity_abs > 0.0,
            "e + eta must be > 0");
    return supply_shift * supply_elasticity / (supply_elasticity + demand_elasticity_abs);
}

double producer_surplus(const MarketParameters& m, double supply_shift,
                        double price_reduction) {
    m.validate();
    return supply_shift * m.base_price * m.base_quantity *
           (1.0 + 0.5 * price_reduction * m.supply_elasticity) * m.success_rate;
}

SurplusResult efficiency_gain(const MarketParameters& m, double milk_loss_liters,
                              std::string label) {
    m.validate();
    SurplusResult r;
    r.label = std::move(label);
    r.counterfactual_quantity = counterfactual_supply(m.base_quantity, milk_loss_liters);
    r.pct_supply_change = (r.counterfactual_quantity - m.base_quantity) / m.base_quantity;
    r.supply_shift = supply_shift_k(m.base_quantity, r.counterfactual_quantity,
                                    m.supply_elasticity);
    r.price_reduction = price_reduction_z(r.supply_shift, m.supply_elasticity,
                                          m.demand_elasticity_abs);
    r.surplus_gain = producer_surplus(m, r.supply_shift, r.price_reduction);
    return r;
}

std::vector<AdoptionPoint> adoption_sweep(double full_gain, std::span<const double> rates) {
    std::vector<AdoptionPoint> out;
    out.reserve(rates.size());
    for (double r : rates) {
        if (!(r >= 0.0 && r <= 1.0)) {
            std::ostringstream os;
            os << "adoption rate " << r << " is not in [0, 1]";
            throw ValidationError(os.str());
        }
        out.push_back({r, r * full_gain});
    }
    return out;
}

}  // namespace herdecon
