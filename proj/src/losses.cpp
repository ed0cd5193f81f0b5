#include "herdecon/losses.hpp"

#include <cmath>
#include <sstream>

#include "herdecon/errors.hpp"

namespace herdecon {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_fraction(double v, const char* name, const std::string& label) {
    if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError(label + ": " + name + " = " + num(v) + " is not in [0, 1]");
}

void check_nonneg(double v, const char* name, const std::string& label) {
    if (!(v >= 0.0) || std::isnan(v) || std::isinf(v))
        throw ValidationError(label + ": " + name + " = " + num(v) +
                              " must be finite and >= 0");
}

}  // namespace

void GroupParameters::validate() const {
    const std::string& who = label.empty() ? std::string("group") : label;
    check_fraction(prop_in_milk, "prop_in_milk", who);
    check_fraction(mf_incidence, "mf_incidence", who);
    check_fraction(case_fatality, "case_fatality", who);
    check_fraction(affected_days_frac, "affected_days_frac", who);
    check_fraction(yield_reduction_frac, "yield_reduction_frac", who);
    check_nonneg(total_animals, "total_animals", who);
    check_nonneg(in_milk, "in_milk", who);
    check_nonneg(daily_yield, "daily_yield", who);
    check_nonneg(lactation_yield, "lactation_yield", who);
    check_nonneg(milk_price, "milk_price", who);
    check_nonneg(animal_value, "animal_value", who);
    check_nonneg(treatment_cost_per_case, "treatment_cost_per_case", who);
    check_nonneg(prevention_cost_per_animal, "prevention_cost_per_animal", who);
    if (total_animals > 0.0 && in_milk > 0.0) {
        const double implied = total_animals * prop_in_milk;
        if (std::abs(implied - in_milk) > 0.5)
            throw ValidationError(who + ": in_milk = " + num(in_milk) +
                                  " disagrees with total_animals * prop_in_milk = " +
                                  num(implied));
    }
}

std::optional<double> GroupParameters::survival_ratio() const {
    if (case_fatality <= 0.0) return std::nullopt;
    return 1.0 / case_fatality - 1.0;
}

RateSet derive_rates(double morbid, double deaths, double in_milk) {
    require(in_milk > 0.0, "in_milk = " + num(in_milk) + " must be > 0");
    require(morbid >= 0.0 && deaths >= 0.0,
            "counts must be >= 0 (morbid = " + num(morbid) + ", deaths = " + num(deaths) + ")");
    require(deaths <= morbid, "deaths = " + num(deaths) + " exceeds morbid = " + num(morbid));
    require(morbid <= in_milk, "morbid = " + num(morbid) + " exceeds in_milk = " + num(in_milk));

    RateSet r;
    r.mf_incidence = morbid / in_milk;
    r.case_fatality = morbid > 0.0 ? deaths / morbid : 0.0;
    r.death_rate_in_milk = deaths / in_milk;
    if (deaths > 0.0) r.survival_ratio = (morbid - deaths) / deaths;
    return r;
}

double milk_production_loss(const GroupParameters& g) {
    g.validate();
    const double pd = g.case_fatality;
    const double per_case_frac = pd + (1.0 - pd) * g.affected_days_frac * g.yield_reduction_frac;
    return g.in_milk * g.mf_incidence * g.lactation_yield * per_case_frac;
}

double mortality_loss(const GroupParameters& g) {
    g.validate();
    return g.in_milk * g.mf_incidence * g.case_fatality * g.animal_value;
}

double milk_value_loss(const GroupParameters& g) {
    return milk_production_loss(g) * g.milk_price;
}

double treatment_cost(const GroupParameters& g) {
    g.validate();
    return g.in_milk * g.mf_incidence * (1.0 - g.case_fatality) * g.treatment_cost_per_case;
}

namespace {

void fill_shares(LossBreakdown& b) {
    if (b.total > 0.0) {
        b.shares = LossShares{b.mortality_loss / b.total, b.milk_value_loss / b.total,
                              b.treatment_cost / b.total};
    } else {
        b.shares = std::nullopt;
    }
}

}  // namespace

LossBreakdown total_economic_loss(const GroupParameters& g) {
    LossBreakdown b;
    b.label = g.label;
    b.milk_loss_liters = milk_production_loss(g);
    b.milk_loss_tonnes = b.milk_loss_liters / 1000.0;
    b.mortality_loss = mortality_loss(g);
    b.milk_value_loss = b.milk_loss_liters * g.milk_price;
    b.treatment_cost = treatment_cost(g);
    b.total = b.mortality_loss + b.milk_value_loss + b.treatment_cost;
    b.morbid = g.in_milk * g.mf_incidence;
    b.deaths = b.morbid * g.case_fatality;
    fill_shares(b);
    return b;
}

LossBreakdown aggregate(std::span<const LossBreakdown> groups) {
    if (groups.empty()) throw ValidationError("aggregate: no groups supplied");
    LossBreakdown sum;
    sum.label = "sum-of-groups";
    for (const auto& g : groups) {
        sum.milk_loss_liters += g.milk_loss_liters;
        sum.mortality_loss += g.mortality_loss;
        sum.milk_value_loss += g.milk_value_loss;
        sum.treatment_cost += g.treatment_cost;
        sum.deaths += g.deaths;
        sum.morbid += g.morbid;
    }
    sum.milk_loss_tonnes = sum.milk_loss_liters / 1000.0;
    sum.total = sum.mortality_loss + sum.milk_value_loss + sum.treatment_cost;
    fill_shares(sum);
    return sum;
}

GroupParameters pool_parameters(std::span<const GroupParameters> groups) {
    if (groups.empty()) throw ValidationError("pool_parameters: no groups supplied");
    GroupParameters p;
    p.label = "pooled";
    double morbid = 0.0, deaths = 0.0;
    for (const auto& g : groups) {
        g.validate();
        p.total_animals += g.total_animals;
        p.in_milk += g.in_milk;
        const double m = g.in_milk * g.mf_incidence;
        morbid += m;
        deaths += m * g.case_fatality;
    }
    if (p.in_milk <= 0.0) throw ValidationError("pool_parameters: pooled in_milk is zero");
    p.prop_in_milk = p.total_animals > 0.0 ? p.in_milk / p.total_animals : 1.0;
    p.mf_incidence = morbid / p.in_milk;
    p.case_fatality = morbid > 0.0 ? deaths / morbid : 0.0;
    // Per-animal quantities: in-milk weighted means.
    for (const auto& g : groups) {
        const double w = g.in_milk / p.in_milk;
        p.daily_yield += w * g.daily_yield;
        p.lactation_yield += w * g.lactation_yield;
        p.affected_days_frac += w * g.affected_days_frac;
        p.yield_reduction_frac += w * g.yield_reduction_frac;
        p.milk_price += w * g.milk_price;
        p.animal_value += w * g.animal_value;
        p.treatment_cost_per_case += w * g.treatment_cost_per_case;
        p.prevention_cost_per_animal += w * g.prevention_cost_per_animal;
    }
    return p;
}

PreventionEconomics prevention_economics(std::span<const GroupParameters> groups,
                                         double cost_per_animal,
                                         double total_economic_loss) {
    if (groups.empty()) throw ValidationError("prevention_economics: no groups supplied");
    PreventionEconomics out;
    for (const auto& g : groups) {
        const double c = cost_per_animal >= 0.0 ? cost_per_animal : g.prevention_cost_per_animal;
        if (c < 0.0) throw ValidationError("prevention cost per animal must be >= 0");
        out.total_cost += g.in_milk * c;
    }
    if (total_economic_loss > 0.0) out.cost_to_loss = out.total_cost / total_economic_loss;
    if (out.total_cost > 0.0) out.loss_to_cost = total_economic_loss / out.total_cost;
    return out;
}

}  // namespace herdecon
