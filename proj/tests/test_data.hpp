#ifndef HERDECON_TEST_DATA_HPP
#define HERDECON_TEST_DATA_HPP

#include <filesystem>
#include <string>

#include "herdecon/losses.hpp"

namespace herdecon::testdata {

inline std::filesystem::path data_dir() {
#ifdef HERDECON_DATA_DIR
    return std::filesystem::path(HERDECON_DATA_DIR);
#else
    return std::filesystem::path("data");
#endif
}

// Haryana state parameters: official census/production inputs with survey
// rates rounded to 4 decimals, as carried by data/haryana.params.
inline GroupParameters haryana_cows() {
    GroupParameters g;
    g.label = "cows";
    g.total_animals = 485603.0;
    g.prop_in_milk = 0.73;
    g.in_milk = 354490.19;
    g.mf_incidence = 0.2804;
    g.case_fatality = 0.0667;
    g.daily_yield = 8.92;
    g.lactation_yield = 8.92 * 305.0;
    g.affected_days_frac = 0.02;
    g.yield_reduction_frac = 0.80;
    g.milk_price = 30.0;
    g.animal_value = 53333.0;
    g.treatment_cost_per_case = 2882.0;
    g.prevention_cost_per_animal = 540.0;
    return g;
}

inline GroupParameters haryana_buffaloes() {
    GroupParameters g;
    g.label = "buffaloes";
    g.total_animals = 2765259.0;
    g.prop_in_milk = 0.72;
    g.in_milk = 1990986.48;
    g.mf_incidence = 0.1905;
    g.case_fatality = 0.1003;
    g.daily_yield = 9.11;
    g.lactation_yield = 9.11 * 305.0;
    g.affected_days_frac = 0.02;
    g.yield_reduction_frac = 0.86;
    g.milk_price = 45.0;
    g.animal_value = 74250.0;
    g.treatment_cost_per_case = 2115.0;
    g.prevention_cost_per_animal = 540.0;
    return g;
}

// Survey-sample parameters: rates taken exactly from the observed counts.
inline GroupParameters sample_cows() {
    GroupParameters g;
    g.label = "cows";
    g.in_milk = 107.0;
    g.mf_incidence = 30.0 / 107.0;
    g.case_fatality = 2.0 / 30.0;
    g.daily_yield = 10.06;
    g.lactation_yield = 3068.30;
    g.affected_days_frac = 0.02;
    g.yield_reduction_frac = 0.80;
    g.milk_price = 30.0;
    g.animal_value = 53333.0;
    g.treatment_cost_per_case = 2882.0;
    return g;
}

inline GroupParameters sample_buffaloes() {
    GroupParameters g;
    g.label = "buffaloes";
    g.in_milk = 105.0;
    g.mf_incidence = 20.0 / 105.0;
    g.case_fatality = 2.0 / 20.0;
    g.daily_yield = 8.56;
    g.lactation_yield = 2610.80;
    g.affected_days_frac = 0.02;
    g.yield_reduction_frac = 0.86;
    g.milk_price = 45.0;
    g.animal_value = 74250.0;
    g.treatment_cost_per_case = 2115.0;
    return g;
}

inline constexpr double kCrore = 1e7;

}  // namespace herdecon::testdata

#endif
