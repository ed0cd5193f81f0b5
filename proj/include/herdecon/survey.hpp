#ifndef HERDECON_SURVEY_HPP
#define HERDECON_SURVEY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace herdecon {

enum class Species { Buffalo, Cow };

std::string to_string(Species s);

// One surveyed animal. Parity is capped at 5 ("5 and above"); every death
// must belong to a recorded case.
struct SurveyRecord {
    std::string animal_id;
    Species species = Species::Buffalo;
    int parity = 2;
    bool mf_case = false;
    bool died = false;
    double peak_yield_prev = 0.0;  // L/day, previous lactation
    double peak_yield_curr = 0.0;  // L/day, present lactation
    double herd_size = 0.0;
    double green_fodder = 0.0;     // kg/day
    double dry_fodder = 0.0;       // kg/day
    double concentrate = 0.0;      // kg/day
    double mineral_mix = 0.0;      // kg/day
    double fodder_area = 0.0;      // acres
    double labor = 0.0;
    double milk_price = 0.0;       // Rs/L
    double animal_value = 0.0;     // Rs
    double treatment_cost = 0.0;   // Rs, zero for non-cases
};

struct IncidenceSummary {
    std::string label;
    long animals = 0;
    long cases = 0;
    long deaths = 0;
    double morbidity = 0.0;                 // cases / animals
    double mortality = 0.0;                 // deaths / animals
    std::optional<double> case_fatality;    // deaths / cases, nullopt when cases == 0
};

// Exact count ratios for one species. Throws ValidationError when the
// species has no records.
IncidenceSummary summarize_incidence(std::span<const SurveyRecord> records, Species species);

// Summaries for every species present plus a combined row.
std::vector<IncidenceSummary> summarize_incidence(std::span<const SurveyRecord> records);

}  // namespace herdecon

#endif
