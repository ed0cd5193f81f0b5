#include "herdecon/survey.hpp"

#include "herdecon/errors.hpp"

namespace herdecon {

std::string to_string(Species s) {
    return s == Species::Buffalo ? "buffalo" : "cow";
}

namespace {

IncidenceSummary summarize(std::span<const SurveyRecord> records, std::string label,
                           auto include) {
    IncidenceSummary s;
    s.label = std::move(label);
    for (const auto& r : records) {
        if (!include(r)) continue;
        ++s.animals;
        if (r.mf_case) ++s.cases;
        if (r.died) ++s.deaths;
    }
    if (s.animals == 0)
        throw ValidationError("no survey records for group '" + s.label + "'");
    s.morbidity = static_cast<double>(s.cases) / static_cast<double>(s.animals);
    s.mortality = static_cast<double>(s.deaths) / static_cast<double>(s.animals);
    if (s.cases > 0)
        s.case_fatality = static_cast<double>(s.deaths) / static_cast<double>(s.cases);
    return s;
}

}  // namespace

IncidenceSummary summarize_incidence(std::span<const SurveyRecord> records, Species species) {
    return summarize(records, to_string(species),
                     [species](const SurveyRecord& r) { return r.species == species; });
}

std::vector<IncidenceSummary> summarize_incidence(std::span<const SurveyRecord> records) {
    std::vector<IncidenceSummary> out;
    for (Species sp : {Species::Buffalo, Species::Cow}) {
        bool present = false;
        for (const auto& r : records)
            if (r.species == sp) { present = true; break; }
        if (present) out.push_back(summarize_incidence(records, sp));
    }
    if (!records.empty())
        out.push_back(summarize(records, "combined", [](const SurveyRecord&) { return true; }));
    return out;
}

}  // namespace herdecon
