#ifndef HERDECON_SURVEY_CSV_HPP
#define HERDECON_SURVEY_CSV_HPP

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "herdecon/survey.hpp"

namespace herdecon {

// Frozen survey schema. Required header columns, in any order:
//   animal_id,species,parity,mf_case,died,peak_yield_prev,peak_yield_curr,
//   herd_size,green_fodder,dry_fodder,concentrate,mineral_mix,fodder_area,
//   labor,milk_price,animal_value,treatment_cost
// species is "buffalo" or "cow"; booleans are 0/1; decimal point '.'; no
// thousands separators. Unknown columns are skipped with a warning.
struct SurveyReadResult {
    std::vector<SurveyRecord> records;
    std::vector<std::string> warnings;
};

// Reads and validates a survey file. Row-level problems (bad value, death
// without a recorded case, parity below 2) are collected with their line
// numbers and raised together as one ValidationError; parities above 5 are
// binned to 5. A missing file or missing required column raises
// immediately.
SurveyReadResult read_survey_csv(const std::filesystem::path& path);
SurveyReadResult read_survey_csv(std::istream& in, const std::string& source_name);

}  // namespace herdecon

#endif
