#include "herdecon/survey_csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "herdecon/errors.hpp"

namespace herdecon {

namespace {

constexpr std::array<const char*, 17> kColumns = {
    "animal_id",   "species",     "parity",          "mf_case",
    "died",        "peak_yield_prev", "peak_yield_curr", "herd_size",
    "green_fodder", "dry_fodder", "concentrate",     "mineral_mix",
    "fodder_area", "labor",       "milk_price",      "animal_value",
    "treatment_cost"};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const char* col, std::vector<std::string>& errs,
                    long line) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) {
        errs.push_back("line " + std::to_string(line) + ": column '" + col +
                       "': cannot parse number from '" + s + "'");
        return 0.0;
    }
    return v;
}

bool parse_bool(const std::string& s, const char* col, std::vector<std::string>& errs,
                long line) {
    if (s == "0") return false;
    if (s == "1") return true;
    errs.push_back("line " + std::to_string(line) + ": column '" + col +
                   "': expected 0 or 1, got '" + s + "'");
    return false;
}

}  // namespace

SurveyReadResult read_survey_csv(std::istream& in, const std::string& source_name) {
    std::string header_line;
    if (!std::getline(in, header_line))
        throw IoError(source_name + ": empty file, expected a header row");

    const std::vector<std::string> header = split_csv_line(header_line);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (index.count(header[i]))
            throw ValidationError(source_name + ": duplicate column '" + header[i] + "'");
        index[header[i]] = i;
    }

    SurveyReadResult out;
    for (const char* col : kColumns)
        if (!index.count(col))
            throw ValidationError(source_name + ": missing required column '" +
                                  std::string(col) + "'");
    for (const auto& [name, pos] : index)
        if (std::find_if(kColumns.begin(), kColumns.end(),
                         [&](const char* c) { return name == c; }) == kColumns.end())
            out.warnings.push_back(source_name + ": ignoring unknown column '" + name + "'");

    std::vector<std::string> errs;
    std::string line;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size()) {
            errs.push_back("line " + std::to_string(lineno) + ": expected " +
                           std::to_string(header.size()) + " fields, got " +
                           std::to_string(f.size()));
            continue;
        }
        const auto field = [&](const char* col) -> const std::string& {
            return f[index.at(col)];
        };

        SurveyRecord r;
        r.animal_id = field("animal_id");

        const std::string& sp = field("species");
        if (sp == "buffalo") {
            r.species = Species::Buffalo;
        } else if (sp == "cow") {
            r.species = Species::Cow;
        } else {
            errs.push_back("line " + std::to_string(lineno) +
                           ": species must be 'buffalo' or 'cow', got '" + sp + "'");
            continue;
        }

        const double parity = parse_double(field("parity"), "parity", errs, lineno);
        if (parity < 2.0 || parity != std::floor(parity)) {
            errs.push_back("line " + std::to_string(lineno) +
                           ": parity must be an integer >= 2, got '" + field("parity") + "'");
            continue;
        }
        r.parity = std::min(static_cast<int>(parity), 5);  // 5 means "5 and above"

        r.mf_case = parse_bool(field("mf_case"), "mf_case", errs, lineno);
        r.died = parse_bool(field("died"), "died", errs, lineno);
        if (r.died && !r.mf_case) {
            errs.push_back("line " + std::to_string(lineno) +
                           ": death without recorded MF case");
            continue;
        }

        r.peak_yield_prev = parse_double(field("peak_yield_prev"), "peak_yield_prev", errs, lineno);
        r.peak_yield_curr = parse_double(field("peak_yield_curr"), "peak_yield_curr", errs, lineno);
        r.herd_size = parse_double(field("herd_size"), "herd_size", errs, lineno);
        r.green_fodder = parse_double(field("green_fodder"), "green_fodder", errs, lineno);
        r.dry_fodder = parse_double(field("dry_fodder"), "dry_fodder", errs, lineno);
        r.concentrate = parse_double(field("concentrate"), "concentrate", errs, lineno);
        r.mineral_mix = parse_double(field("mineral_mix"), "mineral_mix", errs, lineno);
        r.fodder_area = parse_double(field("fodder_area"), "fodder_area", errs, lineno);
        r.labor = parse_double(field("labor"), "labor", errs, lineno);
        r.milk_price = parse_double(field("milk_price"), "milk_price", errs, lineno);
        r.animal_value = parse_double(field("animal_value"), "animal_value", errs, lineno);
        r.treatment_cost = parse_double(field("treatment_cost"), "treatment_cost", errs, lineno);
        if (r.peak_yield_prev < 0.0 || r.peak_yield_curr < 0.0)
            errs.push_back("line " + std::to_string(lineno) + ": yields must be >= 0");

        out.records.push_back(std::move(r));
    }

    if (!errs.empty()) {
        std::ostringstream os;
        os << source_name << ": " << errs.size() << " row error(s):";
        for (const auto& e : errs) os << "\n  " << e;
        throw ValidationError(os.str());
    }
    return out;
}

SurveyReadResult read_survey_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open survey file: " + path.string());
    return read_survey_csv(in, path.filename().string());
}

}  // namespace herdecon
