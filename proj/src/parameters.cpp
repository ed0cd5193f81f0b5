#include "herdecon/parameters.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "herdecon/errors.hpp"

namespace herdecon {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kDefaultLactationDays = 305.0;
constexpr double kDefaultSuccessRate = 0.9;
constexpr double kLitersPerTonne = 1000.0;

struct Context {
    std::string source;

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw ValidationError(source + ": " + path + ": " + what);
    }
};

void check_keys(const Context& ctx, const ordered_json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) ctx.fail(path + "/" + key, "unknown key");
}

double get_number(const Context& ctx, const ordered_json& obj, const std::string& path,
                  const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) ctx.fail(path + "/" + key, "expected a number");
    return v.get<double>();
}

std::optional<double> opt_number(const Context& ctx, const ordered_json& obj,
                                 const std::string& path, const std::string& key) {
    if (!obj.contains(key)) return std::nullopt;
    return get_number(ctx, obj, path, key);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

GroupParameters parse_group(const Context& ctx, const std::string& label,
                            const ordered_json& obj, const std::string& path) {
    if (!obj.is_object()) ctx.fail(path, "expected an object");
    check_keys(ctx, obj, path,
               {"total_animals", "prop_in_milk", "in_milk", "morbid", "deaths",
                "mf_incidence", "case_fatality", "daily_yield", "lactation_days",
                "lactation_yield", "affected_days_frac", "yield_reduction_frac",
                "milk_price", "animal_value", "treatment_cost_per_case",
                "prevention_cost_per_animal", "notes"});

    GroupParameters g;
    g.label = label;
    if (auto v = opt_number(ctx, obj, path, "total_animals")) g.total_animals = *v;
    if (auto v = opt_number(ctx, obj, path, "prop_in_milk")) g.prop_in_milk = *v;
    if (auto v = opt_number(ctx, obj, path, "in_milk")) {
        g.in_milk = *v;
    } else if (g.total_animals > 0.0) {
        g.in_milk = g.total_animals * g.prop_in_milk;
    } else {
        ctx.fail(path, "needs either in_milk or total_animals with prop_in_milk");
    }

    const auto morbid = opt_number(ctx, obj, path, "morbid");
    const auto deaths = opt_number(ctx, obj, path, "deaths");
    const auto incidence = opt_number(ctx, obj, path, "mf_incidence");
    const auto fatality = opt_number(ctx, obj, path, "case_fatality");
    if (morbid || deaths) {
        if (incidence || fatality)
            ctx.fail(path, "give either counts (morbid, deaths) or rates "
                           "(mf_incidence, case_fatality), not both");
        if (!morbid || !deaths) ctx.fail(path, "morbid and deaths must appear together");
        const RateSet r = derive_rates(*morbid, *deaths, g.in_milk);
        g.mf_incidence = r.mf_incidence;
        g.case_fatality = r.case_fatality;
    } else {
        if (!incidence || !fatality)
            ctx.fail(path, "needs mf_incidence and case_fatality (or morbid and deaths)");
        g.mf_incidence = *incidence;
        g.case_fatality = *fatality;
    }

    if (auto v = opt_number(ctx, obj, path, "daily_yield")) g.daily_yield = *v;
    const double days =
        opt_number(ctx, obj, path, "lactation_days").value_or(kDefaultLactationDays);
    if (auto v = opt_number(ctx, obj, path, "lactation_yield")) {
        g.lactation_yield = *v;
        if (g.daily_yield > 0.0 &&
            std::abs(derive_lactation_yield(g.daily_yield, days) - *v) > 0.5)
            ctx.fail(path, "lactation_yield disagrees with daily_yield * lactation_days");
    } else if (g.daily_yield > 0.0) {
        g.lactation_yield = derive_lactation_yield(g.daily_yield, days);
    } else {
        ctx.fail(path, "needs lactation_yield or daily_yield");
    }

    g.affected_days_frac = get_number(ctx, obj, path, "affected_days_frac");
    g.yield_reduction_frac = get_number(ctx, obj, path, "yield_reduction_frac");
    g.milk_price = get_number(ctx, obj, path, "milk_price");
    g.animal_value = get_number(ctx, obj, path, "animal_value");
    g.treatment_cost_per_case = get_number(ctx, obj, path, "treatment_cost_per_case");
    if (auto v = opt_number(ctx, obj, path, "prevention_cost_per_animal"))
        g.prevention_cost_per_animal = *v;

    try {
        g.validate();
    } catch (const ValidationError& e) {
        ctx.fail(path, e.what());
    }
    return g;
}

MarketGroupInputs parse_market_group(const Context& ctx, const ordered_json& obj,
                                     const std::string& path) {
    if (!obj.is_object()) ctx.fail(path, "expected an object");
    check_keys(ctx, obj, path,
               {"base_quantity_tonnes", "base_quantity_liters", "milk_loss_tonnes",
                "milk_loss_liters", "price", "notes"});
    MarketGroupInputs m;
    const auto q_t = opt_number(ctx, obj, path, "base_quantity_tonnes");
    const auto q_l = opt_number(ctx, obj, path, "base_quantity_liters");
    if (q_t && q_l) ctx.fail(path, "give base quantity in tonnes or liters, not both");
    if (q_t) m.base_quantity_liters = *q_t * kLitersPerTonne;
    if (q_l) m.base_quantity_liters = *q_l;
    const auto l_t = opt_number(ctx, obj, path, "milk_loss_tonnes");
    const auto l_l = opt_number(ctx, obj, path, "milk_loss_liters");
    if (l_t && l_l) ctx.fail(path, "give milk loss in tonnes or liters, not both");
    if (l_t) m.milk_loss_liters = *l_t * kLitersPerTonne;
    if (l_l) m.milk_loss_liters = *l_l;
    if (auto v = opt_number(ctx, obj, path, "price")) {
        if (*v <= 0.0) ctx.fail(path + "/price", "price must be > 0");
        m.price = *v;
    }
    if (m.milk_loss_liters && *m.milk_loss_liters < 0.0)
        ctx.fail(path, "milk loss must be >= 0");
    if (m.base_quantity_liters && *m.base_quantity_liters <= 0.0)
        ctx.fail(path, "base quantity must be > 0");
    return m;
}

}  // namespace

double derive_lactation_yield(double daily_yield, double lactation_days) {
    if (!(daily_yield >= 0.0) || !(lactation_days >= 0.0))
        throw ValidationError("daily yield and lactation days must be >= 0");
    return daily_yield * lactation_days;
}

ParameterDocument parse_parameters(const std::string& text, const std::string& source_name) {
    Context ctx{source_name};
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw IoError(source_name + ": " + e.what());
    }
    if (!doc.is_object()) ctx.fail("/", "document root must be an object");
    check_keys(ctx, doc, "", {"scenario", "groups", "market", "sweep", "notes"});

    ParameterDocument out;
    if (doc.contains("scenario")) {
        if (!doc["scenario"].is_string()) ctx.fail("/scenario", "expected a string");
        out.scenario = doc["scenario"].get<std::string>();
    } else {
        out.scenario = source_name;
    }

    if (!doc.contains("groups") || !doc["groups"].is_object() || doc["groups"].empty())
        ctx.fail("/groups", "at least one group block is required");
    for (const auto& [label, block] : doc["groups"].items())
        out.groups.push_back(parse_group(ctx, label, block, "/groups/" + label));

    if (doc.contains("market")) {
        const auto& mk = doc["market"];
        if (!mk.is_object()) ctx.fail("/market", "expected an object");
        check_keys(ctx, mk, "/market",
                   {"supply_elasticity", "demand_elasticity_abs", "success_rate", "groups",
                    "pooled", "notes"});
        out.has_market = true;
        out.supply_elasticity = get_number(ctx, mk, "/market", "supply_elasticity");
        out.demand_elasticity_abs = get_number(ctx, mk, "/market", "demand_elasticity_abs");
        out.success_rate =
            opt_number(ctx, mk, "/market", "success_rate").value_or(kDefaultSuccessRate);
        if (out.success_rate < 0.0 || out.success_rate > 1.0)
            ctx.fail("/market/success_rate", "must be in [0, 1]");
        if (mk.contains("groups")) {
            if (!mk["groups"].is_object()) ctx.fail("/market/groups", "expected an object");
            for (const auto& [label, block] : mk["groups"].items()) {
                bool known = false;
                for (const auto& g : out.groups) known = known || g.label == label;
                if (!known)
                    ctx.fail("/market/groups/" + label, "no such group under /groups");
                out.market_groups[label] =
                    parse_market_group(ctx, block, "/market/groups/" + label);
            }
        }
        if (mk.contains("pooled"))
            out.pooled = parse_market_group(ctx, mk["pooled"], "/market/pooled");
    }

    if (doc.contains("sweep")) {
        const auto& sw = doc["sweep"];
        if (!sw.is_object()) ctx.fail("/sweep", "expected an object");
        check_keys(ctx, sw, "/sweep", {"adoption_rates", "notes"});
        if (sw.contains("adoption_rates")) {
            if (!sw["adoption_rates"].is_array())
                ctx.fail("/sweep/adoption_rates", "expected an array");
            for (const auto& v : sw["adoption_rates"]) {
                if (!v.is_number()) ctx.fail("/sweep/adoption_rates", "expected numbers");
                const double r = v.get<double>();
                if (r < 0.0 || r > 1.0)
                    ctx.fail("/sweep/adoption_rates", "rates must be in [0, 1]");
                out.adoption_rates.push_back(r);
            }
        }
    }

    // Canonical hash: sorted keys, compact separators.
    const nlohmann::json canonical = nlohmann::json::parse(text);
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(canonical.dump());
    out.input_hash = os.str();
    return out;
}

ParameterDocument read_parameters(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open parameter file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_parameters(buf.str(), path.filename().string());
}

}  // namespace herdecon
