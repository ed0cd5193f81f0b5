#ifndef HERDECON_PARAMETERS_HPP
#define HERDECON_PARAMETERS_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "herdecon/losses.hpp"

namespace herdecon {

// Market-side inputs for one supply (a species group or the pooled herd).
// Quantities may be published figures that differ from what the loss
// engine recomputes; when absent they fall back to computed values.
struct MarketGroupInputs {
    std::optional<double> base_quantity_liters;  // Q0
    std::optional<double> milk_loss_liters;      // published Y_loss, if pinned
    std::optional<double> price;                 // Rs/L, defaults to the group's milk price
};

// One self-contained scenario: loss-engine inputs per group, optional
// market block, optional adoption sweep. The format is JSON with a strict
// schema; unknown keys are rejected.
struct ParameterDocument {
    std::string scenario;
    std::vector<GroupParameters> groups;  // document order

    bool has_market = false;
    double supply_elasticity = 0.0;
    double demand_elasticity_abs = 0.0;
    double success_rate = 0.9;
    std::map<std::string, MarketGroupInputs> market_groups;  // by group label
    std::optional<MarketGroupInputs> pooled;

    std::vector<double> adoption_rates;

    // FNV-1a 64-bit hash of the canonicalized document (sorted keys, no
    // whitespace), hex-encoded. Stable under reformatting, sensitive to
    // any value change.
    std::string input_hash;
};

// Y_L from a daily yield and a lactation length (default 305 days).
double derive_lactation_yield(double daily_yield, double lactation_days);

ParameterDocument read_parameters(const std::filesystem::path& path);
ParameterDocument parse_parameters(const std::string& text, const std::string& source_name);

}  // namespace herdecon

#endif
