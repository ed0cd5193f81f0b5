#ifndef HERDECON_REPORTS_HPP
#define HERDECON_REPORTS_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "herdecon/logit.hpp"
#include "herdecon/losses.hpp"
#include "herdecon/parameters.hpp"
#include "herdecon/simulate.hpp"
#include "herdecon/surplus.hpp"
#include "herdecon/survey.hpp"

namespace herdecon {

inline constexpr const char* kToolVersion = "0.1.0";

enum class MoneyUnit { Rupees, Lakh, Crore };  // 1, 1e5, 1e7 rupees

double money_divisor(MoneyUnit u);
std::string money_label(MoneyUnit u);

struct BundleMetadata {
    std::string input_hash;
    std::string tool_version;
    std::string timestamp;  // ISO 8601 UTC; empty in deterministic mode
};

// Everything a scenario evaluates to. Aggregate losses are reported both
// ways: sum-of-groups (component-wise sum, the default) and pooled
// (recomputed from pooled parameters).
struct ResultBundle {
    std::string scenario;
    std::vector<LossBreakdown> losses;
    LossBreakdown loss_sum;
    std::optional<LossBreakdown> loss_pooled;
    bool has_prevention = false;
    PreventionEconomics prevention;
    std::vector<SurplusResult> surplus;
    std::optional<SurplusResult> surplus_pooled;
    std::vector<AdoptionPoint> sweep;
    BundleMetadata meta;
};

ResultBundle build_bundle(const ParameterDocument& doc, bool deterministic);

// Plain-text tables.
std::string render_loss_table(const ResultBundle& b, MoneyUnit unit);
std::string render_surplus_table(const ResultBundle& b, MoneyUnit unit);
std::string render_sweep_table(const ResultBundle& b, MoneyUnit unit);
std::string render_prevention(const ResultBundle& b, MoneyUnit unit);
std::string render_incidence_table(std::span<const IncidenceSummary> rows);
std::string render_margins_table(std::span<const MarginEstimate> parity,
                                 std::span<const MarginEstimate> species,
                                 std::span<const MarginEstimate> cells);
std::string render_oracle_table(std::span<const OracleRow> rows, const SimConfig& cfg);

// Machine-readable rows: one per (scenario, group, quantity), values in
// base units (rupees, liters) at full precision.
struct ResultRow {
    std::string scenario;
    std::string group;
    std::string quantity;
    std::string unit;
    double value = 0.0;
};

std::vector<ResultRow> bundle_rows(const ResultBundle& b);
void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

struct ReportFormats {
    bool text = true;
    bool csv = true;
    bool plot = true;
};

struct Manifest {
    std::vector<std::string> files;
    std::vector<std::string> notes;
};

// Writes the selected artifacts under outdir and a manifest.json listing
// them. An empty sweep writes no plot file and records why in the notes.
Manifest emit_reports(const ResultBundle& b, const std::filesystem::path& outdir,
                      ReportFormats formats, MoneyUnit unit);

}  // namespace herdecon

#endif
