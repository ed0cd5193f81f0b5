#include "herdecon/reports.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "herdecon/errors.hpp"

namespace herdecon {

double money_divisor(MoneyUnit u) {
    switch (u) {
        case MoneyUnit::Rupees: return 1.0;
        case MoneyUnit::Lakh: return 1e5;
        case MoneyUnit::Crore: return 1e7;
    }
    return 1.0;
}

std::string money_label(MoneyUnit u) {
    switch (u) {
        case MoneyUnit::Rupees: return "Rs";
        case MoneyUnit::Lakh: return "Rs lakh";
        case MoneyUnit::Crore: return "Rs crore";
    }
    return "Rs";
}

namespace {

constexpr double kLitersPerThousandTonnes = 1e6;

std::string iso_utc_now() {
    const std::time_t t =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt(double v, int decimals) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << v;
    return os.str();
}

std::string full_precision(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Money cell with its percentage share of the group total, Table-style.
std::string money_cell(double rupees, double share_frac, bool has_share, MoneyUnit unit) {
    std::string s = fmt(rupees / money_divisor(unit), 2);
    if (has_share) s += " (" + fmt(share_frac * 100.0, 2) + ")";
    return s;
}

void write_row(std::ostringstream& os, const std::string& label,
               const std::vector<std::string>& cells, int width) {
    os << std::left << std::setw(34) << label << std::right;
    for (const auto& c : cells) os << std::setw(width) << c;
    os << "\n";
}

double share_of(const LossBreakdown& b, double LossShares::*field) {
    return b.shares ? (*b.shares).*field : 0.0;
}

}  // namespace

ResultBundle build_bundle(const ParameterDocument& doc, bool deterministic) {
    ResultBundle b;
    b.scenario = doc.scenario;

    for (const auto& g : doc.groups) b.losses.push_back(total_economic_loss(g));
    b.loss_sum = aggregate(b.losses);
    if (doc.groups.size() > 1)
        b.loss_pooled = total_economic_loss(pool_parameters(doc.groups));

    for (const auto& g : doc.groups) b.has_prevention |= g.prevention_cost_per_animal > 0.0;
    if (b.has_prevention)
        b.prevention = prevention_economics(doc.groups, -1.0, b.loss_sum.total);

    if (doc.has_market) {
        double q0_sum = 0.0, loss_sum_liters = 0.0;
        for (std::size_t i = 0; i < doc.groups.size(); ++i) {
            const auto& g = doc.groups[i];
            const auto it = doc.market_groups.find(g.label);
            if (it == doc.market_groups.end()) continue;
            const MarketGroupInputs& mi = it->second;
            if (!mi.base_quantity_liters)
                throw ValidationError("market group '" + g.label +
                                      "' needs a base quantity");
            MarketParameters m;
            m.supply_elasticity = doc.supply_elasticity;
            m.demand_elasticity_abs = doc.demand_elasticity_abs;
            m.base_price = mi.price.value_or(g.milk_price);
            m.base_quantity = *mi.base_quantity_liters;
            m.success_rate = doc.success_rate;
            const double y_loss =
                mi.milk_loss_liters.value_or(b.losses[i].milk_loss_liters);
            b.surplus.push_back(efficiency_gain(m, y_loss, g.label));
            q0_sum += m.base_quantity;
            loss_sum_liters += y_loss;
        }
        if (doc.pooled) {
            if (!doc.pooled->price)
                throw ValidationError("market pooled block needs a price");
            MarketParameters m;
            m.supply_elasticity = doc.supply_elasticity;
            m.demand_elasticity_abs = doc.demand_elasticity_abs;
            m.base_price = *doc.pooled->price;
            m.base_quantity = doc.pooled->base_quantity_liters.value_or(q0_sum);
            m.success_rate = doc.success_rate;
            const double y_loss = doc.pooled->milk_loss_liters.value_or(loss_sum_liters);
            b.surplus_pooled = efficiency_gain(m, y_loss, "pooled");
        }
        if (!doc.adoption_rates.empty()) {
            const double full_gain = b.surplus_pooled
                                         ? b.surplus_pooled->surplus_gain
                                         : [&] {
                                               double s = 0.0;
                                               for (const auto& r : b.surplus)
                                                   s += r.surplus_gain;
                                               return s;
                                           }();
            b.sweep = adoption_sweep(full_gain, doc.adoption_rates);
        }
    }

    b.meta.input_hash = doc.input_hash;
    b.meta.tool_version = kToolVersion;
    b.meta.timestamp = deterministic ? std::string{} : iso_utc_now();
    return b;
}

std::string render_loss_table(const ResultBundle& b, MoneyUnit unit) {
    std::vector<const LossBreakdown*> cols;
    for (const auto& g : b.losses) cols.push_back(&g);
    cols.push_back(&b.loss_sum);
    if (b.loss_pooled) cols.push_back(&*b.loss_pooled);

    const int w = 20;
    std::ostringstream os;
    os << "Scenario: " << b.scenario << "\n";
    os << "Economic losses (money in " << money_label(unit) << ")\n\n";

    std::vector<std::string> headers, cells;
    for (const auto* c : cols) headers.push_back(c->label);
    write_row(os, "", headers, w);

    const auto row = [&](const std::string& label, auto value) {
        cells.clear();
        for (const auto* c : cols) cells.push_back(value(*c));
        write_row(os, label, cells, w);
    };

    row("Cases", [&](const LossBreakdown& c) { return fmt(c.morbid, 2); });
    row("Deaths", [&](const LossBreakdown& c) { return fmt(c.deaths, 2); });
    row("Milk production loss (t)",
        [&](const LossBreakdown& c) { return fmt(c.milk_loss_tonnes, 2); });
    row("Value of milk lost", [&](const LossBreakdown& c) {
        return money_cell(c.milk_value_loss, share_of(c, &LossShares::milk_value),
                          c.shares.has_value(), unit);
    });
    row("Treatment cost", [&](const LossBreakdown& c) {
        return money_cell(c.treatment_cost, share_of(c, &LossShares::treatment),
                          c.shares.has_value(), unit);
    });
    row("Mortality loss", [&](const LossBreakdown& c) {
        return money_cell(c.mortality_loss, share_of(c, &LossShares::mortality),
                          c.shares.has_value(), unit);
    });
    row("Total economic loss", [&](const LossBreakdown& c) {
        return money_cell(c.total, 1.0, c.shares.has_value(), unit);
    });

    os << "\nFigures in parentheses are per cent of the total economic loss.\n";
    if (b.loss_pooled)
        os << "Note: sum-of-groups adds per-group components; pooled recomputes from "
              "in-milk-weighted pooled parameters; published pooled totals may match "
              "neither.\n";
    return os.str();
}

std::string render_surplus_table(const ResultBundle& b, MoneyUnit unit) {
    std::vector<const SurplusResult*> cols;
    for (const auto& s : b.surplus) cols.push_back(&s);
    if (b.surplus_pooled) cols.push_back(&*b.surplus_pooled);
    std::ostringstream os;
    os << "Scenario: " << b.scenario << "\n";
    os << "Efficiency gain if the disease is prevented (money in " << money_label(unit)
       << ")\n\n";
    if (cols.empty()) {
        os << "(no market block in this scenario)\n";
        return os.str();
    }

    const int w = 14;
    std::vector<std::string> cells;
    cells.clear();
    for (const auto* c : cols) cells.push_back(c->label);
    write_row(os, "", cells, w);
    const auto row = [&](const std::string& label, auto value) {
        cells.clear();
        for (const auto* c : cols) cells.push_back(value(*c));
        write_row(os, label, cells, w);
    };

    row("Base production (000 t)", [&](const SurplusResult& s) {
        return fmt((s.counterfactual_quantity / (1.0 + s.pct_supply_change)) /
                       kLitersPerThousandTonnes,
                   3);
    });
    row("Production if prevented (000 t)", [&](const SurplusResult& s) {
        return fmt(s.counterfactual_quantity / kLitersPerThousandTonnes, 3);
    });
    row("Supply change (fraction)",
        [&](const SurplusResult& s) { return fmt(s.pct_supply_change, 3); });
    row("Supply shift (K)", [&](const SurplusResult& s) { return fmt(s.supply_shift, 3); });
    row("Price reduction (Z)",
        [&](const SurplusResult& s) { return fmt(s.price_reduction, 3); });
    row("Efficiency gain", [&](const SurplusResult& s) {
        return fmt(s.surplus_gain / money_divisor(unit), 1);
    });
    return os.str();
}

std::string render_sweep_table(const ResultBundle& b, MoneyUnit unit) {
    std::ostringstream os;
    os << "Scenario: " << b.scenario << "\n";
    os << "Producer-surplus gain by adoption rate (money in " << money_label(unit) << ")\n\n";
    os << std::left << std::setw(10) << "rate" << std::right << std::setw(14) << "gain"
       << "\n";
    for (const auto& p : b.sweep)
        os << std::left << std::setw(10) << fmt(p.rate, 2) << std::right << std::setw(14)
           << fmt(p.gain / money_divisor(unit), 1) << "\n";
    return os.str();
}

std::string render_prevention(const ResultBundle& b, MoneyUnit unit) {
    std::ostringstream os;
    os << "Prevention economics (money in " << money_label(unit) << ")\n";
    os << "Total prevention cost: " << fmt(b.prevention.total_cost / money_divisor(unit), 2)
       << "\n";
    if (b.prevention.cost_to_loss)
        os << "Prevention cost / total loss: " << fmt(*b.prevention.cost_to_loss, 3) << "\n";
    if (b.prevention.loss_to_cost)
        os << "Total loss / prevention cost: " << fmt(*b.prevention.loss_to_cost, 2) << "\n";
    return os.str();
}

std::string render_incidence_table(std::span<const IncidenceSummary> rows) {
    std::ostringstream os;
    os << std::left << std::setw(12) << "group" << std::right << std::setw(9) << "animals"
       << std::setw(8) << "cases" << std::setw(8) << "deaths" << std::setw(12) << "morbidity"
       << std::setw(12) << "mortality" << std::setw(15) << "case fatality" << "\n";
    for (const auto& r : rows) {
        os << std::left << std::setw(12) << r.label << std::right << std::setw(9) << r.animals
           << std::setw(8) << r.cases << std::setw(8) << r.deaths << std::setw(11)
           << fmt(r.morbidity * 100.0, 2) << "%" << std::setw(11) << fmt(r.mortality * 100.0, 2)
           << "%";
        if (r.case_fatality)
            os << std::setw(14) << fmt(*r.case_fatality * 100.0, 2) << "%";
        else
            os << std::setw(15) << "undefined";
        os << "\n";
    }
    return os.str();
}

namespace {

void margins_section(std::ostringstream& os, const std::string& title,
                     std::span<const MarginEstimate> rows) {
    os << title << "\n";
    for (const auto& m : rows)
        os << "  " << std::left << std::setw(14) << m.level << std::right << std::setw(9)
           << fmt(m.margin, 4) << std::setw(10) << fmt(m.std_err, 4) << std::setw(9)
           << fmt(m.z, 2) << std::setw(9) << fmt(m.p_value, 3) << "\n";
}

}  // namespace

std::string render_margins_table(std::span<const MarginEstimate> parity,
                                 std::span<const MarginEstimate> species,
                                 std::span<const MarginEstimate> cells) {
    std::ostringstream os;
    os << "Predictive margins (logit: case ~ parity * species)\n\n";
    os << "  " << std::left << std::setw(14) << "level" << std::right << std::setw(9)
       << "margin" << std::setw(10) << "std.err" << std::setw(9) << "z" << std::setw(9)
       << "P>|z|" << "\n";
    margins_section(os, "Parity", parity);
    margins_section(os, "Species", species);
    margins_section(os, "Parity # species", cells);
    return os.str();
}

std::string render_oracle_table(std::span<const OracleRow> rows, const SimConfig& cfg) {
    std::ostringstream os;
    os << "Monte-Carlo oracle vs closed form (group: " << cfg.group.label
       << ", replicates: " << cfg.replicates << ", seed: " << cfg.seed
       << ", streams: " << cfg.stream_count << ")\n\n";
    os << std::left << std::setw(18) << "quantity" << std::right << std::setw(18)
       << "closed form" << std::setw(18) << "mc mean" << std::setw(14) << "std err"
       << std::setw(9) << "z" << "  flag\n";
    bool any = false;
    for (const auto& r : rows) {
        os << std::left << std::setw(18) << r.quantity << std::right << std::setw(18)
           << fmt(r.closed_form, 2) << std::setw(18) << fmt(r.mc_mean, 2) << std::setw(14)
           << fmt(r.std_err, 4) << std::setw(9) << fmt(r.z, 2) << "  "
           << (r.flagged ? "MISMATCH" : "ok") << "\n";
        any = any || r.flagged;
    }
    os << (any ? "\nsimulation disagrees with the closed form (|z| > 3)\n"
               : "\nall quantities within 3 standard errors of the closed form\n");
    return os.str();
}

std::vector<ResultRow> bundle_rows(const ResultBundle& b) {
    std::vector<ResultRow> rows;
    const auto add = [&](const std::string& group, const std::string& quantity,
                         const std::string& unit, double value) {
        rows.push_back({b.scenario, group, quantity, unit, value});
    };
    const auto loss_rows = [&](const LossBreakdown& l) {
        add(l.label, "milk_loss_liters", "L", l.milk_loss_liters);
        add(l.label, "milk_loss_tonnes", "t", l.milk_loss_tonnes);
        add(l.label, "mortality_loss", "Rs", l.mortality_loss);
        add(l.label, "milk_value_loss", "Rs", l.milk_value_loss);
        add(l.label, "treatment_cost", "Rs", l.treatment_cost);
        add(l.label, "total_economic_loss", "Rs", l.total);
        add(l.label, "cases", "count", l.morbid);
        add(l.label, "deaths", "count", l.deaths);
        if (l.shares) {
            add(l.label, "share_mortality", "fraction", l.shares->mortality);
            add(l.label, "share_milk_value", "fraction", l.shares->milk_value);
            add(l.label, "share_treatment", "fraction", l.shares->treatment);
        }
    };
    for (const auto& l : b.losses) loss_rows(l);
    loss_rows(b.loss_sum);
    if (b.loss_pooled) loss_rows(*b.loss_pooled);

    if (b.has_prevention) {
        add("prevention", "total_cost", "Rs", b.prevention.total_cost);
        if (b.prevention.cost_to_loss)
            add("prevention", "cost_to_loss", "fraction", *b.prevention.cost_to_loss);
        if (b.prevention.loss_to_cost)
            add("prevention", "loss_to_cost", "ratio", *b.prevention.loss_to_cost);
    }

    const auto surplus_rows = [&](const SurplusResult& s) {
        add(s.label, "counterfactual_quantity", "L", s.counterfactual_quantity);
        add(s.label, "pct_supply_change", "fraction", s.pct_supply_change);
        add(s.label, "supply_shift_k", "ratio", s.supply_shift);
        add(s.label, "price_reduction_z", "fraction", s.price_reduction);
        add(s.label, "surplus_gain", "Rs", s.surplus_gain);
    };
    for (const auto& s : b.surplus) surplus_rows(s);
    if (b.surplus_pooled) surplus_rows(*b.surplus_pooled);

    for (std::size_t i = 0; i < b.sweep.size(); ++i) {
        add("sweep", "rate_" + std::to_string(i), "fraction", b.sweep[i].rate);
        add("sweep", "gain_" + std::to_string(i), "Rs", b.sweep[i].gain);
    }
    return rows;
}

namespace {

void check_csv_safe(const std::string& s) {
    if (s.find_first_of(",\"\n\r") != std::string::npos)
        throw IoError("CSV field contains a delimiter or quote: '" + s + "'");
}

}  // namespace

void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "scenario,group,quantity,unit,value\n";
    for (const auto& r : rows) {
        check_csv_safe(r.scenario);
        check_csv_safe(r.group);
        check_csv_safe(r.quantity);
        check_csv_safe(r.unit);
        out << r.scenario << ',' << r.group << ',' << r.quantity << ',' << r.unit << ','
            << full_precision(r.value) << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
    std::vector<ResultRow> rows;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                f.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        f.push_back(cur);
        if (f.size() != 5)
            throw ValidationError(path.string() + ": line " + std::to_string(lineno) +
                                  ": expected 5 fields");
        ResultRow r{f[0], f[1], f[2], f[3], 0.0};
        const auto [ptr, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), r.value);
        if (ec != std::errc{} || ptr != f[4].data() + f[4].size())
            throw ValidationError(path.string() + ": line " + std::to_string(lineno) +
                                  ": bad number '" + f[4] + "'");
        rows.push_back(std::move(r));
    }
    return rows;
}

Manifest emit_reports(const ResultBundle& b, const std::filesystem::path& outdir,
                      ReportFormats formats, MoneyUnit unit) {
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw IoError("cannot create output directory " + outdir.string());

    Manifest man;
    const auto write_text = [&](const std::string& name, const std::string& content) {
        const auto p = outdir / name;
        std::ofstream out(p);
        if (!out) throw IoError("cannot write " + p.string());
        out << content;
        if (!out) throw IoError("write failed: " + p.string());
        man.files.push_back(name);
    };

    if (formats.text) {
        std::string losses = render_loss_table(b, unit);
        if (b.has_prevention) losses += "\n" + render_prevention(b, unit);
        write_text("losses.txt", losses);
        if (!b.surplus.empty() || b.surplus_pooled)
            write_text("surplus.txt", render_surplus_table(b, unit));
        if (!b.sweep.empty()) write_text("sweep.txt", render_sweep_table(b, unit));
    }

    if (formats.csv) {
        const auto rows = bundle_rows(b);
        write_results_csv(outdir / "results.csv", rows);
        man.files.push_back("results.csv");
    }

    if (formats.plot) {
        if (b.sweep.empty()) {
            man.notes.push_back("sweep is empty: no plot-data file emitted");
        } else {
            const auto p = outdir / "sweep.tsv";
            std::ofstream out(p);
            if (!out) throw IoError("cannot write " + p.string());
            out << "# " << b.scenario << ": producer-surplus gain by adoption rate\n";
            out << "# adoption_rate\tgain_rupees\n";
            for (const auto& pt : b.sweep)
                out << full_precision(pt.rate) << '\t' << full_precision(pt.gain) << "\n";
            if (!out) throw IoError("write failed: " + p.string());
            man.files.push_back("sweep.tsv");
        }
    }

    nlohmann::json j;
    j["scenario"] = b.scenario;
    j["input_hash"] = b.meta.input_hash;
    j["tool_version"] = b.meta.tool_version;
    j["timestamp"] = b.meta.timestamp;
    j["files"] = man.files;
    j["notes"] = man.notes;
    const auto mp = outdir / "manifest.json";
    std::ofstream mout(mp);
    if (!mout) throw IoError("cannot write " + mp.string());
    mout << j.dump(2) << "\n";
    if (!mout) throw IoError("write failed: " + mp.string());
    return man;
}

}  // namespace herdecon
