#include "herdecon/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "herdecon/errors.hpp"
#include "herdecon/logit.hpp"
#include "herdecon/parameters.hpp"
#include "herdecon/power.hpp"
#include "herdecon/reports.hpp"
#include "herdecon/simulate.hpp"
#include "herdecon/survey_csv.hpp"

namespace herdecon {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string params_path;
    std::string out_dir;
    std::string unit = "crore";
    std::string format = "text,csv,plot";
    bool deterministic = false;

    MoneyUnit money_unit() const {
        if (unit == "rupees") return MoneyUnit::Rupees;
        if (unit == "lakh") return MoneyUnit::Lakh;
        if (unit == "crore") return MoneyUnit::Crore;
        throw ValidationError("unknown unit '" + unit + "' (rupees|lakh|crore)");
    }

    ReportFormats report_formats() const {
        ReportFormats f{false, false, false};
        std::stringstream ss(format);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok == "text") f.text = true;
            else if (tok == "csv") f.csv = true;
            else if (tok == "plot") f.plot = true;
            else throw ValidationError("unknown format '" + tok + "' (text|csv|plot)");
        }
        return f;
    }

    std::optional<fs::path> resolved_out() const {
        if (!out_dir.empty()) return fs::path(out_dir);
        if (const char* env = std::getenv("HERDECON_OUTDIR"); env && *env)
            return fs::path(env);
        return std::nullopt;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_params = true) {
    if (with_params)
        cmd->add_option("params", o.params_path, "scenario parameter file (JSON)")
            ->required();
    cmd->add_option("--out", o.out_dir,
                    "output directory for artifacts (default: $HERDECON_OUTDIR)");
    cmd->add_option("--unit", o.unit, "money unit for tables: rupees|lakh|crore")
        ->default_str("crore");
    cmd->add_option("--format", o.format, "artifact formats, comma list of text|csv|plot")
        ->default_str("text,csv,plot");
    cmd->add_flag("--deterministic", o.deterministic,
                  "omit timestamps so repeated runs are byte-identical");
}

void write_text_artifact(const fs::path& dir, const std::string& name,
                         const std::string& content) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
    std::ofstream out(dir / name);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    out << content;
    if (!out) throw IoError("write failed: " + (dir / name).string());
}

int cmd_losses(const CommonOpts& o) {
    const auto doc = read_parameters(o.params_path);
    const auto bundle = build_bundle(doc, o.deterministic);
    std::cout << render_loss_table(bundle, o.money_unit());
    if (bundle.has_prevention) std::cout << "\n" << render_prevention(bundle, o.money_unit());
    if (const auto out = o.resolved_out())
        emit_reports(bundle, *out, o.report_formats(), o.money_unit());
    return 0;
}

int cmd_surplus(const CommonOpts& o) {
    const auto doc = read_parameters(o.params_path);
    if (!doc.has_market)
        throw ValidationError(o.params_path + ": scenario has no market block");
    const auto bundle = build_bundle(doc, o.deterministic);
    std::cout << render_surplus_table(bundle, o.money_unit());
    if (const auto out = o.resolved_out())
        emit_reports(bundle, *out, o.report_formats(), o.money_unit());
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& rates_csv) {
    auto doc = read_parameters(o.params_path);
    if (!doc.has_market)
        throw ValidationError(o.params_path + ": scenario has no market block");
    if (!rates_csv.empty()) {
        doc.adoption_rates.clear();
        std::stringstream ss(rates_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                doc.adoption_rates.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ValidationError("bad adoption rate '" + tok + "'");
            }
        }
    }
    if (doc.adoption_rates.empty())
        throw ValidationError("no adoption rates: give --rates or a sweep block");
    const auto bundle = build_bundle(doc, o.deterministic);
    std::cout << render_sweep_table(bundle, o.money_unit());
    if (const auto out = o.resolved_out())
        emit_reports(bundle, *out, o.report_formats(), o.money_unit());
    return 0;
}

int cmd_incidence(const CommonOpts& o, const std::string& survey_path) {
    const auto survey = read_survey_csv(fs::path(survey_path));
    for (const auto& w : survey.warnings) std::cerr << "warning: " << w << "\n";
    const auto rows = summarize_incidence(survey.records);
    const std::string table = render_incidence_table(rows);
    std::cout << table;
    if (const auto out = o.resolved_out()) write_text_artifact(*out, "incidence.txt", table);
    return 0;
}

int cmd_margins(const CommonOpts& o, const std::string& survey_path) {
    const auto survey = read_survey_csv(fs::path(survey_path));
    for (const auto& w : survey.warnings) std::cerr << "warning: " << w << "\n";
    const auto fit = fit_logit(survey.records);
    const auto parity = predictive_margins(fit, survey.records, MarginFactor::Parity);
    const auto species = predictive_margins(fit, survey.records, MarginFactor::Species);
    const auto cells = predictive_margins(fit, survey.records, MarginFactor::Cell);
    const std::string table = render_margins_table(parity, species, cells);
    std::cout << table;
    std::cout << "\nconverged in " << fit.iterations
              << " iterations, log-likelihood " << fit.log_likelihood << "\n";
    if (const auto out = o.resolved_out()) write_text_artifact(*out, "margins.txt", table);
    return 0;
}

int cmd_power(double t_alpha, double t_power, double p, double variance, long n,
              double target) {
    if (target > 0.0) {
        const long required = required_sample_size(target, t_power, t_alpha, p, variance);
        std::cout << "required sample size N = " << required << "\n";
        return 0;
    }
    PowerSpec spec{t_power, t_alpha, p, variance, n};
    std::cout << "minimum detectable effect = " << minimum_detectable_effect(spec) << "\n";
    return 0;
}

int cmd_simulate(const CommonOpts& o, const std::string& group_label,
                 std::uint64_t replicates, std::uint64_t seed, unsigned streams,
                 double herd) {
    const auto doc = read_parameters(o.params_path);
    std::string all;
    for (const auto& g : doc.groups) {
        if (!group_label.empty() && g.label != group_label) continue;
        SimConfig cfg;
        cfg.group = g;
        if (herd > 0.0) {
            cfg.group.in_milk = herd;
            cfg.group.total_animals = 0.0;  // drop the census consistency tie
            cfg.group.prop_in_milk = 1.0;
            cfg.group.label = g.label + " (herd scaled to " + std::to_string(herd) + ")";
        }
        cfg.replicates = replicates;
        cfg.seed = seed;
        cfg.stream_count = streams;
        const double work = cfg.group.in_milk * static_cast<double>(replicates);
        if (work > 2e9)
            throw ValidationError(
                "simulation of " + std::to_string(cfg.group.in_milk) + " animals x " +
                std::to_string(replicates) +
                " replicates is too large; reduce --replicates or set --herd");
        const auto rows = compare_to_closed_form(cfg);
        const std::string table = render_oracle_table(rows, cfg);
        std::cout << table << "\n";
        all += table + "\n";
    }
    if (all.empty())
        throw ValidationError(group_label.empty() ? "no groups in scenario"
                                                  : "no group named '" + group_label + "'");
    if (const auto out = o.resolved_out()) write_text_artifact(*out, "oracle.txt", all);
    return 0;
}

int cmd_report(const CommonOpts& o, const std::string& survey_path) {
    const auto doc = read_parameters(o.params_path);
    const auto bundle = build_bundle(doc, o.deterministic);
    const auto out = o.resolved_out();
    if (!out)
        throw ValidationError("report needs an output directory (--out or $HERDECON_OUTDIR)");
    const auto man = emit_reports(bundle, *out, o.report_formats(), o.money_unit());
    if (!survey_path.empty()) {
        const auto survey = read_survey_csv(fs::path(survey_path));
        write_text_artifact(*out, "incidence.txt",
                            render_incidence_table(summarize_incidence(survey.records)));
        const auto fit = fit_logit(survey.records);
        write_text_artifact(
            *out, "margins.txt",
            render_margins_table(predictive_margins(fit, survey.records, MarginFactor::Parity),
                                 predictive_margins(fit, survey.records, MarginFactor::Species),
                                 predictive_margins(fit, survey.records, MarginFactor::Cell)));
    }
    std::cout << "wrote " << man.files.size() + (survey_path.empty() ? 0 : 2)
              << " file(s) and manifest.json to " << out->string() << "\n";
    for (const auto& n : man.notes) std::cout << "note: " << n << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"disease-economics calculator: herd loss accounting, producer-surplus "
                 "gains from prevention, incidence statistics and Monte-Carlo validation"};
    app.require_subcommand(1);

    CommonOpts lo, so, wo, io_, mo, sim, ro;
    std::string rates_csv, survey_for_incidence, survey_for_margins, survey_for_report;
    std::string sim_group;
    std::uint64_t sim_replicates = 100000, sim_seed = 0;
    unsigned sim_streams = 4;
    double sim_herd = 0.0;
    double p_alpha = 1.96, p_power = 0.84, p_prop = 0.5, p_var = 1.0, p_target = 0.0;
    long p_n = 0;

    add_common(app.add_subcommand("losses", "loss accounting table for a scenario"), lo);
    add_common(app.add_subcommand("surplus", "producer-surplus gains if prevented"), so);
    auto* sweep = app.add_subcommand("sweep", "gains at different adoption rates");
    add_common(sweep, wo);
    sweep->add_option("--rates", rates_csv, "comma list of adoption fractions in [0,1]");

    auto* incidence = app.add_subcommand("incidence", "per-species survey summary");
    incidence->add_option("survey", survey_for_incidence, "survey CSV file")->required();
    add_common(incidence, io_, false);

    auto* margins = app.add_subcommand("margins", "logit fit and predictive margins");
    margins->add_option("survey", survey_for_margins, "survey CSV file")->required();
    add_common(margins, mo, false);

    auto* power = app.add_subcommand("power", "trial size and minimum detectable effect");
    power->add_option("--alpha", p_alpha, "significance quantile t_alpha")->required();
    power->add_option("--power", p_power, "power quantile t_(1-k)")->required();
    power->add_option("--p", p_prop, "treatment proportion in (0,1)")->required();
    power->add_option("--var", p_var, "outcome variance")->required();
    auto* n_opt = power->add_option("--n", p_n, "total sample size");
    auto* t_opt =
        power->add_option("--target-effect", p_target, "effect size to invert for N");
    n_opt->excludes(t_opt);

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo oracle vs closed forms");
    add_common(simulate, sim);
    simulate->add_option("--group", sim_group, "restrict to one group label");
    simulate->add_option("--replicates", sim_replicates, "number of herd replicates")
        ->default_str("100000");
    simulate->add_option("--seed", sim_seed, "RNG seed")->default_str("0");
    simulate->add_option("--streams", sim_streams, "parallel sub-streams")->default_str("4");
    simulate->add_option("--herd", sim_herd,
                         "simulate this many in-milk animals instead of the group's census");

    auto* report = app.add_subcommand("report", "write the full artifact bundle");
    add_common(report, ro);
    report->add_option("--survey", survey_for_report,
                       "survey CSV to include incidence and margins tables");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("losses")) return cmd_losses(lo);
        if (app.got_subcommand("surplus")) return cmd_surplus(so);
        if (app.got_subcommand("sweep")) return cmd_sweep(wo, rates_csv);
        if (app.got_subcommand("incidence")) return cmd_incidence(io_, survey_for_incidence);
        if (app.got_subcommand("margins")) return cmd_margins(mo, survey_for_margins);
        if (app.got_subcommand("power")) {
            if (p_n == 0 && p_target <= 0.0)
                throw ValidationError("power needs --n or --target-effect");
            return cmd_power(p_alpha, p_power, p_prop, p_var, p_n == 0 ? 2 : p_n, p_target);
        }
        if (app.got_subcommand("simulate"))
            return cmd_simulate(sim, sim_group, sim_replicates, sim_seed, sim_streams,
                                sim_herd);
        if (app.got_subcommand("report")) return cmd_report(ro, survey_for_report);
        throw ValidationError("no subcommand given");
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ComputationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace herdecon
