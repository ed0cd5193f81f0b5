#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "herdecon/cli.hpp"
#include "test_data.hpp"

using namespace herdecon;
using namespace herdecon::testdata;

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("herdecon_cli_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string params() { return (data_dir() / "haryana.params").string(); }
std::string survey() { return (data_dir() / "survey_sample.csv").string(); }

}  // namespace

TEST_CASE("losses subcommand succeeds on the bundled scenario") {
    const fs::path out = fresh_dir("losses");
    CHECK(run_cli({"losses", params(), "--out", out.string(), "--deterministic"}) == 0);
    CHECK(fs::exists(out / "losses.txt"));
    CHECK(fs::exists(out / "results.csv"));
}

TEST_CASE("surplus, sweep, incidence, margins, power, simulate all run") {
    CHECK(run_cli({"surplus", params()}) == 0);
    CHECK(run_cli({"sweep", params(), "--rates", "0.2,0.4,0.6"}) == 0);
    CHECK(run_cli({"incidence", survey()}) == 0);
    CHECK(run_cli({"margins", survey()}) == 0);
    CHECK(run_cli({"power", "--alpha", "1.96", "--power", "0.84", "--p", "0.5", "--var",
                   "1", "--n", "200"}) == 0);
    CHECK(run_cli({"power", "--alpha", "1.96", "--power", "0.84", "--p", "0.5", "--var",
                   "1", "--target-effect", "0.396"}) == 0);
    CHECK(run_cli({"simulate", (data_dir() / "sample.params").string(), "--group", "cows",
                   "--replicates", "20000", "--seed", "42"}) == 0);
}

TEST_CASE("exit codes distinguish validation, computation and io failures") {
    CHECK(run_cli({"losses", "/nonexistent/nowhere.params"}) == 3);
    CHECK(run_cli({"surplus", (data_dir() / "sample.params").string()}) == 1);

    // a survey whose only cow cell has uniform outcomes separates the logit
    const fs::path dir = fresh_dir("sep");
    {
        std::ofstream out(dir / "sep.csv");
        out << "animal_id,species,parity,mf_case,died,peak_yield_prev,peak_yield_curr,"
               "herd_size,green_fodder,dry_fodder,concentrate,mineral_mix,fodder_area,"
               "labor,milk_price,animal_value,treatment_cost\n";
        for (int i = 0; i < 10; ++i)
            out << "B" << i << ",buffalo,2," << (i < 3 ? 1 : 0)
                << ",0,12,12,5,20,12,3,0.03,0.6,2,45,74250,0\n";
        for (int i = 0; i < 10; ++i)
            out << "C" << i << ",cow,2,1,0,16,16,5,19,11,3,0.03,0.6,2,30,53333,2882\n";
    }
    CHECK(run_cli({"margins", (dir / "sep.csv").string()}) == 2);

    CHECK(run_cli({"losses"}) == 1);       // missing required argument
    CHECK(run_cli({"bogus-subcmd"}) == 1);
}

TEST_CASE("deterministic report runs are byte-identical") {
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    const std::vector<std::string> base{"report", params(), "--survey", survey(),
                                        "--deterministic"};
    auto run_into = [&](const fs::path& dir) {
        auto args = base;
        args.push_back("--out");
        args.push_back(dir.string());
        REQUIRE(run_cli(args) == 0);
    };
    run_into(a);
    run_into(b);

    const std::vector<std::string> files{"losses.txt", "surplus.txt",    "sweep.txt",
                                         "sweep.tsv",  "results.csv",    "manifest.json",
                                         "incidence.txt", "margins.txt"};
    for (const auto& f : files) {
        REQUIRE(fs::exists(a / f));
        REQUIRE(fs::exists(b / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
}

TEST_CASE("environment variable supplies the default output directory") {
    const fs::path out = fresh_dir("envout");
    setenv("HERDECON_OUTDIR", out.string().c_str(), 1);
    CHECK(run_cli({"losses", params(), "--deterministic"}) == 0);
    unsetenv("HERDECON_OUTDIR");
    CHECK(fs::exists(out / "losses.txt"));
}
