#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "herdecon/errors.hpp"
#include "herdecon/logit.hpp"
#include "herdecon/survey_csv.hpp"
#include "test_data.hpp"

using namespace herdecon;
using namespace herdecon::testdata;

namespace {

SurveyRecord rec(Species sp, int parity, bool mf) {
    SurveyRecord r;
    r.species = sp;
    r.parity = parity;
    r.mf_case = mf;
    return r;
}

std::vector<SurveyRecord> cell_data(
    const std::map<std::pair<int, Species>, std::pair<int, int>>& cells) {
    std::vector<SurveyRecord> out;
    for (const auto& [cell, nk] : cells)
        for (int i = 0; i < nk.first; ++i)
            out.push_back(rec(cell.second, cell.first, i < nk.second));
    return out;
}

// Brute-force margin oracle for the saturated model: fitted cell
// probabilities are empirical frequencies, so averaging frequencies over
// the observed distribution of the other factor gives the margins.
struct CellCounts {
    std::map<std::pair<int, Species>, std::pair<double, double>> nk;  // (n, cases)
    double total = 0.0;

    static CellCounts of(const std::vector<SurveyRecord>& records) {
        CellCounts c;
        for (const auto& r : records) {
            auto& [n, k] = c.nk[{r.parity, r.species}];
            n += 1.0;
            if (r.mf_case) k += 1.0;
            c.total += 1.0;
        }
        return c;
    }

    double freq(int parity, Species sp) const {
        const auto& [n, k] = nk.at({parity, sp});
        return k / n;
    }

    double parity_margin(int parity) const {
        double m = 0.0;
        for (Species sp : {Species::Buffalo, Species::Cow}) {
            double n_sp = 0.0;
            for (const auto& [cell, c] : nk)
                if (cell.second == sp) n_sp += c.first;
            if (n_sp > 0.0) m += (n_sp / total) * freq(parity, sp);
        }
        return m;
    }

    // weight each cell frequency by the parity distribution across both species
    double species_margin(Species sp) const {
        double m = 0.0;
        std::map<int, double> parity_n;
        for (const auto& [cell, c] : nk) parity_n[cell.first] += c.first;
        for (const auto& [parity, n] : parity_n) m += (n / total) * freq(parity, sp);
        return m;
    }
};

const std::map<std::pair<int, Species>, std::pair<int, int>> kFixtureCells{
    {{2, Species::Buffalo}, {54, 3}}, {{3, Species::Buffalo}, {21, 5}},
    {{4, Species::Buffalo}, {16, 7}}, {{5, Species::Buffalo}, {14, 5}},
    {{2, Species::Cow}, {53, 4}},     {{3, Species::Cow}, {20, 7}},
    {{4, Species::Cow}, {22, 13}},    {{5, Species::Cow}, {12, 6}},
};

}  // namespace

TEST_CASE("saturated fit converges and reproduces cell frequencies") {
    const auto records = cell_data(kFixtureCells);
    const LogitFit fit = fit_logit(records);
    CHECK(fit.gradient_norm <= 1e-8);
    CHECK(fit.iterations < 100);
    CHECK(fit.beta.size() == 8);

    const CellCounts counts = CellCounts::of(records);
    for (const auto& [cell, nk] : kFixtureCells)
        CHECK(fit.cell_probability(cell.first, cell.second) ==
              doctest::Approx(counts.freq(cell.first, cell.second)).epsilon(1e-6));
}

TEST_CASE("covariance is symmetric positive semidefinite") {
    const auto records = cell_data(kFixtureCells);
    const LogitFit fit = fit_logit(records);
    const Eigen::MatrixXd& c = fit.covariance;
    CHECK((c - c.transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("margins match the frequency-weighting oracle") {
    const auto records = cell_data(kFixtureCells);
    const LogitFit fit = fit_logit(records);
    const CellCounts counts = CellCounts::of(records);

    const auto parity = predictive_margins(fit, records, MarginFactor::Parity);
    REQUIRE(parity.size() == 4);
    for (std::size_t i = 0; i < parity.size(); ++i) {
        const int level = fit.coding.parity_levels[i];
        CHECK(parity[i].margin ==
              doctest::Approx(counts.parity_margin(level)).epsilon(1e-9));
        CHECK(parity[i].margin >= 0.0);
        CHECK(parity[i].margin <= 1.0);
        CHECK(parity[i].std_err >= 0.0);
    }

    const auto species = predictive_margins(fit, records, MarginFactor::Species);
    REQUIRE(species.size() == 2);
    CHECK(species[0].margin ==
          doctest::Approx(counts.species_margin(Species::Buffalo)).epsilon(1e-9));
    CHECK(species[1].margin ==
          doctest::Approx(counts.species_margin(Species::Cow)).epsilon(1e-9));

    const auto cells = predictive_margins(fit, records, MarginFactor::Cell);
    REQUIRE(cells.size() == 8);
    for (const auto& m : cells) {
        CHECK(m.margin >= 0.0);
        CHECK(m.margin <= 1.0);
    }
}

TEST_CASE("analytic gradient matches central finite differences") {
    const auto records = cell_data(kFixtureCells);
    const LogitDesign d = build_design(records);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd beta(d.coding.columns());
        for (Eigen::Index j = 0; j < beta.size(); ++j) beta(j) = u(rng);
        const Eigen::VectorXd grad = log_likelihood_gradient(d, beta);
        for (Eigen::Index j = 0; j < beta.size(); ++j) {
            const double h = 1e-5 * std::max(1.0, std::abs(beta(j)));
            Eigen::VectorXd up = beta, dn = beta;
            up(j) += h;
            dn(j) -= h;
            const double fd = (log_likelihood(d, up) - log_likelihood(d, dn)) / (2.0 * h);
            CHECK(std::abs(grad(j) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("single mixed cell collapses to an intercept-only fit") {
    std::vector<SurveyRecord> records;
    for (int i = 0; i < 40; ++i) records.push_back(rec(Species::Cow, 3, i < 13));
    const LogitFit fit = fit_logit(records);
    CHECK(fit.beta.size() == 1);
    CHECK(fit.cell_probability(3, Species::Cow) ==
          doctest::Approx(13.0 / 40.0).epsilon(1e-9));

    const auto margins = predictive_margins(fit, records, MarginFactor::Parity);
    REQUIRE(margins.size() == 1);
    CHECK(margins[0].margin == doctest::Approx(13.0 / 40.0).epsilon(1e-9));
}

TEST_CASE("a cell without outcome variation raises a separation error") {
    std::vector<SurveyRecord> records;
    for (int i = 0; i < 20; ++i) records.push_back(rec(Species::Cow, 2, i < 5));
    for (int i = 0; i < 20; ++i) records.push_back(rec(Species::Cow, 4, false));  // pure
    try {
        fit_logit(records);
        FAIL("expected SeparationError");
    } catch (const SeparationError& e) {
        CHECK(e.parity == 4);
        CHECK(e.species == Species::Cow);
        CHECK_FALSE(e.all_ones);
        CHECK(std::string(e.what()).find("parity=4") != std::string::npos);
    }
}

TEST_CASE("outcome with a single class is rejected") {
    std::vector<SurveyRecord> records;
    for (int i = 0; i < 10; ++i) records.push_back(rec(Species::Cow, 2, true));
    CHECK_THROWS_AS(fit_logit(records), ComputationError);
}

TEST_CASE("rank-deficient designs name the collinear columns") {
    // Parity 5 exists only among cows, so its dummy equals its interaction.
    std::vector<SurveyRecord> records;
    for (int i = 0; i < 30; ++i) records.push_back(rec(Species::Buffalo, 2, i < 5));
    for (int i = 0; i < 30; ++i) records.push_back(rec(Species::Cow, 2, i < 9));
    for (int i = 0; i < 20; ++i) records.push_back(rec(Species::Cow, 5, i < 10));
    CHECK_THROWS_WITH_AS(fit_logit(records), doctest::Contains("collinear"),
                         ComputationError);
}

TEST_CASE("margins are invariant to relabeling of factor levels") {
    const auto records = cell_data(kFixtureCells);
    const LogitFit fit = fit_logit(records);
    const auto base = predictive_margins(fit, records, MarginFactor::Parity);

    // Scramble the parity labels with an order-reversing map.
    const std::map<int, int> relabel{{2, 5}, {3, 4}, {4, 3}, {5, 2}};
    auto scrambled = records;
    for (auto& r : scrambled) r.parity = relabel.at(r.parity);
    const LogitFit fit2 = fit_logit(scrambled);
    const auto got = predictive_margins(fit2, scrambled, MarginFactor::Parity);

    REQUIRE(got.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        const int original = fit.coding.parity_levels[i];
        const int mapped = relabel.at(original);
        std::size_t j = 0;
        while (fit2.coding.parity_levels[j] != mapped) ++j;
        CHECK(got[j].margin == doctest::Approx(base[i].margin).epsilon(1e-9));
        CHECK(got[j].std_err == doctest::Approx(base[i].std_err).epsilon(1e-6));
    }
}

TEST_CASE("duplicating the dataset keeps margins and shrinks SEs by sqrt(2)") {
    const auto records = cell_data(kFixtureCells);
    const LogitFit fit = fit_logit(records);
    const auto base = predictive_margins(fit, records, MarginFactor::Parity);

    std::vector<SurveyRecord> doubled = records;
    doubled.insert(doubled.end(), records.begin(), records.end());
    const LogitFit fit2 = fit_logit(doubled);
    const auto got = predictive_margins(fit2, doubled, MarginFactor::Parity);

    REQUIRE(got.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(got[i].margin == doctest::Approx(base[i].margin).epsilon(1e-9));
        CHECK(got[i].std_err ==
              doctest::Approx(base[i].std_err / std::sqrt(2.0)).epsilon(1e-9));
    }
}

TEST_CASE("margins over records with an unknown level are rejected") {
    const auto records = cell_data(kFixtureCells);
    const LogitFit fit = fit_logit(records);
    auto alien = records;
    alien[0].parity = 9;
    // species margins keep parity as observed, so the alien level surfaces
    CHECK_THROWS_WITH_AS(predictive_margins(fit, alien, MarginFactor::Species),
                         doctest::Contains("parity level 9"), ValidationError);
}

TEST_CASE("fixture margins line up with the survey file") {
    const auto survey = read_survey_csv(data_dir() / "survey_sample.csv");
    const LogitFit fit = fit_logit(survey.records);
    const auto cells = predictive_margins(fit, survey.records, MarginFactor::Cell);
    REQUIRE(cells.size() == 8);
    const CellCounts counts = CellCounts::of(survey.records);
    for (const auto& [cell, nk] : counts.nk) {
        const double freq = nk.second / nk.first;
        CHECK(fit.cell_probability(cell.first, cell.second) ==
              doctest::Approx(freq).epsilon(1e-6));
    }
}
