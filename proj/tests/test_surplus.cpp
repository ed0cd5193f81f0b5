#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "herdecon/errors.hpp"
#include "herdecon/surplus.hpp"
#include "test_data.hpp"

using namespace herdecon;
using namespace herdecon::testdata;

namespace {

constexpr double kThousandTonnes = 1e6;  // liters

MarketParameters haryana_market(double price, double q0_thousand_tonnes) {
    MarketParameters m;
    m.supply_elasticity = 0.019;
    m.demand_elasticity_abs = 1.035;
    m.base_price = price;
    m.base_quantity = q0_thousand_tonnes * kThousandTonnes;
    m.success_rate = 0.9;
    return m;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("counterfactual supply adds the prevented loss") {
    CHECK(counterfactual_supply(252.390 * kThousandTonnes, 22.675 * kThousandTonnes) ==
          doctest::Approx(275.065 * kThousandTonnes).epsilon(1e-12));
    CHECK(counterfactual_supply(948.194 * kThousandTonnes, 124.377 * kThousandTonnes) ==
          doctest::Approx(1072.571 * kThousandTonnes).epsilon(1e-6));
    CHECK(counterfactual_supply(5.0, 0.0) == 5.0);
}

TEST_CASE("supply shift K per unit of supply elasticity") {
    const double q0c = 252.390, q1c = 275.065;  // thousand tonnes
    CHECK(rel_err(supply_shift_k(q0c, q1c, 0.019), 4.728) < 0.005);
    const double q0b = 948.194, q1b = 1072.571;
    CHECK(rel_err(supply_shift_k(q0b, q1b, 0.019), 6.904) < 0.005);
    CHECK(supply_shift_k(10.0, 10.0, 0.019) == 0.0);
    CHECK_THROWS_AS(supply_shift_k(10.0, 11.0, 0.0), ValidationError);
}

TEST_CASE("relative price reduction Z") {
    CHECK(rel_err(price_reduction_z(4.728, 0.019, 1.035), 0.085) < 0.01);
    CHECK(rel_err(price_reduction_z(6.904, 0.019, 1.035), 0.124) < 0.01);
    CHECK(price_reduction_z(0.0, 0.019, 1.035) == 0.0);
}

TEST_CASE("producer surplus reproduces the per-species gains") {
    {
        const MarketParameters m = haryana_market(30.0, 252.390);
        const SurplusResult r = efficiency_gain(m, 22.675 * kThousandTonnes, "cows");
        CHECK(rel_err(r.surplus_gain, 3224.8 * kCrore) < 0.005);
    }
    {
        const MarketParameters m = haryana_market(45.0, 948.194);
        const SurplusResult r = efficiency_gain(m, 124.377 * kThousandTonnes, "buffaloes");
        CHECK(rel_err(r.surplus_gain, 26543.4 * kCrore) < 0.005);
    }
    {
        const MarketParameters m = haryana_market(30.0, 252.390);
        CHECK(producer_surplus(m, 0.0, 0.0) == 0.0);
    }
}

TEST_CASE("pooled-parameter gain") {
    const MarketParameters m = haryana_market(37.5, 1200.585);
    const SurplusResult r = efficiency_gain(m, 154.499 * kThousandTonnes, "pooled");
    CHECK(rel_err(r.supply_shift, 6.773) < 0.01);
    CHECK(rel_err(r.price_reduction, 0.122) < 0.01);
    CHECK(rel_err(r.surplus_gain, 27475.8 * kCrore) < 0.005);
}

TEST_CASE("adoption sweep scales linearly") {
    const double full = 27475.8 * kCrore;
    const std::vector<double> rates{0.0, 0.2, 0.4, 0.6};
    const auto pts = adoption_sweep(full, rates);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].gain == 0.0);
    CHECK(pts[1].gain == doctest::Approx(5495.16 * kCrore).epsilon(1e-9));
    CHECK(pts[2].gain == doctest::Approx(10990.32 * kCrore).epsilon(1e-9));
    CHECK(pts[3].gain == doctest::Approx(16485.48 * kCrore).epsilon(1e-9));

    const std::vector<double> bad{1.2};
    CHECK_THROWS_AS(adoption_sweep(full, bad), ValidationError);
}

TEST_CASE("property: gain is linear in success rate and degree-1 in price") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int i = 0; i < 500; ++i) {
        MarketParameters m;
        m.supply_elasticity = u(rng);
        m.demand_elasticity_abs = u(rng) * 3.0;
        m.base_price = u(rng) * 100.0;
        m.base_quantity = u(rng) * 1e9;
        m.success_rate = u(rng);
        const double y_loss = u(rng) * m.base_quantity;
        const SurplusResult r = efficiency_gain(m, y_loss);

        MarketParameters half = m;
        half.success_rate = m.success_rate / 2.0;
        CHECK(efficiency_gain(half, y_loss).surplus_gain ==
              doctest::Approx(r.surplus_gain / 2.0).epsilon(1e-12));

        MarketParameters priced = m;
        priced.base_price = m.base_price * 2.0;
        CHECK(efficiency_gain(priced, y_loss).surplus_gain ==
              doctest::Approx(r.surplus_gain * 2.0).epsilon(1e-12));

        // 0 <= Z <= K pins the first-order bracket on the gain.
        const double core = r.supply_shift * m.base_price * m.base_quantity;
        const double lo = core * m.success_rate;
        const double hi =
            core * (1.0 + 0.5 * r.supply_shift * m.supply_elasticity) * m.success_rate;
        CHECK(r.surplus_gain >= lo * (1.0 - 1e-12));
        CHECK(r.surplus_gain <= hi * (1.0 + 1e-12));

        CHECK(r.price_reduction < r.supply_shift + 1e-15);
    }
}

TEST_CASE("property: Z approaches K as demand becomes inelastic") {
    MarketParameters m = haryana_market(30.0, 252.390);
    m.demand_elasticity_abs = 1e-12;
    const SurplusResult r = efficiency_gain(m, 22.675 * kThousandTonnes);
    CHECK(r.price_reduction == doctest::Approx(r.supply_shift).epsilon(1e-9));
}

TEST_CASE("property: K round-trips the milk loss") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double q0 = u(rng) * 1e9 + 1.0;
        const double x = u(rng) * q0;
        const double e = u(rng);
        const double k = supply_shift_k(q0, counterfactual_supply(q0, x), e);
        CHECK(k * e * q0 == doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("market validation") {
    MarketParameters m = haryana_market(30.0, 252.390);
    m.success_rate = 1.5;
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = haryana_market(-30.0, 252.390);
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = haryana_market(30.0, 252.390);
    m.demand_elasticity_abs = 0.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);
}
