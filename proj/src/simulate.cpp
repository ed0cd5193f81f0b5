#include "herdecon/simulate.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <thread>
#include <utility>

#include "herdecon/errors.hpp"
#include "herdecon/rng.hpp"

namespace herdecon {

namespace {

constexpr std::uint64_t kMaxReplicates = 1ULL << 32;
constexpr int kQuantities = 5;  // y_loss, m_l, y_v, t_c, tel

// Kahan-compensated accumulator; merge order is fixed by the caller.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

struct BatchSums {
    std::array<Accumulator, kQuantities> sum;
    std::array<Accumulator, kQuantities> sumsq;
};

void run_batch(const SimConfig& cfg, long animals, std::uint64_t first,
               std::uint64_t last, BatchSums& out) {
    const auto& g = cfg.group;
    const double survivor_loss =
        g.lactation_yield * g.affected_days_frac * g.yield_reduction_frac;
    for (std::uint64_t rep = first; rep < last; ++rep) {
        CounterRng rng(cfg.seed, rep);
        double milk_lost = 0.0;
        long deaths = 0, cases = 0;
        for (long a = 0; a < animals; ++a) {
            if (!rng.bernoulli(g.mf_incidence)) continue;
            ++cases;
            if (rng.bernoulli(g.case_fatality)) {
                ++deaths;
                milk_lost += g.lactation_yield;
            } else {
                milk_lost += survivor_loss;
            }
        }
        const double m_l = static_cast<double>(deaths) * g.animal_value;
        const double t_c = static_cast<double>(cases - deaths) * g.treatment_cost_per_case;
        const double y_v = milk_lost * g.milk_price;
        const std::array<double, kQuantities> q{milk_lost, m_l, y_v, t_c, m_l + y_v + t_c};
        for (int i = 0; i < kQuantities; ++i) {
            out.sum[i].add(q[i]);
            out.sumsq[i].add(q[i] * q[i]);
        }
    }
}

QuantityStats stats_from(double sum, double sumsq, std::uint64_t n) {
    QuantityStats s;
    const double dn = static_cast<double>(n);
    s.mean = sum / dn;
    if (n > 1) {
        const double var = (sumsq - dn * s.mean * s.mean) / (dn - 1.0);
        s.std_err = var > 0.0 ? std::sqrt(var / dn) : 0.0;
    }
    return s;
}

}  // namespace

void SimConfig::validate() const {
    group.validate();
    if (replicates < 1) throw ValidationError("replicates must be >= 1");
    if (replicates > kMaxReplicates)
        throw ValidationError("replicates exceed the accumulator precision budget (2^32)");
    if (stream_count < 1) throw ValidationError("stream_count must be >= 1");
}

SimResult simulate_herd(const SimConfig& cfg) {
    cfg.validate();
    const long animals = std::lround(cfg.group.in_milk);

    const unsigned streams =
        static_cast<unsigned>(std::min<std::uint64_t>(cfg.stream_count, cfg.replicates));
    std::vector<BatchSums> batches(streams);

    // Contiguous replicate ranges per stream; draws depend only on
    // (seed, replicate index), so the partition fixes just the order of
    // additions within each stream.
    const std::uint64_t base = cfg.replicates / streams;
    const std::uint64_t extra = cfg.replicates % streams;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    std::uint64_t at = 0;
    for (unsigned s = 0; s < streams; ++s) {
        const std::uint64_t len = base + (s < extra ? 1 : 0);
        ranges.emplace_back(at, at + len);
        at += len;
    }

    if (streams == 1) {
        run_batch(cfg, animals, ranges[0].first, ranges[0].second, batches[0]);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(streams);
        for (unsigned s = 0; s < streams; ++s)
            workers.emplace_back(run_batch, std::cref(cfg), animals, ranges[s].first,
                                 ranges[s].second, std::ref(batches[s]));
        for (auto& w : workers) w.join();
    }

    std::array<Accumulator, kQuantities> sum, sumsq;
    for (const auto& b : batches)  // merge in stream order
        for (int i = 0; i < kQuantities; ++i) {
            sum[i].add(b.sum[i].sum);
            sumsq[i].add(b.sumsq[i].sum);
        }

    SimResult r;
    r.replicates = cfg.replicates;
    r.milk_loss_liters = stats_from(sum[0].sum, sumsq[0].sum, cfg.replicates);
    r.mortality_loss = stats_from(sum[1].sum, sumsq[1].sum, cfg.replicates);
    r.milk_value_loss = stats_from(sum[2].sum, sumsq[2].sum, cfg.replicates);
    r.treatment_cost = stats_from(sum[3].sum, sumsq[3].sum, cfg.replicates);
    r.total = stats_from(sum[4].sum, sumsq[4].sum, cfg.replicates);
    return r;
}

std::vector<OracleRow> compare_to_closed_form(const SimConfig& cfg) {
    return compare_to_closed_form(cfg, cfg.group);
}

std::vector<OracleRow> compare_to_closed_form(const SimConfig& cfg,
                                              const GroupParameters& closed_form_group) {
    const SimResult mc = simulate_herd(cfg);
    const LossBreakdown cf = total_economic_loss(closed_form_group);

    const auto row = [](std::string name, double closed, const QuantityStats& s) {
        OracleRow r;
        r.quantity = std::move(name);
        r.closed_form = closed;
        r.mc_mean = s.mean;
        r.std_err = s.std_err;
        if (s.std_err > 0.0) {
            r.z = (s.mean - closed) / s.std_err;
        } else {
            r.z = s.mean == closed ? 0.0
                                   : std::numeric_limits<double>::infinity();
        }
        r.flagged = !(std::abs(r.z) <= 3.0);
        return r;
    };

    return {row("milk_loss_liters", cf.milk_loss_liters, mc.milk_loss_liters),
            row("mortality_loss", cf.mortality_loss, mc.mortality_loss),
            row("milk_value_loss", cf.milk_value_loss, mc.milk_value_loss),
            row("treatment_cost", cf.treatment_cost, mc.treatment_cost),
            row("total", cf.total, mc.total)};
}

}  // namespace herdecon
