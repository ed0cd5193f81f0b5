#ifndef HERDECON_SIMULATE_HPP
#define HERDECON_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "herdecon/losses.hpp"

namespace herdecon {

// Configuration of one herd simulation. Results are a pure function of
// (group, replicates, seed, stream_count); sub-streams may execute in any
// order, including in parallel.
struct SimConfig {
    GroupParameters group;
    std::uint64_t replicates = 100000;
    std::uint64_t seed = 0;
    unsigned stream_count = 1;

    void validate() const;
};

struct QuantityStats {
    double mean = 0.0;
    double std_err = 0.0;
};

struct SimResult {
    QuantityStats milk_loss_liters;
    QuantityStats mortality_loss;
    QuantityStats milk_value_loss;
    QuantityStats treatment_cost;
    QuantityStats total;
    std::uint64_t replicates = 0;
};

// Per-animal Bernoulli process, one herd per replicate: each in-milk
// animal contracts the disease with probability P_MF; a case dies with
// probability P_D (forfeiting the full lactation and the animal's value,
// no treatment cost) or survives (losing Y_L*P_MFD*P_MYR liters and
// incurring the treatment cost).
SimResult simulate_herd(const SimConfig& cfg);

struct OracleRow {
    std::string quantity;
    double closed_form = 0.0;
    double mc_mean = 0.0;
    double std_err = 0.0;
    double z = 0.0;       // (mc_mean - closed_form) / std_err
    bool flagged = false; // |z| > 3
};

// Simulates cfg and scores each quantity's sample mean against the closed
// form. The second overload evaluates the closed forms on a different
// parameter set, for fault-injection checks.
std::vector<OracleRow> compare_to_closed_form(const SimConfig& cfg);
std::vector<OracleRow> compare_to_closed_form(const SimConfig& cfg,
                                              const GroupParameters& closed_form_group);

}  // namespace herdecon

#endif
