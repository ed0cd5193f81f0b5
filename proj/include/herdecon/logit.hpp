#ifndef HERDECON_LOGIT_HPP
#define HERDECON_LOGIT_HPP

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "herdecon/errors.hpp"
#include "herdecon/survey.hpp"

namespace herdecon {

// Thrown when a factor cell has no outcome variation, which sends the
// maximum-likelihood estimate of the saturated interaction model to
// infinity.
struct SeparationError : ComputationError {
    SeparationError(int parity, Species species, bool all_ones);
    int parity;
    Species species;
    bool all_ones;
};

// Treatment coding for the interaction model  outcome ~ parity * species.
// Reference levels are the smallest observed parity and species; empty
// interaction cells contribute no column.
struct LogitCoding {
    std::vector<int> parity_levels;                       // sorted, observed
    std::vector<Species> species_levels;                  // sorted, observed
    std::vector<std::pair<int, Species>> interaction_cells;  // kept columns
    std::vector<std::pair<int, Species>> observed_cells;     // every nonempty cell

    Eigen::Index columns() const;
    std::vector<std::string> column_names() const;
    // Design row for an animal with the given factor values. Throws
    // ValidationError for a level the model has never seen.
    Eigen::RowVectorXd row(int parity, Species species) const;
};

struct LogitDesign {
    LogitCoding coding;
    Eigen::MatrixXd X;   // one row per record
    Eigen::VectorXd y;   // 0/1 outcomes
};

// Builds the interacted design and runs the separation and rank checks.
LogitDesign build_design(std::span<const SurveyRecord> records);

// Bernoulli log-likelihood and its analytic gradient, overflow-safe in the
// linear predictor.
double log_likelihood(const LogitDesign& d, const Eigen::VectorXd& beta);
Eigen::VectorXd log_likelihood_gradient(const LogitDesign& d, const Eigen::VectorXd& beta);

struct LogitFit {
    LogitCoding coding;
    Eigen::VectorXd beta;
    Eigen::MatrixXd covariance;   // inverse observed information at the optimum
    double log_likelihood = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;   // max-norm at the solution
    std::vector<std::string> column_names;

    // Fitted probability for one factor combination.
    double cell_probability(int parity, Species species) const;
};

// Maximum likelihood via damped Newton ascent: full Newton steps with
// step-halving whenever a step would lower the likelihood. Deterministic;
// throws SeparationError / ComputationError as appropriate.
LogitFit fit_logit(std::span<const SurveyRecord> records);

enum class MarginFactor { Parity, Species, Cell };

struct MarginEstimate {
    std::string level;
    double margin = 0.0;    // average predicted probability at the level
    double std_err = 0.0;   // delta-method standard error
    double z = 0.0;
    double p_value = 0.0;
};

// Average adjusted predictions: for each level of the factor, the mean
// predicted probability over `records` with the factor forced to that
// level and the other factor as observed. For Cell both factors are fixed,
// so the margin equals the fitted cell probability.
std::vector<MarginEstimate> predictive_margins(const LogitFit& fit,
                                               std::span<const SurveyRecord> records,
                                               MarginFactor factor);

}  // namespace herdecon

#endif
