#include "herdecon/logit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace herdecon {

namespace {

constexpr double kGradTolStop = 1e-9;    // stop once the max-norm falls below this
constexpr double kGradTolAccept = 1e-8;  // hard requirement on the returned fit
constexpr double kLogLikRelTol = 1e-10;
constexpr int kMaxIterations = 100;
constexpr int kMaxHalvings = 40;

double sigmoid(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

// log(1 + exp(eta)) without overflow.
double log1pexp(double eta) {
    if (eta > 0.0) return eta + std::log1p(std::exp(-eta));
    return std::log1p(std::exp(eta));
}

std::string cell_name(int parity, Species species) {
    return "parity=" + std::to_string(parity) + " x species=" + to_string(species);
}

}  // namespace

SeparationError::SeparationError(int parity_, Species species_, bool all_ones_)
    : ComputationError("separation: cell " + cell_name(parity_, species_) +
                       " has all-" + (all_ones_ ? std::string("1") : std::string("0")) +
                       " outcomes; its log-odds are not finite"),
      parity(parity_), species(species_), all_ones(all_ones_) {}

Eigen::Index LogitCoding::columns() const {
    return 1 + static_cast<Eigen::Index>(parity_levels.size() - 1) +
           static_cast<Eigen::Index>(species_levels.size() - 1) +
           static_cast<Eigen::Index>(interaction_cells.size());
}

std::vector<std::string> LogitCoding::column_names() const {
    std::vector<std::string> names{"intercept"};
    for (std::size_t i = 1; i < parity_levels.size(); ++i)
        names.push_back("parity" + std::to_string(parity_levels[i]));
    for (std::size_t j = 1; j < species_levels.size(); ++j)
        names.push_back(to_string(species_levels[j]));
    for (const auto& [p, s] : interaction_cells)
        names.push_back("parity" + std::to_string(p) + "#" + to_string(s));
    return names;
}

Eigen::RowVectorXd LogitCoding::row(int parity, Species species) const {
    if (std::find(parity_levels.begin(), parity_levels.end(), parity) == parity_levels.end())
        throw ValidationError("parity level " + std::to_string(parity) +
                              " is not present in the fitted model");
    if (std::find(species_levels.begin(), species_levels.end(), species) ==
        species_levels.end())
        throw ValidationError("species level '" + to_string(species) +
                              "' is not present in the fitted model");
    Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(columns());
    Eigen::Index col = 0;
    x(col++) = 1.0;
    for (std::size_t i = 1; i < parity_levels.size(); ++i, ++col)
        if (parity_levels[i] == parity) x(col) = 1.0;
    for (std::size_t j = 1; j < species_levels.size(); ++j, ++col)
        if (species_levels[j] == species) x(col) = 1.0;
    for (const auto& [p, s] : interaction_cells) {
        if (p == parity && s == species) x(col) = 1.0;
        ++col;
    }
    return x;
}

LogitDesign build_design(std::span<const SurveyRecord> records) {
    if (records.empty()) throw ValidationError("no survey records to fit");

    std::set<int> parities;
    std::set<Species> species;
    std::map<std::pair<int, Species>, std::pair<long, long>> cells;  // (n, cases)
    bool any_case = false, any_control = false;
    for (const auto& r : records) {
        parities.insert(r.parity);
        species.insert(r.species);
        auto& [n, k] = cells[{r.parity, r.species}];
        ++n;
        if (r.mf_case) {
            ++k;
            any_case = true;
        } else {
            any_control = true;
        }
    }
    if (!any_case || !any_control)
        throw ComputationError(std::string("outcome has no variation: every record is ") +
                               (any_case ? "a case" : "a non-case"));
    for (const auto& [cell, nk] : cells) {
        if (nk.second == 0) throw SeparationError(cell.first, cell.second, false);
        if (nk.second == nk.first) throw SeparationError(cell.first, cell.second, true);
    }

    LogitDesign d;
    d.coding.parity_levels.assign(parities.begin(), parities.end());
    d.coding.species_levels.assign(species.begin(), species.end());
    for (const auto& [cell, nk] : cells) d.coding.observed_cells.push_back(cell);
    for (std::size_t i = 1; i < d.coding.parity_levels.size(); ++i)
        for (std::size_t j = 1; j < d.coding.species_levels.size(); ++j) {
            const std::pair<int, Species> cell{d.coding.parity_levels[i],
                                               d.coding.species_levels[j]};
            if (cells.count(cell)) d.coding.interaction_cells.push_back(cell);
        }

    const Eigen::Index n = static_cast<Eigen::Index>(records.size());
    const Eigen::Index k = d.coding.columns();
    d.X.resize(n, k);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = records[static_cast<std::size_t>(i)];
        d.X.row(i) = d.coding.row(r.parity, r.species);
        d.y(i) = r.mf_case ? 1.0 : 0.0;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        const auto names = d.coding.column_names();
        const auto& perm = qr.colsPermutation().indices();
        std::ostringstream os;
        os << "design matrix is rank deficient (rank " << qr.rank() << " of " << k
           << "); collinear columns:";
        for (Eigen::Index j = qr.rank(); j < k; ++j)
            os << " " << names[static_cast<std::size_t>(perm(j))];
        throw ComputationError(os.str());
    }
    return d;
}

double log_likelihood(const LogitDesign& d, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = d.X * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        ll += d.y(i) * eta(i) - log1pexp(eta(i));
    return ll;
}

Eigen::VectorXd log_likelihood_gradient(const LogitDesign& d, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = d.X * beta;
    Eigen::VectorXd p(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) p(i) = sigmoid(eta(i));
    return d.X.transpose() * (d.y - p);
}

LogitFit fit_logit(std::span<const SurveyRecord> records) {
    LogitDesign d = build_design(records);
    const Eigen::Index k = d.coding.columns();

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
    double ll = log_likelihood(d, beta);
    int iter = 0;
    Eigen::MatrixXd hessian(k, k);

    for (; iter < kMaxIterations; ++iter) {
        const Eigen::VectorXd eta = d.X * beta;
        Eigen::VectorXd p(eta.size()), w(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            p(i) = sigmoid(eta(i));
            w(i) = p(i) * (1.0 - p(i));
        }
        const Eigen::VectorXd grad = d.X.transpose() * (d.y - p);
        if (grad.lpNorm<Eigen::Infinity>() <= kGradTolStop) break;

        hessian = d.X.transpose() * w.asDiagonal() * d.X;
        const Eigen::VectorXd step = hessian.ldlt().solve(grad);

        // Near the optimum the true improvement falls below the rounding
        // noise of the likelihood sum; allow that much slack so the full
        // Newton step is not halved into a no-op.
        const double slack = 1e-12 * (1.0 + std::abs(ll));
        double scale = 1.0;
        double ll_new = log_likelihood(d, beta + scale * step);
        int halvings = 0;
        while (ll_new < ll - slack && halvings < kMaxHalvings) {
            scale *= 0.5;
            ll_new = log_likelihood(d, beta + scale * step);
            ++halvings;
        }
        if (ll_new < ll - slack)
            throw ComputationError("logit fit stalled: no ascent direction after " +
                                   std::to_string(kMaxHalvings) + " halvings");
        beta += scale * step;
        const double rel_change = std::abs(ll_new - ll) / (std::abs(ll) + 1.0);
        ll = ll_new;
        if (rel_change < kLogLikRelTol &&
            log_likelihood_gradient(d, beta).lpNorm<Eigen::Infinity>() <= kGradTolAccept)
            break;
    }

    const Eigen::VectorXd grad = log_likelihood_gradient(d, beta);
    const double gnorm = grad.lpNorm<Eigen::Infinity>();
    if (gnorm > kGradTolAccept)
        throw ComputationError("logit fit did not converge in " +
                               std::to_string(kMaxIterations) +
                               " iterations (gradient max-norm " + std::to_string(gnorm) + ")");

    // Observed information at the optimum.
    const Eigen::VectorXd eta = d.X * beta;
    Eigen::VectorXd w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double p = sigmoid(eta(i));
        w(i) = p * (1.0 - p);
    }
    hessian = d.X.transpose() * w.asDiagonal() * d.X;
    Eigen::MatrixXd cov = hessian.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    cov = ((cov + cov.transpose()) / 2.0).eval();

    LogitFit fit;
    fit.coding = std::move(d.coding);
    fit.beta = std::move(beta);
    fit.covariance = std::move(cov);
    fit.log_likelihood = ll;
    fit.iterations = iter;
    fit.gradient_norm = gnorm;
    fit.column_names = fit.coding.column_names();
    return fit;
}

double LogitFit::cell_probability(int parity, Species species) const {
    return sigmoid(coding.row(parity, species).dot(beta));
}

namespace {

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

MarginEstimate margin_at(const LogitFit& fit, std::span<const SurveyRecord> records,
                         std::string level,
                         auto row_for_record) {
    const Eigen::Index k = fit.coding.columns();
    double sum_p = 0.0;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(k);
    for (const auto& r : records) {
        const Eigen::RowVectorXd x = row_for_record(r);
        const double p = sigmoid(x.dot(fit.beta));
        sum_p += p;
        grad += p * (1.0 - p) * x.transpose();
    }
    const double n = static_cast<double>(records.size());
    MarginEstimate m;
    m.level = std::move(level);
    m.margin = sum_p / n;
    grad /= n;
    const double var = grad.dot(fit.covariance * grad);
    m.std_err = var > 0.0 ? std::sqrt(var) : 0.0;
    m.z = m.std_err > 0.0 ? m.margin / m.std_err : 0.0;
    m.p_value = m.std_err > 0.0 ? normal_two_sided_p(m.z) : 0.0;
    return m;
}

}  // namespace

std::vector<MarginEstimate> predictive_margins(const LogitFit& fit,
                                               std::span<const SurveyRecord> records,
                                               MarginFactor factor) {
    if (records.empty()) throw ValidationError("no records to average margins over");
    std::vector<MarginEstimate> out;
    switch (factor) {
        case MarginFactor::Parity:
            for (int level : fit.coding.parity_levels)
                out.push_back(margin_at(fit, records, std::to_string(level),
                                        [&](const SurveyRecord& r) {
                                            return fit.coding.row(level, r.species);
                                        }));
            break;
        case MarginFactor::Species:
            for (Species level : fit.coding.species_levels)
                out.push_back(margin_at(fit, records, to_string(level),
                                        [&](const SurveyRecord& r) {
                                            return fit.coding.row(r.parity, level);
                                        }));
            break;
        case MarginFactor::Cell:
            for (const auto& [p, s] : fit.coding.observed_cells) {
                const Eigen::RowVectorXd x = fit.coding.row(p, s);
                out.push_back(margin_at(fit, records,
                                        std::to_string(p) + " # " + to_string(s),
                                        [&](const SurveyRecord&) { return x; }));
            }
            break;
    }
    return out;
}

}  // namespace herdecon
