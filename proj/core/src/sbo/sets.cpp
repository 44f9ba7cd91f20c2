#include "safetune/sbo/sets.hpp"

#include <algorithm>
#include <cmath>

#include "safetune/errors.hpp"

namespace safetune::sbo {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::SafeOpt: return "safeopt";
        case Algorithm::StageOpt: return "stageopt";
        case Algorithm::ShrinkAlgo: return "shrink";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "safeopt") return Algorithm::SafeOpt;
    if (name == "stageopt") return Algorithm::StageOpt;
    if (name == "shrink" || name == "shrinkalgo") return Algorithm::ShrinkAlgo;
    throw config_error("unknown algorithm '" + name + "' (expected safeopt|stageopt|shrink)");
}

void AlgoConfig::validate() const {
    if (confidence_multiplier <= 0.0) throw config_error("AlgoConfig: beta must be > 0");
    if (max_iterations < 0) throw config_error("AlgoConfig: max_iterations must be >= 0");
    if (algorithm == Algorithm::ShrinkAlgo) {
        if (!objective_threshold)
            throw config_error("AlgoConfig: shrink requires objective_threshold");
    } else if (objective_threshold) {
        throw config_error("AlgoConfig: objective_threshold is only valid for shrink");
    }
    if (algorithm != Algorithm::SafeOpt && max_iterations > 0 &&
        switch_iteration >= max_iterations)
        throw config_error("AlgoConfig: switch_iteration must be < max_iterations");
    if (algorithm != Algorithm::SafeOpt && switch_iteration < 0)
        throw config_error("AlgoConfig: switch_iteration must be >= 0");
}

Eigen::Index mask_count(const Mask& m) {
    return static_cast<Eigen::Index>(std::count(m.begin(), m.end(), std::uint8_t{1}));
}

std::vector<Eigen::Index> mask_indices(const Mask& m) {
    std::vector<Eigen::Index> idx;
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i]) idx.push_back(static_cast<Eigen::Index>(i));
    return idx;
}

bool mask_subset(const Mask& inner, const Mask& outer) {
    if (inner.size() != outer.size()) return false;
    for (size_t i = 0; i < inner.size(); ++i)
        if (inner[i] && !outer[i]) return false;
    return true;
}

Bounds bounds_of(const gp::PosteriorResult& post, double beta) {
    Bounds b;
    const Eigen::VectorXd sigma = post.variance.cwiseMax(0.0).cwiseSqrt();
    b.upper = post.mean + beta * sigma;
    b.lower = post.mean - beta * sigma;
    return b;
}

Bounds confidence_bounds(const gp::GPModel& model, const ParameterGrid& grid, double beta) {
    if (beta <= 0.0) throw input_error("confidence_bounds: beta must be > 0");
    return bounds_of(model.posterior(grid.query_matrix()), beta);
}

Mask safe_mask_union(const Eigen::VectorXd& constraint_upper, const Mask& initial_mask,
                     double threshold) {
    if (static_cast<Eigen::Index>(initial_mask.size()) != constraint_upper.size())
        throw input_error("safe_mask_union: mask/bounds size mismatch");
    Mask m(initial_mask);
    for (Eigen::Index i = 0; i < constraint_upper.size(); ++i)
        if (constraint_upper(i) < threshold) m[i] = 1;
    return m;
}

Mask safe_mask_shrunk(const Eigen::VectorXd& constraint_upper,
                      const Eigen::VectorXd& objective_upper, double threshold,
                      double objective_threshold) {
    if (constraint_upper.size() != objective_upper.size())
        throw input_error("safe_mask_shrunk: bounds size mismatch");
    Mask m(constraint_upper.size(), 0);
    for (Eigen::Index i = 0; i < constraint_upper.size(); ++i)
        if (constraint_upper(i) < threshold && objective_upper(i) < objective_threshold) m[i] = 1;
    return m;
}

Mask minimizer_mask(const Bounds& objective, const Mask& safe) {
    Mask m(safe.size(), 0);
    double best_upper = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < safe.size(); ++i)
        if (safe[i]) best_upper = std::min(best_upper, objective.upper(static_cast<Eigen::Index>(i)));
    for (size_t i = 0; i < safe.size(); ++i)
        if (safe[i] && objective.lower(static_cast<Eigen::Index>(i)) < best_upper) m[i] = 1;
    return m;
}

namespace {

/// Unsafe indices that could possibly be certified by any hypothetical
/// observation: conditioning on (anchor, L(anchor)) can lower a target's upper
/// bound at most to the target's own lower bound.
std::vector<Eigen::Index> certifiable_targets(const gp::GridPosterior& constraint,
                                              const Mask& safe, double threshold, double beta) {
    std::vector<Eigen::Index> targets;
    const auto& mean = constraint.mean();
    const auto& var = constraint.variance();
    for (Eigen::Index j = 0; j < constraint.size(); ++j) {
        if (safe[static_cast<size_t>(j)]) continue;
        const double sigma = std::sqrt(std::max(var(j), 0.0));
        if (mean(j) - beta * sigma < threshold) targets.push_back(j);
    }
    return targets;
}

}  // namespace

Mask expander_mask(const gp::GridPosterior& constraint, const Mask& safe, double threshold,
                   double beta) {
    if (static_cast<Eigen::Index>(safe.size()) != constraint.size())
        throw input_error("expander_mask: mask/posterior size mismatch");
    Mask m(safe.size(), 0);
    const auto targets = certifiable_targets(constraint, safe, threshold, beta);
    if (targets.empty()) return m;

    const auto& mean = constraint.mean();
    const auto& var = constraint.variance();
    for (size_t i = 0; i < safe.size(); ++i) {
        if (!safe[i]) continue;
        const auto anchor = static_cast<Eigen::Index>(i);
        const double sigma_a = std::sqrt(std::max(var(anchor), 0.0));
        const double denom = var(anchor) + constraint.noise_variance();
        for (Eigen::Index j : targets) {
            const double cov = constraint.covariance(anchor, j);
            const double mu = mean(j) - beta * sigma_a * cov / denom;
            const double v = std::max(var(j) - cov * cov / denom, 0.0);
            if (mu + beta * std::sqrt(v) < threshold) {
                m[i] = 1;
                break;
            }
        }
    }
    return m;
}

std::vector<int> expander_counts(const gp::GridPosterior& constraint, const Mask& safe,
                                 double threshold, double beta) {
    std::vector<int> counts(safe.size(), 0);
    const auto& mean = constraint.mean();
    const auto& var = constraint.variance();
    for (size_t i = 0; i < safe.size(); ++i) {
        if (!safe[i]) continue;
        const auto anchor = static_cast<Eigen::Index>(i);
        const double value = mean(anchor) - beta * std::sqrt(std::max(var(anchor), 0.0));
        const gp::PosteriorResult hyp = constraint.conditioned_on(anchor, value);
        for (Eigen::Index j = 0; j < constraint.size(); ++j) {
            if (safe[static_cast<size_t>(j)]) continue;
            const double u = hyp.mean(j) + beta * std::sqrt(std::max(hyp.variance(j), 0.0));
            if (u < threshold) ++counts[i];
        }
    }
    return counts;
}

Eigen::Index select_max_width(const Bounds& objective, const Mask& candidates) {
    Eigen::Index best = -1;
    double best_width = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (!candidates[i]) continue;
        const auto idx = static_cast<Eigen::Index>(i);
        const double w = objective.upper(idx) - objective.lower(idx);
        if (w > best_width) {
            best_width = w;
            best = idx;
        }
    }
    if (best < 0) throw campaign_error("acquisition candidate set is empty");
    return best;
}

Eigen::Index select_min_lcb(const Bounds& objective, const Mask& safe) {
    Eigen::Index best = -1;
    double best_lcb = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < safe.size(); ++i) {
        if (!safe[i]) continue;
        const auto idx = static_cast<Eigen::Index>(i);
        if (objective.lower(idx) < best_lcb) {
            best_lcb = objective.lower(idx);
            best = idx;
        }
    }
    if (best < 0) throw campaign_error("safe set is empty");
    return best;
}

}  // namespace safetune::sbo
