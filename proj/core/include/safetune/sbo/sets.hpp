#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "safetune/gp/model.hpp"
#include "safetune/sbo/config.hpp"
#include "safetune/sbo/grid.hpp"

namespace safetune::sbo {

/// Boolean mask over grid indices.
using Mask = std::vector<std::uint8_t>;

Eigen::Index mask_count(const Mask& m);
std::vector<Eigen::Index> mask_indices(const Mask& m);
bool mask_subset(const Mask& inner, const Mask& outer);

/// Elementwise confidence bounds U = mu + beta*sigma, L = mu - beta*sigma.
struct Bounds {
    Eigen::VectorXd upper;
    Eigen::VectorXd lower;
    Eigen::VectorXd width() const { return upper - lower; }
};

Bounds bounds_of(const gp::PosteriorResult& post, double beta);
Bounds confidence_bounds(const gp::GPModel& model, const ParameterGrid& grid, double beta);

/// Safe set before the shrink switch: initial mask unioned with all points
/// whose constraint upper bound is strictly below the threshold.
Mask safe_mask_union(const Eigen::VectorXd& constraint_upper, const Mask& initial_mask, double threshold);

/// Shrunk safe set (shrinkAlgo after the switch): strict thresholds on both
/// the constraint and objective upper bounds, with no union of the initial
/// mask.
Mask safe_mask_shrunk(const Eigen::VectorXd& constraint_upper, const Eigen::VectorXd& objective_upper,
                      double threshold, double objective_threshold);

/// Safe points whose objective lower bound undercuts the best safe upper
/// bound.
Mask minimizer_mask(const Bounds& objective, const Mask& safe);

/// Safe points whose hypothetical pessimistic measurement (value = lower
/// confidence bound) would certify at least one currently-unsafe point.
/// Exact: a target j can only be certified if its own lower bound is below
/// the threshold, so confidently-unsafe points are skipped without changing
/// the result.
Mask expander_mask(const gp::GridPosterior& constraint, const Mask& safe, double threshold,
                   double beta);

/// Full expander indicator e(p): for each safe point, the number of unsafe
/// points its hypothetical measurement would certify (0 for unsafe points).
/// O(|safe| * |unsafe|); intended for small grids and tests.
std::vector<int> expander_counts(const gp::GridPosterior& constraint, const Mask& safe,
                                 double threshold, double beta);

/// Acquisition rules. Each returns a grid index and breaks ties toward the
/// lowest index; each throws campaign_error when its candidate set is empty.
Eigen::Index select_max_width(const Bounds& objective, const Mask& candidates);
Eigen::Index select_min_lcb(const Bounds& objective, const Mask& safe);

}  // namespace safetune::sbo
