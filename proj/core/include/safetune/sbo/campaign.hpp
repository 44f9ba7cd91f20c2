#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "safetune/gp/model.hpp"
#include "safetune/sbo/config.hpp"
#include "safetune/sbo/grid.hpp"
#include "safetune/sbo/sets.hpp"

namespace safetune::sbo {

/// A measurable system: returns one (objective, constraint) measurement pair
/// per evaluation. Repeated evaluation at the same point may differ only by
/// measurement noise.
class PlantInterface {
public:
    struct Measurement {
        double objective = 0.0;
        double constraint = 0.0;
    };

    virtual ~PlantInterface() = default;
    virtual Measurement evaluate(const Eigen::VectorXd& point, const Eigen::VectorXd& context) = 0;
    virtual std::string description() const = 0;
};

struct HistoryEntry {
    int iteration = 0;  // 0 for initializer evaluations
    Eigen::VectorXd point;
    Eigen::VectorXd context;
    double objective = 0.0;
    double constraint = 0.0;
    bool initializer = false;
    Eigen::Index safe_set_size = 0;
    double best_so_far = std::numeric_limits<double>::quiet_NaN();
};

struct CampaignState {
    gp::GPModel objective_model;
    gp::GPModel constraint_model;
    Mask initial_safe_mask;
    Mask safe_mask, minimizer_mask, expander_mask;
    int iteration = 0;
    std::vector<HistoryEntry> history;
};

/// Per-iteration snapshot handed to campaign observers (surface dumps, tests).
/// Iteration 0 carries the post-initialization state with no selected point.
struct IterationRecord {
    int iteration = 0;
    Eigen::VectorXd objective_mean, objective_sigma;
    Eigen::VectorXd constraint_mean, constraint_sigma;
    Mask safe, minimizer, expander;
    Eigen::Index selected = -1;
    Eigen::VectorXd selected_point;
};

using CampaignObserver = std::function<void(const IterationRecord&)>;

enum class CampaignStatus { Completed, PlantAborted, CampaignAborted };

struct CampaignResult {
    CampaignStatus status = CampaignStatus::Completed;
    std::string message;  // failure detail when status != Completed
    std::vector<HistoryEntry> history;
    bool has_best = false;
    Eigen::VectorXd best_point;
    double best_objective = std::numeric_limits<double>::quiet_NaN();
    double best_constraint = std::numeric_limits<double>::quiet_NaN();
    int violation_count = 0;  // non-initializer evaluations with measured C > T
    gp::KernelSpec resolved_objective_spec, resolved_constraint_spec;
    std::shared_ptr<CampaignState> final_state;
};

/// Kernel plus the prior-mean policy: when `auto_prior_mean` is set, the
/// objective prior mean becomes the mean of the initializer measurements and
/// the constraint prior mean becomes the safety threshold.
struct KernelSetup {
    gp::KernelSpec spec;
    bool auto_prior_mean = true;
};

/// Spec-shaped set operations over a campaign state. Each recomputes the grid
/// posterior it needs; the campaign loop itself reuses one snapshot per
/// iteration.
Mask compute_safe_set(const CampaignState& state, const ParameterGrid& grid,
                      const AlgoConfig& config);
Mask compute_minimizer_set(const CampaignState& state, const ParameterGrid& grid,
                           const AlgoConfig& config);
Mask compute_expander_set(const CampaignState& state, const ParameterGrid& grid,
                          const AlgoConfig& config);

/// Acquisition rules resolved against a state (masks must be current).
Eigen::Index next_point_safeopt(const CampaignState& state, const ParameterGrid& grid,
                                const AlgoConfig& config);
Eigen::Index next_point_stageopt(const CampaignState& state, const ParameterGrid& grid,
                                 const AlgoConfig& config);
Eigen::Index next_point_shrink(const CampaignState& state, const ParameterGrid& grid,
                               const AlgoConfig& config);

/// Full campaign: evaluates the initializer points, fits both GPs, derives the
/// initial safe set and then iterates select -> measure -> update for
/// config.max_iterations iterations. The returned history includes the
/// initializer evaluations; the best point is the evaluated point with the
/// lowest measured objective among those with measured constraint <= T.
CampaignResult run_campaign(PlantInterface& plant, const ParameterGrid& grid,
                            const KernelSetup& objective, const KernelSetup& constraint,
                            const AlgoConfig& config,
                            const std::vector<Eigen::VectorXd>& init_points,
                            const CampaignObserver& observer = {});

/// Continues from a prepared state (e.g. the output of transfer_context)
/// without evaluating initializers.
CampaignResult continue_campaign(PlantInterface& plant, const ParameterGrid& grid,
                                 CampaignState state, const AlgoConfig& config,
                                 const CampaignObserver& observer = {});

struct TransferReport {
    CampaignState state;
    /// Context-kernel discount applied to knowledge from each distinct
    /// previous context (order of first appearance in the history).
    std::vector<std::pair<Eigen::VectorXd, double>> inflation_factors;
};

/// Rebuilds contextual GP models from a previous campaign's history (all
/// observations keep their original context tags) and computes the initial
/// safe set as seen from `new_context`. The grid passed in must already carry
/// `new_context`. Both specs must be contextual and every history entry must
/// be context-tagged.
TransferReport transfer_context(const std::vector<HistoryEntry>& previous_history,
                                const gp::KernelSpec& objective_spec,
                                const gp::KernelSpec& constraint_spec,
                                const Eigen::VectorXd& new_context, const ParameterGrid& grid,
                                const AlgoConfig& config);

}  // namespace safetune::sbo
