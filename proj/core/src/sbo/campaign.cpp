#include "safetune/sbo/campaign.hpp"

#include <algorithm>
#include <cmath>

#include "safetune/errors.hpp"

namespace safetune::sbo {

namespace {

struct Snapshot {
    gp::GridPosterior objective, constraint;
    Bounds obj_bounds, con_bounds;
};

Snapshot take_snapshot(const CampaignState& state, const ParameterGrid& grid,
                       const AlgoConfig& config) {
    Snapshot s;
    const Eigen::MatrixXd q = grid.query_matrix();
    s.objective = state.objective_model.grid_posterior(q);
    s.constraint = state.constraint_model.grid_posterior(q);
    const double beta = config.confidence_multiplier;
    s.obj_bounds = bounds_of({s.objective.mean(), s.objective.variance()}, beta);
    s.con_bounds = bounds_of({s.constraint.mean(), s.constraint.variance()}, beta);
    return s;
}

Mask safe_mask_for(const CampaignState& state, const Snapshot& snap, const AlgoConfig& config,
                   int iteration) {
    if (config.algorithm == Algorithm::ShrinkAlgo && config.switched(iteration))
        return safe_mask_shrunk(snap.con_bounds.upper, snap.obj_bounds.upper,
                                config.safety_threshold, *config.objective_threshold);
    return safe_mask_union(snap.con_bounds.upper, state.initial_safe_mask,
                           config.safety_threshold);
}

void require_nonempty_safe(const Mask& safe, const AlgoConfig& config, int iteration) {
    if (mask_count(safe) > 0) return;
    if (config.algorithm == Algorithm::ShrinkAlgo && config.switched(iteration))
        throw campaign_error(
            "no safe set: the objective threshold emptied the safe set at iteration " +
            std::to_string(iteration) + "; raise objective_threshold or switch_iteration");
    throw campaign_error("no safe set: initial points insufficient at iteration " +
                         std::to_string(iteration));
}

bool expander_needed(const AlgoConfig& config, int iteration) {
    if (config.algorithm == Algorithm::ShrinkAlgo && config.switched(iteration))
        return config.use_expander;
    return true;
}

Eigen::Index select_index(const CampaignState& state, const Snapshot& snap,
                          const AlgoConfig& config, int iteration) {
    if (config.switched(iteration)) {
        if (config.algorithm == Algorithm::StageOpt)
            return select_min_lcb(snap.obj_bounds, state.safe_mask);
        // shrinkAlgo post-switch
        if (!config.use_expander) return select_max_width(snap.obj_bounds, state.safe_mask);
    }
    Mask candidates(state.safe_mask.size(), 0);
    for (size_t i = 0; i < candidates.size(); ++i)
        candidates[i] = (state.minimizer_mask[i] || state.expander_mask[i]) ? 1 : 0;
    return select_max_width(snap.obj_bounds, candidates);
}

IterationRecord make_record(int iteration, const Snapshot& snap, const CampaignState& state) {
    IterationRecord rec;
    rec.iteration = iteration;
    rec.objective_mean = snap.objective.mean();
    rec.objective_sigma = snap.objective.variance().cwiseMax(0.0).cwiseSqrt();
    rec.constraint_mean = snap.constraint.mean();
    rec.constraint_sigma = snap.constraint.variance().cwiseMax(0.0).cwiseSqrt();
    rec.safe = state.safe_mask;
    rec.minimizer = state.minimizer_mask;
    rec.expander = state.expander_mask;
    return rec;
}

void update_best(CampaignResult& result, const HistoryEntry& entry, double threshold) {
    if (!(entry.constraint <= threshold)) return;
    if (!result.has_best || entry.objective < result.best_objective) {
        result.has_best = true;
        result.best_point = entry.point;
        result.best_objective = entry.objective;
        result.best_constraint = entry.constraint;
    }
}

double best_or_nan(const CampaignResult& result) {
    return result.has_best ? result.best_objective : std::numeric_limits<double>::quiet_NaN();
}

/// The iterate -> measure -> update loop shared by fresh and transferred
/// campaigns. `state.history` already contains any initializer entries.
void run_loop(PlantInterface& plant, const ParameterGrid& grid, const AlgoConfig& config,
              const CampaignObserver& observer, CampaignState& state, CampaignResult& result) {
    for (int iter = state.iteration + 1; iter <= config.max_iterations; ++iter) {
        state.iteration = iter;
        Snapshot snap = take_snapshot(state, grid, config);
        state.safe_mask = safe_mask_for(state, snap, config, iter);
        require_nonempty_safe(state.safe_mask, config, iter);
        state.minimizer_mask = minimizer_mask(snap.obj_bounds, state.safe_mask);
        state.expander_mask =
            expander_needed(config, iter)
                ? expander_mask(snap.constraint, state.safe_mask, config.safety_threshold,
                                config.confidence_multiplier)
                : Mask(state.safe_mask.size(), 0);

        const Eigen::Index idx = select_index(state, snap, config, iter);
        if (!state.safe_mask[static_cast<size_t>(idx)])
            throw numerical_error("campaign invariant violated: selected point not in safe set");

        const Eigen::VectorXd point = grid.point(idx);
        PlantInterface::Measurement meas;
        try {
            meas = plant.evaluate(point, grid.context());
            if (!std::isfinite(meas.objective) || !std::isfinite(meas.constraint))
                throw plant_error("plant returned non-finite measurement");
        } catch (const plant_error& e) {
            result.status = CampaignStatus::PlantAborted;
            result.message = e.what();
            return;
        }

        HistoryEntry entry;
        entry.iteration = iter;
        entry.point = point;
        entry.context = grid.context();
        entry.objective = meas.objective;
        entry.constraint = meas.constraint;
        entry.safe_set_size = mask_count(state.safe_mask);
        if (meas.constraint > config.safety_threshold) ++result.violation_count;
        update_best(result, entry, config.safety_threshold);
        entry.best_so_far = best_or_nan(result);
        state.history.push_back(entry);

        state.objective_model.add_observation({point, grid.context(), meas.objective});
        state.constraint_model.add_observation({point, grid.context(), meas.constraint});

        if (observer) {
            IterationRecord rec = make_record(iter, snap, state);
            rec.selected = idx;
            rec.selected_point = point;
            observer(rec);
        }
    }
}

Mask initial_safe_mask_from_models(const CampaignState& state, const ParameterGrid& grid,
                                   const AlgoConfig& config) {
    const Bounds con =
        confidence_bounds(state.constraint_model, grid, config.confidence_multiplier);
    Mask mask(grid.size(), 0);
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        if (con.upper(i) < config.safety_threshold) mask[static_cast<size_t>(i)] = 1;
    return mask;
}

}  // namespace

Mask compute_safe_set(const CampaignState& state, const ParameterGrid& grid,
                      const AlgoConfig& config) {
    const Snapshot snap = take_snapshot(state, grid, config);
    Mask mask = safe_mask_for(state, snap, config, state.iteration);
    require_nonempty_safe(mask, config, state.iteration);
    return mask;
}

Mask compute_minimizer_set(const CampaignState& state, const ParameterGrid& grid,
                           const AlgoConfig& config) {
    const Bounds obj = confidence_bounds(state.objective_model, grid, config.confidence_multiplier);
    return minimizer_mask(obj, state.safe_mask);
}

Mask compute_expander_set(const CampaignState& state, const ParameterGrid& grid,
                          const AlgoConfig& config) {
    const auto constraint = state.constraint_model.grid_posterior(grid.query_matrix());
    return expander_mask(constraint, state.safe_mask, config.safety_threshold,
                         config.confidence_multiplier);
}

Eigen::Index next_point_safeopt(const CampaignState& state, const ParameterGrid& grid,
                                const AlgoConfig& config) {
    const Bounds obj = confidence_bounds(state.objective_model, grid, config.confidence_multiplier);
    Mask candidates(state.safe_mask.size(), 0);
    for (size_t i = 0; i < candidates.size(); ++i)
        candidates[i] = (state.minimizer_mask[i] || state.expander_mask[i]) ? 1 : 0;
    return select_max_width(obj, candidates);
}

Eigen::Index next_point_stageopt(const CampaignState& state, const ParameterGrid& grid,
                                 const AlgoConfig& config) {
    const Bounds obj = confidence_bounds(state.objective_model, grid, config.confidence_multiplier);
    return select_min_lcb(obj, state.safe_mask);
}

Eigen::Index next_point_shrink(const CampaignState& state, const ParameterGrid& grid,
                               const AlgoConfig& config) {
    const Bounds obj = confidence_bounds(state.objective_model, grid, config.confidence_multiplier);
    if (!config.use_expander) return select_max_width(obj, state.safe_mask);
    Mask candidates(state.safe_mask.size(), 0);
    for (size_t i = 0; i < candidates.size(); ++i)
        candidates[i] = (state.minimizer_mask[i] || state.expander_mask[i]) ? 1 : 0;
    return select_max_width(obj, candidates);
}

CampaignResult run_campaign(PlantInterface& plant, const ParameterGrid& grid,
                            const KernelSetup& objective, const KernelSetup& constraint,
                            const AlgoConfig& config,
                            const std::vector<Eigen::VectorXd>& init_points,
                            const CampaignObserver& observer) {
    config.validate();
    if (init_points.empty()) throw input_error("run_campaign: init_points must not be empty");

    CampaignResult result;

    // Measure the initializers first; their mean fixes the objective prior.
    std::vector<PlantInterface::Measurement> init_meas;
    init_meas.reserve(init_points.size());
    for (const auto& p : init_points) init_meas.push_back(plant.evaluate(p, grid.context()));

    gp::KernelSpec obj_spec = objective.spec;
    gp::KernelSpec con_spec = constraint.spec;
    if (objective.auto_prior_mean) {
        double sum = 0.0;
        for (const auto& m : init_meas) sum += m.objective;
        obj_spec.prior_mean = sum / static_cast<double>(init_meas.size());
    }
    if (constraint.auto_prior_mean) con_spec.prior_mean = config.safety_threshold;
    result.resolved_objective_spec = obj_spec;
    result.resolved_constraint_spec = con_spec;

    CampaignState state{gp::GPModel(obj_spec), gp::GPModel(con_spec), {}, {}, {}, {}, 0, {}};
    for (size_t i = 0; i < init_points.size(); ++i) {
        state.objective_model.add_observation(
            {init_points[i], grid.context(), init_meas[i].objective});
        state.constraint_model.add_observation(
            {init_points[i], grid.context(), init_meas[i].constraint});
    }

    state.initial_safe_mask = initial_safe_mask_from_models(state, grid, config);
    if (mask_count(state.initial_safe_mask) == 0) {
        // Fall back to the initializer points whose measured constraint is
        // below the threshold, snapped to the grid.
        for (size_t i = 0; i < init_points.size(); ++i)
            if (init_meas[i].constraint < config.safety_threshold)
                state.initial_safe_mask[static_cast<size_t>(grid.nearest_index(init_points[i]))] =
                    1;
    }
    state.safe_mask = state.initial_safe_mask;
    state.minimizer_mask.assign(grid.size(), 0);
    state.expander_mask.assign(grid.size(), 0);

    for (size_t i = 0; i < init_points.size(); ++i) {
        HistoryEntry entry;
        entry.iteration = 0;
        entry.point = init_points[i];
        entry.context = grid.context();
        entry.objective = init_meas[i].objective;
        entry.constraint = init_meas[i].constraint;
        entry.initializer = true;
        entry.safe_set_size = mask_count(state.initial_safe_mask);
        update_best(result, entry, config.safety_threshold);
        entry.best_so_far = best_or_nan(result);
        state.history.push_back(entry);
    }

    if (observer) {
        Snapshot snap = take_snapshot(state, grid, config);
        observer(make_record(0, snap, state));
    }

    try {
        run_loop(plant, grid, config, observer, state, result);
    } catch (const campaign_error& e) {
        result.status = CampaignStatus::CampaignAborted;
        result.message = e.what();
    }

    result.history = state.history;
    result.final_state = std::make_shared<CampaignState>(std::move(state));
    return result;
}

CampaignResult continue_campaign(PlantInterface& plant, const ParameterGrid& grid,
                                 CampaignState state, const AlgoConfig& config,
                                 const CampaignObserver& observer) {
    config.validate();
    CampaignResult result;
    result.resolved_objective_spec = state.objective_model.spec();
    result.resolved_constraint_spec = state.constraint_model.spec();
    for (const auto& entry : state.history) update_best(result, entry, config.safety_threshold);

    try {
        run_loop(plant, grid, config, observer, state, result);
    } catch (const campaign_error& e) {
        result.status = CampaignStatus::CampaignAborted;
        result.message = e.what();
    }
    result.history = state.history;
    result.final_state = std::make_shared<CampaignState>(std::move(state));
    return result;
}

TransferReport transfer_context(const std::vector<HistoryEntry>& previous_history,
                                const gp::KernelSpec& objective_spec,
                                const gp::KernelSpec& constraint_spec,
                                const Eigen::VectorXd& new_context, const ParameterGrid& grid,
                                const AlgoConfig& config) {
    if (!objective_spec.contextual() || !constraint_spec.contextual())
        throw input_error("transfer_context: specs must carry context_length_scales");
    if (new_context.size() != objective_spec.context_dim())
        throw input_error("transfer_context: new_context dimension mismatch");
    if (grid.context().size() != new_context.size() ||
        !(grid.context().array() == new_context.array()).all())
        throw input_error("transfer_context: grid context must equal new_context");

    TransferReport report{
        CampaignState{gp::GPModel(objective_spec), gp::GPModel(constraint_spec),
                      {}, {}, {}, {}, 0, {}},
        {}};
    for (const auto& entry : previous_history) {
        if (entry.context.size() != objective_spec.context_dim())
            throw input_error("transfer_context: history entry missing context tag");
        report.state.objective_model.add_observation({entry.point, entry.context, entry.objective});
        report.state.constraint_model.add_observation(
            {entry.point, entry.context, entry.constraint});

        const bool seen = std::any_of(
            report.inflation_factors.begin(), report.inflation_factors.end(), [&](const auto& f) {
                return f.first.size() == entry.context.size() &&
                       (f.first.array() == entry.context.array()).all();
            });
        if (!seen)
            report.inflation_factors.emplace_back(
                entry.context, gp::context_factor(constraint_spec, entry.context, new_context));
    }

    report.state.initial_safe_mask = initial_safe_mask_from_models(report.state, grid, config);
    if (mask_count(report.state.initial_safe_mask) == 0)
        throw campaign_error("transfer_context: no safe set at the new context");
    report.state.safe_mask = report.state.initial_safe_mask;
    report.state.minimizer_mask.assign(grid.size(), 0);
    report.state.expander_mask.assign(grid.size(), 0);
    return report;
}

}  // namespace safetune::sbo
