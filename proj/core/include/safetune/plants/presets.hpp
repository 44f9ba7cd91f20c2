#pragma once

#include <optional>
#include <string>
#include <vector>

#include "safetune/gp/kernel.hpp"
#include "safetune/sbo/grid.hpp"

namespace safetune::plants {

/// Named bundle of GP hyperparameters, thresholds and grid definition for one
/// campaign family. Prior means are left unset here; the campaign fills them
/// (objective: mean of initializer measurements, constraint: the safety
/// threshold) unless a config pins explicit values.
struct HyperparameterPreset {
    std::string name;
    std::string notes;
    gp::KernelSpec objective;
    gp::KernelSpec constraint;
    double safety_threshold = 0.0;
    std::optional<double> objective_threshold;
    Eigen::VectorXd grid_lo, grid_hi;
    std::vector<int> grid_counts;
    std::vector<Eigen::VectorXd> default_init_points;

    sbo::ParameterGrid make_grid() const {
        return sbo::ParameterGrid::uniform(grid_lo, grid_hi, grid_counts);
    }
};

/// Throws config_error for unknown names.
HyperparameterPreset load_preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace safetune::plants
