#pragma once

#include <optional>
#include <string>

namespace safetune::sbo {

enum class Algorithm { SafeOpt, StageOpt, ShrinkAlgo };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);  // throws config_error

/// Knobs of one optimization campaign.
///
/// `switch_iteration` is the last iteration run with the plain safeOpt rule;
/// stageOpt and shrinkAlgo change behavior from the following iteration on.
struct AlgoConfig {
    Algorithm algorithm = Algorithm::SafeOpt;
    double safety_threshold = 0.0;                 // T, constraint units
    std::optional<double> objective_threshold;     // T_o, shrinkAlgo only
    int switch_iteration = 0;                      // N_s
    int max_iterations = 0;                        // N_max
    double confidence_multiplier = 2.0;            // beta
    bool use_expander = true;                      // shrinkAlgo option

    /// Throws config_error on inconsistent settings (e.g. T_o without
    /// shrinkAlgo, N_s >= N_max for staged algorithms, beta <= 0).
    void validate() const;

    /// True when iteration (1-based) uses the post-switch rule.
    bool switched(int iteration) const {
        return algorithm != Algorithm::SafeOpt && iteration > switch_iteration;
    }
};

}  // namespace safetune::sbo
