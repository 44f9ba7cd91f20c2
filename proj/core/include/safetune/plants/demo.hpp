#pragma once

#include <memory>

#include "safetune/io/rng.hpp"
#include "safetune/sbo/campaign.hpp"

namespace safetune::plants {

/// Closed-form objective/constraint pairs, optionally with seeded Gaussian
/// measurement noise. Pure modulo the seed: the same seed yields the same
/// measurement sequence.

/// Objective shared by both demo plants (two local minima over the domain).
double demo_objective(double p);

/// Constraint with a single safe interval on [0, 10] under a threshold of 4.
double demo1_constraint(double p);

/// Modified constraint with two disjoint safe intervals on [0, 16].
double demo2_constraint(double p);

/// Raw evaluations with domain checking (throws input_error outside the
/// domain). Noise-free.
sbo::PlantInterface::Measurement demo1_eval(double p);
sbo::PlantInterface::Measurement demo2_eval(double p);

class AnalyticPlant : public sbo::PlantInterface {
public:
    enum class Kind { Demo1, Demo2, Demo1Context };

    AnalyticPlant(Kind kind, double noise_std_objective, double noise_std_constraint,
                  std::uint64_t seed);

    Measurement evaluate(const Eigen::VectorXd& point, const Eigen::VectorXd& context) override;
    std::string description() const override;

    /// Domain of the 1-D parameter.
    double domain_min() const { return 0.0; }
    double domain_max() const { return kind_ == Kind::Demo2 ? 16.0 : 10.0; }

    /// Reference context of the contextual variant: evaluations at other
    /// context values see the curves shifted along p by (z - reference).
    static constexpr double kContextReference = 0.753;

private:
    Kind kind_;
    double noise_o_, noise_c_;
    io::Rng rng_;
};

}  // namespace safetune::plants
