#include "safetune/plants/demo.hpp"

#include <cmath>
#include <string>

#include "safetune/errors.hpp"

namespace safetune::plants {

double demo_objective(double p) {
    return 100.0 * (3.0 * std::sin(2.0 * std::pow(p + 1.0, 0.8)) - 0.4 * p + 7.0);
}

double demo1_constraint(double p) {
    return 10.0 / std::pow(p + 2.0, 0.4) + 0.1 * (p - 3.0) * (p - 3.0) - 4.0;
}

double demo2_constraint(double p) {
    return 10.0 / std::pow(p + 2.0, 0.4) +
           0.1 * (p - 4.0) * (p - 4.0) * (1.0 - 0.7 * std::sin(0.55 * p)) - 4.0;
}

namespace {

void check_domain(double p, double hi, const char* name) {
    if (!(p >= 0.0 && p <= hi))
        throw input_error(std::string(name) + ": p = " + std::to_string(p) +
                          " outside domain [0, " + std::to_string(hi) + "]");
}

}  // namespace

sbo::PlantInterface::Measurement demo1_eval(double p) {
    check_domain(p, 10.0, "demo1_eval");
    return {demo_objective(p), demo1_constraint(p)};
}

sbo::PlantInterface::Measurement demo2_eval(double p) {
    check_domain(p, 16.0, "demo2_eval");
    return {demo_objective(p), demo2_constraint(p)};
}

AnalyticPlant::AnalyticPlant(Kind kind, double noise_std_objective, double noise_std_constraint,
                             std::uint64_t seed)
    : kind_(kind), noise_o_(noise_std_objective), noise_c_(noise_std_constraint), rng_(seed) {
    if (noise_o_ < 0.0 || noise_c_ < 0.0)
        throw input_error("AnalyticPlant: noise stds must be >= 0");
}

sbo::PlantInterface::Measurement AnalyticPlant::evaluate(const Eigen::VectorXd& point,
                                                         const Eigen::VectorXd& context) {
    if (point.size() != 1) throw input_error("AnalyticPlant: expects a 1-D parameter");
    double p = point(0);
    check_domain(p, domain_max(), "AnalyticPlant");

    // The contextual variant shifts both curves along p with the operating
    // condition; the formulas remain evaluable slightly outside the nominal
    // domain, so the shifted coordinate is not re-checked.
    if (kind_ == Kind::Demo1Context) {
        if (context.size() != 1)
            throw input_error("AnalyticPlant: contextual variant needs a 1-D context");
        p -= (context(0) - kContextReference);
    }

    Measurement m;
    m.objective = demo_objective(p);
    m.constraint = kind_ == Kind::Demo2 ? demo2_constraint(p) : demo1_constraint(p);
    if (noise_o_ > 0.0) m.objective += noise_o_ * rng_.gaussian();
    if (noise_c_ > 0.0) m.constraint += noise_c_ * rng_.gaussian();
    return m;
}

std::string AnalyticPlant::description() const {
    switch (kind_) {
        case Kind::Demo1: return "demo1";
        case Kind::Demo2: return "demo2";
        case Kind::Demo1Context: return "demo1-context";
    }
    return "?";
}

}  // namespace safetune::plants
