#include "safetune/gp/kernel.hpp"

#include <cmath>
#include <string>

#include "safetune/errors.hpp"

namespace safetune::gp {

void KernelSpec::validate() const {
    if (length_scales.size() == 0)
        throw input_error("KernelSpec: length_scales must not be empty");
    if ((length_scales.array() <= 0.0).any())
        throw input_error("KernelSpec: all length_scales must be > 0");
    if (context_length_scales.size() > 0 && (context_length_scales.array() <= 0.0).any())
        throw input_error("KernelSpec: all context_length_scales must be > 0");
    if (amplitude < 0.0) throw input_error("KernelSpec: amplitude must be >= 0");
    if (noise_std < 0.0) throw input_error("KernelSpec: noise_std must be >= 0");
    if (!std::isfinite(amplitude) || !std::isfinite(noise_std) || !std::isfinite(prior_mean))
        throw input_error("KernelSpec: non-finite hyperparameter");
}

namespace {

double sq_distance(const Eigen::Ref<const Eigen::VectorXd>& scales,
                   const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b) {
    return ((a - b).array() / scales.array()).square().sum();
}

}  // namespace

double kernel_eval(const KernelSpec& spec,
                   const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b) {
    const int d = spec.input_dim();
    if (a.size() != d || b.size() != d)
        throw input_error("kernel_eval: input dimension " + std::to_string(a.size()) + "/" +
                          std::to_string(b.size()) + " does not match spec dimension " +
                          std::to_string(d));
    const int np = spec.param_dim();
    double k = spec.amplitude *
               std::exp(-0.5 * sq_distance(spec.length_scales, a.head(np), b.head(np)));
    if (spec.contextual()) {
        k *= std::exp(-0.5 * sq_distance(spec.context_length_scales, a.tail(spec.context_dim()),
                                         b.tail(spec.context_dim())));
    }
    return k;
}

double context_factor(const KernelSpec& spec,
                      const Eigen::Ref<const Eigen::VectorXd>& z_a,
                      const Eigen::Ref<const Eigen::VectorXd>& z_b) {
    if (!spec.contextual()) return 1.0;
    if (z_a.size() != spec.context_dim() || z_b.size() != spec.context_dim())
        throw input_error("context_factor: context dimension mismatch");
    return std::exp(-0.5 * sq_distance(spec.context_length_scales, z_a, z_b));
}

}  // namespace safetune::gp
