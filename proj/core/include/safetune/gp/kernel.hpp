#pragma once

#include <Eigen/Core>

namespace safetune::gp {

/// Hyperparameters of a squared-exponential kernel with constant prior mean.
///
/// `amplitude` is the prior variance k(x,x); the prior standard deviation is
/// sqrt(amplitude). When `context_length_scales` is non-empty the kernel is the
/// product of the parameter kernel and a unit-amplitude squared-exponential
/// over the context coordinates, so the amplitude is not double-counted.
struct KernelSpec {
    double prior_mean = 0.0;
    double amplitude = 1.0;
    Eigen::VectorXd length_scales;
    Eigen::VectorXd context_length_scales;  // empty => non-contextual
    double noise_std = 0.0;

    int param_dim() const { return static_cast<int>(length_scales.size()); }
    int context_dim() const { return static_cast<int>(context_length_scales.size()); }
    int input_dim() const { return param_dim() + context_dim(); }
    bool contextual() const { return context_length_scales.size() > 0; }

    /// Throws input_error on non-positive length scales or negative
    /// amplitude/noise.
    void validate() const;
};

/// Covariance between two stacked inputs (parameter coords followed by
/// context coords). Symmetric by construction.
double kernel_eval(const KernelSpec& spec,
                   const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b);

/// Context-only covariance factor k_phi(z, z') in [0, 1]; returns 1 for a
/// non-contextual spec. This is the factor by which knowledge gathered at one
/// operating condition is discounted at another.
double context_factor(const KernelSpec& spec,
                      const Eigen::Ref<const Eigen::VectorXd>& z_a,
                      const Eigen::Ref<const Eigen::VectorXd>& z_b);

}  // namespace safetune::gp
