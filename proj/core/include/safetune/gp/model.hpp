#pragma once

#include <vector>

#include <Eigen/Core>

#include "safetune/gp/kernel.hpp"

namespace safetune::gp {

/// One measurement: a parameter vector, an optional context vector and the
/// measured scalar value.
struct Observation {
    Eigen::VectorXd point;
    Eigen::VectorXd context;  // empty for non-contextual models
    double value = 0.0;

    Observation() = default;
    Observation(Eigen::VectorXd p, double v) : point(std::move(p)), value(v) {}
    Observation(Eigen::VectorXd p, Eigen::VectorXd z, double v)
        : point(std::move(p)), context(std::move(z)), value(v) {}

    /// Parameter and context coordinates stacked into one kernel input.
    Eigen::VectorXd stacked() const;
};

struct PosteriorResult {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
};

class GridPosterior;

/// Exact Gaussian-process regression with a constant prior mean.
///
/// Observations are centered by the prior mean before solving and the mean is
/// added back to predictions, so a model with no data predicts exactly
/// (prior_mean, amplitude). The Gram factorization is a Cholesky factor that
/// is extended by one row per added observation; a full refit is never
/// required. The effective noise variance is floored at 1e-10 so noise-free
/// plants cannot produce a singular Gram matrix.
///
/// A model is immutable between updates: posterior queries are const and safe
/// to run concurrently; add_observation must be serialized by the caller.
class GPModel {
public:
    explicit GPModel(KernelSpec spec);

    const KernelSpec& spec() const { return spec_; }
    const std::vector<Observation>& observations() const { return obs_; }
    int size() const { return static_cast<int>(obs_.size()); }

    /// Extends the cached factorization with one observation (O(n^2)).
    void add_observation(const Observation& obs);

    /// Value-semantics variant of add_observation.
    GPModel with_observation(const Observation& obs) const;

    /// Posterior mean and variance at each row of `queries` (stacked
    /// parameter+context coordinates, one query per row).
    PosteriorResult posterior(const Eigen::Ref<const Eigen::MatrixXd>& queries) const;

    /// Posterior the model WOULD have after add_observation(artificial),
    /// without mutating this model. Implemented as a rank-one extension of the
    /// cached factor, so it costs one O(n^2) solve plus O(n) per query on top
    /// of a plain posterior call.
    PosteriorResult hypothetical_posterior(const Observation& artificial,
                                           const Eigen::Ref<const Eigen::MatrixXd>& queries) const;

    /// Batched posterior over a fixed query set, retaining the intermediate
    /// triangular solves so cross-covariances and what-if updates over the
    /// same set are cheap. Used by the safe-set expander.
    GridPosterior grid_posterior(const Eigen::Ref<const Eigen::MatrixXd>& queries) const;

    /// Effective noise variance used in the solver (includes the floor).
    double noise_variance() const { return noise_var_; }

private:
    friend class GridPosterior;

    void check_dims(const Observation& obs) const;
    Eigen::VectorXd kernel_column(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    KernelSpec spec_;
    std::vector<Observation> obs_;
    double noise_var_ = 0.0;

    Eigen::MatrixXd inputs_;  // n x input_dim stacked observation inputs
    Eigen::VectorXd values_;  // raw measured values
    Eigen::MatrixXd chol_;    // lower Cholesky factor of K_n + sigma^2 I
    Eigen::VectorXd white_;   // L^-1 (y - prior_mean)
    Eigen::VectorXd alpha_;   // (K_n + sigma^2 I)^-1 (y - prior_mean)
};

/// Snapshot of a model's posterior over a fixed set of query points.
///
/// Stores V = L^-1 K(X, Q), which makes the posterior covariance between two
/// query indices and the effect of a hypothetical observation at one index on
/// all others O(n) instead of O(n^2).
class GridPosterior {
public:
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::VectorXd& variance() const { return var_; }
    Eigen::Index size() const { return mean_.size(); }
    double noise_variance() const { return noise_var_; }

    /// Posterior covariance between query points i and j.
    double covariance(Eigen::Index i, Eigen::Index j) const;

    /// Posterior covariance between query point `anchor` and every query.
    Eigen::VectorXd covariance_with(Eigen::Index anchor) const;

    /// Mean and variance at all queries after conditioning on a hypothetical
    /// observation (queries[anchor], value). Equivalent to
    /// GPModel::hypothetical_posterior at the query set, to solver precision.
    PosteriorResult conditioned_on(Eigen::Index anchor, double value) const;

private:
    friend class GPModel;

    Eigen::MatrixXd queries_;  // G x input_dim
    Eigen::MatrixXd v_;        // n x G, L^-1 K(X, Q)
    Eigen::VectorXd mean_, var_;
    double noise_var_ = 0.0;
    KernelSpec spec_;
};

}  // namespace safetune::gp
