#include "safetune/gp/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "safetune/errors.hpp"

namespace safetune::gp {

namespace {
constexpr double kNoiseVarFloor = 1e-10;
}

Eigen::VectorXd Observation::stacked() const {
    Eigen::VectorXd x(point.size() + context.size());
    x.head(point.size()) = point;
    if (context.size() > 0) x.tail(context.size()) = context;
    return x;
}

GPModel::GPModel(KernelSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    noise_var_ = std::max(spec_.noise_std * spec_.noise_std, kNoiseVarFloor);
    inputs_.resize(0, spec_.input_dim());
}

void GPModel::check_dims(const Observation& obs) const {
    if (obs.point.size() != spec_.param_dim())
        throw input_error("GPModel: observation point dimension " +
                          std::to_string(obs.point.size()) + " != kernel dimension " +
                          std::to_string(spec_.param_dim()));
    if (obs.context.size() != spec_.context_dim())
        throw input_error("GPModel: observation context dimension " +
                          std::to_string(obs.context.size()) + " != kernel context dimension " +
                          std::to_string(spec_.context_dim()));
    if (!std::isfinite(obs.value)) throw input_error("GPModel: non-finite observation value");
}

Eigen::VectorXd GPModel::kernel_column(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const Eigen::Index n = inputs_.rows();
    Eigen::VectorXd k(n);
    for (Eigen::Index i = 0; i < n; ++i) k(i) = kernel_eval(spec_, inputs_.row(i), x);
    return k;
}

void GPModel::add_observation(const Observation& obs) {
    check_dims(obs);
    const Eigen::Index n = inputs_.rows();
    const Eigen::VectorXd x = obs.stacked();

    // Extend the Cholesky factor: new row b = L^-1 k, pivot d = sqrt(k(x,x) +
    // sigma^2 - b.b). The pivot is clamped so numerically coincident points at
    // the noise floor cannot produce a zero pivot.
    Eigen::VectorXd k = kernel_column(x);
    Eigen::VectorXd b(n);
    if (n > 0) b = chol_.topLeftCorner(n, n).triangularView<Eigen::Lower>().solve(k);
    double d2 = spec_.amplitude + noise_var_ - (n > 0 ? b.squaredNorm() : 0.0);
    if (!std::isfinite(d2))
        throw numerical_error("GPModel: non-finite Cholesky pivot while adding observation");
    d2 = std::max(d2, kNoiseVarFloor * 1e-3);
    const double d = std::sqrt(d2);

    chol_.conservativeResize(n + 1, n + 1);
    if (n > 0) {
        chol_.block(0, n, n, 1).setZero();
        chol_.block(n, 0, 1, n) = b.transpose();
    }
    chol_(n, n) = d;

    inputs_.conservativeResize(n + 1, Eigen::NoChange);
    inputs_.row(n) = x.transpose();
    values_.conservativeResize(n + 1);
    values_(n) = obs.value;
    obs_.push_back(obs);

    const double centered = obs.value - spec_.prior_mean;
    white_.conservativeResize(n + 1);
    white_(n) = (centered - (n > 0 ? b.dot(white_.head(n)) : 0.0)) / d;
    alpha_ = chol_.triangularView<Eigen::Lower>().transpose().solve(white_);
}

GPModel GPModel::with_observation(const Observation& obs) const {
    GPModel next = *this;
    next.add_observation(obs);
    return next;
}

PosteriorResult GPModel::posterior(const Eigen::Ref<const Eigen::MatrixXd>& queries) const {
    if (queries.cols() != spec_.input_dim())
        throw input_error("GPModel::posterior: query dimension " + std::to_string(queries.cols()) +
                          " != kernel dimension " + std::to_string(spec_.input_dim()));
    const Eigen::Index g = queries.rows();
    const Eigen::Index n = inputs_.rows();
    PosteriorResult out;
    out.mean.resize(g);
    out.variance.resize(g);
    if (n == 0) {
        out.mean.setConstant(spec_.prior_mean);
        out.variance.setConstant(spec_.amplitude);
        return out;
    }
    for (Eigen::Index q = 0; q < g; ++q) {
        const Eigen::VectorXd k = kernel_column(queries.row(q));
        const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k);
        out.mean(q) = k.dot(alpha_) + spec_.prior_mean;
        out.variance(q) = spec_.amplitude - v.squaredNorm();
    }
    return out;
}

PosteriorResult GPModel::hypothetical_posterior(
    const Observation& artificial, const Eigen::Ref<const Eigen::MatrixXd>& queries) const {
    check_dims(artificial);
    if (queries.cols() != spec_.input_dim())
        throw input_error("GPModel::hypothetical_posterior: query dimension mismatch");
    const Eigen::Index g = queries.rows();
    const Eigen::Index n = inputs_.rows();
    const Eigen::VectorXd xa = artificial.stacked();

    // Row extension of the factor for the artificial point, kept on the stack.
    Eigen::VectorXd b(n);
    double bw = 0.0;
    if (n > 0) {
        b = chol_.triangularView<Eigen::Lower>().solve(kernel_column(xa));
        bw = b.dot(white_);
    }
    double d2 = spec_.amplitude + noise_var_ - (n > 0 ? b.squaredNorm() : 0.0);
    d2 = std::max(d2, kNoiseVarFloor * 1e-3);
    const double d = std::sqrt(d2);
    const double white_a = (artificial.value - spec_.prior_mean - bw) / d;

    PosteriorResult out;
    out.mean.resize(g);
    out.variance.resize(g);
    for (Eigen::Index q = 0; q < g; ++q) {
        const double ka = kernel_eval(spec_, xa, queries.row(q));
        double mean = spec_.prior_mean;
        double var = spec_.amplitude;
        double va = ka / d;
        if (n > 0) {
            const Eigen::VectorXd k = kernel_column(queries.row(q));
            const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k);
            va = (ka - b.dot(v)) / d;
            mean = k.dot(alpha_) + spec_.prior_mean;
            var -= v.squaredNorm();
        }
        out.mean(q) = mean + va * white_a;
        out.variance(q) = var - va * va;
    }
    return out;
}

GridPosterior GPModel::grid_posterior(const Eigen::Ref<const Eigen::MatrixXd>& queries) const {
    if (queries.cols() != spec_.input_dim())
        throw input_error("GPModel::grid_posterior: query dimension mismatch");
    const Eigen::Index g = queries.rows();
    const Eigen::Index n = inputs_.rows();

    GridPosterior gp;
    gp.queries_ = queries;
    gp.spec_ = spec_;
    gp.noise_var_ = noise_var_;
    gp.mean_.resize(g);
    gp.var_.resize(g);
    gp.v_.resize(n, g);
    if (n == 0) {
        gp.mean_.setConstant(spec_.prior_mean);
        gp.var_.setConstant(spec_.amplitude);
        return gp;
    }
    Eigen::MatrixXd kxq(n, g);
    for (Eigen::Index q = 0; q < g; ++q) kxq.col(q) = kernel_column(queries.row(q));
    gp.v_ = chol_.triangularView<Eigen::Lower>().solve(kxq);
    gp.mean_ = kxq.transpose() * alpha_;
    gp.mean_.array() += spec_.prior_mean;
    gp.var_ = spec_.amplitude - gp.v_.colwise().squaredNorm().transpose().array();
    return gp;
}

double GridPosterior::covariance(Eigen::Index i, Eigen::Index j) const {
    const double prior = kernel_eval(spec_, queries_.row(i), queries_.row(j));
    if (v_.rows() == 0) return prior;
    return prior - v_.col(i).dot(v_.col(j));
}

Eigen::VectorXd GridPosterior::covariance_with(Eigen::Index anchor) const {
    const Eigen::Index g = queries_.rows();
    Eigen::VectorXd cov(g);
    for (Eigen::Index j = 0; j < g; ++j)
        cov(j) = kernel_eval(spec_, queries_.row(anchor), queries_.row(j));
    if (v_.rows() > 0) cov.noalias() -= v_.transpose() * v_.col(anchor);
    return cov;
}

PosteriorResult GridPosterior::conditioned_on(Eigen::Index anchor, double value) const {
    const Eigen::VectorXd cov = covariance_with(anchor);
    const double denom = var_(anchor) + noise_var_;
    const double gain = (value - mean_(anchor)) / denom;
    PosteriorResult out;
    out.mean = mean_ + cov * gain;
    out.variance = var_ - cov.array().square().matrix() / denom;
    return out;
}

}  // namespace safetune::gp
