#pragma once

#include <vector>

#include <Eigen/Core>

namespace safetune::sbo {

/// Finite discretization of the control-parameter domain: the Cartesian
/// product of per-dimension sorted axes, indexed with the last axis fastest.
/// An optional fixed context vector is appended to every point when building
/// kernel queries, so a whole grid can be pinned to one operating condition.
class ParameterGrid {
public:
    ParameterGrid() = default;
    explicit ParameterGrid(std::vector<Eigen::VectorXd> axes);

    /// Uniform grid: counts[i] points linearly spaced over [lo[i], hi[i]].
    static ParameterGrid uniform(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                 const std::vector<int>& counts);

    Eigen::Index size() const { return points_.rows(); }
    int dim() const { return static_cast<int>(axes_.size()); }
    const std::vector<Eigen::VectorXd>& axes() const { return axes_; }

    /// All grid points, one per row.
    const Eigen::MatrixXd& points() const { return points_; }
    Eigen::VectorXd point(Eigen::Index i) const { return points_.row(i); }

    void set_context(Eigen::VectorXd context) { context_ = std::move(context); }
    const Eigen::VectorXd& context() const { return context_; }
    bool has_context() const { return context_.size() > 0; }

    /// Points with the fixed context columns appended; the query matrix fed to
    /// GP models.
    Eigen::MatrixXd query_matrix() const;

    /// Index of the grid point closest (Euclidean) to `p`.
    Eigen::Index nearest_index(const Eigen::Ref<const Eigen::VectorXd>& p) const;

    /// True if p lies inside the axis-aligned bounding box of the grid.
    bool contains(const Eigen::Ref<const Eigen::VectorXd>& p) const;

private:
    std::vector<Eigen::VectorXd> axes_;
    Eigen::MatrixXd points_;
    Eigen::VectorXd context_;
};

}  // namespace safetune::sbo
