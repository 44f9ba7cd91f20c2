#include "safetune/sbo/grid.hpp"

#include <string>

#include "safetune/errors.hpp"

namespace safetune::sbo {

ParameterGrid::ParameterGrid(std::vector<Eigen::VectorXd> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw input_error("ParameterGrid: no axes");
    Eigen::Index total = 1;
    for (const auto& ax : axes_) {
        if (ax.size() == 0) throw input_error("ParameterGrid: empty axis");
        for (Eigen::Index i = 1; i < ax.size(); ++i)
            if (!(ax(i) > ax(i - 1)))
                throw input_error("ParameterGrid: axis values must be strictly increasing");
        total *= ax.size();
    }
    points_.resize(total, static_cast<Eigen::Index>(axes_.size()));
    // Last axis fastest; the flat index is the mixed-radix encoding of the
    // per-axis indices, which fixes the tie-break order everywhere downstream.
    for (Eigen::Index flat = 0; flat < total; ++flat) {
        Eigen::Index rem = flat;
        for (int d = static_cast<int>(axes_.size()) - 1; d >= 0; --d) {
            const Eigen::Index len = axes_[d].size();
            points_(flat, d) = axes_[d](rem % len);
            rem /= len;
        }
    }
}

ParameterGrid ParameterGrid::uniform(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                     const std::vector<int>& counts) {
    if (lo.size() != hi.size() || static_cast<size_t>(lo.size()) != counts.size())
        throw input_error("ParameterGrid::uniform: lo/hi/counts size mismatch");
    std::vector<Eigen::VectorXd> axes;
    for (Eigen::Index d = 0; d < lo.size(); ++d) {
        if (counts[d] < 1) throw input_error("ParameterGrid::uniform: counts must be >= 1");
        if (counts[d] > 1 && !(hi(d) > lo(d)))
            throw input_error("ParameterGrid::uniform: hi must exceed lo");
        axes.push_back(Eigen::VectorXd::LinSpaced(counts[d], lo(d), hi(d)));
    }
    return ParameterGrid(std::move(axes));
}

Eigen::MatrixXd ParameterGrid::query_matrix() const {
    if (!has_context()) return points_;
    Eigen::MatrixXd q(points_.rows(), points_.cols() + context_.size());
    q.leftCols(points_.cols()) = points_;
    q.rightCols(context_.size()).rowwise() = context_.transpose();
    return q;
}

Eigen::Index ParameterGrid::nearest_index(const Eigen::Ref<const Eigen::VectorXd>& p) const {
    if (p.size() != points_.cols())
        throw input_error("ParameterGrid::nearest_index: dimension mismatch");
    Eigen::Index best = 0;
    (points_.rowwise() - p.transpose()).rowwise().squaredNorm().minCoeff(&best);
    return best;
}

bool ParameterGrid::contains(const Eigen::Ref<const Eigen::VectorXd>& p) const {
    if (p.size() != static_cast<Eigen::Index>(axes_.size())) return false;
    for (size_t d = 0; d < axes_.size(); ++d) {
        const auto& ax = axes_[d];
        if (p(static_cast<Eigen::Index>(d)) < ax(0) ||
            p(static_cast<Eigen::Index>(d)) > ax(ax.size() - 1))
            return false;
    }
    return true;
}

}  // namespace safetune::sbo
