#ifndef MLCD_GEOMETRY_HPP
#define MLCD_GEOMETRY_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace mlcd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using PointList = std::vector<Vec>;

/// Axis-aligned box prod_i [lower[i], upper[i]] with lower[i] < upper[i].
struct HyperRectangle {
    Vec lower;
    Vec upper;

    HyperRectangle() = default;
    HyperRectangle(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.size() != upper.size() || lower.size() < 1)
            throw std::invalid_argument("HyperRectangle: bounds must share a dimension >= 1");
        for (Eigen::Index i = 0; i < lower.size(); ++i)
            if (!(lower[i] < upper[i]))
                throw std::invalid_argument("HyperRectangle: lower[i] < upper[i] required");
    }

    int dim() const { return static_cast<int>(lower.size()); }
    Vec center() const { return 0.5 * (lower + upper); }
    Vec half_width() const { return 0.5 * (upper - lower); }
    double diameter() const { return (upper - lower).norm(); }

    bool contains(const Vec& x, double slack = 0.0) const {
        for (Eigen::Index i = 0; i < lower.size(); ++i)
            if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
        return true;
    }

    /// Box scaled about its center by the given factor.
    HyperRectangle inflated(double factor) const {
        const Vec c = center();
        const Vec h = factor * half_width();
        return HyperRectangle(c - h, c + h);
    }

    /// Range of <u, x> over the box.
    std::pair<double, double> project(const Vec& u) const {
        const double mid = u.dot(center());
        const double spread = u.cwiseAbs().dot(half_width());
        return {mid - spread, mid + spread};
    }
};

inline HyperRectangle make_box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
    Vec a(static_cast<Eigen::Index>(lo.size())), b(static_cast<Eigen::Index>(hi.size()));
    Eigen::Index i = 0;
    for (double v : lo) a[i++] = v;
    i = 0;
    for (double v : hi) b[i++] = v;
    return HyperRectangle(std::move(a), std::move(b));
}

}  // namespace mlcd

#endif
