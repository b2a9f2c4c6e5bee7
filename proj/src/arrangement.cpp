#include "mlcd/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mlcd {

namespace {

// Unit normals orthogonal to the (d-1)-subsets of the generator directions;
// these are the facet normals of any zonotope built from those generators.
std::vector<Vec> zonotope_facet_normals(const std::vector<Vec>& generators, int d) {
    std::vector<Vec> normals;
    if (d == 1) {
        normals.push_back(Vec::Ones(1));
        return normals;
    }
    std::vector<int> pick(static_cast<std::size_t>(d - 1));
    const int n = static_cast<int>(generators.size());

    auto emit = [&]() {
        Mat m(d - 1, d);
        for (int r = 0; r < d - 1; ++r) m.row(r) = generators[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])];
        Eigen::FullPivLU<Mat> lu(m);
        lu.setThreshold(1e-10);
        if (lu.rank() != d - 1) return;  // not a facet direction
        const Mat kernel = lu.kernel();
        Vec normal = kernel.col(0);
        normal.normalize();
        normals.push_back(normal);
    };

    // all combinations of size d-1
    for (int i = 0; i < d - 1; ++i) pick[static_cast<std::size_t>(i)] = i;
    for (;;) {
        emit();
        int i = d - 2;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - (d - 1) + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < d - 1; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return normals;
}

}  // namespace

Arrangement extract_arrangement(const ConstrainedNet& net, const HyperRectangle& domain) {
    if (!check_span(net))
        throw std::invalid_argument("extract_arrangement: directions do not span the space");
    const int d = net.d;
    Arrangement arr;
    arr.directions.resize(d, d);
    arr.cuts.resize(static_cast<std::size_t>(d));
    arr.is_bound.resize(static_cast<std::size_t>(d));

    for (int i = 0; i < d; ++i) {
        Vec u = net.directions.row(i);
        const double len = u.norm();
        u /= len;
        // canonical sign: largest-magnitude component positive
        int arg = 0;
        for (int c = 1; c < d; ++c)
            if (std::abs(u[c]) > std::abs(u[arg])) arg = c;
        const double flip = u[arg] < 0.0 ? -1.0 : 1.0;
        u *= flip;
        arr.directions.row(i) = u;

        const auto [t_min, t_max] = domain.project(u);
        const double tol = 1e-9 * std::max({1.0, std::abs(t_min), std::abs(t_max)});

        std::vector<double> levels;
        for (int m = 0; m < net.q; ++m)
            for (int j = 0; j <= 1; ++j)
                levels.push_back(flip * (static_cast<double>(j) - net.offsets(i, m)) / len);
        std::sort(levels.begin(), levels.end());

        std::vector<double> cuts{t_min};
        std::vector<char> bound{1};
        for (double level : levels) {
            if (level <= t_min + tol || level >= t_max - tol) continue;  // clipped
            if (level - cuts.back() <= tol) continue;                    // deduplicated
            cuts.push_back(level);
            bound.push_back(0);
        }
        cuts.push_back(t_max);
        bound.push_back(1);
        arr.cuts[static_cast<std::size_t>(i)] = std::move(cuts);
        arr.is_bound[static_cast<std::size_t>(i)] = std::move(bound);
    }
    return arr;
}

Vec CellGrid::cell_corner(const std::vector<int>& cell, unsigned corner_mask) const {
    const int d = arrangement.dim();
    Vec t(d);
    for (int i = 0; i < d; ++i) {
        const int offset = (corner_mask >> i) & 1u;
        t[i] = arrangement.cuts[static_cast<std::size_t>(i)]
                              [static_cast<std::size_t>(cell[static_cast<std::size_t>(i)] + offset)];
    }
    return corner_solver * t;
}

CellGrid enumerate_cells(const Arrangement& arr, const HyperRectangle& domain) {
    const int d = arr.dim();
    CellGrid grid;
    grid.arrangement = arr;
    grid.domain = domain;
    grid.corner_solver = arr.directions.inverse();

    // Difference-zonotope generator directions: cell edges (columns of the
    // direction inverse) plus the box axes.
    std::vector<Vec> gen_dirs;
    for (int i = 0; i < d; ++i) gen_dirs.push_back(grid.corner_solver.col(i));
    for (int i = 0; i < d; ++i) gen_dirs.push_back(Vec::Unit(d, i));
    const auto normals = zonotope_facet_normals(gen_dirs, d);

    // Per-normal dot products with all generator directions, fixed per grid.
    const std::size_t n_normals = normals.size();
    Mat cell_dots(static_cast<Eigen::Index>(n_normals), d);
    Mat box_dots(static_cast<Eigen::Index>(n_normals), d);
    for (std::size_t k = 0; k < n_normals; ++k)
        for (int i = 0; i < d; ++i) {
            cell_dots(static_cast<Eigen::Index>(k), i) = std::abs(normals[k].dot(gen_dirs[static_cast<std::size_t>(i)]));
            box_dots(static_cast<Eigen::Index>(k), i) = std::abs(normals[k][i]);
        }

    const Vec box_center = domain.center();
    const Vec box_half = domain.half_width();

    std::vector<int> sizes(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        sizes[static_cast<std::size_t>(i)] = static_cast<int>(arr.cuts[static_cast<std::size_t>(i)].size()) - 1;

    std::vector<int> cell(static_cast<std::size_t>(d), 0);
    Vec t_mid(d), t_half(d);
    for (;;) {
        for (int i = 0; i < d; ++i) {
            const auto& cuts = arr.cuts[static_cast<std::size_t>(i)];
            const double lo = cuts[static_cast<std::size_t>(cell[static_cast<std::size_t>(i)])];
            const double hi = cuts[static_cast<std::size_t>(cell[static_cast<std::size_t>(i)]) + 1];
            t_mid[i] = 0.5 * (lo + hi);
            t_half[i] = 0.5 * (hi - lo);
        }
        const Vec center = grid.corner_solver * t_mid - box_center;

        bool separated = false;
        for (std::size_t k = 0; k < n_normals && !separated; ++k) {
            double reach = 0.0;
            for (int i = 0; i < d; ++i)
                reach += t_half[i] * cell_dots(static_cast<Eigen::Index>(k), i) +
                         box_half[i] * box_dots(static_cast<Eigen::Index>(k), i);
            const double gap = std::abs(normals[k].dot(center));
            if (gap > reach + 1e-9 * std::max(1.0, reach)) separated = true;
        }
        if (!separated) grid.cells.push_back(cell);

        int axis = d - 1;
        while (axis >= 0 && ++cell[static_cast<std::size_t>(axis)] ==
                                sizes[static_cast<std::size_t>(axis)]) {
            cell[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return grid;
}

std::size_t RegionAssignment::count_tag(int tag) const {
    std::size_t n = 0;
    for (int t : tags)
        if (t == tag) ++n;
    return n;
}

RegionAssignment classify_cells(const ConstrainedNet& net, const CellGrid& grid, double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("classify_cells: eps must lie in (0, 0.5)");
    const int d = grid.arrangement.dim();

    // Shared-corner cache keyed by the mixed-radix corner index.
    std::vector<std::size_t> stride(static_cast<std::size_t>(d), 1);
    for (int i = d - 2; i >= 0; --i)
        stride[static_cast<std::size_t>(i)] =
            stride[static_cast<std::size_t>(i + 1)] *
            grid.arrangement.cuts[static_cast<std::size_t>(i + 1)].size();
    const std::size_t n_corners =
        stride[0] * grid.arrangement.cuts[0].size();
    std::vector<double> cache(n_corners, std::numeric_limits<double>::quiet_NaN());

    auto corner_value = [&](const std::vector<int>& cell, unsigned mask) {
        std::size_t key = 0;
        for (int i = 0; i < d; ++i)
            key += stride[static_cast<std::size_t>(i)] *
                   static_cast<std::size_t>(cell[static_cast<std::size_t>(i)] + ((mask >> i) & 1u));
        double& slot = cache[key];
        if (std::isnan(slot)) slot = forward(net, grid.cell_corner(cell, mask));
        return slot;
    };

    RegionAssignment ra;
    ra.num_labels = net.num_labels;
    ra.epsilon = eps;
    ra.directions = grid.arrangement.directions;
    ra.cuts = grid.arrangement.cuts;
    ra.cells = grid.cells;
    ra.tags.assign(grid.cells.size(), kUncertain);

    const unsigned corner_total = 1u << d;
    for (std::size_t c = 0; c < grid.cells.size(); ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (unsigned mask = 0; mask < corner_total; ++mask) {
            const double v = corner_value(grid.cells[c], mask);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        for (int k = 0; k < net.num_labels; ++k) {
            if (std::abs(lo - k) <= eps && std::abs(hi - k) <= eps) {
                ra.tags[c] = k;
                break;
            }
        }
    }
    return ra;
}

std::string region_to_json(const RegionAssignment& ra) {
    nlohmann::json j;
    j["num_labels"] = ra.num_labels;
    j["epsilon"] = ra.epsilon;
    for (Eigen::Index i = 0; i < ra.directions.rows(); ++i) {
        std::vector<double> row(ra.directions.row(i).begin(), ra.directions.row(i).end());
        j["directions"].push_back(row);
    }
    j["cuts"] = ra.cuts;
    j["cells"] = nlohmann::json::array();
    for (std::size_t c = 0; c < ra.cells.size(); ++c) {
        nlohmann::json cell;
        cell["index"] = ra.cells[c];
        cell["tag"] = ra.tags[c] == kUncertain ? "U" : "N" + std::to_string(ra.tags[c]);
        j["cells"].push_back(cell);
    }
    return j.dump(2);
}

RegionAssignment region_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    RegionAssignment ra;
    ra.num_labels = j.at("num_labels").get<int>();
    ra.epsilon = j.at("epsilon").get<double>();
    const auto& dirs = j.at("directions");
    const auto d = static_cast<Eigen::Index>(dirs.size());
    ra.directions.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index c = 0; c < d; ++c)
            ra.directions(i, c) = dirs.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c)).get<double>();
    ra.cuts = j.at("cuts").get<std::vector<std::vector<double>>>();
    for (const auto& cell : j.at("cells")) {
        ra.cells.push_back(cell.at("index").get<std::vector<int>>());
        const auto tag = cell.at("tag").get<std::string>();
        ra.tags.push_back(tag == "U" ? kUncertain : std::stoi(tag.substr(1)));
    }
    return ra;
}

std::string region_cells_csv(const RegionAssignment& ra) {
    if (ra.directions.rows() != 2)
        throw std::invalid_argument("region_cells_csv: plot data is 2-D only");
    const Mat solver = ra.directions.inverse();
    std::ostringstream out;
    out.precision(17);
    out << "cell,corner,x1,x2,tag\n";
    // corner order traces the cell polygon: (lo,lo), (hi,lo), (hi,hi), (lo,hi)
    const int order[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (std::size_t c = 0; c < ra.cells.size(); ++c) {
        const std::string tag =
            ra.tags[c] == kUncertain ? "U" : "N" + std::to_string(ra.tags[c]);
        for (int v = 0; v < 4; ++v) {
            Vec t(2);
            for (int i = 0; i < 2; ++i)
                t[i] = ra.cuts[static_cast<std::size_t>(i)][static_cast<std::size_t>(
                    ra.cells[c][static_cast<std::size_t>(i)] + order[v][i])];
            const Vec x = solver * t;
            out << c << ',' << v << ',' << x[0] << ',' << x[1] << ',' << tag << '\n';
        }
    }
    return out.str();
}

}  // namespace mlcd
