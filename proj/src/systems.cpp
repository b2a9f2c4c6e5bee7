#include "mlcd/systems.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mlcd {

namespace {

// y^n for the Hill exponents in use; n is integral in every catalog system.
double power(double y, double n) {
    const double k = std::round(n);
    if (k == n && k >= 0 && k <= 64) {
        double acc = 1.0, base = y;
        for (auto e = static_cast<unsigned>(k); e > 0; e >>= 1) {
            if (e & 1u) acc *= base;
            base *= base;
        }
        return acc;
    }
    return std::pow(y, n);
}

// dr/dt / r = -prod_k (r - root_k); polynomial, so well defined at r = 0.
double radial_rate(const std::vector<double>& roots, double r) {
    double g = -1.0;
    for (double root : roots) g *= (r - root);
    return g;
}

Vec radial_field(const std::vector<double>& roots, const Vec& y) {
    const double r = y.norm();
    const double g = radial_rate(roots, r);
    Vec dy = g * y;
    dy[0] -= y[1];  // unit angular speed in the (y1, y2)-plane
    dy[1] += y[0];
    return dy;
}

Mat plane_rotation_scale(int d) {
    // 45-degree rotation composed with diag(1, 1/2) in the leading plane.
    Mat t = Mat::Identity(d, d);
    const double c = std::sqrt(0.5);
    t(0, 0) = c * 1.0;
    t(0, 1) = -c * 0.5;
    t(1, 0) = c * 1.0;
    t(1, 1) = c * 0.5;
    return t;
}

HyperRectangle transformed_box_bounds(const Mat& t, double half) {
    // Bounding box of T([-half, half]^d).
    const int d = static_cast<int>(t.rows());
    Vec hw(d);
    for (int i = 0; i < d; ++i) hw[i] = half * t.row(i).cwiseAbs().sum();
    return HyperRectangle(-hw, hw);
}

SystemSpec make_ellipsoidal(int d) {
    SystemSpec sys;
    sys.name = "ellipsoidal_" + std::to_string(d) + "d";
    sys.dim = d;
    sys.kind = FieldKind::TransformedRadial;
    sys.radial_roots = {1.0, 2.0, 3.0};
    sys.transform = plane_rotation_scale(d);
    sys.transform_inv = sys.transform.inverse();
    sys.domain = transformed_box_bounds(sys.transform, 4.0);
    return sys;
}

HillParams hill_periodic_params() {
    HillParams p;
    p.exponent = 10.0;
    p.decay = Vec::Ones(3);
    p.lower = Mat{{0.133, 1.743, 0.0},
                  {0.599, 0.124, 0.245},
                  {0.175, 0.0, 0.458}};
    p.upper = Mat{{0.578, 3.299, 0.0},
                  {1.994, 0.725, 5.205},
                  {1.737, 0.0, 2.164}};
    p.threshold = Mat{{0.363, 1.531, 0.0},
                      {2.036, 0.862, 0.233},
                      {0.818, 0.0, 0.168}};
    p.sign = Eigen::MatrixXi{{1, -1, 0},
                             {-1, 1, -1},
                             {-1, 0, 1}};
    return p;
}

HillParams emt_params() {
    HillParams p;
    p.exponent = 10.0;
    p.decay = Vec::Ones(6);
    p.lower = Mat{{0.0, 0.0, 0.318, 0.0, 0.0, 0.0},
                  {0.148, 0.0, 0.0, 0.0, 0.610, 0.0},
                  {0.0, 1.210, 0.510, 0.0, 1.054, 0.993},
                  {0.150, 0.0, 0.0, 0.0, 0.6454, 0.0},
                  {0.0, 1.024, 0.0, 0.707, 0.0, 0.684},
                  {0.0, 0.0, 0.533, 0.0, 0.0, 0.0}};
    p.upper = Mat{{0.0, 0.0, 1.316, 0.0, 0.0, 0.0},
                  {0.520, 0.0, 0.0, 0.0, 2.037, 0.0},
                  {0.0, 1.442, 0.965, 0.0, 2.056, 3.917},
                  {0.670, 0.0, 0.0, 0.0, 3.622, 0.0},
                  {0.0, 2.113, 0.0, 3.720, 0.0, 1.291},
                  {0.0, 0.0, 1.239, 0.0, 0.0, 0.0}};
    p.threshold = Mat{{0.0, 0.0, 0.250, 0.0, 0.0, 0.0},
                      {1.312, 0.0, 0.0, 0.0, 1.779, 0.0},
                      {0.0, 0.668, 0.206, 0.0, 0.478, 0.166},
                      {1.333, 0.0, 0.0, 0.0, 2.881, 0.0},
                      {0.0, 5.698, 0.0, 1.676, 0.0, 0.950},
                      {0.0, 0.0, 0.705, 0.0, 0.0, 0.0}};
    // Only x1 -> x3 and x3 -> x5 activate; every other edge represses.
    p.sign = Eigen::MatrixXi{{0, 0, 1, 0, 0, 0},
                             {-1, 0, 0, 0, -1, 0},
                             {0, -1, -1, 0, 1, -1},
                             {-1, 0, 0, 0, -1, 0},
                             {0, -1, 0, -1, 0, -1},
                             {0, 0, -1, 0, 0, 0}};
    return p;
}

Vec hill_field(const HillParams& p, const Vec& x) {
    const int d = static_cast<int>(x.size());
    Vec dx(d);
    for (int i = 0; i < d; ++i) {
        double production = 1.0;
        for (int j = 0; j < d; ++j) {
            const int s = p.sign(j, i);
            if (s == 0) continue;
            const double kernel =
                s > 0 ? hill_positive(x[j], p.lower(j, i), p.upper(j, i), p.threshold(j, i),
                                      p.exponent)
                      : hill_negative(x[j], p.lower(j, i), p.upper(j, i), p.threshold(j, i),
                                      p.exponent);
            production *= kernel;
        }
        dx[i] = -p.decay[i] * x[i] + production;
    }
    return dx;
}

Mat json_matrix(const nlohmann::json& j) {
    const auto rows = j.size();
    const auto cols = j.at(0).size();
    Mat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
    return m;
}

}  // namespace

void HillParams::validate() const {
    const auto d = lower.rows();
    if (lower.cols() != d || upper.rows() != d || upper.cols() != d || threshold.rows() != d ||
        threshold.cols() != d || sign.rows() != d || sign.cols() != d || decay.size() != d)
        throw std::invalid_argument("HillParams: matrix shapes disagree");
    if (!(exponent > 0)) throw std::invalid_argument("HillParams: exponent must be positive");
    for (Eigen::Index i = 0; i < d; ++i)
        if (!(decay[i] > 0)) throw std::invalid_argument("HillParams: decay must be positive");
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) {
            const bool present = sign(j, i) != 0;
            if (present != (lower(j, i) != 0.0) || present != (upper(j, i) != 0.0) ||
                present != (threshold(j, i) != 0.0))
                throw std::invalid_argument("HillParams: matrices must share a sparsity pattern");
        }
}

double hill_negative(double y, double ell, double u, double theta, double n) {
    const double yn = power(y, n);
    const double tn = power(theta, n);
    return ell + (u - ell) * tn / (yn + tn);
}

double hill_positive(double y, double ell, double u, double theta, double n) {
    const double yn = power(y, n);
    const double tn = power(theta, n);
    return ell + (u - ell) * yn / (yn + tn);
}

Vec eval_field(const SystemSpec& sys, const Vec& x) {
    if (static_cast<int>(x.size()) != sys.dim)
        throw std::invalid_argument("eval_field: point dimension mismatch for " + sys.name);

    switch (sys.kind) {
        case FieldKind::LinearSeparatrix: {
            const double u = 0.5 * x[0] + 0.5 * std::sqrt(3.0) * x[1];
            const double v = 0.5 * x[1] - 0.5 * std::sqrt(3.0) * x[0];
            Vec dx(2);
            dx[0] = u * (1.0 - u * u);
            dx[1] = u * u * (3.0 - 2.0 * u * u) - v;
            return dx;
        }
        case FieldKind::RadialPolynomial:
            return radial_field(sys.radial_roots, x);
        case FieldKind::NonlinearSeparatrix: {
            Vec dx(4);
            dx[0] = -x[0];
            dx[1] = (x[1] - x[0] * x[0]) * (9.0 - x[1] * x[1]);
            dx[2] = -x[2];
            dx[3] = -x[3];
            return dx;
        }
        case FieldKind::Hill:
            return hill_field(sys.hill, x);
        case FieldKind::TransformedRadial: {
            const Vec y = sys.transform_inv * x;
            return sys.transform * radial_field(sys.radial_roots, y);
        }
    }
    throw std::logic_error("eval_field: unhandled field kind");
}

SystemSpec make_system(const std::string& name) {
    SystemSpec sys;
    sys.name = name;
    if (name == "linear_separatrix") {
        sys.dim = 2;
        sys.kind = FieldKind::LinearSeparatrix;
        sys.domain = make_box({-2.0, -3.5}, {2.0, 3.5});
    } else if (name == "radial_bistable") {
        sys.dim = 2;
        sys.kind = FieldKind::RadialPolynomial;
        sys.radial_roots = {1.0, 2.0, 3.0};
        sys.domain = make_box({-4.0, -4.0}, {4.0, 4.0});
    } else if (name == "radial_tristable") {
        sys.dim = 2;
        sys.kind = FieldKind::RadialPolynomial;
        sys.radial_roots = {1.0, 2.0, 3.0, 4.0};
        sys.domain = make_box({-5.0, -5.0}, {5.0, 5.0});
    } else if (name == "nonlinear_separatrix") {
        sys.dim = 4;
        sys.kind = FieldKind::NonlinearSeparatrix;
        sys.domain = make_box({-2.0, -3.5, -2.0, -2.0}, {2.0, 3.5, 2.0, 2.0});
    } else if (name == "hill_periodic_3d") {
        sys.dim = 3;
        sys.kind = FieldKind::Hill;
        sys.hill = hill_periodic_params();
        sys.hill.validate();
        sys.domain = make_box({0.0, 0.0, 0.0}, {3.062, 4.072, 11.26362});
    } else if (name == "emt_hill_6d") {
        sys.dim = 6;
        sys.kind = FieldKind::Hill;
        sys.hill = emt_params();
        sys.hill.validate();
        sys.domain = make_box({0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
                              {0.5, 3.558, 1.57345566, 5.762, 15.169196784, 5.056847});
    } else if (name == "ellipsoidal_2d") {
        return make_ellipsoidal(2);
    } else if (name == "ellipsoidal_3d") {
        return make_ellipsoidal(3);
    } else if (name == "ellipsoidal_4d") {
        return make_ellipsoidal(4);
    } else if (name == "ellipsoidal_5d") {
        return make_ellipsoidal(5);
    } else {
        throw std::invalid_argument("make_system: unknown system '" + name + "'");
    }
    return sys;
}

SystemSpec make_hill_system_from_json(const std::string& name, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open Hill parameter file: " + path);
    nlohmann::json j;
    in >> j;

    SystemSpec sys;
    sys.name = name;
    sys.kind = FieldKind::Hill;
    sys.dim = j.at("dim").get<int>();

    Vec lo(sys.dim), hi(sys.dim);
    for (int i = 0; i < sys.dim; ++i) {
        lo[i] = j.at("domain").at("lower").at(i).get<double>();
        hi[i] = j.at("domain").at("upper").at(i).get<double>();
    }
    sys.domain = HyperRectangle(lo, hi);

    HillParams& p = sys.hill;
    p.exponent = j.at("n").get<double>();
    p.decay = Vec(sys.dim);
    for (int i = 0; i < sys.dim; ++i) p.decay[i] = j.at("gamma").at(i).get<double>();
    p.lower = json_matrix(j.at("L"));
    p.upper = json_matrix(j.at("U"));
    p.threshold = json_matrix(j.at("Theta"));
    p.sign = json_matrix(j.at("sign")).cast<int>();
    p.validate();
    return sys;
}

std::vector<std::string> system_names() {
    return {"linear_separatrix", "radial_bistable",  "radial_tristable", "nonlinear_separatrix",
            "hill_periodic_3d",  "emt_hill_6d",      "ellipsoidal_2d",   "ellipsoidal_3d",
            "ellipsoidal_4d",    "ellipsoidal_5d"};
}

}  // namespace mlcd
