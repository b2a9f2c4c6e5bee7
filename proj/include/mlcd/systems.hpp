#ifndef MLCD_SYSTEMS_HPP
#define MLCD_SYSTEMS_HPP

#include <string>
#include <vector>

#include "mlcd/geometry.hpp"

namespace mlcd {

/// Hill production network: dx_i/dt = -gamma_i x_i + h_i(x), where h_i is a
/// product of sigmoidal kernels H^+/H^- over the regulators of node i.
/// Entry (j, i) of the matrices parameterizes the action of variable j on
/// equation i; sign(j, i) is +1 (activating), -1 (repressing) or 0 (absent),
/// and the three matrices share one sparsity pattern.
struct HillParams {
    double exponent = 10.0;
    Vec decay;
    Mat lower;
    Mat upper;
    Mat threshold;
    Eigen::MatrixXi sign;

    void validate() const;
};

/// Decreasing Hill kernel: ell + (u - ell) * theta^n / (y^n + theta^n).
double hill_negative(double y, double ell, double u, double theta, double n);
/// Increasing Hill kernel: ell + (u - ell) * y^n / (y^n + theta^n).
double hill_positive(double y, double ell, double u, double theta, double n);

enum class FieldKind {
    LinearSeparatrix,    // 2-D, two sinks split by a straight separatrix
    RadialPolynomial,    // planar rotation with polynomial radial dynamics
    NonlinearSeparatrix, // 4-D, two sinks split by a curved 3-D manifold
    Hill,                // Hill production network
    TransformedRadial,   // radial dynamics in y = T^{-1} x, any dimension
};

struct SystemSpec {
    std::string name;
    int dim = 0;
    HyperRectangle domain;
    FieldKind kind = FieldKind::LinearSeparatrix;

    // RadialPolynomial / TransformedRadial: dr/dt = -r * prod_k (r - roots[k]).
    std::vector<double> radial_roots;

    // TransformedRadial only.
    Mat transform;
    Mat transform_inv;

    // Hill only.
    HillParams hill;
};

/// Velocity field g(x) of the named system. Throws on dimension mismatch.
Vec eval_field(const SystemSpec& sys, const Vec& x);

/// Named catalog lookup. Known names: linear_separatrix, radial_bistable,
/// radial_tristable, nonlinear_separatrix, hill_periodic_3d, emt_hill_6d,
/// ellipsoidal_2d, ellipsoidal_3d, ellipsoidal_4d, ellipsoidal_5d.
SystemSpec make_system(const std::string& name);

/// Hill system built from a JSON parameter file
/// {dim, domain: {lower, upper}, n, gamma, L, U, Theta, sign}.
SystemSpec make_hill_system_from_json(const std::string& name, const std::string& path);

std::vector<std::string> system_names();

}  // namespace mlcd

#endif
