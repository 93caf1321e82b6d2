#pragma once

#include <array>
#include <functional>
#include <vector>

namespace horo::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

/// Gauss–Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta, alpha, beta > -1.
Rule gauss_jacobi(int count, double alpha, double beta);
Rule gauss_legendre(int count);

struct SphereNode {
    std::array<double, 3> direction{};
    double weight = 0.0;
};

/// Quadrature on the unit sphere S^{dim-1}; weights sum to its surface measure.
/// dim 1: the two points ±1. dim 2: `resolution` equispaced angles.
/// dim 3: Gauss–Legendre in cos θ times equispaced φ, exact through degree 2·resolution/2 - 1.
std::vector<SphereNode> sphere_rule(int dim, int resolution = 0);
double sphere_area(int dim);

/// ∫_{e^{u_lo}}^{e^{u_hi}} f(x) dx by the trapezoid rule in u = log x.
double exp_trapezoid(const std::function<double(double)>& f, double u_lo, double u_hi, double step);

}  // namespace horo::quad
