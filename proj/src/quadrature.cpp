#include "horo/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "horo/error.hpp"

namespace horo::quad {

namespace {

struct JacobiValue {
    double p = 0.0;      // P_n(x)
    double dp = 0.0;     // P_n'(x)
};

JacobiValue jacobi_eval(int n, double a, double b, double x) {
    double p0 = 1.0;
    double p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    if (n == 0) return {1.0, 0.0};
    for (int k = 2; k <= n; ++k) {
        double s = 2.0 * k + a + b;
        double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        double p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    // Derivative from d/dx P_n = (n+a+b+1)/2 · P_{n-1}^{(a+1,b+1)}.
    double q0 = 1.0;
    double a1 = a + 1.0, b1 = b + 1.0;
    double q1 = 0.5 * (a1 - b1) + 0.5 * (a1 + b1 + 2.0) * x;
    double q = n - 1 == 0 ? q0 : q1;
    for (int k = 2; k <= n - 1; ++k) {
        double s = 2.0 * k + a1 + b1;
        double c1 = 2.0 * k * (k + a1 + b1) * (s - 2.0);
        double c2 = (s - 1.0) * (s * (s - 2.0) * x + a1 * a1 - b1 * b1);
        double c3 = 2.0 * (k + a1 - 1.0) * (k + b1 - 1.0) * s;
        double q2 = (c2 * q1 - c3 * q0) / c1;
        q0 = q1;
        q1 = q2;
        q = q2;
    }
    return {p1, 0.5 * (n + a + b + 1.0) * q};
}

}  // namespace

Rule gauss_jacobi(int count, double alpha, double beta) {
    if (count < 1) throw DomainError("Gauss-Jacobi rule needs at least one node");
    if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("Gauss-Jacobi exponents must exceed -1");
    const int n = count;
    const double ab = alpha + beta;

    // Golub–Welsch on the monic recurrence, then Newton polish on P_n.
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
    for (int k = 0; k < n; ++k) {
        double s = 2.0 * k + ab;
        diag(k) = (k == 0) ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        double s = 2.0 * k + ab;
        double b2;
        if (k == 1)
            b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        sub(k - 1) = std::sqrt(b2);
    }
    Eigen::VectorXd nodes(n);
    if (n == 1) {
        nodes(0) = diag(0);
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
        nodes = solver.eigenvalues();
    }

    const double log_const = std::lgamma(n + alpha + 1.0) + std::lgamma(n + beta + 1.0) -
                             std::lgamma(n + ab + 1.0) - std::lgamma(n + 1.0) + (ab + 1.0) * std::log(2.0);
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = nodes(i);
        for (int it = 0; it < 8; ++it) {
            JacobiValue v = jacobi_eval(n, alpha, beta, x);
            double dx = v.p / v.dp;
            double next = x - dx;
            if (!(next > -1.0 && next < 1.0)) break;
            x = next;
            if (std::abs(dx) < 1e-16) break;
        }
        JacobiValue v = jacobi_eval(n, alpha, beta, x);
        rule.nodes[i] = x;
        rule.weights[i] = std::exp(log_const) / ((1.0 - x * x) * v.dp * v.dp);
    }
    return rule;
}

Rule gauss_legendre(int count) { return gauss_jacobi(count, 0.0, 0.0); }

double sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
        default: throw DomainError("sphere rules exist for dimension 1..3");
    }
}

std::vector<SphereNode> sphere_rule(int dim, int resolution) {
    std::vector<SphereNode> out;
    const double pi = std::numbers::pi;
    switch (dim) {
        case 1:
            out.push_back({{1.0, 0.0, 0.0}, 1.0});
            out.push_back({{-1.0, 0.0, 0.0}, 1.0});
            break;
        case 2: {
            int m = resolution > 0 ? resolution : 64;
            for (int j = 0; j < m; ++j) {
                double phi = 2.0 * pi * j / m;
                out.push_back({{std::cos(phi), std::sin(phi), 0.0}, 2.0 * pi / m});
            }
            break;
        }
        case 3: {
            int m_phi = resolution > 0 ? resolution : 24;
            Rule gl = gauss_legendre(m_phi / 2);
            for (std::size_t i = 0; i < gl.size(); ++i) {
                double ct = gl.nodes[i];
                double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
                for (int j = 0; j < m_phi; ++j) {
                    double phi = 2.0 * pi * j / m_phi;
                    out.push_back({{st * std::cos(phi), st * std::sin(phi), ct}, gl.weights[i] * 2.0 * pi / m_phi});
                }
            }
            break;
        }
        default:
            throw DomainError("sphere rules exist for dimension 1..3");
    }
    return out;
}

double exp_trapezoid(const std::function<double(double)>& f, double u_lo, double u_hi, double step) {
    if (!(u_hi > u_lo) || !(step > 0.0)) throw DomainError("exp_trapezoid needs u_lo < u_hi and step > 0");
    int n = static_cast<int>(std::ceil((u_hi - u_lo) / step));
    double h = (u_hi - u_lo) / n;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        double u = u_lo + k * h;
        double x = std::exp(u);
        double w = (k == 0 || k == n) ? 0.5 : 1.0;
        sum += w * f(x) * x;
    }
    return h * sum;
}

}  // namespace horo::quad
