#include "horo/crown.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "horo/error.hpp"

namespace horo::crown {

namespace {

constexpr Complex I(0.0, 1.0);
constexpr int interpolation_points = 64;

Complex gram_determinant(const MatrixC& g, int k) {
    const int n = static_cast<int>(g.rows());
    MatrixC cols = g.rightCols(n - k);
    MatrixC gram = cols.transpose() * cols;
    return gram.determinant();
}

double condition_number(const MatrixC& g) {
    Eigen::JacobiSVD<MatrixC> svd(g);
    const auto& sv = svd.singularValues();
    double smallest = sv(sv.size() - 1);
    return smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
}

MatrixC complex_of(const MatrixR& m) { return m.cast<Complex>(); }

MatrixC random_complex(int rows, int cols, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    MatrixC m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(nd(rng), nd(rng));
    return m;
}

// exp(A) for complex antisymmetric A satisfies qᵀq = 1.
MatrixC random_complex_orthogonal(int n, std::mt19937_64& rng) {
    MatrixC a = random_complex(n, n, rng, 0.5);
    return exp_pade(0.5 * (a - a.transpose()));
}

MatrixC random_lower_unipotent(int n, std::mt19937_64& rng) {
    MatrixC m = random_complex(n, n, rng, 1.0);
    MatrixC out = MatrixC::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) out(i, j) = m(i, j);
    return out;
}

void check_index(int n, int k) {
    if (k < 1 || k > n - 1) throw DomainError("k must lie in 1..n-1");
}

Complex horner(const std::vector<Complex>& c, Complex z) {
    Complex v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
    return v;
}

json flatten(const MatrixR& m) {
    json out = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
    return out;
}

}  // namespace

UpperNilpotent::UpperNilpotent(MatrixR entries) : Y(std::move(entries)) {
    if (Y.rows() != Y.cols() || Y.rows() < 2) throw DomainError("Y must be square with n >= 2");
    for (int i = 0; i < Y.rows(); ++i)
        for (int j = 0; j <= i; ++j)
            if (Y(i, j) != 0.0) throw DomainError("Y must be strictly upper triangular");
}

UpperNilpotent UpperNilpotent::unit(int n, int i, int j, double value) {
    MatrixR m = MatrixR::Zero(n, n);
    m(i, j) = value;
    return UpperNilpotent(m);
}

BlockMatrix::BlockMatrix(int n_, int k_, MatrixC Z_) : n(n_), k(k_), Z(std::move(Z_)) {
    check_index(n, k);
    if (Z.rows() != k || Z.cols() != n - k) throw DomainError("block must be k×(n-k)");
}

MatrixC BlockMatrix::embedded() const {
    MatrixC m = MatrixC::Zero(n, n);
    m.topRightCorner(k, n - k) = Z;
    return m;
}

MatrixC exp_nilpotent(const MatrixC& X) {
    const int n = static_cast<int>(X.rows());
    MatrixC term = MatrixC::Identity(n, n);
    MatrixC sum = term;
    for (int m = 1; m < n; ++m) {
        term = term * X / static_cast<double>(m);
        sum += term;
    }
    return sum;
}

MatrixC exp_pade(const MatrixC& X) { return X.exp(); }

Complex f_k(const MatrixC& g, int k) {
    if (g.rows() != g.cols()) throw DomainError("g must be square");
    check_index(static_cast<int>(g.rows()), k);
    double cond = condition_number(g);
    if (!(cond <= max_condition)) throw ConditioningError("condition number " + format_number(cond) + " exceeds 1e12");
    return gram_determinant(g, k);
}

double upsilon_margin(const MatrixR& Y) {
    MatrixR m = MatrixR::Identity(Y.cols(), Y.cols()) - Y.transpose() * Y;
    Eigen::SelfAdjointEigenSolver<MatrixR> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

bool upsilon_membership(const MatrixR& Y) { return upsilon_margin(Y) > 0.0; }

std::vector<Complex> line_zeros(const UpperNilpotent& Y, const MatrixR& u, int k) {
    const int n = Y.n();
    check_index(n, k);
    const MatrixC Yc = complex_of(Y.Y);
    const MatrixC uc = complex_of(u);
    const double scale = std::max(1.0, Y.Y.cwiseAbs().maxCoeff());
    const double r0 = 1.0 / scale;
    const int P = interpolation_points;

    // Coefficients from samples on |z| = r0; the degree is at most 2(n-1)(n-k) < P.
    std::vector<Complex> values(P);
    for (int m = 0; m < P; ++m) {
        Complex z = r0 * std::polar(1.0, 2.0 * std::numbers::pi * m / P);
        values[m] = gram_determinant(exp_nilpotent(z * Yc) * uc, k);
    }
    std::vector<Complex> c(P);
    double biggest = 0.0;
    for (int j = 0; j < P; ++j) {
        Complex s = 0.0;
        for (int m = 0; m < P; ++m) s += values[m] * std::polar(1.0, -2.0 * std::numbers::pi * j * m / P);
        c[j] = s / static_cast<double>(P);  // coefficient times r0^j
        biggest = std::max(biggest, std::abs(c[j]));
    }
    int degree = 0;
    for (int j = 0; j < P; ++j)
        if (std::abs(c[j]) > 1e-12 * biggest) degree = j;
    if (degree == 0) return {};

    // Roots in w = z / r0 from the companion matrix, then Newton polishing.
    MatrixC companion = MatrixC::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[i] / c[degree];
    Eigen::ComplexEigenSolver<MatrixC> es(companion, false);
    std::vector<Complex> poly(c.begin(), c.begin() + degree + 1), deriv(degree);
    for (int j = 1; j <= degree; ++j) deriv[j - 1] = static_cast<double>(j) * poly[j];
    std::vector<Complex> roots;
    for (int i = 0; i < degree; ++i) {
        Complex w = es.eigenvalues()(i);
        for (int it = 0; it < 8; ++it) {
            Complex d = horner(deriv, w);
            if (d == 0.0) break;
            Complex step = horner(poly, w) / d;
            w -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
        }
        roots.push_back(w * r0);
    }
    return roots;
}

Crossing first_crossing(const UpperNilpotent& Y, const std::vector<MatrixR>& samples) {
    const int n = Y.n();
    Crossing best;
    best.tau = std::numeric_limits<double>::infinity();
    auto scan = [&](const MatrixR& u, int index) {
        for (int k = 1; k < n; ++k) {
            for (Complex z : line_zeros(Y, u, k)) {
                double tau = std::abs(z.imag());
                if (tau <= 1e-12) continue;
                if (tau < best.tau) {
                    best.tau = tau;
                    best.k = k;
                    best.z = z.imag() > 0 ? z : std::conj(z);
                    best.sample = index;
                }
            }
        }
    };
    scan(MatrixR::Identity(n, n), -1);
    for (std::size_t i = 0; i < samples.size(); ++i) scan(samples[i], static_cast<int>(i));
    best.found = best.tau <= 1.0;
    return best;
}

std::vector<MatrixR> sample_unipotent(int n, int count, double radius, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(-radius, radius);
    std::vector<MatrixR> out;
    for (int s = 0; s < count; ++s) {
        MatrixR u = MatrixR::Identity(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) u(i, j) = ud(rng);
        out.push_back(u);
    }
    return out;
}

Report tube_probe(const UpperNilpotent& Y, int sample_count, double radius, std::uint64_t seed) {
    const int n = Y.n();
    if (n > 4) throw DomainError("tube_probe supports n <= 4");
    if (sample_count < 0 || !(radius > 0.0)) throw DomainError("need sample_count >= 0 and radius > 0");
    auto samples = sample_unipotent(n, sample_count, radius, seed);
    const MatrixC g0 = exp_nilpotent(I * complex_of(Y.Y));
    const double pade_gap = (g0 - exp_pade(I * complex_of(Y.Y))).cwiseAbs().maxCoeff();

    std::vector<double> minima(n - 1, std::numeric_limits<double>::infinity());
    auto visit = [&](const MatrixC& g) {
        for (int k = 1; k < n; ++k) minima[k - 1] = std::min(minima[k - 1], std::abs(f_k(g, k)));
    };
    visit(g0);
    for (const auto& u : samples) visit(g0 * complex_of(u));
    Crossing cr = first_crossing(Y, samples);

    Report rep("crown_probe");
    rep.params = {{"n", n}, {"Y", flatten(Y.Y)}, {"sample_count", sample_count}, {"radius", radius}, {"seed", seed}};
    rep.values["min_abs_f_k"] = minima;
    rep.values["crossing"] = cr.found;
    rep.values["tau_star"] = std::isfinite(cr.tau) ? json(cr.tau) : json(nullptr);
    if (std::isfinite(cr.tau)) {
        rep.values["crossing_k"] = cr.k;
        rep.values["crossing_z"] = {cr.z.real(), cr.z.imag()};
        rep.values["crossing_sample"] = cr.sample;
    }
    rep.values["exp_series_vs_pade"] = pade_gap;
    rep.check_at_most("nilpotent series vs Padé exponential", pade_gap, 1e-10 * std::max(1.0, g0.cwiseAbs().maxCoeff()));
    return rep;
}

Report invariance(int n, int trials, std::uint64_t seed, double tolerance) {
    std::mt19937_64 rng(seed);
    double left = 0.0, right = 0.0, orth = 0.0;
    for (int t = 0; t < trials; ++t) {
        MatrixC g = random_complex(n, n, rng, 1.0);
        MatrixC q = random_complex_orthogonal(n, rng);
        MatrixC nb = random_lower_unipotent(n, rng);
        orth = std::max(orth, (q.transpose() * q - MatrixC::Identity(n, n)).cwiseAbs().maxCoeff());
        for (int k = 1; k < n; ++k) {
            Complex base = f_k(g, k);
            left = std::max(left, std::abs(f_k(q * g, k) - base) / std::abs(base));
            right = std::max(right, std::abs(f_k(g * nb, k) - base) / std::abs(base));
        }
    }
    Report rep("crown_invariance");
    rep.params = {{"n", n}, {"trials", trials}, {"seed", seed}};
    rep.values["max_left_error"] = left;
    rep.values["max_right_error"] = right;
    rep.values["orthogonality_defect"] = orth;
    rep.check_at_most("left K_C invariance", left, tolerance);
    rep.check_at_most("right lower-unipotent invariance", right, tolerance);
    return rep;
}

Report iwasawa_diagonal(int n, int trials, std::uint64_t seed, double tolerance) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.5, 2.0), phase(-1.0, 1.0);
    double printed = 0.0, squared = 0.0;
    Report rep("crown_iwasawa");
    rep.params = {{"n", n}, {"trials", trials}, {"seed", seed}};
    auto& trace = rep.add_trace("iwasawa", {"trial", "k", "f_k_re", "f_k_im", "monomial_re", "monomial_im"});
    for (int t = 0; t < trials; ++t) {
        MatrixC a = MatrixC::Zero(n, n);
        for (int i = 0; i < n; ++i) a(i, i) = std::polar(mag(rng), phase(rng));
        MatrixC g = random_complex_orthogonal(n, rng) * a * random_lower_unipotent(n, rng);
        for (int k = 1; k < n; ++k) {
            Complex prod = 1.0;
            for (int i = k; i < n; ++i) prod *= a(i, i);
            Complex value = f_k(g, k);
            printed = std::max(printed, std::abs(value - prod) / std::abs(prod));
            squared = std::max(squared, std::abs(value - prod * prod) / std::abs(prod * prod));
            trace.add_row({double(t), double(k), value.real(), value.imag(), prod.real(), prod.imag()});
        }
    }
    rep.values["max_error_printed"] = printed;
    rep.values["max_error_squared"] = squared;
    rep.check_at_most("f_k(κan̄) = a_{k+1}···a_n", printed, tolerance);
    rep.check_at_most("f_k(κan̄) = (a_{k+1}···a_n)²", squared, tolerance);
    return rep;
}

Report abelian_block(int n, int k, int trials, std::uint64_t seed, double tolerance) {
    check_index(n, k);
    std::mt19937_64 rng(seed);
    double worst = 0.0, series_gap = 0.0;
    for (int t = 0; t < trials; ++t) {
        BlockMatrix b(n, k, random_complex(k, n - k, rng, 0.7));
        MatrixC g = exp_nilpotent(b.embedded());
        series_gap = std::max(series_gap, (g - exp_pade(b.embedded())).cwiseAbs().maxCoeff());
        Complex expected = (MatrixC::Identity(n - k, n - k) + b.Z.transpose() * b.Z).determinant();
        worst = std::max(worst, std::abs(f_k(g, k) - expected) / std::abs(expected));
    }
    Report rep("crown_abelian_block");
    rep.params = {{"n", n}, {"k", k}, {"trials", trials}, {"seed", seed}};
    rep.values["max_relative_error"] = worst;
    rep.values["exp_series_vs_pade"] = series_gap;
    rep.check_at_most("f_k(exp Z) = det(1 + ZᵀZ)", worst, tolerance);
    return rep;
}

Report segment_exit(int n, int directions, const std::vector<double>& scales, std::uint64_t seed) {
    if (scales.empty()) throw DomainError("segment_exit needs scales");
    std::vector<double> sorted = scales;
    std::sort(sorted.begin(), sorted.end());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Report rep("crown_segment_exit");
    rep.params = {{"n", n}, {"directions", directions}, {"scales", sorted}, {"seed", seed}};
    auto& trace = rep.add_trace("segment_exit", {"direction", "scale", "tau_star"});
    bool all_exit = true, monotone = true;
    for (int d = 0; d < directions; ++d) {
        MatrixR m = MatrixR::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m(i, j) = nd(rng);
        m /= m.norm();
        bool inside_before = false;
        double previous = std::numeric_limits<double>::infinity();
        for (double c : sorted) {
            Crossing cr = first_crossing(UpperNilpotent(c * m), {});
            trace.add_row({double(d), c, cr.tau});
            if (inside_before && !cr.found) monotone = false;
            if (cr.tau > previous * (1.0 + 1e-9)) monotone = false;
            inside_before = inside_before || cr.found;
            previous = cr.tau;
        }
        all_exit = all_exit && inside_before;
    }
    rep.check_true("every direction exits at the largest scale", all_exit);
    rep.check_true("first crossing τ* non-increasing in the scale", monotone);
    return rep;
}

}  // namespace horo::crown
