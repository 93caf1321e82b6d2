#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "horo/error.hpp"
#include "horo/poisson.hpp"
#include "horo/testfunctions.hpp"
#include "oracles/oracles.hpp"

using namespace horo;
using namespace horo::poisson;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using cld = oracle::cld;

namespace {

constexpr double pi = std::numbers::pi;

// ∫_{ℝⁿ} (1+|x|²)^{-(λ+n/2)} dx by radial quadrature, real and imaginary parts separately.
cld kernel_mass_oracle(int n, cld lambda) {
    const cld mu = lambda + static_cast<long double>(n) / 2;
    const long double shell = n == 1 ? 2.0L : n == 2 ? 2.0L * std::numbers::pi_v<long double>
                                                     : 4.0L * std::numbers::pi_v<long double>;
    auto part = [&](bool imag) {
        return oracle::integrate_to_infinity(
            [&](long double r) {
                cld v = std::pow(r, n - 1) * std::exp(-mu * std::log1p(r * r));
                return imag ? v.imag() : v.real();
            },
            0.0L, 1e-16L);
    };
    return shell * cld(part(false), part(true));
}

// ∫_ℝ |δ_{λ,y}(x)| dx in extended precision, n = 1.
long double delta_l1_oracle_1d(cld lambda, long double y) {
    const cld mu = lambda + 0.5L;
    const cld c = std::pow(std::numbers::pi_v<long double>, 0.5L) * oracle::gamma(lambda) / oracle::gamma(mu);
    auto f = [&](long double x) {
        cld z(x, y);
        return std::abs(std::exp(-mu * std::log(1.0L + z * z)) / c);
    };
    // x = e^v, adaptive in v; the algebraic tail becomes exponential.
    const long double lam_re = lambda.real();
    const long double v_lo = std::log(1.0L - y * y) - 45.0L, v_hi = 45.0L / lam_re;
    return oracle::integrate(
        [&](long double v) {
            long double x = std::exp(v);
            return x * (f(x) + f(-x));
        },
        v_lo, v_hi, 1e-15L);
}

Field grid_constant(const field::GridPtr& g, double v) {
    return Field(g, field::Space::position, std::vector<Complex>(g->size(), v));
}

}  // namespace

TEST_CASE("parameter validation", "[poisson]") {
    CHECK_THROWS_AS(Params(1, Complex(0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(Params(1, -0.5), DomainError);
    CHECK_THROWS_AS(Params(4, 1.0), DomainError);
    Params p(2, Complex(0.75, 0.3));
    CHECK(p.rho() == 1.0);
    CHECK(p.s() == 0.75);
}

TEST_CASE("c-function is the kernel mass", "[poisson][c]") {
    CHECK_THAT(c_function(Params(1, 0.5)).real(), WithinRel(pi, 1e-13));
    CHECK_THAT(c_function(Params(1, 1.0)).real(), WithinRel(2.0, 1e-13));
    // n = 2: π Γ(λ)/Γ(λ+1) = π/λ.
    Complex l2(1.3, -0.7);
    auto c2 = c_function(Params(2, l2));
    CHECK(std::abs(c2 - pi / l2) <= 1e-13 * std::abs(pi / l2));

    for (int n : {1, 2, 3}) {
        for (Complex lambda : {Complex(0.5, 0), Complex(0.75, 0), Complex(1.25, 0), Complex(0.75, 0.6),
                               Complex(2.0, -1.5)}) {
            cld ref = kernel_mass_oracle(n, cld(lambda.real(), lambda.imag()));
            Complex c = c_function(Params(n, lambda));
            INFO("n=" << n << " lambda=" << lambda);
            CHECK(std::abs(c - Complex(ref.real(), ref.imag())) <= 1e-11 * std::abs(c));
            if (lambda.imag() == 0.0) {
                CHECK(c.imag() == 0.0);
                CHECK(c.real() > 0.0);
            }
        }
    }
}

TEST_CASE("Poisson kernel", "[poisson][kernel]") {
    Params p(1, 1.0);
    const double a = 0.7;
    const double zero[1] = {0.0};
    double expect0 = 1.0 / (std::sqrt(pi) * std::tgamma(1.0) / std::tgamma(1.5)) * std::pow(a, -1.5);
    CHECK_THAT(poisson_kernel(zero, a, p).real(), WithinRel(expect0, 1e-13));

    SECTION("kernel mass is a^{n/2 - λ}") {
        for (Complex lambda : {Complex(1.0, 0), Complex(0.75, 0.6), Complex(0.6, -0.2)}) {
            Params q(1, lambda);
            for (double level : {0.3, 1.0, 2.5}) {
                auto part = [&](bool imag) {
                    return oracle::integrate_to_infinity(
                        [&](long double x) {
                            double xv[1] = {static_cast<double>(x)};
                            Complex v = poisson_kernel(xv, level, q);
                            return static_cast<long double>(imag ? v.imag() : v.real());
                        },
                        0.0L, 1e-14L);
                };
                Complex mass = 2.0 * Complex(part(false), part(true));
                Complex expect = std::exp((0.5 - lambda) * std::log(level));
                INFO("lambda=" << lambda << " a=" << level);
                CHECK(std::abs(mass - expect) <= 1e-9 * std::abs(expect));
            }
        }
    }
    SECTION("even in x") {
        Params q(2, Complex(0.8, 0.4));
        for (double t : {0.1, 1.0, 3.7}) {
            double x[2] = {t, -0.4 * t}, mx[2] = {-t, 0.4 * t};
            CHECK(poisson_kernel(x, 1.2, q) == poisson_kernel(mx, 1.2, q));
        }
    }
    SECTION("complexified kernel agrees with the real one at y = 0") {
        Params q(2, Complex(0.8, 0.4));
        double x[2] = {0.3, -1.1};
        Complex z[2] = {0.3, -1.1};
        CHECK(std::abs(poisson_kernel(x, 0.9, q) - poisson_kernel(std::span<const Complex>(z, 2), 0.9, q)) <=
              1e-15 * std::abs(poisson_kernel(x, 0.9, q)));
    }
    SECTION("branch error outside the tube") {
        Complex z[1] = {Complex(0.0, 1.2)};
        CHECK_THROWS_AS(poisson_kernel(std::span<const Complex>(z, 1), 1.0, p), BranchError);
        Complex ok[1] = {Complex(0.5, 0.9)};
        CHECK_NOTHROW(poisson_kernel(std::span<const Complex>(ok, 1), 1.0, p));
    }
}

TEST_CASE("multiplier at zero frequency is the kernel mass", "[poisson][multiplier]") {
    for (int n : {1, 2, 3}) {
        auto g = field::SpectralGrid::create(n, 8.0, n == 3 ? 16 : 64);
        Params p(n, Complex(0.9, 0.35));
        for (double a : {0.25, 1.0, 3.0}) {
            auto m = level_multiplier(*g, a, p);
            std::size_t origin = 0;
            for (int d = 0; d < n; ++d) origin = origin * g->points() + g->points() / 2;
            Complex expect = std::exp((0.5 * n - p.lambda) * std::log(a));
            CHECK(std::abs(m[origin] - expect) <= 1e-13 * std::abs(expect));
        }
    }
}

TEST_CASE("constant input", "[poisson][transform]") {
    SECTION("grid-constant field maps to a^{n/2-λ} up to rounding") {
        for (int n : {1, 2}) {
            auto g = field::SpectralGrid::create(n, 16.0, n == 1 ? 1024 : 128);
            Params p(n, Complex(1.0, 0.5));
            Field one = grid_constant(g, 1.0);
            for (double a : {0.05, 0.5, 2.0}) {
                Field phi = poisson_transform(one, a, p);
                Complex expect = std::exp((0.5 * n - p.lambda) * std::log(a));
                Field ref = grid_constant(g, 1.0).scaled(expect);
                CHECK(field::relative_l2_error(phi, ref) <= 1e-13);
            }
        }
    }
    SECTION("tapered plateau reproduces a^{n/2-λ} on the central quarter") {
        auto g = field::SpectralGrid::create(1, 16.0, 2048);
        Params p(1, 1.0);
        Field plateau = testfn::plateau(g, 6.0, 2.0);
        auto central = [](std::span<const double> x) { return std::abs(x[0]) <= 4.0; };
        double previous = 1.0;
        for (double a : {0.4, 0.2, 0.1, 0.05}) {
            Field phi = poisson_transform(plateau, a, p);
            Field ref = grid_constant(g, std::pow(a, -0.5));
            double err = field::relative_l2_error(phi, ref, central);
            INFO("a=" << a);
            CHECK(err <= 1e-2);
            CHECK(err < previous);
            previous = err;
        }
    }
}

TEST_CASE("dual-path agreement", "[poisson][transform][dual]") {
    SECTION("Gaussian, n=1, a=1, λ=1") {
        auto g = field::SpectralGrid::create(1, 512.0, 8192);
        auto rep = dual_path(testfn::gaussian(g), 1.0, Params(1, 1.0));
        CHECK(rep.passed());
        CHECK(rep.values["relative_l2"].get<double>() <= 1e-6);
    }
    SECTION("complex λ needs a wider box for its slower tails") {
        auto g = field::SpectralGrid::create(1, 2048.0, 16384);
        Field f = testfn::gaussian(g, 1.5);
        for (double a : {0.7, 2.0}) {
            auto rep = dual_path(f, a, Params(1, Complex(0.75, 0.6)));
            INFO("a=" << a << " err=" << rep.values["relative_l2"].get<double>());
            CHECK(rep.passed());
        }
    }
    SECTION("tube slices against the complexified kernel") {
        auto g = field::SpectralGrid::create(1, 512.0, 8192);
        Field f = testfn::gaussian(g);
        for (double y : {-0.5, 0.25, 0.5}) {
            auto rep = dual_path(f, 1.0, Params(1, 1.0), std::span<const double>(&y, 1));
            INFO("y=" << y << " err=" << rep.values["relative_l2"].get<double>());
            CHECK(rep.passed());
        }
    }
    SECTION("n = 2") {
        // Compact support keeps the direct sum cheap on a box wide enough for the periodic images.
        auto g = field::SpectralGrid::create(2, 64.0, 512);
        Field f = testfn::bump(g, 4.0);
        auto rep = dual_path(f, 1.0, Params(2, 1.5));
        INFO("err=" << rep.values["relative_l2"].get<double>());
        CHECK(rep.passed());
    }
}

TEST_CASE("tube slices", "[poisson][slice]") {
    auto g = field::SpectralGrid::create(1, 16.0, 1024);
    Field f = testfn::gaussian(g);
    Params p(1, Complex(0.75, 0.4));

    SECTION("y = 0 reproduces the transform exactly") {
        const double y0[1] = {0.0};
        Field a = tube_slice(f, 1.3, y0, p);
        Field b = poisson_transform(f, 1.3, p);
        bool identical = true;
        for (std::size_t i = 0; i < a.size(); ++i) identical = identical && a[i] == b[i];
        CHECK(identical);
    }
    SECTION("tube margin") {
        const double y[1] = {0.96};
        CHECK_THROWS_AS(tube_slice(f, 1.0, y, p), TubeViolation);
        CHECK_NOTHROW(tube_slice(f, 1.0, y, p, Method::fft, Normalization::classical, 0.97));
        const double y2[1] = {0.95};
        CHECK_NOTHROW(tube_slice(f, 1.0, y2, p));
    }
    SECTION("slice bound and Young bound") {
        CHECK(slice_bound(f, p, {0.5, 1.0, 2.0}, {{1.0}, {-1.0}}).passed());
        CHECK(young_bound(f, p, {0.1, 0.5, 1.0, 4.0}).passed());
        auto g2 = field::SpectralGrid::create(2, 12.0, 128);
        Params p2(2, 1.25);
        Field f2 = testfn::random_bandlimited(g2, 2.0, 7);
        CHECK(slice_bound(f2, p2, {0.5, 1.5}, {{1.0, 0.0}, {0.6, -0.8}}).passed());
        CHECK(young_bound(f2, p2, {0.25, 1.0}).passed());
    }
}

TEST_CASE("delta kernel", "[poisson][delta]") {
    Params p(1, 1.0);
    auto g = field::SpectralGrid::create(1, 16.0, 512);
    const double y0[1] = {0.0};
    Field d = delta_kernel(g, y0, p);
    CHECK_THAT(d[256].real(), WithinRel(1.0 / c_function(p).real(), 1e-15));
    const double ybad[1] = {1.0};
    CHECK_THROWS_AS(delta_kernel(g, ybad, p), TubeViolation);
    CHECK_THROWS_AS(delta_l1(ybad, p), TubeViolation);

    SECTION("normalization and contour invariance") {
        for (int n : {1, 2, 3}) {
            for (Complex lambda : {Complex(0.5, 0), Complex(1.0, 0), Complex(0.75, 0.6)}) {
                Params q(n, lambda);
                for (double t : {0.0, 0.3, 0.6, 0.9}) {
                    std::vector<double> y(n, 0.0);
                    y[0] = t * 0.6;
                    if (n > 1) y[1] = -t * 0.8;
                    Complex v = delta_integral(y, q);
                    INFO("n=" << n << " lambda=" << lambda << " |y|=" << t);
                    CHECK(std::abs(v - 1.0) <= (t == 0.0 ? 1e-8 : 1e-6));
                }
            }
        }
    }
}

TEST_CASE("delta L1 norms", "[poisson][delta]") {
    SECTION("y = 0, real λ gives 1") {
        for (int n : {1, 2, 3}) {
            for (double s : {0.25, 0.5, 1.0, 1.75}) {
                std::vector<double> y(n, 0.0);
                CHECK_THAT(delta_l1(y, Params(n, s)), WithinAbs(1.0, 1e-8));
            }
        }
    }
    SECTION("extended-precision oracle, n = 1") {
        for (Complex lambda : {Complex(1.0, 0), Complex(0.25, 0), Complex(0.75, 0.6)}) {
            for (double y : {0.3, 0.7, 0.95}) {
                long double ref = delta_l1_oracle_1d(cld(lambda.real(), lambda.imag()), y);
                INFO("lambda=" << lambda << " y=" << y);
                CHECK_THAT(delta_l1(std::span<const double>(&y, 1), Params(1, lambda)),
                           WithinRel(static_cast<double>(ref), 1e-9));
            }
        }
    }
    SECTION("at least 1 for real λ, and rotation invariant") {
        for (double t : {0.2, 0.5, 0.8, 0.99}) {
            const double y1[1] = {t};
            CHECK(delta_l1(y1, Params(1, 0.8)) >= 1.0);
            const double ya[2] = {t, 0.0}, yb[2] = {0.0, -t};
            double a = delta_l1(ya, Params(2, 1.2)), b = delta_l1(yb, Params(2, 1.2));
            CHECK(a >= 1.0);
            CHECK(a == b);
        }
    }
    SECTION("the model integral matches its closed form at s = 1/2") {
        for (double gamma : {0.5, 0.1, 1e-3, 1e-6})
            CHECK_THAT(model_integral_i1(0.5, gamma) / gamma, WithinRel(model_integral_i1_half_closed(gamma), 1e-10));
    }
}

TEST_CASE("delta asymptotics", "[poisson][delta][asymptotics]") {
    std::vector<double> gammas;
    for (int k = 0; k <= 12; ++k) gammas.push_back(0.5 * std::pow(10.0, -0.5 * k));  // 0.5 .. 5e-7

    SECTION("s = 1 grows like (1-|y|²)^{-1/2}") {
        auto rep = delta_asymptotics(Params(1, 1.0), gammas);
        CHECK(rep.passed());
        CHECK(rep.values["regime"] == "power");
        CHECK_THAT(rep.values["slope"].get<double>(), WithinAbs(-0.5, 0.05));
    }
    SECTION("s = 0.25 stays bounded") {
        std::vector<double> g2;
        for (int k = 0; k <= 8; ++k) g2.push_back(0.5 * std::pow(500.0, -k / 8.0));  // 0.5 .. 1e-3
        auto rep = delta_asymptotics(Params(1, 0.25), g2);
        CHECK(rep.passed());
        CHECK(rep.values["regime"] == "bounded");
    }
    SECTION("s = 1/2 is logarithmic") {
        auto rep = delta_asymptotics(Params(1, 0.5), gammas);
        CHECK(rep.passed());
        CHECK(rep.values["regime"] == "logarithmic");
        CHECK(rep.find_trace("i1_half") != nullptr);
    }
    SECTION("n = 2, s = 1.5") {
        auto rep = delta_asymptotics(Params(2, 1.5), {0.3, 0.1, 0.03, 0.01, 0.003, 0.001});
        CHECK(rep.passed());
        CHECK_THAT(rep.values["slope"].get<double>(), WithinAbs(-1.0, 0.05));
    }
    SECTION("errors") {
        CHECK_THROWS_AS(delta_asymptotics(Params(1, 1.0), {0.5, 0.1, 0.01, 0.001}), DomainError);
        CHECK_THROWS_AS(delta_asymptotics(Params(1, 1.0), {0.5, 0.1, 0.01, 0.001, 1.5}), DomainError);
        CHECK_THROWS_AS(delta_asymptotics(Params(1, 1.0), gammas, 1e-12), FitError);
    }
}

TEST_CASE("boundary values", "[poisson][boundary]") {
    auto g = field::SpectralGrid::create(1, 16.0, 4096);
    SECTION("Gaussian, λ = 1") {
        auto rep = boundary_value(testfn::gaussian(g), Params(1, 1.0), {0.8, 0.4, 0.2, 0.1, 0.05});
        CHECK(rep.passed());
        auto errors = rep.values["errors"].get<std::vector<double>>();
        CHECK(errors.back() < 5e-2);
    }
    SECTION("complex λ") {
        auto rep = boundary_value(testfn::gaussian(g), Params(1, Complex(0.75, 0.5)), {0.5, 0.25, 0.125, 0.0625, 0.04});
        CHECK(rep.passed());
    }
    SECTION("constant input is recovered at every level") {
        auto rep = boundary_value(grid_constant(g, 1.0), Params(1, 1.3), {1.0, 0.5, 0.1, 0.05});
        for (double e : rep.values["errors"].get<std::vector<double>>()) CHECK(e <= 1e-13);
    }
    SECTION("resolution and ordering") {
        CHECK_THROWS_AS(boundary_value(testfn::gaussian(g), Params(1, 1.0), {0.1, 0.01}), ResolutionError);
        CHECK_THROWS_AS(boundary_value(testfn::gaussian(g), Params(1, 1.0), {0.1, 0.2}), DomainError);
    }
}

TEST_CASE("eigen-equation residual converges at second order", "[poisson][eigen]") {
    for (auto [n, lambda, a] : {std::tuple{1, Complex(1.0, 0), 1.0}, {1, Complex(0.75, 0.6), 0.6},
                                {2, Complex(1.25, 0), 1.0}, {3, Complex(0.9, -0.3), 1.5}}) {
        std::vector<Field> inputs;
        std::vector<int> sizes = n == 1 ? std::vector<int>{256, 512, 1024} : n == 2 ? std::vector<int>{64, 128, 256}
                                                                                 : std::vector<int>{32, 64};
        for (int M : sizes) inputs.push_back(testfn::gaussian(field::SpectralGrid::create(n, 12.0, M), 1.2));
        auto rep = eigen_convergence(inputs, a, Params(n, lambda));
        INFO("n=" << n << " lambda=" << lambda << "\n" << rep.to_json().dump(1));
        CHECK(rep.passed());
    }
}
