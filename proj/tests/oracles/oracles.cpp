#include "oracles/oracles.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace oracle {

cld gamma(cld z) {
    cld product = 1.0L;
    while (z.real() < 40.0L) {
        if (std::abs(z) < 1e-15L) throw std::domain_error("oracle gamma pole");
        product *= z;
        z += 1.0L;
    }
    static constexpr std::array<long double, 8> bernoulli = {
        1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730, 7.0L / 6, -3617.0L / 510};
    cld log_g = (z - 0.5L) * std::log(z) - z + 0.5L * std::log(2.0L * 3.14159265358979323846264338327950288L);
    cld zpow = z;
    for (std::size_t k = 1; k <= bernoulli.size(); ++k) {
        long double two_k = 2.0L * k;
        log_g += bernoulli[k - 1] / (two_k * (two_k - 1.0L) * zpow);
        zpow *= z * z;
    }
    return std::exp(log_g) / product;
}

long double bessel_i_series(long double nu, long double r) {
    long double q = r * r / 4.0L;
    long double term = std::exp(nu * std::log(r / 2.0L) - std::lgamma(nu + 1.0L));
    long double sum = term;
    for (int k = 1; k < 100000; ++k) {
        term *= q / (static_cast<long double>(k) * (k + nu));
        sum += term;
        if (term < 1e-24L * sum) break;
    }
    return sum;
}

cld bessel_k_trapezoid(cld lambda, long double r, long double step, long double t_max) {
    cld sum = 0.5L * std::exp(-r);
    for (long double t = step; t <= t_max; t += step) sum += std::exp(-r * std::cosh(t)) * std::cosh(lambda * t);
    return step * sum;
}

namespace {

constexpr std::array<long double, 8> xgk = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.0L};
constexpr std::array<long double, 8> wgk = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
constexpr std::array<long double, 4> wg = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

long double adapt(const std::function<long double(long double)>& f, long double a, long double b,
                  long double tol, int depth) {
    long double c = 0.5L * (a + b), h = 0.5L * (b - a);
    long double fc = f(c);
    long double kron = wgk[7] * fc, gauss = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        long double f1 = f(c - h * xgk[i]), f2 = f(c + h * xgk[i]);
        kron += wgk[i] * (f1 + f2);
        if (i % 2 == 1) gauss += wg[i / 2] * (f1 + f2);
    }
    kron *= h;
    gauss *= h;
    if (std::abs(kron - gauss) <= tol || depth > 60) return kron;
    return adapt(f, a, c, 0.5L * tol, depth + 1) + adapt(f, c, b, 0.5L * tol, depth + 1);
}

}  // namespace

long double integrate(const std::function<long double(long double)>& f, long double a, long double b,
                      long double tol) {
    return adapt(f, a, b, tol, 0);
}

long double integrate_to_infinity(const std::function<long double(long double)>& f, long double a,
                                  long double tol) {
    auto g = [&](long double t) {
        long double one_minus = 1.0L - t;
        if (one_minus <= 0.0L) return 0.0L;
        long double x = a + t / one_minus;
        return f(x) / (one_minus * one_minus);
    };
    return adapt(g, 0.0L, 1.0L, tol, 0);
}

}  // namespace oracle
