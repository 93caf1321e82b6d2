#include "horo/testfunctions.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "horo/error.hpp"

namespace horo::testfn {

using field::Complex;

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

Field gaussian(const GridPtr& grid, double width) {
    if (!(width > 0.0)) throw DomainError("gaussian width must be positive");
    return Field::sample(grid, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return Complex(std::exp(-0.5 * r2 / (width * width)), 0.0);
    });
}

Field bump(const GridPtr& grid, double radius) {
    if (!(radius > 0.0)) throw DomainError("bump radius must be positive");
    return Field::sample(grid, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        double q = r2 / (radius * radius);
        if (q >= 1.0) return Complex(0.0, 0.0);
        return Complex(std::exp(1.0 - 1.0 / (1.0 - q)), 0.0);
    });
}

Field plateau(const GridPtr& grid, double half_width, double taper) {
    if (!(half_width > 0.0) || !(taper > 0.0)) throw DomainError("plateau needs positive half-width and taper");
    return Field::sample(grid, [&](std::span<const double> x) {
        double v = 1.0;
        for (double c : x) v *= 1.0 - smooth_step((std::abs(c) - half_width) / taper);
        return Complex(v, 0.0);
    });
}

Field constant(const GridPtr& grid, double value) {
    return Field(grid, field::Space::position, std::vector<Complex>(grid->size(), Complex(value, 0.0)));
}

Field random_bandlimited(const GridPtr& grid, double cutoff, std::uint64_t seed, int packets) {
    if (!(cutoff > 0.0)) throw DomainError("band limit must be positive");
    if (packets < 1) throw DomainError("need at least one packet");
    const int n = grid->dim();
    const double L = grid->extent();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> width(1.0, 1.5);
    struct Packet {
        double amp_re, amp_im, sigma;
        double center[3], carrier[3];
    };
    std::vector<Packet> ps(packets);
    for (auto& p : ps) {
        p.amp_re = unit(rng);
        p.amp_im = unit(rng);
        p.sigma = width(rng) * L / 16.0;
        for (int d = 0; d < 3; ++d) {
            p.center[d] = d < n ? 0.25 * L * unit(rng) : 0.0;
            p.carrier[d] = d < n ? cutoff * unit(rng) / std::sqrt(static_cast<double>(n)) : 0.0;
        }
    }
    return Field::sample(grid, [&](std::span<const double> x) {
        Complex acc = 0.0;
        for (const auto& p : ps) {
            double r2 = 0.0, phase = 0.0;
            for (int d = 0; d < n; ++d) {
                double dx = x[d] - p.center[d];
                r2 += dx * dx;
                phase += p.carrier[d] * x[d];
            }
            acc += Complex(p.amp_re, p.amp_im) * std::exp(-0.5 * r2 / (p.sigma * p.sigma)) *
                   std::polar(1.0, phase);
        }
        return acc;
    });
}

}  // namespace horo::testfn
