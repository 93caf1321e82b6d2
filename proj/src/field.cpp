#include "horo/field.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "horo/error.hpp"
#include "horo/report.hpp"

namespace horo::field {

namespace {

constexpr double pi = std::numbers::pi;

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

// FFTW's planner is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void fft_inplace(std::vector<Complex>& data, int dim, int points, int sign) {
    int dims[3] = {points, points, points};
    auto* buffer = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft(dim, dims, buffer, buffer, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw Error("FFTW failed to create a plan");
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
}

int parity(const SpectralGrid& g, std::size_t flat) {
    auto idx = g.unravel(flat);
    int s = 0;
    for (int d = 0; d < g.dim(); ++d) s += idx[d];
    return s & 1;
}

// Centered DFT: out_k = Σ_j in_j e^{∓2πi (j-M/2)(k-M/2)/M}, per axis.
std::vector<Complex> centered_dft(const SpectralGrid& g, std::span<const Complex> in, int sign, double scale) {
    std::vector<Complex> data(in.begin(), in.end());
    for (std::size_t i = 0; i < data.size(); ++i)
        if (parity(g, i)) data[i] = -data[i];
    fft_inplace(data, g.dim(), g.points(), sign);
    // (-1)^{M/2} per axis.
    double global = ((g.dim() * (g.points() / 2)) & 1) ? -scale : scale;
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= parity(g, i) ? -global : global;
    return data;
}

void put_u32(std::ostream& os, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::ostream& os, double d) {
    auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_bytes(std::istream& is, int count) {
    std::uint64_t v = 0;
    for (int i = 0; i < count; ++i) {
        int c = is.get();
        if (c == EOF) throw Error("truncated field dump");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

}  // namespace

SpectralGrid::SpectralGrid(int dim, double extent, int points) : dim_(dim), extent_(extent), points_(points) {
    size_ = 1;
    for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(points);
}

std::shared_ptr<const SpectralGrid> SpectralGrid::create(int dim, double extent, int points) {
    if (dim < 1 || dim > 3) throw DomainError("grid dimension must be 1, 2 or 3");
    if (!(extent > 0.0) || !std::isfinite(extent)) throw DomainError("grid extent must be positive");
    if (!is_power_of_two(points) || points < 2) throw DomainError("points per axis must be a power of two");
    return std::shared_ptr<const SpectralGrid>(new SpectralGrid(dim, extent, points));
}

double SpectralGrid::frequency_spacing() const { return pi / extent_; }

std::array<int, 3> SpectralGrid::unravel(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % points_);
        flat /= points_;
    }
    return idx;
}

std::array<double, 3> SpectralGrid::position(std::size_t flat) const {
    auto idx = unravel(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int d = 0; d < dim_; ++d) x[d] = coordinate(idx[d]);
    return x;
}

std::array<double, 3> SpectralGrid::wavevector(std::size_t flat) const {
    auto idx = unravel(flat);
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    for (int d = 0; d < dim_; ++d) xi[d] = frequency(idx[d]);
    return xi;
}

std::int64_t SpectralGrid::wavenumber_squared(std::size_t flat) const {
    auto idx = unravel(flat);
    std::int64_t s = 0;
    for (int d = 0; d < dim_; ++d) {
        std::int64_t k = idx[d] - points_ / 2;
        s += k * k;
    }
    return s;
}

Field::Field(GridPtr grid, Space space) : grid_(std::move(grid)), space_(space) {
    if (!grid_) throw Error("field requires a grid");
    values_.assign(grid_->size(), Complex(0.0, 0.0));
}

Field::Field(GridPtr grid, Space space, std::vector<Complex> values)
    : grid_(std::move(grid)), space_(space), values_(std::move(values)) {
    if (!grid_) throw Error("field requires a grid");
    if (values_.size() != grid_->size())
        throw Error("field has " + std::to_string(values_.size()) + " values, grid needs " +
                    std::to_string(grid_->size()));
}

Field Field::sample(GridPtr grid, const std::function<Complex(std::span<const double>)>& fn) {
    std::vector<Complex> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto x = grid->position(i);
        v[i] = fn(std::span<const double>(x.data(), grid->dim()));
    }
    return Field(grid, Space::position, std::move(v));
}

Field Field::sample_frequency(GridPtr grid, const std::function<Complex(std::span<const double>)>& fn) {
    std::vector<Complex> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto xi = grid->wavevector(i);
        v[i] = fn(std::span<const double>(xi.data(), grid->dim()));
    }
    return Field(grid, Space::frequency, std::move(v));
}

Field Field::scaled(Complex factor) const {
    std::vector<Complex> v(values_);
    for (auto& z : v) z *= factor;
    return Field(grid_, space_, std::move(v));
}

bool same_grid(const Field& a, const Field& b) {
    return a.grid_ptr() == b.grid_ptr() || a.grid() == b.grid();
}

Field fourier(const Field& f) {
    if (f.space() != Space::position) throw Error("fourier expects a position-space field");
    const auto& g = f.grid();
    double scale = std::pow(2.0 * pi, -0.5 * g.dim()) * std::pow(g.spacing(), g.dim());
    return Field(f.grid_ptr(), Space::frequency, centered_dft(g, f.values(), FFTW_FORWARD, scale));
}

Field inverse_fourier(const Field& fhat) {
    if (fhat.space() != Space::frequency) throw Error("inverse_fourier expects a frequency-space field");
    const auto& g = fhat.grid();
    double scale = std::pow(2.0 * pi, -0.5 * g.dim()) * std::pow(g.frequency_spacing(), g.dim());
    return Field(fhat.grid_ptr(), Space::position, centered_dft(g, fhat.values(), FFTW_BACKWARD, scale));
}

double norm(const Field& f, NormKind kind) {
    const auto& g = f.grid();
    double cell = std::pow(f.space() == Space::position ? g.spacing() : g.frequency_spacing(), g.dim());
    double acc = 0.0;
    switch (kind) {
        case NormKind::L1:
            for (auto z : f.values()) acc += std::abs(z);
            return acc * cell;
        case NormKind::L2:
            for (auto z : f.values()) acc += std::norm(z);
            return std::sqrt(acc * cell);
        case NormKind::Linf:
            for (auto z : f.values()) acc = std::max(acc, std::abs(z));
            return acc;
    }
    return acc;
}

Field convolve(const Field& f, const Field& g) {
    if (!same_grid(f, g)) throw GridMismatch("convolve needs fields on the same grid");
    if (f.space() != Space::position || g.space() != Space::position)
        throw Error("convolve expects position-space fields");
    Field fh = fourier(f), gh = fourier(g);
    double c = std::pow(2.0 * pi, 0.5 * f.grid().dim());
    std::vector<Complex> prod(fh.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = c * (fh[i] * gh[i]);
    return inverse_fourier(Field(f.grid_ptr(), Space::frequency, std::move(prod)));
}

Field operator+(const Field& a, const Field& b) {
    if (!same_grid(a, b)) throw GridMismatch("sum of fields on different grids");
    if (a.space() != b.space()) throw Error("sum of fields in different spaces");
    std::vector<Complex> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return Field(a.grid_ptr(), a.space(), std::move(v));
}

Field operator-(const Field& a, const Field& b) {
    if (!same_grid(a, b)) throw GridMismatch("difference of fields on different grids");
    if (a.space() != b.space()) throw Error("difference of fields in different spaces");
    std::vector<Complex> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
    return Field(a.grid_ptr(), a.space(), std::move(v));
}

Field apply_multiplier(const Field& fhat, const std::function<Complex(std::span<const double>)>& m) {
    if (fhat.space() != Space::frequency) throw Error("multipliers act on frequency-space fields");
    const auto& g = fhat.grid();
    std::vector<Complex> v(fhat.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto xi = g.wavevector(i);
        v[i] = fhat[i] * m(std::span<const double>(xi.data(), g.dim()));
    }
    return Field(fhat.grid_ptr(), Space::frequency, std::move(v));
}

double relative_l2_error(const Field& value, const Field& reference,
                         const std::function<bool(std::span<const double>)>& mask) {
    if (!same_grid(value, reference)) throw GridMismatch("comparison of fields on different grids");
    const auto& g = value.grid();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (mask) {
            auto x = value.space() == Space::position ? g.position(i) : g.wavevector(i);
            if (!mask(std::span<const double>(x.data(), g.dim()))) continue;
        }
        num += std::norm(value[i] - reference[i]);
        den += std::norm(reference[i]);
    }
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

std::string to_csv(const Field& f) {
    const auto& g = f.grid();
    const bool pos = f.space() == Space::position;
    std::ostringstream os;
    static const char* xs[] = {"x1", "x2", "x3"};
    static const char* ks[] = {"xi1", "xi2", "xi3"};
    for (int d = 0; d < g.dim(); ++d) os << (pos ? xs[d] : ks[d]) << ',';
    os << "re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto c = pos ? g.position(i) : g.wavevector(i);
        for (int d = 0; d < g.dim(); ++d) os << format_number(c[d]) << ',';
        os << format_number(f[i].real()) << ',' << format_number(f[i].imag()) << '\n';
    }
    return os.str();
}

void write_csv(const Field& f, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_csv(f);
}

void write_binary(const Field& f, const std::filesystem::path& path) {
    if (f.space() != Space::position) throw Error("binary dumps hold position-space fields");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    put_u32(out, static_cast<std::uint32_t>(f.grid().dim()));
    put_u32(out, static_cast<std::uint32_t>(f.grid().points()));
    put_f64(out, f.grid().extent());
    for (auto z : f.values()) {
        put_f64(out, z.real());
        put_f64(out, z.imag());
    }
}

Field read_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    int dim = static_cast<int>(static_cast<std::int32_t>(get_bytes(in, 4)));
    int points = static_cast<int>(static_cast<std::int32_t>(get_bytes(in, 4)));
    double extent = std::bit_cast<double>(get_bytes(in, 8));
    auto grid = SpectralGrid::create(dim, extent, points);
    std::vector<Complex> v(grid->size());
    for (auto& z : v) {
        double re = std::bit_cast<double>(get_bytes(in, 8));
        double im = std::bit_cast<double>(get_bytes(in, 8));
        z = {re, im};
    }
    if (in.peek() != EOF) throw Error("trailing bytes in field dump " + path.string());
    return Field(grid, Space::position, std::move(v));
}

}  // namespace horo::field
