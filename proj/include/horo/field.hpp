#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace horo::field {

using Complex = std::complex<double>;

// Uniform lattice on [-L, L)^n with M points per axis, and its FFT-dual frequency
// lattice ξ_k = πk/L, k ∈ [-M/2, M/2)^n. Index order is row-major, last axis fastest;
// both lattices put the origin at per-axis index M/2.
class SpectralGrid {
public:
    static std::shared_ptr<const SpectralGrid> create(int dim, double extent, int points);

    int dim() const { return dim_; }
    double extent() const { return extent_; }
    int points() const { return points_; }
    double spacing() const { return 2.0 * extent_ / points_; }
    double frequency_spacing() const;
    std::size_t size() const { return size_; }

    double coordinate(int index) const { return -extent_ + index * spacing(); }
    double frequency(int index) const { return (index - points_ / 2) * frequency_spacing(); }

    std::array<int, 3> unravel(std::size_t flat) const;
    std::array<double, 3> position(std::size_t flat) const;
    std::array<double, 3> wavevector(std::size_t flat) const;
    /// Σ (k_d)² with integer offsets k_d = i_d - M/2; |ξ|² = that · (π/L)².
    std::int64_t wavenumber_squared(std::size_t flat) const;

    bool operator==(const SpectralGrid& other) const {
        return dim_ == other.dim_ && extent_ == other.extent_ && points_ == other.points_;
    }

private:
    SpectralGrid(int dim, double extent, int points);
    int dim_;
    double extent_;
    int points_;
    std::size_t size_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

enum class Space { position, frequency };

class Field {
public:
    Field(GridPtr grid, Space space);
    Field(GridPtr grid, Space space, std::vector<Complex> values);

    static Field sample(GridPtr grid, const std::function<Complex(std::span<const double>)>& fn);
    static Field sample_frequency(GridPtr grid, const std::function<Complex(std::span<const double>)>& fn);

    const SpectralGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    Space space() const { return space_; }

    std::span<const Complex> values() const { return values_; }
    Complex operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    Field scaled(Complex factor) const;

private:
    GridPtr grid_;
    Space space_;
    std::vector<Complex> values_;
};

bool same_grid(const Field& a, const Field& b);

Field fourier(const Field& f);
Field inverse_fourier(const Field& fhat);

enum class NormKind { L1, L2, Linf };
double norm(const Field& f, NormKind kind = NormKind::L2);

/// Continuum convolution (periodic on the box) with the unitary-convention factor.
Field convolve(const Field& f, const Field& g);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);

/// Multiplies a frequency-space field by m(ξ).
Field apply_multiplier(const Field& fhat, const std::function<Complex(std::span<const double>)>& m);

/// Relative L² distance over the points selected by `mask` (all points when empty).
double relative_l2_error(const Field& value, const Field& reference,
                         const std::function<bool(std::span<const double>)>& mask = {});

// Serialization: CSV rows "x1[,x2[,x3]],re,im" (frequency fields use ξ columns) and a binary
// dump with header {int32 n, int32 M, float64 L} followed by interleaved re/im binary64,
// all little-endian. Binary dumps hold position-space fields.
std::string to_csv(const Field& f);
void write_csv(const Field& f, const std::filesystem::path& path);
void write_binary(const Field& f, const std::filesystem::path& path);
Field read_binary(const std::filesystem::path& path);

}  // namespace horo::field
