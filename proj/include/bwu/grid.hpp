#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bwu {

/// A real-valued function sampled at the cell centers of a uniform grid on
/// the cube [-r_max, r_max]^dim (dim is 1 or 2, samples row-major).
/// Immutable after construction; all operations on it are pure.
class GridFunction {
public:
    static GridFunction create(int dim, double h, double r_max,
                               std::string label, std::vector<double> samples);

    int dim() const { return dim_; }
    double h() const { return h_; }
    double r_max() const { return r_max_; }
    const std::string& label() const { return label_; }
    const std::vector<double>& samples() const { return samples_; }

    /// Cells per axis, 2*r_max/h (always even).
    int cells_per_axis() const { return n_; }
    std::size_t cell_count() const { return samples_.size(); }
    double cell_volume() const;

    /// Center coordinate of cell index i along one axis.
    double center(int i) const { return -r_max_ + (i + 0.5) * h_; }

    double at(int ix) const { return samples_[static_cast<std::size_t>(ix)]; }
    double at(int ix, int iy) const {
        return samples_[static_cast<std::size_t>(iy) * n_ + ix];
    }

    /// Sample value at the cell whose center is nearest to x (spot checks).
    double value_near(std::span<const double> x) const;

    /// Fraction of the total |f| mass carried by cells whose sup-norm
    /// coordinate exceeds the given fraction of r_max.
    double boundary_mass_fraction(double inner_fraction = 0.9) const;

    GridFunction with_label(std::string label) const;

private:
    GridFunction() = default;
    int dim_ = 1;
    double h_ = 1.0;
    double r_max_ = 1.0;
    int n_ = 2;
    std::string label_;
    std::vector<double> samples_;
};

/// Geometric radius grid r_k = r_min * rho^k, k = 0..count-1.
class RadiusGrid {
public:
    static RadiusGrid geometric(double r_min, double rho, int count);
    /// Nodes spanning [r_min, r_max] at ratio rho (last node <= r_max*(1+1e-12)).
    static RadiusGrid spanning(double r_min, double r_max, double rho);

    const std::vector<double>& nodes() const { return nodes_; }
    double r_min() const { return r_min_; }
    double rho() const { return rho_; }
    int count() const { return static_cast<int>(nodes_.size()); }
    double log_step() const;

private:
    RadiusGrid() = default;
    double r_min_ = 1.0;
    double rho_ = 2.0;
    std::vector<double> nodes_;
};

/// Round a radius to the nearest positive multiple of h (at least one cell).
double snap_radius(double r, double h);

/// True when r is an integer multiple of h within relative tolerance.
bool radius_aligned(double r, double h);

/// Catalog constructor. Names: constant, indicator_cube, power_abs, bump,
/// sine, step, random_field. The seed feeds random_field only (SplitMix64,
/// one draw per master-grid cell in row-major order, mapped to (0,1)).
GridFunction make_grid_function(const std::string& catalog_name,
                                std::span<const double> params, int dim,
                                double h, double r_max, std::uint64_t seed = 0);

/// Restriction of f to the sub-cube Q_r; r must be a grid-aligned radius.
GridFunction restrict_to_cube(const GridFunction& f, double r);

/// Mean of f over the aligned cube with the given center and half-side s.
double cube_mean(const GridFunction& f, std::span<const double> center, double s);

/// Measure of {x in Q_r : |f(x)| > t} at cell resolution.
double distribution_measure(const GridFunction& f, double r, double t);

/// SplitMix64 step; the catalog's reproducible generator.
std::uint64_t splitmix64_next(std::uint64_t& state);
/// Map one SplitMix64 output to the open interval (0,1).
double splitmix64_unit(std::uint64_t& state);

} // namespace bwu
