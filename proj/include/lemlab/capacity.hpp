#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lemlab/region.hpp"

namespace lemlab {

/// Plane condenser (E, B). E is read as the interior of the stored closed
/// region; B must sit inside E with at least one cell of clearance at the
/// solve resolution.
struct Condenser {
    Region E;
    Region B;
};

/// Real function sampled at cell centers origin + h * (i + 1/2, j + 1/2).
struct GridFunction {
    Complex origin;
    double h = 0.0;
    int nx = 0;
    int ny = 0;
    std::vector<double> values;             // row-major, j * nx + i
    std::vector<std::uint8_t> fixed_zero;   // empty or nx * ny
    std::vector<std::uint8_t> fixed_one;    // empty or nx * ny

    static GridFunction zeros(Complex origin, double h, int nx, int ny);

    std::size_t index(int i, int j) const noexcept { return static_cast<std::size_t>(j) * nx + i; }
    double& at(int i, int j) noexcept { return values[index(i, j)]; }
    double at(int i, int j) const noexcept { return values[index(i, j)]; }
    Complex cell_center(int i, int j) const noexcept { return origin + h * Complex{i + 0.5, j + 0.5}; }
};

struct FeketeDetail {
    int n = 0;
    std::size_t candidates = 0;
    double d_quarter = 0.0;   // raw energy diameter at n/4
    double d_half = 0.0;      // ... at n/2
    double d_full = 0.0;      // ... at n
    double extrapolated_coarse = 0.0;   // fit on (n/4, n/2)
};

struct GridDetail {
    double h = 0.0;
    double cap_h = 0.0;
    double cap_2h = 0.0;
    int unknowns = 0;
    int iterations = 0;
};

struct CapacityEstimate {
    enum class Method { closed_form, fekete, grid_dirichlet };
    double value = 0.0;
    double err = 0.0;
    Method method = Method::closed_form;
    std::variant<std::monostate, FeketeDetail, GridDetail> detail;
};

const char* to_string(CapacityEstimate::Method m) noexcept;

struct FeketeOptions {
    int n_points = 256;
    int sweeps = 3;
    int candidates_per_point = 16;
    int neighbourhood = 24;   // candidates tried per point in a local sweep
    bool force_numeric = false;
};

/// Logarithmic capacity. Discs (and regions recognised as discs) use the
/// radius; everything else goes through the transfinite diameter.
CapacityEstimate log_capacity(const Region& K, const FeketeOptions& options = {});

/// Dense samples of the outer boundary of K (superset allowed).
std::vector<Complex> boundary_candidates(const Region& K, std::size_t target);

struct FeketeRun {
    std::vector<Complex> points;
    double diameter = 0.0;   // exp of the mean pairwise log distance
};

/// Leja-greedy selection from the candidates followed by local-maximization
/// sweeps of the Vandermonde product.
FeketeRun fekete_points(std::span<const Complex> candidates, int n, int sweeps = 3, int neighbourhood = 24);

/// exp(2/(n(n-1)) * sum_{i<j} log|z_i - z_j|)
double energy_diameter(std::span<const Complex> points);

/// Solution of the clamped discrete Dirichlet problem at one spacing.
struct GridSolve {
    GridFunction f;
    double energy = 0.0;
    double capacity = 0.0;
    int unknowns = 0;
    int iterations = 0;
};

GridSolve solve_condenser(const Condenser& C, double h);

/// Richardson-paired (h, 2h) estimate of cap(E, B).
CapacityEstimate condenser_capacity(const Condenser& C, double h);

/// Sum over horizontally and vertically adjacent cells of (f_i - f_j)^2.
double dirichlet_energy(const GridFunction& f);

/// Equimeasurable rearrangement onto concentric discs about the grid center.
GridFunction schwarz_symmetrize(const GridFunction& f);

Condenser pullback_condenser(const Polynomial& p, const Condenser& C);

/// CSV matrix, one grid row per line, top row first.
void write_grid_csv(const GridFunction& f, const std::string& path);

}  // namespace lemlab
