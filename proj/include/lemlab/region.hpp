#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lemlab/polynomial.hpp"
#include "lemlab/sampling.hpp"

namespace lemlab {

class Region;

struct Disc {
    Complex center;
    double radius = 0.0;
};

struct Annulus {
    Complex center;
    double r_in = 0.0;
    double r_out = 0.0;
};

/// Simple closed polygon; the closing edge is implicit.
struct Polygon {
    std::vector<Complex> vertices;
};

/// {w : |g(w)| <= x}
struct Sublevel {
    Polynomial g;
    double x = 0.0;
};

/// {z : p(z) in inner}, p monic.
struct Preimage {
    Polynomial p;
    std::shared_ptr<const Region> inner;
};

struct Union {
    std::vector<Region> parts;
};

/// Cell (i, j) covers origin + h*[i, i+1) x h*[j, j+1).
struct PixelMask {
    Complex origin;
    double h = 0.0;
    int nx = 0;
    int ny = 0;
    std::vector<std::uint8_t> bits;   // row-major, j * nx + i

    bool at(int i, int j) const noexcept {
        return i >= 0 && j >= 0 && i < nx && j < ny && bits[static_cast<std::size_t>(j) * nx + i] != 0;
    }
    Complex cell_center(int i, int j) const noexcept { return origin + h * Complex{i + 0.5, j + 0.5}; }
    std::size_t set_count() const noexcept;
};

/// Closed, bounded plane region. Immutable; copies share sub-regions.
class Region {
public:
    using Variant = std::variant<Disc, Annulus, Polygon, Sublevel, Preimage, Union, PixelMask>;

    static Region disc(Complex center, double radius);
    static Region annulus(Complex center, double r_in, double r_out);
    static Region polygon(std::vector<Complex> vertices);
    static Region rectangle(Complex lower_left, double width, double height);
    static Region sublevel(Polynomial g, double x);
    static Region preimage(Polynomial p, Region inner);
    static Region union_of(std::vector<Region> parts);
    static Region mask(PixelMask m);

    const Variant& variant() const noexcept { return v_; }
    template <class T>
    const T* get_if() const noexcept {
        return std::get_if<T>(&v_);
    }
    std::string kind() const;

    bool contains(Complex z) const;
    Disc bounding_disc() const;

    /// The image {alpha z + beta : z in K}, alpha != 0.
    Region affine(Complex alpha, Complex beta) const;

private:
    explicit Region(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

struct AreaEstimate {
    enum class Method { exact, grid, montecarlo };
    double value = 0.0;
    double err = 0.0;
    Method method = Method::exact;
    std::uint64_t samples_or_resolution = 0;
};

const char* to_string(AreaEstimate::Method m) noexcept;

bool contains(const Region& K, Complex z);
Disc bounding_disc(const Region& K);
AreaEstimate area(const Region& K, const SamplingBudget& budget = {});

/// Closed-form area when the variant has one (disc, annulus, polygon, mask).
std::optional<double> exact_area(const Region& K);

Region preimage_region(const Polynomial& p, const Region& K);
Region sublevel_region(const Polynomial& g, double x);
Region pixelize(const Region& K, double h);

/// Recognizes regions that are structurally discs (e.g. the preimage of a
/// disc under (z-b)^n + c centered at c). `tol` is relative.
std::optional<Disc> as_disc(const Region& K, double tol = 1e-12);

/// A disc D such that K equals D up to parts whose closed-form area is at
/// most `negligible` * Area(D). Used by the equality-case detectors.
std::optional<Disc> essential_disc(const Region& K, double tol = 1e-6, double negligible = 1e-4);

/// Grid of cell-center membership over a square box; shared by the grid area
/// method and pixelize.
PixelMask rasterize(const Region& K, Complex origin, double h, int nx, int ny);

}  // namespace lemlab
