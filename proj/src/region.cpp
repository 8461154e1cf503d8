#include "lemlab/region.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lemlab/error.hpp"
#include "lemlab/parallel.hpp"

namespace lemlab {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double cross(Complex a, Complex b) noexcept { return a.real() * b.imag() - a.imag() * b.real(); }

bool on_segment(Complex z, Complex a, Complex b, double tol) noexcept {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a) <= tol;
    const double t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + t * ab)) <= tol;
}

bool segments_cross(Complex a, Complex b, Complex c, Complex d) noexcept {
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double polygon_signed_area(const std::vector<Complex>& v) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * s;
}

bool polygon_contains(const Polygon& poly, Complex z) {
    const auto& v = poly.vertices;
    double scale = 0.0;
    for (const auto& p : v) scale = std::max(scale, std::abs(p));
    const double tol = 1e-12 * std::max(1.0, scale);
    int winding = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex a = v[i], b = v[(i + 1) % v.size()];
        if (on_segment(z, a, b, tol)) return true;
        if (a.imag() <= z.imag()) {
            if (b.imag() > z.imag() && cross(b - a, z - a) > 0) ++winding;
        } else if (b.imag() <= z.imag() && cross(b - a, z - a) < 0) {
            --winding;
        }
    }
    return winding != 0;
}

// Disc around a sublevel set {|q(z)| <= R} of a monic q, centered at the
// centroid of its roots so the bound moves with translations of q.
Disc monic_sublevel_disc(const Polynomial& q, double R) {
    const int n = q.degree();
    const Complex b = -q.coeffs()[static_cast<std::size_t>(n - 1)] / static_cast<double>(n);
    return {b, escape_radius(q.compose_affine(1.0, b), R)};
}

Disc enclose(const std::vector<Disc>& discs) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& d : discs) {
        x0 = std::min(x0, d.center.real() - d.radius);
        x1 = std::max(x1, d.center.real() + d.radius);
        y0 = std::min(y0, d.center.imag() - d.radius);
        y1 = std::max(y1, d.center.imag() + d.radius);
    }
    const Complex c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
    double r = 0.0;
    for (const auto& d : discs) r = std::max(r, std::abs(d.center - c) + d.radius);
    return {c, r};
}

bool close(Complex a, Complex b, double tol, double scale) noexcept {
    return std::abs(a - b) <= tol * std::max(1.0, scale);
}

AreaEstimate montecarlo_area(const Region& K, const SamplingBudget& budget) {
    if (budget.samples < kShardSize)
        throw BudgetTooSmall("area: at least " + std::to_string(kShardSize) + " samples are required");
    const Disc d = K.bounding_disc();
    const Box box = Box::around(d.center, d.radius);
    auto run = [&](std::uint64_t n) {
        const auto m = stratified_moments(box, n, budget.seed, [&](Complex z) { return K.contains(z) ? 1.0 : 0.0; });
        const double p = m.mean;
        const double nn = static_cast<double>(m.count);
        const double var = std::max(p * (1.0 - p), 1.0 / nn);
        return AreaEstimate{p * box.area(), 3.0 * std::sqrt(var / nn) * box.area(),
                            AreaEstimate::Method::montecarlo, m.count};
    };
    std::uint64_t n = budget.samples;
    auto est = run(n);
    if (budget.target_rel_err) {
        const double target = *budget.target_rel_err;
        while (est.err > target * est.value) {
            if (n >= budget.max_samples)
                throw BudgetTooSmall("area: relative error " + std::to_string(est.err / std::max(est.value, 1e-300)) +
                                     " exceeds target " + std::to_string(target) + " at the sample cap");
            n = std::min(budget.max_samples, n * 4);
            est = run(n);
        }
    }
    return est;
}

AreaEstimate grid_area(const Region& K, const SamplingBudget& budget) {
    const Disc d = K.bounding_disc();
    const double h = budget.grid_h > 0.0 ? budget.grid_h : 2.0 * d.radius / 1024.0;
    const int n = static_cast<int>(std::ceil(2.0 * d.radius / h));
    if (n < 16) throw ResolutionTooCoarse("area: fewer than 16 cells across the bounding disc");
    const Complex origin = d.center - 0.5 * n * h * Complex{1.0, 1.0};
    const PixelMask m = rasterize(K, origin, h, n, n);
    std::size_t inside = 0, boundary = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const bool in = m.at(i, j);
            inside += in;
            if (m.at(i - 1, j) != in || m.at(i + 1, j) != in || m.at(i, j - 1) != in || m.at(i, j + 1) != in)
                ++boundary;
        }
    return {static_cast<double>(inside) * h * h, static_cast<double>(std::max<std::size_t>(boundary, 1)) * h * h,
            AreaEstimate::Method::grid, static_cast<std::uint64_t>(n)};
}

}  // namespace

std::size_t PixelMask::set_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

// --- construction ----------------------------------------------------------

Region Region::disc(Complex center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("disc radius must be > 0");
    return Region(Disc{center, radius});
}

Region Region::annulus(Complex center, double r_in, double r_out) {
    if (!(r_in >= 0.0) || !(r_out > r_in)) throw InvalidArgument("annulus needs 0 <= r_in < r_out");
    return Region(Annulus{center, r_in, r_out});
}

Region Region::polygon(std::vector<Complex> vertices) {
    if (vertices.size() < 3) throw InvalidArgument("polygon needs at least 3 vertices");
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]))
                throw InvalidArgument("polygon edges " + std::to_string(i) + " and " + std::to_string(j) + " cross");
        }
    if (polygon_signed_area(vertices) == 0.0) throw InvalidArgument("polygon has zero area");
    return Region(Polygon{std::move(vertices)});
}

Region Region::rectangle(Complex lower_left, double width, double height) {
    return polygon({lower_left, lower_left + width, lower_left + Complex{width, height},
                    lower_left + Complex{0.0, height}});
}

Region Region::sublevel(Polynomial g, double x) {
    if (g.degree() < 1) throw InvalidArgument("sublevel polynomial must have degree >= 1");
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("sublevel threshold must be > 0");
    return Region(Sublevel{std::move(g), x});
}

Region Region::preimage(Polynomial p, Region inner) {
    if (p.degree() < 1) throw InvalidArgument("preimage polynomial must have degree >= 1");
    if (!p.is_monic()) throw NotMonic("preimage_region: polynomial is not monic");
    return Region(Preimage{std::move(p), std::make_shared<const Region>(std::move(inner))});
}

Region Region::union_of(std::vector<Region> parts) {
    if (parts.empty()) throw InvalidArgument("union needs at least one part");
    return Region(Union{std::move(parts)});
}

Region Region::mask(PixelMask m) {
    if (!(m.h > 0.0) || m.nx < 1 || m.ny < 1 || m.bits.size() != static_cast<std::size_t>(m.nx) * m.ny)
        throw InvalidArgument("mask dimensions are inconsistent");
    return Region(std::move(m));
}

std::string Region::kind() const {
    static constexpr const char* names[] = {"disc", "annulus", "polygon", "sublevel", "preimage", "union", "mask"};
    return names[v_.index()];
}

// --- queries ---------------------------------------------------------------

bool Region::contains(Complex z) const {
    return std::visit(
        overloaded{
            [&](const Disc& d) { return std::abs(z - d.center) <= d.radius; },
            [&](const Annulus& a) {
                const double r = std::abs(z - a.center);
                return r >= a.r_in && r <= a.r_out;
            },
            [&](const Polygon& p) { return polygon_contains(p, z); },
            [&](const Sublevel& s) { return std::abs(s.g(z)) <= s.x; },
            [&](const Preimage& p) { return p.inner->contains(p.p(z)); },
            [&](const Union& u) {
                return std::any_of(u.parts.begin(), u.parts.end(), [&](const Region& r) { return r.contains(z); });
            },
            [&](const PixelMask& m) {
                const Complex local = (z - m.origin) / m.h;
                const double fi = std::floor(local.real()), fj = std::floor(local.imag());
                if (fi < 0 || fj < 0 || fi >= m.nx || fj >= m.ny) return false;
                return m.at(static_cast<int>(fi), static_cast<int>(fj));
            },
        },
        v_);
}

Disc Region::bounding_disc() const {
    return std::visit(
        overloaded{
            [](const Disc& d) { return d; },
            [](const Annulus& a) { return Disc{a.center, a.r_out}; },
            [](const Polygon& p) {
                double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
                for (auto v : p.vertices) {
                    x0 = std::min(x0, v.real());
                    x1 = std::max(x1, v.real());
                    y0 = std::min(y0, v.imag());
                    y1 = std::max(y1, v.imag());
                }
                const Complex c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
                double r = 0.0;
                for (auto v : p.vertices) r = std::max(r, std::abs(v - c));
                return Disc{c, r};
            },
            [](const Sublevel& s) {
                const double lead = std::abs(s.g.leading());
                return monic_sublevel_disc(s.g.monic_normalized(), s.x / lead);
            },
            [](const Preimage& p) {
                const Disc in = p.inner->bounding_disc();
                return monic_sublevel_disc(p.p - in.center, in.radius);
            },
            [](const Union& u) {
                std::vector<Disc> discs;
                for (const auto& r : u.parts) discs.push_back(r.bounding_disc());
                return enclose(discs);
            },
            [](const PixelMask& m) {
                return Disc{m.origin + 0.5 * m.h * Complex(m.nx, m.ny), 0.5 * m.h * std::hypot(m.nx, m.ny)};
            },
        },
        v_);
}

Region Region::affine(Complex alpha, Complex beta) const {
    if (alpha == Complex{}) throw InvalidArgument("affine map needs alpha != 0");
    auto map = [&](Complex z) { return alpha * z + beta; };
    const Complex inv_alpha = 1.0 / alpha;
    const Complex inv_beta = -beta / alpha;
    return std::visit(
        overloaded{
            [&](const Disc& d) { return Region(Disc{map(d.center), std::abs(alpha) * d.radius}); },
            [&](const Annulus& a) {
                return Region(Annulus{map(a.center), std::abs(alpha) * a.r_in, std::abs(alpha) * a.r_out});
            },
            [&](const Polygon& p) {
                Polygon out;
                for (auto v : p.vertices) out.vertices.push_back(map(v));
                return Region(std::move(out));
            },
            [&](const Sublevel& s) {
                if (alpha == Complex{1.0}) return Region(Sublevel{s.g.compose_affine(1.0, -beta), s.x});
                return Region(Sublevel{s.g.compose_affine(inv_alpha, inv_beta), s.x});
            },
            [&](const Preimage& p) {
                if (alpha == Complex{1.0})
                    return Region(Preimage{p.p.compose_affine(1.0, -beta), p.inner});
                // q(w) = p((w - beta)/alpha) has leading alpha^-n; rescale the inner region to match.
                const Polynomial q = p.p.compose_affine(inv_alpha, inv_beta);
                const Complex lead = q.leading();
                return Region(Preimage{q.monic_normalized(),
                                       std::make_shared<const Region>(p.inner->affine(1.0 / lead, 0.0))});
            },
            [&](const Union& u) {
                Union out;
                for (const auto& r : u.parts) out.parts.push_back(r.affine(alpha, beta));
                return Region(std::move(out));
            },
            [&](const PixelMask& m) {
                if (alpha.imag() != 0.0 || alpha.real() <= 0.0)
                    throw InvalidArgument("pixel masks support only positive real scaling");
                PixelMask out = m;
                out.origin = map(m.origin);
                out.h = alpha.real() * m.h;
                return Region(std::move(out));
            },
        },
        v_);
}

const char* to_string(AreaEstimate::Method m) noexcept {
    switch (m) {
        case AreaEstimate::Method::exact: return "exact";
        case AreaEstimate::Method::grid: return "grid";
        case AreaEstimate::Method::montecarlo: return "montecarlo";
    }
    return "?";
}

bool contains(const Region& K, Complex z) { return K.contains(z); }

Disc bounding_disc(const Region& K) { return K.bounding_disc(); }

std::optional<double> exact_area(const Region& K) {
    if (auto d = K.get_if<Disc>()) return kPi * d->radius * d->radius;
    if (auto a = K.get_if<Annulus>()) return kPi * (a->r_out * a->r_out - a->r_in * a->r_in);
    if (auto p = K.get_if<Polygon>()) return std::abs(polygon_signed_area(p->vertices));
    if (auto m = K.get_if<PixelMask>()) return static_cast<double>(m->set_count()) * m->h * m->h;
    return std::nullopt;
}

AreaEstimate area(const Region& K, const SamplingBudget& budget) {
    using M = SamplingBudget::Method;
    const auto ex = exact_area(K);
    switch (budget.method) {
        case M::exact:
            if (!ex) throw InvalidArgument("area: no closed form for a " + K.kind() + " region");
            return {*ex, 0.0, AreaEstimate::Method::exact, 0};
        case M::automatic:
            if (ex) return {*ex, 0.0, AreaEstimate::Method::exact, 0};
            return montecarlo_area(K, budget);
        case M::montecarlo: return montecarlo_area(K, budget);
        case M::grid: return grid_area(K, budget);
    }
    return {};
}

Region preimage_region(const Polynomial& p, const Region& K) { return Region::preimage(p, K); }

Region sublevel_region(const Polynomial& g, double x) { return Region::sublevel(g, x); }

PixelMask rasterize(const Region& K, Complex origin, double h, int nx, int ny) {
    PixelMask m{origin, h, nx, ny, std::vector<std::uint8_t>(static_cast<std::size_t>(nx) * ny, 0)};
    parallel_for(static_cast<std::size_t>(ny), [&](std::size_t j) {
        for (int i = 0; i < nx; ++i)
            m.bits[j * nx + i] = K.contains(m.cell_center(i, static_cast<int>(j))) ? 1 : 0;
    });
    return m;
}

Region pixelize(const Region& K, double h) {
    if (!(h > 0.0)) throw InvalidArgument("pixelize: spacing must be > 0");
    const Disc d = K.bounding_disc();
    if (2.0 * d.radius / h < 16.0)
        throw ResolutionTooCoarse("pixelize: fewer than 16 cells across the bounding disc diameter");
    const int n = static_cast<int>(std::ceil(2.0 * d.radius / h));
    const Complex origin = d.center - 0.5 * n * h * Complex{1.0, 1.0};
    return Region::mask(rasterize(K, origin, h, n, n));
}

std::optional<Disc> as_disc(const Region& K, double tol) {
    if (auto d = K.get_if<Disc>()) return *d;
    if (auto a = K.get_if<Annulus>()) {
        if (a->r_in == 0.0) return Disc{a->center, a->r_out};
        return std::nullopt;
    }
    if (auto s = K.get_if<Sublevel>()) {
        const auto cs = s->g.critical_structure();
        const double lead = std::abs(s->g.leading());
        const int n = s->g.degree();
        if (cs.kind == CriticalStructure::Kind::affine) return Disc{cs.critical_point, s->x / lead};
        if (cs.kind == CriticalStructure::Kind::centered_power && std::abs(cs.critical_value) <= tol * std::max(1.0, s->x))
            return Disc{cs.critical_point, std::pow(s->x / lead, 1.0 / n)};
        return std::nullopt;
    }
    if (auto p = K.get_if<Preimage>()) {
        const auto inner = as_disc(*p->inner, tol);
        if (!inner) return std::nullopt;
        const auto cs = p->p.critical_structure();
        if (cs.kind == CriticalStructure::Kind::affine)
            return Disc{inner->center - p->p.coeffs()[0], inner->radius};
        if (cs.kind == CriticalStructure::Kind::centered_power &&
            close(cs.critical_value, inner->center, tol, std::max(std::abs(inner->center), inner->radius)))
            return Disc{cs.critical_point, std::pow(inner->radius, 1.0 / p->p.degree())};
        return std::nullopt;
    }
    if (auto u = K.get_if<Union>()) {
        std::optional<Disc> first;
        for (const auto& part : u->parts) {
            auto d = as_disc(part, tol);
            if (!d) return std::nullopt;
            if (!first) {
                first = d;
            } else if (!close(d->center, first->center, tol, first->radius) ||
                       std::abs(d->radius - first->radius) > tol * first->radius) {
                return std::nullopt;
            }
        }
        return first;
    }
    return std::nullopt;
}

std::optional<Disc> essential_disc(const Region& K, double tol, double negligible) {
    if (auto d = as_disc(K, tol)) return d;
    const auto* u = K.get_if<Union>();
    if (!u) return std::nullopt;
    std::optional<Disc> main;
    for (const auto& part : u->parts)
        if (auto d = as_disc(part, tol); d && (!main || d->radius > main->radius)) main = d;
    if (!main) return std::nullopt;
    const double main_area = kPi * main->radius * main->radius;
    for (const auto& part : u->parts) {
        if (auto d = as_disc(part, tol)) {
            if (std::abs(d->center - main->center) + d->radius <= main->radius * (1.0 + tol)) continue;
        }
        const auto a = exact_area(part);
        if (!a || *a > negligible * main_area) return std::nullopt;
    }
    return main;
}

}  // namespace lemlab
