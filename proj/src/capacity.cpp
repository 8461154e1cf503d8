#include "lemlab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "lemlab/contour.hpp"
#include "lemlab/error.hpp"
#include "lemlab/parallel.hpp"

namespace lemlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Complex> circle_points(Complex center, double radius, std::size_t m) {
    std::vector<Complex> pts(m);
    for (std::size_t k = 0; k < m; ++k) pts[k] = center + std::polar(radius, 2.0 * kPi * k / m);
    return pts;
}

// Candidates on each edge cluster toward the vertices (cosine spacing), where
// equilibrium measure concentrates at convex corners.
std::vector<Complex> polygon_points(const Polygon& poly, std::size_t target) {
    const auto& v = poly.vertices;
    double perimeter = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) perimeter += std::abs(v[(i + 1) % v.size()] - v[i]);
    std::vector<Complex> pts;
    pts.reserve(target + 2 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex a = v[i], b = v[(i + 1) % v.size()];
        const auto m = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::llround(static_cast<double>(target) * std::abs(b - a) / perimeter)));
        for (std::size_t k = 0; k < m; ++k) {
            const double t = 0.5 * (1.0 - std::cos(kPi * static_cast<double>(k) / static_cast<double>(m)));
            pts.push_back(a + t * (b - a));
        }
    }
    return pts;
}

std::vector<Complex> pull_back(const Polynomial& p, const std::vector<Complex>& targets) {
    const auto n = static_cast<std::size_t>(p.degree());
    std::vector<std::vector<Complex>> per(targets.size());
    parallel_for(targets.size(), [&](std::size_t k) {
        const auto pre = preimages(p, targets[k]);
        for (const auto& w : pre.points) per[k].push_back(w.z);
    });
    std::vector<Complex> pts;
    pts.reserve(targets.size() * n);
    for (auto& v : per) pts.insert(pts.end(), v.begin(), v.end());
    return pts;
}

std::vector<Complex> mask_points(const PixelMask& m, std::size_t target) {
    // Indicator at cell centers with a zero border, contoured at 1/2.
    const int nx = m.nx + 2, ny = m.ny + 2;
    std::vector<double> ind(static_cast<std::size_t>(nx) * ny, 0.0);
    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i) ind[static_cast<std::size_t>(j + 1) * nx + i + 1] = m.at(i, j) ? 1.0 : 0.0;
    const Complex origin = m.origin - Complex{0.5 * m.h, 0.5 * m.h};
    const auto lines = marching_squares(ind, nx, ny, origin, m.h, 0.5);
    double length = 0.0;
    for (const auto& l : lines)
        for (std::size_t k = 0; k + 1 < l.points.size() + (l.closed ? 1 : 0); ++k)
            length += std::abs(l.points[(k + 1) % l.points.size()] - l.points[k]);
    if (length == 0.0) return {};
    const double spacing = length / static_cast<double>(target);
    std::vector<Complex> pts;
    for (const auto& l : lines) {
        const std::size_t edges = l.points.size() - (l.closed ? 0 : 1);
        for (std::size_t k = 0; k < edges; ++k) {
            const Complex a = l.points[k], b = l.points[(k + 1) % l.points.size()];
            const auto sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(b - a) / spacing)));
            for (std::size_t s = 0; s < sub; ++s) pts.push_back(a + (b - a) * (static_cast<double>(s) / sub));
        }
    }
    return pts;
}

double fit_extrapolation(int m1, double d1, int m2, double d2) {
    // log d_m = log cap + c * log(m) / m
    const double u1 = std::log(m1) / m1, u2 = std::log(m2) / m2;
    const double c = (std::log(d2) - std::log(d1)) / (u2 - u1);
    return std::exp(std::log(d1) - c * u1);
}

}  // namespace

const char* to_string(CapacityEstimate::Method m) noexcept {
    switch (m) {
        case CapacityEstimate::Method::closed_form: return "closed_form";
        case CapacityEstimate::Method::fekete: return "fekete";
        case CapacityEstimate::Method::grid_dirichlet: return "grid_dirichlet";
    }
    return "?";
}

GridFunction GridFunction::zeros(Complex origin, double h, int nx, int ny) {
    GridFunction f;
    f.origin = origin;
    f.h = h;
    f.nx = nx;
    f.ny = ny;
    f.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    return f;
}

// --- logarithmic capacity --------------------------------------------------

std::vector<Complex> boundary_candidates(const Region& K, std::size_t target) {
    target = std::max<std::size_t>(target, 8);
    const auto& v = K.variant();
    if (auto d = std::get_if<Disc>(&v)) return circle_points(d->center, d->radius, target);
    if (auto a = std::get_if<Annulus>(&v)) return circle_points(a->center, a->r_out, target);
    if (auto p = std::get_if<Polygon>(&v)) return polygon_points(*p, target);
    if (auto s = std::get_if<Sublevel>(&v)) {
        const auto per = (target + s->g.degree() - 1) / static_cast<std::size_t>(s->g.degree());
        return pull_back(s->g, circle_points(0.0, s->x, per));
    }
    if (auto pre = std::get_if<Preimage>(&v)) {
        const auto per = (target + pre->p.degree() - 1) / static_cast<std::size_t>(pre->p.degree());
        return pull_back(pre->p, boundary_candidates(*pre->inner, per));
    }
    if (auto u = std::get_if<Union>(&v)) {
        double total = 0.0;
        for (const auto& part : u->parts) total += part.bounding_disc().radius;
        std::vector<Complex> pts;
        for (std::size_t i = 0; i < u->parts.size(); ++i) {
            const double share = u->parts[i].bounding_disc().radius / total;
            const auto n = static_cast<std::size_t>(std::ceil(share * static_cast<double>(target)));
            for (Complex z : boundary_candidates(u->parts[i], n)) {
                bool interior = false;
                for (std::size_t j = 0; j < u->parts.size() && !interior; ++j)
                    interior = j != i && u->parts[j].contains(z);
                if (!interior) pts.push_back(z);
            }
        }
        return pts;
    }
    if (auto m = std::get_if<PixelMask>(&v)) return mask_points(*m, target);
    return {};
}

double energy_diameter(std::span<const Complex> points) {
    const std::size_t n = points.size();
    if (n < 2) throw InvalidArgument("energy_diameter needs at least two points");
    std::vector<double> rows(n);
    parallel_for(n, [&](std::size_t i) {
        CompensatedSum s;
        for (std::size_t j = i + 1; j < n; ++j) s.add(std::log(std::abs(points[i] - points[j])));
        rows[i] = s.value();
    });
    CompensatedSum total;
    for (double r : rows) total.add(r);
    const double nn = static_cast<double>(n);
    return std::exp(2.0 / (nn * (nn - 1.0)) * total.value());
}

FeketeRun fekete_points(std::span<const Complex> cand, int n, int sweeps, int neighbourhood) {
    const std::size_t m = cand.size();
    if (n < 2) throw InvalidArgument("fekete_points needs n >= 2");
    if (m < static_cast<std::size_t>(n))
        throw DegenerateBoundary("boundary sampling produced " + std::to_string(m) + " candidates for " +
                                 std::to_string(n) + " points");
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();

    Complex centroid{};
    for (auto z : cand) centroid += z;
    centroid /= static_cast<double>(m);
    std::size_t first = 0;
    for (std::size_t k = 1; k < m; ++k)
        if (std::abs(cand[k] - centroid) > std::abs(cand[first] - centroid)) first = k;

    std::vector<std::size_t> chosen{first};
    std::vector<double> logsum(m, 0.0);
    std::vector<bool> taken(m, false);
    taken[first] = true;
    for (int step = 1; step < n; ++step) {
        const Complex last = cand[chosen.back()];
        std::size_t best = m;
        double best_val = neg_inf;
        for (std::size_t k = 0; k < m; ++k) {
            if (taken[k]) continue;
            logsum[k] += std::log(std::abs(cand[k] - last));
            if (logsum[k] > best_val) {
                best_val = logsum[k];
                best = k;
            }
        }
        if (best == m) throw DegenerateBoundary("candidate set has fewer than n distinct points");
        taken[best] = true;
        chosen.push_back(best);
    }

    // Local sweeps: move each point to the best nearby candidate.
    const std::size_t k_near = std::min<std::size_t>(static_cast<std::size_t>(neighbourhood), m);
    std::vector<std::size_t> order(m);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        bool moved = false;
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            const Complex zi = cand[chosen[i]];
            auto potential = [&](Complex c) {
                double s = 0.0;
                for (std::size_t j = 0; j < chosen.size(); ++j)
                    if (j != i) s += std::log(std::abs(c - cand[chosen[j]]));
                return s;
            };
            for (std::size_t k = 0; k < m; ++k) order[k] = k;
            std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_near - 1), order.end(),
                             [&](std::size_t a, std::size_t b) { return std::abs(cand[a] - zi) < std::abs(cand[b] - zi); });
            double best_val = potential(zi);
            std::size_t best = chosen[i];
            for (std::size_t q = 0; q < k_near; ++q) {
                const std::size_t c = order[q];
                if (taken[c]) continue;
                const double val = potential(cand[c]);
                if (val > best_val) {
                    best_val = val;
                    best = c;
                }
            }
            if (best != chosen[i]) {
                taken[chosen[i]] = false;
                taken[best] = true;
                chosen[i] = best;
                moved = true;
            }
        }
        if (!moved) break;
    }

    FeketeRun run;
    for (auto k : chosen) run.points.push_back(cand[k]);
    run.diameter = energy_diameter(run.points);
    return run;
}

CapacityEstimate log_capacity(const Region& K, const FeketeOptions& options) {
    if (!options.force_numeric) {
        if (auto d = as_disc(K)) return {d->radius, 0.0, CapacityEstimate::Method::closed_form, {}};
        if (auto a = K.get_if<Annulus>()) return {a->r_out, 0.0, CapacityEstimate::Method::closed_form, {}};
    }
    if (auto m = K.get_if<PixelMask>(); m && m->set_count() == 0) throw EmptyRegion("log_capacity: mask is empty");
    const int n = options.n_points;
    if (n < 16) throw InvalidArgument("log_capacity: n_points must be >= 16");

    const auto cand = boundary_candidates(K, static_cast<std::size_t>(n) * options.candidates_per_point);
    if (cand.size() < static_cast<std::size_t>(n))
        throw DegenerateBoundary("log_capacity: only " + std::to_string(cand.size()) + " boundary candidates");

    FeketeDetail detail;
    detail.n = n;
    detail.candidates = cand.size();
    detail.d_quarter = fekete_points(cand, n / 4, options.sweeps, options.neighbourhood).diameter;
    detail.d_half = fekete_points(cand, n / 2, options.sweeps, options.neighbourhood).diameter;
    detail.d_full = fekete_points(cand, n, options.sweeps, options.neighbourhood).diameter;

    const double fine = fit_extrapolation(n / 2, detail.d_half, n, detail.d_full);
    detail.extrapolated_coarse = fit_extrapolation(n / 4, detail.d_quarter, n / 2, detail.d_half);
    const double err = std::abs(detail.d_full - fine) + 2.0 * std::abs(fine - detail.extrapolated_coarse);
    return {fine, err, CapacityEstimate::Method::fekete, detail};
}

// --- condenser capacity ----------------------------------------------------

GridSolve solve_condenser(const Condenser& C, double h) {
    if (!(h > 0.0)) throw InvalidArgument("condenser: spacing must be > 0");
    const Disc d = C.E.bounding_disc();
    const int half = static_cast<int>(std::ceil(d.radius / h)) + 1;
    const int n = 2 * half + 1;   // odd, so one cell is centered on the bounding disc
    const Complex origin = d.center - 0.5 * n * h * Complex{1.0, 1.0};
    const PixelMask e = rasterize(C.E, origin, h, n, n);
    const PixelMask b = rasterize(C.B, origin, h, n, n);

    std::size_t b_cells = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!b.at(i, j)) continue;
            ++b_cells;
            if (!e.at(i, j) || !e.at(i - 1, j) || !e.at(i + 1, j) || !e.at(i, j - 1) || !e.at(i, j + 1))
                throw InvalidArgument("condenser: B is not inside E at spacing " + std::to_string(h));
        }
    if (b_cells == 0) throw ThinPlate("condenser: B has no cell centers at spacing " + std::to_string(h));

    GridFunction f = GridFunction::zeros(origin, h, n, n);
    f.fixed_zero.assign(f.values.size(), 0);
    f.fixed_one.assign(f.values.size(), 0);
    std::vector<int> unknown(f.values.size(), -1);
    int count = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const auto idx = f.index(i, j);
            if (b.at(i, j)) {
                f.fixed_one[idx] = 1;
                f.values[idx] = 1.0;
            } else if (!e.at(i, j)) {
                f.fixed_zero[idx] = 1;
            } else {
                unknown[idx] = count++;
            }
        }

    GridSolve out;
    out.unknowns = count;
    if (count > 0) {
        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(static_cast<std::size_t>(count) * 5);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const int row = unknown[f.index(i, j)];
                if (row < 0) continue;
                triplets.emplace_back(row, row, 4.0);
                const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
                for (const auto& q : nb) {
                    const auto idx = f.index(q[0], q[1]);
                    if (unknown[idx] >= 0)
                        triplets.emplace_back(row, unknown[idx], -1.0);
                    else
                        rhs[row] += f.values[idx];
                }
            }
        Eigen::SparseMatrix<double> A(count, count);
        A.setFromTriplets(triplets.begin(), triplets.end());
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(1e-10);
        cg.setMaxIterations(std::max(1000, 20 * n));
        cg.compute(A);
        const Eigen::VectorXd x = cg.solve(rhs);
        if (cg.info() != Eigen::Success)
            throw SolveFailure("condenser: conjugate gradients stopped at residual " + std::to_string(cg.error()));
        out.iterations = static_cast<int>(cg.iterations());
        for (std::size_t idx = 0; idx < f.values.size(); ++idx)
            if (unknown[idx] >= 0) f.values[idx] = x[unknown[idx]];
    }
    out.energy = dirichlet_energy(f);
    out.capacity = out.energy / (4.0 * kPi);
    out.f = std::move(f);
    return out;
}

CapacityEstimate condenser_capacity(const Condenser& C, double h) {
    const GridSolve fine = solve_condenser(C, h);
    const GridSolve coarse = solve_condenser(C, 2.0 * h);
    GridDetail detail{h, fine.capacity, coarse.capacity, fine.unknowns, fine.iterations};
    // First-order error model: cap_h = cap + a h.
    const double value = std::max(0.0, 2.0 * fine.capacity - coarse.capacity);
    const double err = std::abs(fine.capacity - coarse.capacity);
    return {value, err, CapacityEstimate::Method::grid_dirichlet, detail};
}

double dirichlet_energy(const GridFunction& f) {
    std::vector<double> rows(static_cast<std::size_t>(f.ny));
    parallel_for(rows.size(), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        CompensatedSum s;
        for (int i = 0; i < f.nx; ++i) {
            const double v = f.at(i, j);
            if (i + 1 < f.nx) s.add((f.at(i + 1, j) - v) * (f.at(i + 1, j) - v));
            if (j + 1 < f.ny) s.add((f.at(i, j + 1) - v) * (f.at(i, j + 1) - v));
        }
        rows[jj] = s.value();
    });
    CompensatedSum total;
    for (double r : rows) total.add(r);
    return total.value();
}

GridFunction schwarz_symmetrize(const GridFunction& f) {
    for (double v : f.values)
        if (v < 0.0) throw InvalidArgument("schwarz_symmetrize: values must be >= 0");
    std::vector<double> sorted(f.values);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    struct Slot {
        double r2;
        double angle;
        std::size_t index;
    };
    const Complex center = f.origin + 0.5 * f.h * Complex(f.nx, f.ny);
    std::vector<Slot> slots;
    slots.reserve(f.values.size());
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) {
            const Complex d = f.cell_center(i, j) - center;
            slots.push_back({std::norm(d), std::arg(d), f.index(i, j)});
        }
    std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
        return a.r2 != b.r2 ? a.r2 < b.r2 : a.angle < b.angle;
    });

    GridFunction out = GridFunction::zeros(f.origin, f.h, f.nx, f.ny);
    for (std::size_t k = 0; k < slots.size(); ++k) out.values[slots[k].index] = sorted[k];
    return out;
}

Condenser pullback_condenser(const Polynomial& p, const Condenser& C) {
    if (!p.is_monic()) throw NotMonic("pullback_condenser: polynomial is not monic");
    return {preimage_region(p, C.E), preimage_region(p, C.B)};
}

void write_grid_csv(const GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write grid dump to " + path);
    out.precision(17);
    for (int j = f.ny - 1; j >= 0; --j) {
        for (int i = 0; i < f.nx; ++i) {
            if (i) out << ',';
            out << f.at(i, j);
        }
        out << '\n';
    }
}

}  // namespace lemlab
