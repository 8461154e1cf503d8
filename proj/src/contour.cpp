#include "lemlab/contour.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "lemlab/error.hpp"
#include "lemlab/parallel.hpp"
#include "lemlab/region.hpp"

namespace lemlab {

namespace {

struct Segment {
    long long a;
    long long b;
};

}  // namespace

std::vector<Polyline> marching_squares(std::span<const double> values, int nx, int ny, Complex origin, double h,
                                       double level) {
    if (nx < 2 || ny < 2 || values.size() != static_cast<std::size_t>(nx) * ny)
        throw InvalidArgument("marching_squares: grid must be at least 2x2 and match the value count");
    auto val = [&](int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; };
    auto hedge = [&](int i, int j) { return 2LL * (static_cast<long long>(j) * nx + i); };
    auto vedge = [&](int i, int j) { return 2LL * (static_cast<long long>(j) * nx + i) + 1; };

    auto edge_point = [&](long long id) {
        const long long node = id / 2;
        const int i = static_cast<int>(node % nx), j = static_cast<int>(node / nx);
        const bool vertical = id % 2 == 1;
        const int i2 = vertical ? i : i + 1, j2 = vertical ? j + 1 : j;
        const double v0 = val(i, j), v1 = val(i2, j2);
        const double t = (level - v0) / (v1 - v0);
        const Complex p0 = origin + h * Complex(i, j);
        const Complex p1 = origin + h * Complex(i2, j2);
        return p0 + t * (p1 - p0);
    };

    std::vector<Segment> segs;
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            const double va = val(i, j), vb = val(i + 1, j), vc = val(i + 1, j + 1), vd = val(i, j + 1);
            const int code = (va > level) | (vb > level) << 1 | (vc > level) << 2 | (vd > level) << 3;
            if (code == 0 || code == 15) continue;
            const std::array<long long, 4> e{hedge(i, j), vedge(i + 1, j), hedge(i, j + 1), vedge(i, j)};
            enum { bottom, right, top, left };
            const bool center_in = 0.25 * (va + vb + vc + vd) > level;
            switch (code) {
                case 1: case 14: segs.push_back({e[left], e[bottom]}); break;
                case 2: case 13: segs.push_back({e[bottom], e[right]}); break;
                case 3: case 12: segs.push_back({e[left], e[right]}); break;
                case 4: case 11: segs.push_back({e[right], e[top]}); break;
                case 6: case 9: segs.push_back({e[bottom], e[top]}); break;
                case 7: case 8: segs.push_back({e[top], e[left]}); break;
                case 5:
                    if (center_in) {
                        segs.push_back({e[bottom], e[right]});
                        segs.push_back({e[top], e[left]});
                    } else {
                        segs.push_back({e[left], e[bottom]});
                        segs.push_back({e[right], e[top]});
                    }
                    break;
                case 10:
                    if (center_in) {
                        segs.push_back({e[left], e[bottom]});
                        segs.push_back({e[right], e[top]});
                    } else {
                        segs.push_back({e[bottom], e[right]});
                        segs.push_back({e[top], e[left]});
                    }
                    break;
                default: break;
            }
        }

    std::unordered_map<long long, std::array<int, 2>> incident;
    incident.reserve(segs.size() * 2);
    for (int s = 0; s < static_cast<int>(segs.size()); ++s)
        for (long long id : {segs[s].a, segs[s].b}) {
            auto [it, fresh] = incident.try_emplace(id, std::array<int, 2>{-1, -1});
            (it->second[0] < 0 ? it->second[0] : it->second[1]) = s;
        }

    std::vector<bool> used(segs.size(), false);
    std::vector<Polyline> out;
    auto walk = [&](int s, long long start) {
        Polyline line;
        long long at = start;
        line.points.push_back(edge_point(at));
        while (s >= 0 && !used[static_cast<std::size_t>(s)]) {
            used[static_cast<std::size_t>(s)] = true;
            at = segs[static_cast<std::size_t>(s)].a == at ? segs[static_cast<std::size_t>(s)].b
                                                           : segs[static_cast<std::size_t>(s)].a;
            if (at == start) {
                line.closed = true;
                break;
            }
            line.points.push_back(edge_point(at));
            const auto& inc = incident[at];
            s = inc[0] == s ? inc[1] : inc[0];
        }
        out.push_back(std::move(line));
    };
    // open chains start at edges used once, then the remaining cycles
    for (const auto& [id, inc] : incident)
        if (inc[1] < 0 && !used[static_cast<std::size_t>(inc[0])]) walk(inc[0], id);
    for (int s = 0; s < static_cast<int>(segs.size()); ++s)
        if (!used[static_cast<std::size_t>(s)]) walk(s, segs[static_cast<std::size_t>(s)].a);
    return out;
}

LemniscateTrace trace_lemniscate(const Polynomial& p, double r, int resolution) {
    if (p.degree() < 1) throw InvalidArgument("lemniscate: polynomial must have degree >= 1");
    if (!(r > 0.0)) throw InvalidArgument("lemniscate: r must be > 0");
    if (resolution < 8) throw InvalidArgument("lemniscate: resolution must be >= 8");
    const double level = std::pow(r, p.degree());
    const Disc d = Region::sublevel(p, level).bounding_disc();
    const double half = 1.05 * d.radius;
    LemniscateTrace trace;
    trace.lower = d.center - Complex{half, half};
    trace.side = 2.0 * half;
    const double h = trace.side / (resolution - 1);
    std::vector<double> values(static_cast<std::size_t>(resolution) * resolution);
    parallel_for(static_cast<std::size_t>(resolution), [&](std::size_t j) {
        for (int i = 0; i < resolution; ++i)
            values[j * resolution + i] = std::abs(p(trace.lower + h * Complex(i, static_cast<double>(j)))) - level;
    });
    trace.curves = marching_squares(values, resolution, resolution, trace.lower, h, 0.0);
    return trace;
}

std::string lemniscate_svg(const LemniscateTrace& trace, double stroke_width) {
    if (stroke_width <= 0.0) stroke_width = trace.side / 400.0;
    std::ostringstream os;
    os.precision(9);
    const double x0 = trace.lower.real();
    const double y_top = -(trace.lower.imag() + trace.side);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 << ' ' << y_top << ' ' << trace.side << ' '
       << trace.side << "\" width=\"512\" height=\"512\">\n";
    for (const auto& c : trace.curves) {
        os << "  <path fill=\"none\" stroke=\"black\" stroke-width=\"" << stroke_width << "\" d=\"";
        for (std::size_t k = 0; k < c.points.size(); ++k)
            os << (k == 0 ? "M" : " L") << c.points[k].real() << ',' << -c.points[k].imag();
        if (c.closed) os << " Z";
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace lemlab
