#pragma once

#include <span>
#include <string>
#include <vector>

#include "lemlab/polynomial.hpp"

namespace lemlab {

struct Polyline {
    std::vector<Complex> points;
    bool closed = false;
};

/// Level curve {f = level} of node samples values[j * nx + i] taken at
/// origin + h * (i + j i). Cells whose four corners straddle the level
/// contribute one or two segments (saddles are split by the cell average);
/// segments are stitched into polylines. Curves that stay inside the grid
/// come back closed.
std::vector<Polyline> marching_squares(std::span<const double> values, int nx, int ny, Complex origin, double h,
                                       double level);

/// Traces the lemniscate {z : |p(z)| = r^n}, n = degree(p), over the square
/// circumscribing the bounding disc of {|p| <= r^n}.
struct LemniscateTrace {
    std::vector<Polyline> curves;
    Complex lower;       // lower-left corner of the traced square
    double side = 0.0;
};

LemniscateTrace trace_lemniscate(const Polynomial& p, double r, int resolution = 512);

/// SVG document with one closed path per curve; y is flipped so the picture
/// has the usual mathematical orientation.
std::string lemniscate_svg(const LemniscateTrace& trace, double stroke_width = 0.0);

}  // namespace lemlab
