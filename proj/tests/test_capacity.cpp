#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lemlab/capacity.hpp"
#include "lemlab/error.hpp"
#include "support.hpp"

using lemlab::Complex;
using lemlab::Condenser;
using lemlab::FeketeOptions;
using lemlab::Polynomial;
using lemlab::Region;
using support::Gen;
using support::kPi;

namespace {

FeketeOptions forced(int n = 256) {
    FeketeOptions o;
    o.n_points = n;
    o.force_numeric = true;
    return o;
}

}  // namespace

TEST_CASE("closed-form capacities") {
    const auto d = lemlab::log_capacity(Region::disc({1, 1}, 2.5));
    CHECK(d.value == 2.5);
    CHECK(d.err == 0.0);
    CHECK(d.method == lemlab::CapacityEstimate::Method::closed_form);
    CHECK(lemlab::log_capacity(Region::annulus(0, 0.5, 3)).value == 3.0);
    const auto p = lemlab::log_capacity(lemlab::preimage_region(Polynomial::monomial(2), Region::disc(0, 4)));
    CHECK(p.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Fekete estimate on the unit disc") {
    const auto c = lemlab::log_capacity(Region::disc(0, 1), forced());
    CHECK(c.method == lemlab::CapacityEstimate::Method::fekete);
    CHECK(c.value == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(c.value - 1.0) <= c.err);

    // raw diameters of well-spread points on the circle follow n^{1/(n-1)}
    for (int n : {16, 64, 256}) {
        std::vector<Complex> roots;
        for (int k = 0; k < n; ++k) roots.push_back(std::polar(1.0, 2 * kPi * k / n));
        CHECK(lemlab::energy_diameter(roots) == doctest::Approx(std::pow(n, 1.0 / (n - 1))).epsilon(1e-10));
    }
    const auto& det = std::get<lemlab::FeketeDetail>(c.detail);
    CHECK(det.d_quarter >= det.d_half);
    CHECK(det.d_half >= det.d_full);
}

TEST_CASE("Fekete estimate on the unit square") {
    const auto c = lemlab::log_capacity(Region::rectangle({0, 0}, 1, 1));
    CHECK(c.value == doctest::Approx(support::unit_square_capacity()).epsilon(0.01));
    CHECK(std::abs(c.value - support::unit_square_capacity()) <= c.err);
}

TEST_CASE("segment-like polygon has capacity length / 4") {
    const auto seg = Region::rectangle({-2, -5e-5}, 4, 1e-4);
    const auto a = lemlab::log_capacity(seg, forced(256));
    const auto b = lemlab::log_capacity(seg, forced(512));
    CHECK(a.value == doctest::Approx(b.value).epsilon(0.01));
    CHECK(a.value == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Bernoulli region has capacity one") {
    const auto c = lemlab::log_capacity(Region::sublevel(Polynomial({-1.0, 0.0, 1.0}), 1));
    CHECK(c.value == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("capacity scales linearly") {
    Gen g(53);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<Complex> v;
        for (int i = 0; i < 6; ++i) v.push_back(std::polar(g.uniform(0.6, 1.2), 2 * kPi * (i + g.uniform(-0.3, 0.3)) / 6));
        const auto K = Region::polygon(v);
        const auto base = lemlab::log_capacity(K);
        for (double s : {0.5, 2.0}) {
            const auto scaled = lemlab::log_capacity(K.affine(s, {0.3, -0.2}));
            CHECK(std::abs(scaled.value - s * base.value) <= scaled.err + s * base.err);
        }
    }
}

TEST_CASE("capacity errors") {
    CHECK_THROWS_AS(lemlab::log_capacity(Region::disc(0, 1), forced(8)), lemlab::InvalidArgument);
    lemlab::PixelMask empty{0.0, 0.1, 4, 4, std::vector<std::uint8_t>(16, 0)};
    CHECK_THROWS_AS(lemlab::log_capacity(Region::mask(empty)), lemlab::EmptyRegion);
}

TEST_CASE("concentric condensers") {
    const Condenser a{Region::disc(0, std::exp(1.0)), Region::disc(0, 1)};
    const auto c = lemlab::condenser_capacity(a, 0.02);
    CHECK(c.value == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs(c.value - 0.5) <= c.err);

    const Condenser b{Region::disc(0, std::exp(2.0)), Region::disc(0, 1)};
    const auto cb = lemlab::condenser_capacity(b, 0.04);
    CHECK(cb.value == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("eccentric condenser against the ring-modulus formula") {
    const Condenser C{Region::disc(0, std::exp(1.0)), Region::disc(0.5, 1)};
    const auto c = lemlab::condenser_capacity(C, 0.02);
    const double oracle = support::eccentric_ring_capacity(std::exp(1.0), 0.5, 1.0);
    CHECK(std::abs(c.value - oracle) <= c.err + 1e-3);
    CHECK(c.value > 0.5);
}

TEST_CASE("condenser monotonicity and admissibility") {
    const Condenser inner{Region::disc(0, 2), Region::disc(0, 1)};
    const Condenser outer{Region::disc(0, 3), Region::disc(0, 0.8)};
    const auto ci = lemlab::condenser_capacity(inner, 0.03);
    const auto co = lemlab::condenser_capacity(outer, 0.03);
    CHECK(ci.value >= co.value - ci.err - co.err);

    const auto s = lemlab::solve_condenser(inner, 0.03);
    for (std::size_t k = 0; k < s.f.values.size(); ++k) {
        CHECK(s.f.values[k] >= -1e-9);
        CHECK(s.f.values[k] <= 1.0 + 1e-9);
        if (s.f.fixed_one[k]) CHECK(s.f.values[k] == 1.0);
        if (s.f.fixed_zero[k]) CHECK(s.f.values[k] == 0.0);
        CHECK_FALSE((s.f.fixed_one[k] && s.f.fixed_zero[k]));
    }
    CHECK(s.capacity == doctest::Approx(lemlab::dirichlet_energy(s.f) / (4 * kPi)));
}

TEST_CASE("point-like plates shrink with the grid") {
    // a plate holding just the center cell
    const auto single = [](double h) { return lemlab::solve_condenser({Region::disc(0, 1), Region::disc(0, 0.4 * h)}, h).capacity; };
    const double a = single(0.04), b = single(0.02), c = single(0.01);
    CHECK(a > b);
    CHECK(b > c);
    CHECK_THROWS_AS(lemlab::solve_condenser({Region::disc(0, 1), Region::disc(0.013, 0.001)}, 0.02), lemlab::ThinPlate);
    CHECK_THROWS_AS(lemlab::solve_condenser({Region::disc(0, 1), Region::disc(0.9, 0.5)}, 0.02), lemlab::InvalidArgument);
}

TEST_CASE("dirichlet energy of simple profiles") {
    auto f = lemlab::GridFunction::zeros(0.0, 0.1, 10, 10);
    for (auto& v : f.values) v = 0.7;
    CHECK(lemlab::dirichlet_energy(f) == 0.0);

    const int m = 100;
    auto lin = lemlab::GridFunction::zeros(0.0, 1.0 / m, m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) lin.at(i, j) = lin.cell_center(i, j).real();
    CHECK(std::abs(lemlab::dirichlet_energy(lin) - 1.0) <= 2.0 / m);

    const double h = 0.01, R = std::exp(1.0);
    const int n = static_cast<int>(std::ceil(2 * R / h));
    auto rad = lemlab::GridFunction::zeros(Complex{-R, -R}, h, n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double r = std::abs(rad.cell_center(i, j));
            rad.at(i, j) = std::clamp(1.0 - std::log(std::max(r, 1e-300)), 0.0, 1.0);
        }
    CHECK(lemlab::dirichlet_energy(rad) == doctest::Approx(2 * kPi).epsilon(0.03));
}

TEST_CASE("Schwarz symmetrization") {
    Gen g(61);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = support::bump_grid(g, 0.005);
        const auto s = lemlab::schwarz_symmetrize(f);
        auto a = f.values, b = s.values;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
        CHECK(lemlab::dirichlet_energy(s) <= 1.02 * lemlab::dirichlet_energy(f));
        // superlevel sets are centered: the maximum sits next to the grid center
        const auto top = std::max_element(s.values.begin(), s.values.end()) - s.values.begin();
        const Complex at = s.cell_center(static_cast<int>(top % s.nx), static_cast<int>(top / s.nx));
        CHECK(std::abs(at) < 0.005);
    }

    // the rank-vs-distance lattice excess shrinks with h
    double excess[3] = {};
    const double hs[3] = {0.02, 0.01, 0.005};
    for (int k = 0; k < 3; ++k) {
        Gen same(62);
        for (int trial = 0; trial < 8; ++trial) {
            const auto f = support::bump_grid(same, hs[k]);
            excess[k] += lemlab::dirichlet_energy(lemlab::schwarz_symmetrize(f)) / lemlab::dirichlet_energy(f) - 1.0;
        }
    }
    CHECK(excess[1] < excess[0]);
    CHECK(excess[2] < excess[1]);

    // radially decreasing input keeps its profile
    auto r = lemlab::GridFunction::zeros(Complex{-1, -1}, 0.02, 100, 100);
    for (int j = 0; j < 100; ++j)
        for (int i = 0; i < 100; ++i) r.at(i, j) = std::max(0.0, 1.0 - std::abs(r.cell_center(i, j)));
    const auto rs = lemlab::schwarz_symmetrize(r);
    for (std::size_t k = 0; k < r.values.size(); ++k) CHECK(std::abs(rs.values[k] - r.values[k]) <= 0.02 + 1e-12);

    // an off-center cone on the lattice offset of the grid center
    auto cone = lemlab::GridFunction::zeros(Complex{-1, -1}, 0.02, 100, 100);
    for (int j = 0; j < 100; ++j)
        for (int i = 0; i < 100; ++i) cone.at(i, j) = std::max(0.0, 1.0 - 4.0 * std::abs(cone.cell_center(i, j) - 0.5));
    CHECK(lemlab::dirichlet_energy(lemlab::schwarz_symmetrize(cone)) <= 1.02 * lemlab::dirichlet_energy(cone));

    auto neg = lemlab::GridFunction::zeros(0.0, 0.1, 3, 3);
    neg.values[4] = -1.0;
    CHECK_THROWS_AS(lemlab::schwarz_symmetrize(neg), lemlab::InvalidArgument);
}

TEST_CASE("pullback condensers") {
    const Condenser C{Region::disc(0, 4), Region::disc(0, 1)};
    const auto P = lemlab::pullback_condenser(Polynomial::monomial(2), C);
    Gen g(67);
    for (int k = 0; k < 500; ++k) {
        const Complex z = g.in_disc(3.0);
        if (std::abs(std::abs(z) - 2.0) > 1e-9) CHECK(P.E.contains(z) == (std::abs(z) <= 2.0));
        if (std::abs(std::abs(z) - 1.0) > 1e-9) CHECK(P.B.contains(z) == (std::abs(z) <= 1.0));
    }
    const auto c2 = lemlab::condenser_capacity(P, 0.02);
    CHECK(c2.value == doctest::Approx(support::concentric_ring_capacity(2, 1)).epsilon(0.02));

    const auto c3 = lemlab::condenser_capacity(
        lemlab::pullback_condenser(Polynomial::monomial(3), {Region::disc(0, 8), Region::disc(0, 1)}), 0.02);
    CHECK(c3.value == doctest::Approx(3.0 / (2.0 * std::log(8.0))).epsilon(0.02));
    CHECK_THROWS_AS(lemlab::pullback_condenser(Polynomial({0.0, 2.0}), C), lemlab::NotMonic);
}

TEST_CASE("grid CSV dump") {
    auto f = lemlab::GridFunction::zeros(0.0, 1.0, 3, 2);
    f.at(0, 1) = 1.0;   // top-left in the dump
    const auto path = (std::filesystem::temp_directory_path() / "lemlab_grid_test.csv").string();
    lemlab::write_grid_csv(f, path);
    std::ifstream in(path);
    std::string first, second;
    std::getline(in, first);
    std::getline(in, second);
    CHECK(first.rfind("1", 0) == 0);
    CHECK(std::count(first.begin(), first.end(), ',') == 2);
    CHECK(second.rfind("0", 0) == 0);
    std::filesystem::remove(path);
}
