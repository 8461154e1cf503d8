#include "lemlab/theorems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "lemlab/error.hpp"
#include "lemlab/region_io.hpp"

namespace lemlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Values that should agree exactly still differ by rounding.
double rounding_floor(double lhs, double rhs) noexcept {
    return 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string options_text(const VerifyOptions& o) {
    return "samples=" + std::to_string(o.sampling.samples) + ";seed=" + std::to_string(o.sampling.seed) +
           ";grid_h=" + fmt_double(o.grid_h) + ";fekete_n=" + std::to_string(o.fekete.n_points);
}

Report finish(StatementId id, double lhs, double lhs_err, double rhs, double rhs_err, bool equality_case,
              bool identity, const VerifyOptions& o, const std::string& inputs) {
    Report r;
    r.statement_id = id;
    r.lhs = lhs;
    r.rhs = rhs;
    r.lhs_err = lhs_err;
    r.rhs_err = rhs_err;
    r.margin = rhs - lhs;
    r.equality_case = equality_case;
    const double budget = lhs_err + rhs_err + rounding_floor(lhs, rhs);
    r.verdict = identity ? classify_identity(r.margin, budget) : classify_inequality(r.margin, budget, equality_case);
    r.seed = o.sampling.seed;
    r.inputs_digest = digest(std::string(to_string(id)) + "|" + inputs + "|" + options_text(o));
    return r;
}

void require_monic(const Polynomial& p, const char* who) {
    if (p.degree() < 1) throw InvalidArgument(std::string(who) + ": polynomial must have degree >= 1");
    if (!p.is_monic()) throw NotMonic(std::string(who) + ": polynomial is not monic");
}

bool near(Complex a, Complex b, double tol = 1e-6) noexcept {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// p = (z-b)^n + c and K is (up to negligible parts) a disc centered at c.
bool preimage_equality_case(const Polynomial& p, const Region& K) {
    const auto cs = p.critical_structure();
    if (cs.kind == CriticalStructure::Kind::affine) return true;
    if (cs.kind != CriticalStructure::Kind::centered_power) return false;
    const auto d = essential_disc(K);
    return d && near(d->center, cs.critical_value);
}

std::string region_text(const Region& K) { return region_to_json(K).dump(); }

std::string condenser_text(const Condenser& C) { return region_text(C.E) + "|" + region_text(C.B); }

SamplingBudget montecarlo(const SamplingBudget& b) {
    SamplingBudget out = b;
    if (out.method == SamplingBudget::Method::automatic || out.method == SamplingBudget::Method::exact)
        out.method = SamplingBudget::Method::montecarlo;
    return out;
}

AreaEstimate region_area(const Region& K, const SamplingBudget& b) {
    SamplingBudget auto_b = b;
    if (auto_b.method == SamplingBudget::Method::exact) auto_b.method = SamplingBudget::Method::automatic;
    return area(K, auto_b);
}

AreaEstimate integral_estimate(const Box& box, const SamplingBudget& budget, const std::function<double(Complex)>& f) {
    if (budget.samples < kShardSize)
        throw BudgetTooSmall("integral: at least " + std::to_string(kShardSize) + " samples are required");
    const auto m = stratified_moments(box, budget.samples, budget.seed, f);
    const double n = static_cast<double>(m.count);
    const double err = 3.0 * std::sqrt(m.variance / n) * box.area();
    return {m.mean * box.area(), std::max(err, 1e-300), AreaEstimate::Method::montecarlo, m.count};
}

}  // namespace

const char* to_string(StatementId id) noexcept {
    switch (id) {
        case StatementId::polya: return "polya";
        case StatementId::main: return "main";
        case StatementId::multiplicity: return "multiplicity";
        case StatementId::roundness: return "roundness";
        case StatementId::carleman: return "carleman";
        case StatementId::isoperimetric: return "isoperimetric";
        case StatementId::pullback_lemma: return "pullback_lemma";
        case StatementId::capacity_pullback: return "capacity_pullback";
        case StatementId::integrated_carleman: return "integrated_carleman";
        case StatementId::threshold_bound: return "threshold_bound";
    }
    return "?";
}

std::optional<StatementId> parse_statement(std::string_view name) {
    for (auto id : kAllStatements)
        if (name == to_string(id)) return id;
    return std::nullopt;
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::holds: return "HOLDS";
        case Verdict::equality: return "EQUALITY";
        case Verdict::inconclusive: return "INCONCLUSIVE";
        case Verdict::violated: return "VIOLATED";
    }
    return "?";
}

Verdict classify_inequality(double margin, double budget, bool equality_case) noexcept {
    if (margin < -budget) return Verdict::violated;
    if (margin > budget) return Verdict::holds;
    return equality_case ? Verdict::equality : Verdict::inconclusive;
}

Verdict classify_identity(double margin, double budget) noexcept {
    const double m = std::abs(margin);
    if (m <= budget) return Verdict::equality;
    if (m <= 2.0 * budget) return Verdict::inconclusive;
    return Verdict::violated;
}

std::string to_record(const Report& r) {
    std::string out;
    auto line = [&](const char* k, const std::string& v) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    };
    line("statement_id", to_string(r.statement_id));
    line("lhs", fmt_double(r.lhs));
    line("rhs", fmt_double(r.rhs));
    line("lhs_err", fmt_double(r.lhs_err));
    line("rhs_err", fmt_double(r.rhs_err));
    line("margin", fmt_double(r.margin));
    line("verdict", to_string(r.verdict));
    line("seed", std::to_string(r.seed));
    line("inputs_digest", r.inputs_digest);
    if (r.cross_value) line("cross_value", fmt_double(*r.cross_value));
    if (r.cross_err) line("cross_err", fmt_double(*r.cross_err));
    return out;
}

nlohmann::json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["statement_id"] = to_string(r.statement_id);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["lhs_err"] = r.lhs_err;
    j["rhs_err"] = r.rhs_err;
    j["margin"] = r.margin;
    j["verdict"] = to_string(r.verdict);
    j["seed"] = r.seed;
    j["inputs_digest"] = r.inputs_digest;
    if (r.cross_value) j["cross_value"] = *r.cross_value;
    if (r.cross_err) j["cross_err"] = *r.cross_err;
    return nlohmann::json::parse(j.dump());
}

std::string digest(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// --- integrals -------------------------------------------------------------

AreaEstimate mass_integral(const Polynomial& p, const Region& K, const SamplingBudget& budget) {
    if (p.degree() < 1) throw InvalidArgument("mass_integral: polynomial must have degree >= 1");
    const Polynomial dp = p.derivative();
    const Disc d = K.bounding_disc();
    return integral_estimate(Box::around(d.center, d.radius), budget,
                             [&](Complex z) { return K.contains(z) ? std::norm(dp(z)) : 0.0; });
}

AreaEstimate multiplicity_area(const Polynomial& p, const Region& K, const SamplingBudget& budget) {
    if (p.degree() < 1) throw InvalidArgument("multiplicity_area: polynomial must have degree >= 1");
    // p(K) lies in the disc about p(c) of radius sum_{k>=1} |t_k| r^k.
    const Disc d = K.bounding_disc();
    const auto t = p.taylor_at(d.center);
    double radius = 0.0;
    for (std::size_t k = t.size(); k-- > 1;) radius = radius * d.radius + std::abs(t[k]);
    radius *= d.radius;
    return integral_estimate(Box::around(t[0], radius), budget, [&](Complex w) {
        int count = 0;
        for (const auto& z : preimages(p, w).points)
            if (K.contains(z.z)) count += z.multiplicity;
        return static_cast<double>(count);
    });
}

RoundnessValue roundness(const Region& K, const VerifyOptions& options) {
    RoundnessValue out;
    out.area_est = region_area(K, options.sampling);
    out.cap_est = log_capacity(K, options.fekete);
    const double a = out.area_est.value, c = out.cap_est.value;
    if (!(c > 0.0)) throw EmptyRegion("roundness: capacity is zero");
    out.rho = a / (kPi * c * c);
    out.err = out.rho * ((a > 0.0 ? out.area_est.err / a : 0.0) + 2.0 * out.cap_est.err / c);
    if (a == 0.0) out.err = out.area_est.err / (kPi * c * c);
    return out;
}

// --- verifiers -------------------------------------------------------------

Report verify_polya(const Polynomial& p, const Disc& D, const VerifyOptions& o) {
    require_monic(p, "verify_polya");
    const Region disc = Region::disc(D.center, D.radius);
    const auto lhs = area(preimage_region(p, disc), montecarlo(o.sampling));
    const double rhs = kPi * std::pow(D.radius, 2.0 / p.degree());
    const auto cs = p.critical_structure();
    const bool eq = cs.kind == CriticalStructure::Kind::affine ||
                    (cs.kind == CriticalStructure::Kind::centered_power && near(cs.critical_value, D.center));
    return finish(StatementId::polya, lhs.value, lhs.err, rhs, 0.0, eq, false, o,
                  p.to_string() + "|" + region_text(disc));
}

Report verify_main(const Polynomial& p, const Region& K, const VerifyOptions& o) {
    require_monic(p, "verify_main");
    const int n = p.degree();
    const auto lhs = area(preimage_region(p, K), montecarlo(o.sampling));
    const auto aK = region_area(K, o.sampling);
    const double rhs = kPi * std::pow(aK.value / kPi, 1.0 / n);
    const double rhs_err = aK.value > 0.0 ? rhs * aK.err / (n * aK.value) : kPi * std::pow(aK.err / kPi, 1.0 / n);
    return finish(StatementId::main, lhs.value, lhs.err, rhs, rhs_err, preimage_equality_case(p, K), false, o,
                  p.to_string() + "|" + region_text(K));
}

Report verify_multiplicity(const Polynomial& p, const Region& K, const VerifyOptions& o) {
    require_monic(p, "verify_multiplicity");
    const int n = p.degree();
    const auto aK = region_area(K, o.sampling);
    const double lhs = n * kPi * std::pow(aK.value / kPi, n);
    const double lhs_err = n * n * std::pow(aK.value / kPi, n - 1) * aK.err;
    const auto rhs = mass_integral(p, K, o.sampling);

    // Equality needs K to be a disc about the unique critical point.
    const auto cs = p.critical_structure();
    bool eq = cs.kind == CriticalStructure::Kind::affine;
    if (cs.kind == CriticalStructure::Kind::centered_power) {
        const auto d = essential_disc(K);
        eq = d && near(d->center, cs.critical_point);
    }
    Report r = finish(StatementId::multiplicity, lhs, lhs_err, rhs.value, rhs.err, eq, false, o,
                      p.to_string() + "|" + region_text(K));
    SamplingBudget cross_budget = o.sampling;
    cross_budget.seed = derive_seed(o.sampling.seed, 1);
    const auto cross = multiplicity_area(p, K, cross_budget);
    r.cross_value = cross.value;
    r.cross_err = cross.err;
    // Two routes to the same integral must agree before the verdict is trusted.
    if (std::abs(cross.value - rhs.value) > cross.err + rhs.err + rounding_floor(cross.value, rhs.value) &&
        r.verdict != Verdict::violated)
        r.verdict = Verdict::inconclusive;
    return r;
}

Report verify_roundness(const Polynomial& p, const Region& K, const VerifyOptions& o) {
    if (p.degree() < 1) throw InvalidArgument("verify_roundness: polynomial must have degree >= 1");
    const int n = p.degree();
    // p^-1(K) = phat^-1(K / a) with phat = p / a monic; roundness is affine invariant.
    const Complex a = p.leading();
    const Polynomial phat = p.monic_normalized();
    const Region khat = a == Complex{1.0} ? K : K.affine(1.0 / a, 0.0);
    const auto lhs = roundness(preimage_region(phat, khat), o);
    const auto base = roundness(K, o);
    const double rhs = std::pow(base.rho, 1.0 / n);
    const double rhs_err = base.rho > 0.0 ? rhs * base.err / (n * base.rho) : std::pow(base.err, 1.0 / n);
    return finish(StatementId::roundness, lhs.rho, lhs.err, rhs, rhs_err, preimage_equality_case(phat, khat), false, o,
                  p.to_string() + "|" + region_text(K));
}

Report verify_carleman(const Condenser& C, const VerifyOptions& o) {
    const auto cap = condenser_capacity(C, o.grid_h);
    if (!(cap.value > 0.0)) throw SolveFailure("verify_carleman: capacity estimate is zero");
    const double lhs = 1.0 / cap.value;
    const double lhs_err = cap.err / (cap.value * cap.value);
    const auto aE = region_area(C.E, o.sampling);
    const auto aB = region_area(C.B, o.sampling);
    const double rhs = std::log(aE.value / aB.value);
    const double rhs_err = aE.err / aE.value + aB.err / aB.value;
    const auto dE = as_disc(C.E), dB = as_disc(C.B);
    const bool eq = dE && dB && near(dE->center, dB->center);
    return finish(StatementId::carleman, lhs, lhs_err, rhs, rhs_err, eq, false, o, condenser_text(C));
}

Report verify_isoperimetric(const Region& K, const VerifyOptions& o) {
    const auto a = region_area(K, o.sampling);
    const auto cap = log_capacity(K, o.fekete);
    const double rhs = kPi * cap.value * cap.value;
    const double rhs_err = 2.0 * kPi * cap.value * cap.err + kPi * cap.err * cap.err;
    return finish(StatementId::isoperimetric, a.value, a.err, rhs, rhs_err, as_disc(K).has_value(), false, o,
                  region_text(K));
}

Report verify_pullback_lemma(const Polynomial& p, const Condenser& C, const VerifyOptions& o) {
    require_monic(p, "verify_pullback_lemma");
    const auto lhs = condenser_capacity(pullback_condenser(p, C), o.grid_h);
    const auto base = condenser_capacity(C, o.grid_h);
    const double n = p.degree();
    return finish(StatementId::pullback_lemma, lhs.value, lhs.err, n * base.value, n * base.err, false, true, o,
                  p.to_string() + "|" + condenser_text(C));
}

Report verify_capacity_pullback(const Polynomial& p, const Region& B, const VerifyOptions& o) {
    require_monic(p, "verify_capacity_pullback");
    const int n = p.degree();
    const auto lhs = log_capacity(preimage_region(p, B), o.fekete);
    const auto base = log_capacity(B, o.fekete);
    const double rhs = std::pow(base.value, 1.0 / n);
    const double rhs_err = rhs * base.err / (n * base.value);
    return finish(StatementId::capacity_pullback, lhs.value, lhs.err, rhs, rhs_err, false, true, o,
                  p.to_string() + "|" + region_text(B));
}

Report verify_integrated_carleman(const Polynomial& g, double x, const VerifyOptions& o) {
    if (g.degree() < 1) throw InvalidArgument("verify_integrated_carleman: degree must be >= 1");
    const Region S = Region::sublevel(g, x);
    const int d = g.degree();
    const auto aS = area(S, montecarlo(o.sampling));
    const double factor = 2.0 * x / (d + 2);
    const Disc bd = S.bounding_disc();
    const auto rhs = integral_estimate(Box::around(bd.center, bd.radius), o.sampling, [&](Complex z) {
        const double v = std::abs(g(z));
        return v <= x ? v : 0.0;
    });
    // Sublevel sets are concentric discs iff g = a (z - b)^d.
    const auto cs = g.critical_structure();
    const bool eq = cs.kind == CriticalStructure::Kind::affine ||
                    (cs.kind == CriticalStructure::Kind::centered_power &&
                     std::abs(cs.critical_value) <= 1e-6 * std::max(1.0, x));
    return finish(StatementId::integrated_carleman, factor * aS.value, factor * aS.err, rhs.value, rhs.err, eq, false,
                  o, g.to_string() + "|x=" + fmt_double(x));
}

Region derivative_sublevel(const Polynomial& p, double t) {
    if (!(t > 0.0)) throw InvalidArgument("derivative_sublevel: t must be > 0");
    return Region::sublevel(p.derivative(), std::sqrt(t));
}

ThresholdResult sublevel_threshold(const Polynomial& p, double A, const VerifyOptions& o) {
    require_monic(p, "sublevel_threshold");
    const int n = p.degree();
    if (n < 2) throw InvalidArgument("sublevel_threshold: degree must be >= 2");
    if (!(A > 0.0) || !std::isfinite(A)) throw InvalidArgument("sublevel_threshold: A must be > 0");

    ThresholdResult res;
    if (as_disc(derivative_sublevel(p, 1.0))) {
        res.analytic = true;
        auto area_at = [&](double t) {
            const double r = as_disc(derivative_sublevel(p, t))->radius;
            return kPi * r * r;
        };
        double lo = 0.0, hi = 1.0;
        while (area_at(hi) < A) {
            lo = hi;
            hi *= 2.0;
        }
        for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (area_at(mid) < A ? lo : hi) = mid;
        }
        res.t = 0.5 * (lo + hi);
        res.t_err = hi - lo;
    } else {
        if (o.sampling.samples < kShardSize) throw BudgetTooSmall("sublevel_threshold: too few samples");
        // Fix the sample points once so the estimated area is monotone in t.
        double hi = 1.0;
        Box box;
        std::vector<double> level;
        double N = 0.0;
        auto area_of = [&](double t) {
            const auto k = std::upper_bound(level.begin(), level.end(), t) - level.begin();
            return box.area() * static_cast<double>(k) / N;
        };
        const Polynomial dp = p.derivative();
        for (int grow = 0;; ++grow) {
            const Disc d = derivative_sublevel(p, hi).bounding_disc();
            box = Box::around(d.center, d.radius);
            level.clear();
            for_each_stratified_point(box, o.sampling.samples, o.sampling.seed,
                                      [&](Complex z) { level.push_back(std::norm(dp(z))); });
            std::sort(level.begin(), level.end());
            N = static_cast<double>(level.size());
            if (area_of(hi) >= A) break;
            if (grow > 200) throw BudgetTooSmall("sublevel_threshold: could not bracket the area");
            hi *= 4.0;
        }
        auto area_err = [&](double a) {
            const double q = std::clamp(a / box.area(), 0.0, 1.0);
            return 3.0 * std::sqrt(std::max(q * (1.0 - q), 1.0 / N) / N) * box.area();
        };
        double lo = 0.0;
        double t = hi;
        for (int it = 0; it < 200; ++it) {
            t = 0.5 * (lo + hi);
            const double a = area_of(t);
            if (std::abs(a - A) <= area_err(A) && hi - lo <= 1e-12 * hi) break;
            (a < A ? lo : hi) = t;
        }
        res.t = t;
        // Spread of t over areas within the sampling error of A.
        auto quantile = [&](double a) {
            const auto k = static_cast<std::size_t>(std::clamp(std::ceil(a / box.area() * N), 1.0, N));
            return level[k - 1];
        };
        const double e = area_err(A);
        res.t_err = std::max(t - quantile(std::max(A - e, 0.0)), quantile(A + e) - t);
        if (A + e > box.area()) throw BudgetTooSmall("sublevel_threshold: area target exceeds the sampling box");
    }
    const double bound = n * n * std::pow(A / kPi, n - 1);
    const bool eq = p.critical_structure().kind == CriticalStructure::Kind::centered_power;
    res.report = finish(StatementId::threshold_bound, bound, 0.0, res.t, res.t_err, eq, false, o,
                        p.to_string() + "|A=" + fmt_double(A));
    return res;
}

}  // namespace lemlab
