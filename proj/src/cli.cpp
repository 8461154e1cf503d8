#include "lemlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "lemlab/contour.hpp"
#include "lemlab/error.hpp"
#include "lemlab/parallel.hpp"
#include "lemlab/region_io.hpp"

namespace lemlab::cli {

namespace {

using Fields = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

std::string number_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string scalar_text(const Fields& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return number_text(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

void emit(std::ostream& out, const Fields& f, bool json) {
    if (json) {
        out << f.dump(2) << '\n';
        return;
    }
    for (auto it = f.begin(); it != f.end(); ++it) out << it.key() << '=' << scalar_text(it.value()) << '\n';
}

Fields report_fields(const Report& r) {
    Fields f;
    f["statement_id"] = to_string(r.statement_id);
    f["lhs"] = r.lhs;
    f["rhs"] = r.rhs;
    f["lhs_err"] = r.lhs_err;
    f["rhs_err"] = r.rhs_err;
    f["margin"] = r.margin;
    f["verdict"] = to_string(r.verdict);
    f["seed"] = r.seed;
    f["inputs_digest"] = r.inputs_digest;
    if (r.cross_value) f["cross_value"] = *r.cross_value;
    if (r.cross_err) f["cross_err"] = *r.cross_err;
    return f;
}

Region region_arg(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_region(text);
    return load_region(text);
}

Condenser condenser_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("condenser", "expected an object with keys E and B");
    for (const char* key : {"E", "B"})
        if (!doc.contains(key)) throw ParseError(std::string("condenser.") + key, "missing");
    return {region_from_json(doc.at("E"), "condenser.E"), region_from_json(doc.at("B"), "condenser.B")};
}

Condenser condenser_arg(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    const std::string body = first != std::string::npos && text[first] == '{' ? text : read_text_file(text);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("condenser", e.what());
    }
    return condenser_from_json(doc);
}

Disc disc_arg(const std::string& text) {
    const auto comma = text.rfind(',');
    if (comma == std::string::npos) throw ParseError("disc", "expected \"center,radius\"");
    const Complex c = parse_complex(text.substr(0, comma));
    double r = 0.0;
    try {
        std::size_t used = 0;
        r = std::stod(text.substr(comma + 1), &used);
    } catch (const std::exception&) {
        throw ParseError("disc", "radius is not a number");
    }
    if (!(r > 0.0)) throw ParseError("disc", "radius must be > 0");
    return {c, r};
}

// ---------------------------------------------------------------------------
// Random cases

class CaseRng {
public:
    explicit CaseRng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    Complex in_disc(double r) {
        const double rho = r * std::sqrt(uniform(0.0, 1.0));
        return std::polar(rho, uniform(0.0, 2.0 * kPi));
    }
    Polynomial monic(int degree, double root_radius) {
        std::vector<Complex> roots(static_cast<std::size_t>(degree));
        for (auto& z : roots) z = in_disc(root_radius);
        return Polynomial::from_roots(roots);
    }

private:
    std::mt19937_64 gen_;
};

Region star_polygon(CaseRng& rng, Complex c, double r_lo, double r_hi, int k, double jitter) {
    std::vector<Complex> v;
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    for (int i = 0; i < k; ++i) {
        const double t = phase + 2.0 * kPi * (i + rng.uniform(-jitter, jitter)) / k;
        v.push_back(c + std::polar(rng.uniform(r_lo, r_hi), t));
    }
    return Region::polygon(std::move(v));
}

// Compact regions of size about one, of every basic kind.
Region random_region(CaseRng& rng, bool allow_sublevel = true) {
    const int kind = rng.integer(0, allow_sublevel ? 5 : 4);
    const Complex c = rng.in_disc(0.5);
    switch (kind) {
        case 0: return Region::disc(c, rng.uniform(0.4, 1.2));
        case 1: {
            const double w = rng.uniform(0.5, 1.6), h = rng.uniform(0.5, 1.6);
            return Region::rectangle(c - Complex{w, h} / 2.0, w, h);
        }
        case 2: return star_polygon(rng, c, 0.5, 1.2, rng.integer(5, 9), 0.3);
        case 3: return Region::annulus(c, rng.uniform(0.2, 0.5), rng.uniform(0.8, 1.2));
        case 4: {
            const double r1 = rng.uniform(0.3, 0.8), r2 = rng.uniform(0.3, 0.8);
            const Complex off = std::polar(rng.uniform(0.3, 1.2), rng.uniform(0.0, 2.0 * kPi));
            return Region::union_of({Region::disc(c, r1), Region::disc(c + off, r2)});
        }
        default: return Region::sublevel(rng.monic(2, 0.7), rng.uniform(0.5, 1.5));
    }
}

// B inside E with room to spare at any reasonable grid spacing.
Condenser random_condenser(CaseRng& rng) {
    for (;;) {
        Region B = random_region(rng, false);
        const Complex off = rng.in_disc(0.4);
        const double R = rng.uniform(2.0, 3.0);
        double inscribed = R;
        Region E = Region::disc(off, R);
        if (rng.integer(0, 1) == 1) {
            const int k = rng.integer(5, 10);
            const double phase = rng.uniform(0.0, 2.0 * kPi);
            std::vector<Complex> v;
            for (int i = 0; i < k; ++i) v.push_back(off + std::polar(R, phase + 2.0 * kPi * i / k));
            E = Region::polygon(std::move(v));
            inscribed = R * std::cos(kPi / k);
        }
        const Disc b = B.bounding_disc();
        if (std::abs(b.center - off) + b.radius < inscribed - 0.2) return {std::move(E), std::move(B)};
    }
}

struct Case {
    StatementId id = StatementId::polya;
    std::string inputs;
    std::function<Report(const VerifyOptions&)> run;
};

Case make_case(const SweepConfig& cfg, int index) {
    const StatementId id = cfg.statements[static_cast<std::size_t>(index) % cfg.statements.size()];
    CaseRng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(index)));
    const int dmax = cfg.degree_max;
    // Fekete and grid statements stay at small degree to keep runtime bounded.
    const int dsmall = std::min(dmax, 3);
    auto poly_text = [](const Polynomial& p) { return p.to_string(); };
    auto region_text = [](const Region& K) { return region_to_json(K).dump(); };

    Case c;
    c.id = id;
    switch (id) {
        case StatementId::polya: {
            auto p = rng.monic(rng.integer(1, dmax), 1.0);
            const Disc D{rng.in_disc(1.0), rng.uniform(0.3, 2.0)};
            c.inputs = "poly=" + poly_text(p) + " disc=" + format_complex(D.center) + "," + number_text(D.radius);
            c.run = [p, D](const VerifyOptions& o) { return verify_polya(p, D, o); };
            break;
        }
        case StatementId::main: {
            auto p = rng.monic(rng.integer(1, dmax), 1.0);
            auto K = random_region(rng);
            c.inputs = "poly=" + poly_text(p) + " region=" + region_text(K);
            c.run = [p, K](const VerifyOptions& o) { return verify_main(p, K, o); };
            break;
        }
        case StatementId::multiplicity: {
            auto p = rng.monic(rng.integer(1, dmax), 1.0);
            auto K = random_region(rng);
            c.inputs = "poly=" + poly_text(p) + " region=" + region_text(K);
            c.run = [p, K](const VerifyOptions& o) { return verify_multiplicity(p, K, o); };
            break;
        }
        case StatementId::roundness: {
            const Complex a = std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0 * kPi));
            auto p = rng.monic(rng.integer(1, dsmall), 1.0) * a;
            auto K = random_region(rng);
            c.inputs = "poly=" + poly_text(p) + " region=" + region_text(K);
            c.run = [p, K](const VerifyOptions& o) { return verify_roundness(p, K, o); };
            break;
        }
        case StatementId::carleman: {
            auto C = random_condenser(rng);
            c.inputs = "E=" + region_text(C.E) + " B=" + region_text(C.B);
            c.run = [C](const VerifyOptions& o) { return verify_carleman(C, o); };
            break;
        }
        case StatementId::isoperimetric: {
            auto K = random_region(rng);
            c.inputs = "region=" + region_text(K);
            c.run = [K](const VerifyOptions& o) { return verify_isoperimetric(K, o); };
            break;
        }
        case StatementId::pullback_lemma: {
            auto p = rng.monic(rng.integer(1, std::min(dsmall, 2)), 0.5);
            const Condenser C{Region::disc(0.0, rng.uniform(2.5, 3.5)), Region::disc(rng.in_disc(0.2), rng.uniform(1.0, 1.4))};
            c.inputs = "poly=" + poly_text(p) + " E=" + region_text(C.E) + " B=" + region_text(C.B);
            c.run = [p, C](const VerifyOptions& o) { return verify_pullback_lemma(p, C, o); };
            break;
        }
        case StatementId::capacity_pullback: {
            auto p = rng.monic(rng.integer(1, dsmall), 0.7);
            auto B = random_region(rng, false);
            c.inputs = "poly=" + poly_text(p) + " region=" + region_text(B);
            c.run = [p, B](const VerifyOptions& o) { return verify_capacity_pullback(p, B, o); };
            break;
        }
        case StatementId::integrated_carleman: {
            auto g = rng.monic(rng.integer(1, dmax), 1.0);
            const double x = rng.uniform(0.3, 2.0);
            c.inputs = "poly=" + poly_text(g) + " x=" + number_text(x);
            c.run = [g, x](const VerifyOptions& o) { return verify_integrated_carleman(g, x, o); };
            break;
        }
        case StatementId::threshold_bound: {
            auto p = rng.monic(rng.integer(2, std::max(2, dmax)), 1.0);
            const double A = rng.uniform(0.5, 3.0);
            c.inputs = "poly=" + poly_text(p) + " area=" + number_text(A);
            c.run = [p, A](const VerifyOptions& o) { return sublevel_threshold(p, A, o).report; };
            break;
        }
    }
    return c;
}

int histogram_bin(double margin) {
    int bin = 0;
    for (double edge : kMarginEdges) {
        if (margin < edge) return bin;
        ++bin;
    }
    return bin;
}

std::string bin_label(std::size_t bin) {
    constexpr std::size_t n = std::size(kMarginEdges);
    const std::string lo = bin == 0 ? "-inf" : number_text(kMarginEdges[bin - 1]);
    const std::string hi = bin == n ? "inf" : number_text(kMarginEdges[bin]);
    return "hist[" + lo + "," + hi + ")";
}

Fields summary_fields(const SweepSummary& s) {
    Fields f;
    f["cases_run"] = s.cases;
    for (auto v : {Verdict::holds, Verdict::equality, Verdict::inconclusive, Verdict::violated}) {
        std::string key = to_string(v);
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
        f[key] = s.counts.count(v) ? s.counts.at(v) : 0;
    }
    f["errors"] = s.errors;
    f["min_margin"] = s.min_margin;
    for (std::size_t b = 0; b < s.histogram.size(); ++b) f[bin_label(b)] = s.histogram[b];
    return f;
}

Fields sweep_header(const SweepConfig& cfg) {
    Fields f;
    f["seed"] = cfg.seed;
    f["threads"] = thread_count();
    f["cases"] = cfg.cases;
    f["degree_max"] = cfg.degree_max;
    f["mc_samples"] = cfg.mc_samples;
    f["grid_h"] = cfg.grid_h;
    std::string ids;
    for (auto id : cfg.statements) ids += (ids.empty() ? "" : ",") + std::string(to_string(id));
    f["statements"] = ids;
    return f;
}

// ---------------------------------------------------------------------------
// Commands

struct Common {
    std::uint64_t seed = 42;
    std::uint64_t samples = 1u << 20;
    double grid_h = 0.02;
    int fekete_n = 256;
    bool json = false;
    std::string method = "auto";
};

VerifyOptions verify_options(const Common& c) {
    VerifyOptions o;
    o.sampling.seed = c.seed;
    o.sampling.samples = c.samples;
    o.grid_h = c.grid_h;
    o.fekete.n_points = c.fekete_n;
    return o;
}

SamplingBudget area_budget(const Common& c) {
    SamplingBudget b;
    b.seed = c.seed;
    b.samples = c.samples;
    if (c.method == "mc") b.method = SamplingBudget::Method::montecarlo;
    else if (c.method == "grid") b.method = SamplingBudget::Method::grid;
    else if (c.method == "exact") b.method = SamplingBudget::Method::exact;
    return b;
}

Fields capacity_fields(const CapacityEstimate& e) {
    Fields f;
    f["value"] = e.value;
    f["err"] = e.err;
    f["method"] = to_string(e.method);
    if (const auto* d = std::get_if<FeketeDetail>(&e.detail)) {
        f["points"] = d->n;
        f["candidates"] = d->candidates;
        f["d_quarter"] = d->d_quarter;
        f["d_half"] = d->d_half;
        f["d_full"] = d->d_full;
    } else if (const auto* g = std::get_if<GridDetail>(&e.detail)) {
        f["h"] = g->h;
        f["cap_h"] = g->cap_h;
        f["cap_2h"] = g->cap_2h;
        f["unknowns"] = g->unknowns;
        f["iterations"] = g->iterations;
    }
    return f;
}

struct VerifyInputs {
    std::string poly;
    std::string disc;
    std::string region;
    std::string condenser;
    double x = 0.0;
    double area = 0.0;
};

template <class T>
const T& need(const std::optional<T>& v, const char* flag, const std::string& statement) {
    if (!v) throw InvalidArgument("verify " + statement + " needs " + flag);
    return *v;
}

Report run_verify(const std::string& statement, const VerifyInputs& in, const VerifyOptions& o) {
    const auto id = parse_statement(statement);
    if (!id) throw InvalidArgument("unknown statement '" + statement + "'");
    std::optional<Polynomial> p;
    std::optional<Region> K;
    std::optional<Condenser> C;
    std::optional<Disc> D;
    std::optional<double> x, A;
    if (!in.poly.empty()) p = Polynomial::parse(in.poly);
    if (!in.region.empty()) K = region_arg(in.region);
    if (!in.condenser.empty()) C = condenser_arg(in.condenser);
    if (!in.disc.empty()) D = disc_arg(in.disc);
    if (in.x != 0.0) x = in.x;
    if (in.area != 0.0) A = in.area;

    switch (*id) {
        case StatementId::polya: return verify_polya(need(p, "--poly", statement), need(D, "--disc", statement), o);
        case StatementId::main: return verify_main(need(p, "--poly", statement), need(K, "--region", statement), o);
        case StatementId::multiplicity:
            return verify_multiplicity(need(p, "--poly", statement), need(K, "--region", statement), o);
        case StatementId::roundness:
            return verify_roundness(need(p, "--poly", statement), need(K, "--region", statement), o);
        case StatementId::carleman: return verify_carleman(need(C, "--condenser", statement), o);
        case StatementId::isoperimetric: return verify_isoperimetric(need(K, "--region", statement), o);
        case StatementId::pullback_lemma:
            return verify_pullback_lemma(need(p, "--poly", statement), need(C, "--condenser", statement), o);
        case StatementId::capacity_pullback: {
            std::optional<Region> B = K;
            if (!B && D) B = Region::disc(D->center, D->radius);
            return verify_capacity_pullback(need(p, "--poly", statement), need(B, "--region", statement), o);
        }
        case StatementId::integrated_carleman:
            return verify_integrated_carleman(need(p, "--poly", statement), need(x, "--x", statement), o);
        case StatementId::threshold_bound:
            return sublevel_threshold(need(p, "--poly", statement), need(A, "--area", statement), o).report;
    }
    throw InvalidArgument("unknown statement '" + statement + "'");
}

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const BudgetTooSmall& e) {
        err << "error: " << e.what() << '\n';
        return kBudgetTooSmall;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const NotMonic& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const ThinPlate& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const ResolutionTooCoarse& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const EmptyRegion& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace

int exit_code(Verdict v) noexcept {
    switch (v) {
        case Verdict::inconclusive: return kInconclusive;
        case Verdict::violated: return kViolated;
        default: return kOk;
    }
}

SweepConfig parse_sweep_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("sweep", "expected an object");
    SweepConfig cfg;
    auto integer = [&](const char* key, auto& dst) {
        if (!doc.contains(key)) return;
        const auto& v = doc.at(key);
        if (!v.is_number_integer()) throw ParseError(key, "expected an integer");
        dst = v.get<std::remove_reference_t<decltype(dst)>>();
    };
    if (doc.contains("seed") && doc.at("seed").is_number_integer() && doc.at("seed").get<long long>() < 0)
        throw ParseError("seed", "must be non-negative");
    integer("seed", cfg.seed);
    if (doc.contains("mc_samples") && doc.at("mc_samples").is_number_integer() &&
        doc.at("mc_samples").get<long long>() < 0)
        throw ParseError("mc_samples", "must be >= 10000");
    integer("cases", cfg.cases);
    integer("degree_max", cfg.degree_max);
    integer("mc_samples", cfg.mc_samples);
    if (doc.contains("grid_h")) {
        if (!doc.at("grid_h").is_number()) throw ParseError("grid_h", "expected a number");
        cfg.grid_h = doc.at("grid_h").get<double>();
    }
    if (doc.contains("output_path")) {
        if (!doc.at("output_path").is_string()) throw ParseError("output_path", "expected a string");
        cfg.output_path = doc.at("output_path").get<std::string>();
    }
    if (doc.contains("statements")) {
        const auto& list = doc.at("statements");
        if (!list.is_array() || list.empty()) throw ParseError("statements", "expected a non-empty list");
        cfg.statements.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string field = "statements[" + std::to_string(i) + "]";
            if (!list[i].is_string()) throw ParseError(field, "expected a statement name");
            const auto id = parse_statement(list[i].get<std::string>());
            if (!id) throw ParseError(field, "unknown statement '" + list[i].get<std::string>() + "'");
            cfg.statements.push_back(*id);
        }
    }
    if (cfg.cases < 1) throw ParseError("cases", "must be >= 1");
    if (cfg.degree_max < 1 || cfg.degree_max > 10) throw ParseError("degree_max", "must be in [1, 10]");
    if (cfg.mc_samples < 10000) throw ParseError("mc_samples", "must be >= 10000");
    if (!(cfg.grid_h > 0.0)) throw ParseError("grid_h", "must be > 0");
    return cfg;
}

SweepSummary run_sweep(const SweepConfig& cfg, std::ostream& reports) {
    SweepSummary s;
    s.histogram.assign(std::size(kMarginEdges) + 1, 0);
    s.min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.cases; ++i) {
        const Case c = make_case(cfg, i);
        VerifyOptions o;
        o.sampling.samples = cfg.mc_samples;
        o.sampling.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i) + 0x5eed0000ULL);
        o.grid_h = cfg.grid_h;
        reports << "case=" << i << '\n' << "inputs=" << c.inputs << '\n';
        ++s.cases;
        try {
            const Report r = c.run(o);
            emit(reports, report_fields(r), false);
            ++s.counts[r.verdict];
            s.min_margin = std::min(s.min_margin, r.margin);
            ++s.histogram[static_cast<std::size_t>(histogram_bin(r.margin))];
        } catch (const std::exception& e) {
            reports << "statement_id=" << to_string(c.id) << '\n' << "error=" << e.what() << '\n';
            ++s.errors;
        }
        reports << '\n';
    }
    if (s.cases == s.errors) s.min_margin = 0.0;
    return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"lemlab: polynomial preimages, capacities and lemniscates"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "random seed");
        sub->add_option("--samples", common.samples, "Monte Carlo samples");
        sub->add_option("--grid-h", common.grid_h, "grid spacing")->check(CLI::PositiveNumber);
        sub->add_option("--fekete-n", common.fekete_n, "Fekete point count")->check(CLI::Range(16, 1 << 14));
        sub->add_flag("--json", common.json, "emit one JSON document");
    };

    std::string region, condenser_text, dump_grid, statement, sweep_path, out_path, poly;
    VerifyInputs vin;
    double r_level = 0.0;
    int resolution = 512;

    auto* area_cmd = app.add_subcommand("area", "area of a region");
    area_cmd->add_option("region", region, "region file or inline JSON")->required();
    area_cmd->add_option("--method", common.method, "mc|grid|exact")
        ->check(CLI::IsMember({"auto", "mc", "grid", "exact"}));
    add_common(area_cmd);

    auto* cap_cmd = app.add_subcommand("capacity", "logarithmic capacity of a region");
    cap_cmd->add_option("region", region, "region file or inline JSON")->required();
    auto* numeric = cap_cmd->add_flag("--numeric", "skip closed forms");
    add_common(cap_cmd);

    auto* cond_cmd = app.add_subcommand("condenser", "capacity of a condenser {E, B}");
    cond_cmd->add_option("condenser", condenser_text, "condenser file or inline JSON")->required();
    cond_cmd->add_option("--dump-grid", dump_grid, "write the potential as CSV");
    add_common(cond_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "check one statement on given inputs");
    verify_cmd->add_option("statement", statement, "statement id")->required();
    verify_cmd->add_option("--poly", vin.poly, "coefficients low to high, e.g. \"-1+0i,0+0i,1+0i\"");
    verify_cmd->add_option("--disc", vin.disc, "\"center,radius\"");
    verify_cmd->add_option("--region", vin.region, "region file or inline JSON");
    verify_cmd->add_option("--condenser", vin.condenser, "condenser file or inline JSON");
    verify_cmd->add_option("--x", vin.x, "sublevel threshold")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--area", vin.area, "target area")->check(CLI::PositiveNumber);
    add_common(verify_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "randomized verification sweep");
    sweep_cmd->add_option("config", sweep_path, "sweep config file or inline JSON")->required();
    sweep_cmd->add_option("--out", out_path, "report file (overrides output_path)");
    sweep_cmd->add_flag("--json", common.json, "emit the summary as JSON");

    auto* svg_cmd = app.add_subcommand("lemniscate-svg", "trace {|p(z)| = r^n} as SVG");
    svg_cmd->add_option("--poly", poly, "coefficients low to high")->required();
    svg_cmd->add_option("--r", r_level, "radius r > 0")->required();
    svg_cmd->add_option("--out", out_path, "output SVG path")->required();
    svg_cmd->add_option("--resolution", resolution, "grid nodes per side")->check(CLI::Range(8, 8192));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }

    return guarded(err, [&]() -> int {
        if (area_cmd->parsed()) {
            const Region K = region_arg(region);
            const auto est = area(K, area_budget(common));
            Fields f;
            f["value"] = est.value;
            f["err"] = est.err;
            f["method"] = to_string(est.method);
            f["samples_or_resolution"] = est.samples_or_resolution;
            f["seed"] = common.seed;
            f["threads"] = thread_count();
            emit(out, f, common.json);
            return kOk;
        }
        if (cap_cmd->parsed()) {
            const Region K = region_arg(region);
            FeketeOptions fo;
            fo.n_points = common.fekete_n;
            fo.force_numeric = numeric->count() > 0;
            Fields f = capacity_fields(log_capacity(K, fo));
            f["threads"] = thread_count();
            emit(out, f, common.json);
            return kOk;
        }
        if (cond_cmd->parsed()) {
            const Condenser C = condenser_arg(condenser_text);
            const auto est = condenser_capacity(C, common.grid_h);
            if (!dump_grid.empty()) write_grid_csv(solve_condenser(C, common.grid_h).f, dump_grid);
            Fields f = capacity_fields(est);
            f["threads"] = thread_count();
            emit(out, f, common.json);
            return kOk;
        }
        if (verify_cmd->parsed()) {
            const Report r = run_verify(statement, vin, verify_options(common));
            Fields f = report_fields(r);
            f["threads"] = thread_count();
            emit(out, f, common.json);
            return exit_code(r.verdict);
        }
        if (sweep_cmd->parsed()) {
            const auto first = sweep_path.find_first_not_of(" \t\r\n");
            const std::string body =
                first != std::string::npos && sweep_path[first] == '{' ? sweep_path : read_text_file(sweep_path);
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(body);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError("sweep", e.what());
            }
            SweepConfig cfg = parse_sweep_config(doc);
            if (!out_path.empty()) cfg.output_path = out_path;

            const Fields header = sweep_header(cfg);
            SweepSummary s;
            if (cfg.output_path.empty()) {
                if (!common.json) {
                    emit(out, header, false);
                    out << '\n';
                }
                std::ostringstream sink;
                s = run_sweep(cfg, common.json ? sink : out);
            } else {
                std::ofstream file(cfg.output_path);
                if (!file) throw InvalidArgument("cannot write sweep reports to " + cfg.output_path);
                emit(file, header, false);
                file << '\n';
                s = run_sweep(cfg, file);
                emit(file, summary_fields(s), false);
            }
            if (common.json) {
                Fields doc_out;
                doc_out["header"] = header;
                doc_out["summary"] = summary_fields(s);
                out << doc_out.dump(2) << '\n';
            } else {
                if (!cfg.output_path.empty()) {
                    emit(out, header, false);
                    out << '\n';
                }
                emit(out, summary_fields(s), false);
            }
            if (s.counts[Verdict::violated] > 0) return kViolated;
            return s.errors > 0 ? kFailure : kOk;
        }
        if (svg_cmd->parsed()) {
            const Polynomial p = Polynomial::parse(poly);
            const auto trace = trace_lemniscate(p, r_level, resolution);
            std::ofstream file(out_path);
            if (!file) throw InvalidArgument("cannot write " + out_path);
            file << lemniscate_svg(trace);
            Fields f;
            f["out"] = out_path;
            f["curves"] = trace.curves.size();
            f["closed"] = std::count_if(trace.curves.begin(), trace.curves.end(),
                                        [](const Polyline& c) { return c.closed; });
            f["resolution"] = resolution;
            emit(out, f, false);
            return kOk;
        }
        return kBadInput;
    });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace lemlab::cli
