#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lemlab/cli.hpp"
#include "lemlab/error.hpp"

namespace fs = std::filesystem;
using lemlab::cli::run;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream out, err;
    Outcome o;
    o.code = run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

// Runs the installed binary in a shell and returns its exit status.
Outcome spawn(const std::string& args) {
    const std::string cmd = std::string(LEMLAB_BIN) + " " + args + " 2>&1";
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, n);
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

std::string value_of(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    return {};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "lemlab_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("area command") {
    const auto disc = scratch("disc.json");
    write(disc, R"({"type":"disc","center":"0+0i","radius":2})");
    auto o = call({"area", disc.string()});
    CHECK(o.code == 0);
    CHECK(value_of(o.out, "value").rfind("12.566370", 0) == 0);
    CHECK(value_of(o.out, "err") == "0");
    CHECK(value_of(o.out, "method") == "exact");

    const auto bern = scratch("bern.json");
    write(bern, R"({"type":"sublevel","poly":"-1+0i,0+0i,1+0i","x":1})");
    o = call({"area", bern.string(), "--samples", "1000000", "--method", "mc"});
    CHECK(o.code == 0);
    const double v = std::stod(value_of(o.out, "value")), e = std::stod(value_of(o.out, "err"));
    CHECK(std::abs(v - 2.0) <= e);
    CHECK(value_of(o.out, "threads") != "");

    const auto bad = scratch("bad.json");
    write(bad, R"({"type":"disc","center":"0+0i","radius":"wide"})");
    o = call({"area", bad.string()});
    CHECK(o.code == 2);
    CHECK(o.err.find("region.radius") != std::string::npos);

    o = call({"area", bern.string(), "--samples", "10", "--method", "mc"});
    CHECK(o.code == 3);
    o = call({"area", (scratch("missing.json")).string()});
    CHECK(o.code == 2);
}

TEST_CASE("json output carries the same fields") {
    const auto rec = call({"verify", "polya", "--poly", "0+0i,0+0i,1+0i", "--disc", "0+0i,1", "--samples", "65536"});
    const auto js = call({"verify", "polya", "--poly", "0+0i,0+0i,1+0i", "--disc", "0+0i,1", "--samples", "65536", "--json"});
    REQUIRE(rec.code == 0);
    REQUIRE(js.code == 0);
    const auto doc = nlohmann::json::parse(js.out);
    std::istringstream in(rec.out);
    std::string line;
    int fields = 0;
    while (std::getline(in, line)) {
        const auto key = line.substr(0, line.find('='));
        CHECK(doc.contains(key));
        ++fields;
    }
    CHECK(fields == static_cast<int>(doc.size()));
    CHECK(doc.at("verdict") == "EQUALITY");
}

TEST_CASE("verify command exit codes") {
    auto o = call({"verify", "polya", "--poly", "0+0i,0+0i,1+0i", "--disc", "0+0i,1"});
    CHECK(o.code == 0);
    CHECK(value_of(o.out, "verdict") == "EQUALITY");

    o = call({"verify", "integrated_carleman", "--poly", "-1+0i,0+0i,1+0i", "--x", "1"});
    CHECK(o.code == 0);
    CHECK(value_of(o.out, "verdict") == "HOLDS");

    // a near-tie without the structural equality case
    o = call({"verify", "polya", "--poly", "0.0001+0i,0+0i,1+0i", "--disc", "0+0i,1"});
    CHECK(o.code == 4);
    CHECK(value_of(o.out, "verdict") == "INCONCLUSIVE");

    CHECK(call({"verify", "polya", "--poly", "0+0i,0+0i,2+0i", "--disc", "0+0i,1"}).code == 2);   // not monic
    CHECK(call({"verify", "polya", "--poly", "0+0i,0+0i,1+0i"}).code == 2);                       // missing disc
    CHECK(call({"verify", "nonsense", "--poly", "0+0i,1+0i"}).code == 2);
    CHECK(call({"verify", "polya", "--poly", "1+0i,zz", "--disc", "0+0i,1"}).code == 2);
    CHECK(call({"verify", "polya", "--poly", "0+0i,0+0i,1+0i", "--disc", "0+0i,1", "--samples", "5"}).code == 3);
    CHECK(call({"frobnicate"}).code == 2);

    CHECK(lemlab::cli::exit_code(lemlab::Verdict::holds) == 0);
    CHECK(lemlab::cli::exit_code(lemlab::Verdict::equality) == 0);
    CHECK(lemlab::cli::exit_code(lemlab::Verdict::inconclusive) == 4);
    CHECK(lemlab::cli::exit_code(lemlab::Verdict::violated) == 5);
}

TEST_CASE("carleman with an eccentric plate") {
    const auto c = scratch("ecc.json");
    write(c, R"({"E":{"type":"disc","center":"0","radius":2.718281828459045},
                 "B":{"type":"disc","center":"0.5","radius":1}})");
    const auto o = call({"verify", "carleman", "--condenser", c.string()});
    CHECK(o.code == 0);
    CHECK(value_of(o.out, "verdict") == "HOLDS");
    CHECK(std::stod(value_of(o.out, "margin")) > 0);
}

TEST_CASE("capacity and condenser commands") {
    auto o = call({"capacity", R"({"type":"disc","center":"1","radius":3})"});
    CHECK(o.code == 0);
    CHECK(value_of(o.out, "value") == "3");
    CHECK(value_of(o.out, "method") == "closed_form");

    const auto dump = scratch("grid.csv");
    fs::remove(dump);
    o = call({"condenser", R"({"E":{"type":"disc","center":"0","radius":2.718281828459045},"B":{"type":"disc","center":"0","radius":1}})",
              "--grid-h", "0.04", "--dump-grid", dump.string()});
    CHECK(o.code == 0);
    CHECK(std::stod(value_of(o.out, "value")) == doctest::Approx(0.5).epsilon(0.03));
    CHECK(fs::exists(dump));
    CHECK(call({"condenser", R"({"E":{"type":"disc","center":"0","radius":1}})"}).code == 2);
}

TEST_CASE("lemniscate export") {
    const auto svg = scratch("bern.svg");
    auto o = call({"lemniscate-svg", "--poly", "-1+0i,0+0i,1+0i", "--r", "1", "--out", svg.string()});
    CHECK(o.code == 0);
    const auto text = slurp(svg);
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("viewBox") != std::string::npos);
    CHECK(text.find(" Z\"") != std::string::npos);

    o = call({"lemniscate-svg", "--poly", "0+0i,1+0i", "--r", "1", "--out", svg.string(), "--resolution", "128"});
    CHECK(o.code == 0);
    CHECK(value_of(o.out, "curves") == "1");
    CHECK(value_of(o.out, "closed") == "1");

    CHECK(call({"lemniscate-svg", "--poly", "0+0i,1+0i", "--r", "-1", "--out", svg.string()}).code == 2);
    CHECK(call({"lemniscate-svg", "--poly", "5+0i", "--r", "1", "--out", svg.string()}).code == 2);
}

TEST_CASE("sweep config validation") {
    using lemlab::cli::parse_sweep_config;
    auto cfg = parse_sweep_config(nlohmann::json::parse(R"({"seed":7,"cases":3,"degree_max":4,"statements":["main"],"mc_samples":20000})"));
    CHECK(cfg.seed == 7);
    CHECK(cfg.statements.size() == 1);
    for (const char* bad : {R"({"cases":0})", R"({"degree_max":11})", R"({"degree_max":0})", R"({"mc_samples":9999})",
                            R"({"statements":["polya","bogus"]})", R"({"cases":"many"})", R"([1,2])"}) {
        CHECK_THROWS_AS(parse_sweep_config(nlohmann::json::parse(bad)), lemlab::ParseError);
    }
    try {
        parse_sweep_config(nlohmann::json::parse(R"({"statements":["polya","bogus"]})"));
    } catch (const lemlab::ParseError& e) {
        CHECK(e.field() == "statements[1]");
    }
    CHECK(call({"sweep", R"({"seed":42,"cases":0})"}).code == 2);
}

TEST_CASE("sweep is deterministic and clean") {
    const std::string cfg = R"({"seed":42,"cases":20,"degree_max":5,"statements":["main","multiplicity"],"mc_samples":65536})";
    const auto a = scratch("sweep_a.txt"), b = scratch("sweep_b.txt");
    const auto oa = call({"sweep", cfg, "--out", a.string()});
    const auto ob = call({"sweep", cfg, "--out", b.string()});
    CHECK(oa.code == 0);
    CHECK(value_of(oa.out, "violated") == "0");
    CHECK(value_of(oa.out, "errors") == "0");
    CHECK(value_of(oa.out, "seed") == "42");
    CHECK(value_of(oa.out, "threads") != "");
    CHECK(oa.out == ob.out);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("violated=0") != std::string::npos);
}

TEST_CASE("binary exit codes through a subprocess") {
    CHECK(spawn("verify polya --poly 0+0i,0+0i,1+0i --disc 0+0i,1").code == 0);
    CHECK(spawn("verify polya --poly 0.0001+0i,0+0i,1+0i --disc 0+0i,1").code == 4);
    CHECK(spawn("area '{\"type\":\"disc\",\"radius\":\"x\",\"center\":\"0\"}'").code == 2);
    CHECK(spawn("area '{\"type\":\"polygon\",\"vertices\":[\"0\",\"1\",\"1+1i\"]}' --method mc --samples 10").code == 3);
    CHECK(spawn("sweep '{\"cases\":0}'").code == 2);
    CHECK(spawn("--help").code == 0);
    CHECK(spawn("").code == 2);
}
