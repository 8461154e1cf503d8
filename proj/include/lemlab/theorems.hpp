#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lemlab/capacity.hpp"
#include "lemlab/region.hpp"

namespace lemlab {

enum class StatementId {
    polya,
    main,
    multiplicity,
    roundness,
    carleman,
    isoperimetric,
    pullback_lemma,
    capacity_pullback,
    integrated_carleman,
    threshold_bound,
};

inline constexpr StatementId kAllStatements[] = {
    StatementId::polya,         StatementId::main,           StatementId::multiplicity,
    StatementId::roundness,     StatementId::carleman,       StatementId::isoperimetric,
    StatementId::pullback_lemma, StatementId::capacity_pullback, StatementId::integrated_carleman,
    StatementId::threshold_bound,
};

const char* to_string(StatementId id) noexcept;
std::optional<StatementId> parse_statement(std::string_view name);

enum class Verdict { holds, equality, inconclusive, violated };
const char* to_string(Verdict v) noexcept;

/// Two sides of one statement, oriented so that margin = rhs - lhs >= 0
/// means the statement is satisfied (identities: margin should be ~0).
struct Report {
    StatementId statement_id = StatementId::polya;
    double lhs = 0.0;
    double rhs = 0.0;
    double lhs_err = 0.0;
    double rhs_err = 0.0;
    double margin = 0.0;
    Verdict verdict = Verdict::inconclusive;
    bool equality_case = false;
    std::uint64_t seed = 0;
    std::string inputs_digest;
    // Independent estimate of rhs (multiplicity: image-side count).
    std::optional<double> cross_value;
    std::optional<double> cross_err;
};

/// key=value lines in a fixed order.
std::string to_record(const Report& r);
nlohmann::json to_json(const Report& r);

/// Inequality rule: VIOLATED below -budget, HOLDS above +budget, EQUALITY
/// inside the band only when the structural equality case applies.
Verdict classify_inequality(double margin, double budget, bool equality_case) noexcept;
/// Identity rule: EQUALITY inside the band, INCONCLUSIVE up to twice the
/// band, VIOLATED beyond.
Verdict classify_identity(double margin, double budget) noexcept;

struct VerifyOptions {
    SamplingBudget sampling;
    double grid_h = 0.02;
    FeketeOptions fekete;
};

struct RoundnessValue {
    double rho = 0.0;
    double err = 0.0;
    AreaEstimate area_est;
    CapacityEstimate cap_est;
};

/// Monte Carlo estimate of the integral of |p'|^2 over K.
AreaEstimate mass_integral(const Polynomial& p, const Region& K, const SamplingBudget& budget);

/// Image-side estimate of the integral of n(w, p, K) over the plane.
AreaEstimate multiplicity_area(const Polynomial& p, const Region& K, const SamplingBudget& budget);

RoundnessValue roundness(const Region& K, const VerifyOptions& options = {});

Report verify_polya(const Polynomial& p, const Disc& D, const VerifyOptions& options = {});
Report verify_main(const Polynomial& p, const Region& K, const VerifyOptions& options = {});
Report verify_multiplicity(const Polynomial& p, const Region& K, const VerifyOptions& options = {});
Report verify_roundness(const Polynomial& p, const Region& K, const VerifyOptions& options = {});
Report verify_carleman(const Condenser& C, const VerifyOptions& options = {});
Report verify_isoperimetric(const Region& K, const VerifyOptions& options = {});
Report verify_pullback_lemma(const Polynomial& p, const Condenser& C, const VerifyOptions& options = {});
Report verify_capacity_pullback(const Polynomial& p, const Region& B, const VerifyOptions& options = {});
Report verify_integrated_carleman(const Polynomial& g, double x, const VerifyOptions& options = {});

struct ThresholdResult {
    double t = 0.0;
    double t_err = 0.0;
    bool analytic = false;   // K_t recognised as a disc, area in closed form
    Report report;           // threshold_bound
};

/// Level t with Area({|p'|^2 <= t}) = A, found by bisection.
ThresholdResult sublevel_threshold(const Polynomial& p, double A, const VerifyOptions& options = {});

/// The sublevel set {|p'|^2 <= t}.
Region derivative_sublevel(const Polynomial& p, double t);

/// 64-bit FNV-1a digest, hex encoded.
std::string digest(std::string_view text);

}  // namespace lemlab
