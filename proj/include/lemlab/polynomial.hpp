#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lemlab {

using Complex = std::complex<double>;

/// A root (or preimage) together with its multiplicity.
struct WeightedPoint {
    Complex z;
    int multiplicity = 1;
};

/// Preimages of a value counted with valency. `total` always equals the
/// degree of the polynomial that produced the set.
struct PreimageSet {
    std::vector<WeightedPoint> points;
    int total = 0;
};

/// Structural classification used by the equality-case detectors.
///   affine: degree 1, every point is "the" critical point.
///   centered_power: p(z) = a (z - b)^n + c with n >= 2.
struct CriticalStructure {
    enum class Kind { none, affine, centered_power };
    Kind kind = Kind::none;
    Complex critical_point{};
    Complex critical_value{};
};

/// Complex polynomial with coefficients stored low-to-high. The leading
/// coefficient is nonzero except for the zero polynomial, which is
/// represented as the single coefficient 0 with degree 0.
class Polynomial {
public:
    Polynomial();
    explicit Polynomial(std::vector<Complex> coeffs);

    /// z^n
    static Polynomial monomial(int n);
    /// prod (z - r_i)
    static Polynomial from_roots(std::span<const Complex> roots);
    /// a (z - b)^n + c
    static Polynomial centered_power(int n, Complex b, Complex c, Complex a = 1.0);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
    Complex leading() const noexcept { return coeffs_.back(); }
    bool is_monic() const noexcept { return monic_; }
    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == Complex{}; }

    Complex operator()(Complex z) const noexcept { return eval(z); }
    Complex eval(Complex z) const noexcept;
    /// p(z) and p'(z) in one Horner pass.
    void eval_with_derivative(Complex z, Complex& value, Complex& slope) const noexcept;

    Polynomial derivative() const;
    /// p / leading(p); the result is flagged monic.
    Polynomial monic_normalized() const;
    /// p(alpha z + beta)
    Polynomial compose_affine(Complex alpha, Complex beta) const;
    /// Taylor coefficients of p about z0: p(z0 + h) = sum t_k h^k.
    std::vector<Complex> taylor_at(Complex z0) const;
    /// sum |a_i| |z|^i, the scale against which residuals are measured.
    double magnitude_scale(double abs_z) const noexcept;

    CriticalStructure critical_structure(double tol = 1e-9) const;

    Polynomial operator-(Complex w) const;
    Polynomial operator+(Complex w) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(Complex s) const;

    /// Low-to-high coefficients in the `a+bi` text format.
    std::string to_string() const;
    static Polynomial parse(std::string_view text);

private:
    void normalize();

    std::vector<Complex> coeffs_;
    bool monic_ = false;
};

struct RootOptions {
    int max_iterations = 500;
    double residual_tol = 1e-12;
    double cluster_radius = 1e-7;
};

/// All complex roots with multiplicity. Requires degree >= 1.
PreimageSet roots(const Polynomial& p, const RootOptions& options = {});

/// Roots of p - w with multiplicity.
PreimageSet preimages(const Polynomial& p, Complex w, const RootOptions& options = {});

/// A radius r with |z| > r  =>  |p(z)| > R. Requires p monic.
double escape_radius(const Polynomial& p, double R);

std::string format_complex(Complex z);
Complex parse_complex(std::string_view text);

}  // namespace lemlab
