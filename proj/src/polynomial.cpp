#include "lemlab/polynomial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "lemlab/error.hpp"

namespace lemlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Scale for the k-th Taylor coefficient about z0: sum_i |a_i| C(i,k) |z0|^(i-k).
double taylor_scale(const std::vector<Complex>& a, int k, double abs_z0) {
    double s = 0.0;
    for (int i = static_cast<int>(a.size()) - 1; i >= k; --i)
        s = s * abs_z0 + std::abs(a[i]) * binomial(i, k);
    return s;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_real(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

void append_double(std::string& out, double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

}  // namespace

Polynomial::Polynomial() : coeffs_{Complex{}} {}

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

void Polynomial::normalize() {
    while (coeffs_.size() > 1 && coeffs_.back() == Complex{}) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(Complex{});
    monic_ = coeffs_.back() == Complex{1.0, 0.0};
}

Polynomial Polynomial::monomial(int n) {
    if (n < 0) throw InvalidArgument("monomial degree must be >= 0");
    std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
    c.back() = 1.0;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
    Polynomial p({Complex{1.0}});
    for (Complex r : roots) p = p * Polynomial({-r, Complex{1.0}});
    return p;
}

Polynomial Polynomial::centered_power(int n, Complex b, Complex c, Complex a) {
    if (n < 1) throw InvalidArgument("centered_power needs n >= 1");
    return (monomial(n).compose_affine(1.0, -b) * a) + c;
}

Complex Polynomial::eval(Complex z) const noexcept {
    Complex acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

void Polynomial::eval_with_derivative(Complex z, Complex& value, Complex& slope) const noexcept {
    Complex v = coeffs_.back();
    Complex d{};
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
        d = d * z + v;
        v = v * z + *it;
    }
    value = v;
    slope = d;
}

Polynomial Polynomial::derivative() const {
    if (degree() == 0) return Polynomial();
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::monic_normalized() const {
    if (is_zero()) throw InvalidArgument("cannot normalize the zero polynomial");
    if (monic_) return *this;
    std::vector<Complex> c(coeffs_);
    const Complex lead = c.back();
    for (auto& v : c) v /= lead;
    c.back() = 1.0;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::compose_affine(Complex alpha, Complex beta) const {
    const Polynomial inner({beta, alpha});
    Polynomial acc({coeffs_.back()});
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) acc = acc * inner + *it;
    // alpha^n * leading is exact for alpha = 1, which keeps translated monic inputs monic.
    return acc;
}

std::vector<Complex> Polynomial::taylor_at(Complex z0) const {
    std::vector<Complex> t(coeffs_);
    const int n = degree();
    for (int k = 0; k < n; ++k)
        for (int i = n - 1; i >= k; --i) t[i] += z0 * t[i + 1];
    return t;
}

double Polynomial::magnitude_scale(double abs_z) const noexcept {
    double s = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) s = s * abs_z + std::abs(*it);
    return s;
}

CriticalStructure Polynomial::critical_structure(double tol) const {
    CriticalStructure cs;
    const int n = degree();
    if (n < 1) return cs;
    if (n == 1) {
        cs.kind = CriticalStructure::Kind::affine;
        cs.critical_point = -coeffs_[0] / coeffs_[1];
        return cs;
    }
    // All critical points coincide iff the Taylor expansion about the mean
    // critical point has no terms of order 1..n-1.
    const Complex b = -coeffs_[n - 1] / (static_cast<double>(n) * coeffs_[n]);
    const auto t = taylor_at(b);
    for (int k = 1; k < n; ++k)
        if (std::abs(t[k]) > tol * taylor_scale(coeffs_, k, std::abs(b))) return cs;
    cs.kind = CriticalStructure::Kind::centered_power;
    cs.critical_point = b;
    cs.critical_value = t[0];
    return cs;
}

Polynomial Polynomial::operator-(Complex w) const { return *this + (-w); }

Polynomial Polynomial::operator+(Complex w) const {
    std::vector<Complex> c(coeffs_);
    c[0] += w;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    std::vector<Complex> c(coeffs_.size() + other.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * other.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(Complex s) const {
    std::vector<Complex> c(coeffs_);
    for (auto& v : c) v *= s;
    return Polynomial(std::move(c));
}

std::string Polynomial::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ',';
        out += format_complex(coeffs_[i]);
    }
    return out;
}

Polynomial Polynomial::parse(std::string_view text) {
    std::vector<Complex> c;
    std::size_t start = 0;
    while (true) {
        auto comma = text.find(',', start);
        auto token = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        try {
            c.push_back(parse_complex(token));
        } catch (const ParseError& e) {
            throw ParseError("poly", "coefficient " + std::to_string(c.size()) + ": " + e.what());
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return Polynomial(std::move(c));
}

std::string format_complex(Complex z) {
    std::string out;
    append_double(out, z.real());
    double im = z.imag();
    if (im == 0.0) im = 0.0;
    if (!std::signbit(im)) out += '+';
    append_double(out, im);
    out += 'i';
    return out;
}

Complex parse_complex(std::string_view text) {
    const std::string s = trim(text);
    if (s.empty()) throw ParseError("complex", "empty number");
    if (s.back() != 'i' && s.back() != 'j') {
        double re;
        if (!parse_real(s, re)) throw ParseError("complex", "cannot read '" + s + "'");
        return {re, 0.0};
    }
    const std::string body = s.substr(0, s.size() - 1);
    // Split at the last sign that is not an exponent sign and not the leading sign.
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    std::string re_part = split == std::string::npos ? std::string{} : body.substr(0, split);
    std::string im_part = split == std::string::npos ? body : body.substr(split);
    double re = 0.0, im = 0.0;
    if (!re_part.empty() && !parse_real(re_part, re))
        throw ParseError("complex", "cannot read real part of '" + s + "'");
    if (im_part.empty() || im_part == "+")
        im = 1.0;
    else if (im_part == "-")
        im = -1.0;
    else if (!parse_real(im_part, im))
        throw ParseError("complex", "cannot read imaginary part of '" + s + "'");
    return {re, im};
}

// ---------------------------------------------------------------------------
// Root finding: Aberth-Ehrlich simultaneous iteration, Newton polish, then
// multiplicity clustering.

namespace {

struct Cluster {
    Complex z;
    int multiplicity;
};

std::vector<int> link_labels(const std::vector<Cluster>& pts, double radius, int& count) {
    const std::size_t n = pts.size();
    std::vector<int> label(n, -1);
    count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] >= 0) continue;
        label[i] = count;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            auto k = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                if (label[j] >= 0) continue;
                const double r = radius * std::max({1.0, std::abs(pts[k].z), std::abs(pts[j].z)});
                if (std::abs(pts[k].z - pts[j].z) <= r) {
                    label[j] = count;
                    stack.push_back(j);
                }
            }
        }
        ++count;
    }
    return label;
}

std::vector<Cluster> merge_groups(const std::vector<Cluster>& pts, const std::vector<int>& label, int count) {
    std::vector<Cluster> out(static_cast<std::size_t>(count), Cluster{Complex{}, 0});
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto& c = out[static_cast<std::size_t>(label[i])];
        c.z += pts[i].z * static_cast<double>(pts[i].multiplicity);
        c.multiplicity += pts[i].multiplicity;
    }
    for (auto& c : out) c.z /= static_cast<double>(c.multiplicity);
    return out;
}

// An m-fold root at c has Taylor coefficients t_0..t_{m-1} at rounding level.
bool is_numerical_multiple_root(const Polynomial& p, Complex c, int m) {
    constexpr double eta = 1e-12;
    const auto t = p.taylor_at(c);
    for (int k = 0; k < m; ++k)
        if (std::abs(t[static_cast<std::size_t>(k)]) > eta * taylor_scale(p.coeffs(), k, std::abs(c)))
            return false;
    return true;
}

}  // namespace

PreimageSet roots(const Polynomial& p, const RootOptions& options) {
    if (p.degree() < 1) throw InvalidArgument("roots: polynomial must have degree >= 1");
    const Polynomial q = p.monic_normalized();

    PreimageSet result;
    result.total = q.degree();

    // Exact zeros at the origin are split off so z^n yields an exact n-fold root.
    int zero_mult = 0;
    while (zero_mult < q.degree() && q.coeffs()[static_cast<std::size_t>(zero_mult)] == Complex{}) ++zero_mult;
    Polynomial r = q;
    if (zero_mult > 0) {
        r = Polynomial(std::vector<Complex>(q.coeffs().begin() + zero_mult, q.coeffs().end()));
    }
    const int n = r.degree();

    std::vector<Complex> z(static_cast<std::size_t>(n));
    if (n > 0) {
        const auto& a = r.coeffs();
        const Complex center = -a[static_cast<std::size_t>(n - 1)] / static_cast<double>(n);
        const auto t = r.taylor_at(center);
        double radius = 0.0;
        for (int k = 0; k < n; ++k)
            radius = std::max(radius, std::pow(std::abs(t[static_cast<std::size_t>(k)]), 1.0 / (n - k)));
        if (radius == 0.0) radius = 1e-3 * std::max(1.0, std::abs(center));
        for (int k = 0; k < n; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / n + 0.4;
            z[static_cast<std::size_t>(k)] = center + radius * std::polar(1.0, theta);
        }

        std::vector<bool> done(static_cast<std::size_t>(n), false);
        bool converged = false;
        for (int iter = 0; iter < options.max_iterations && !converged; ++iter) {
            converged = true;
            for (int k = 0; k < n; ++k) {
                auto& zk = z[static_cast<std::size_t>(k)];
                if (done[static_cast<std::size_t>(k)]) continue;
                Complex v, d;
                r.eval_with_derivative(zk, v, d);
                if (std::abs(v) <= 4.0 * n * kEps * r.magnitude_scale(std::abs(zk))) {
                    done[static_cast<std::size_t>(k)] = true;
                    continue;
                }
                converged = false;
                if (d == Complex{}) {
                    zk += 1e-8 * std::max(1.0, std::abs(zk)) * std::polar(1.0, 0.7 + k);
                    continue;
                }
                const Complex ratio = v / d;
                Complex s{};
                for (int j = 0; j < n; ++j)
                    if (j != k) s += 1.0 / (zk - z[static_cast<std::size_t>(j)]);
                const Complex w = ratio / (1.0 - ratio * s);
                zk -= w;
                if (std::abs(w) <= 4.0 * kEps * std::abs(zk)) done[static_cast<std::size_t>(k)] = true;
            }
        }

        // Newton polish, accepted only when it lowers the residual.
        for (auto& zk : z) {
            for (int step = 0; step < 3; ++step) {
                Complex v, d;
                r.eval_with_derivative(zk, v, d);
                if (d == Complex{}) break;
                const Complex cand = zk - v / d;
                if (std::abs(r(cand)) < std::abs(v))
                    zk = cand;
                else
                    break;
            }
        }
        for (const auto& zk : z) {
            const double res = std::abs(r(zk));
            if (res > options.residual_tol * std::max(1.0, r.magnitude_scale(std::abs(zk))))
                throw NonConvergence("roots: residual " + std::to_string(res) + " above tolerance after " +
                                     std::to_string(options.max_iterations) + " iterations");
        }
    }

    std::vector<Cluster> pts;
    pts.reserve(z.size() + 1);
    for (const auto& zk : z) pts.push_back({zk, 1});
    int count = 0;
    auto label = link_labels(pts, options.cluster_radius, count);
    auto clusters = merge_groups(pts, label, count);

    // Multiple roots perturbed by rounding spread out like eps^(1/m); a wider
    // group is merged only when the Taylor test confirms a multiple root.
    int wide_count = 0;
    auto wide_label = link_labels(clusters, 1e-2, wide_count);
    if (wide_count < static_cast<int>(clusters.size())) {
        auto wide = merge_groups(clusters, wide_label, wide_count);
        std::vector<Cluster> merged;
        for (int g = 0; g < wide_count; ++g) {
            auto w = wide[static_cast<std::size_t>(g)];
            // the centroid is only good to about eps^(1/m); an m-fold root is a
            // simple root of the (m-1)-th derivative, so polish it there
            Polynomial dm = r;
            for (int k = 1; k < w.multiplicity; ++k) dm = dm.derivative();
            for (int step = 0; step < 5; ++step) {
                Complex v, d;
                dm.eval_with_derivative(w.z, v, d);
                if (d == Complex{}) break;
                const Complex cand = w.z - v / d;
                if (std::abs(dm(cand)) >= std::abs(v)) break;
                w.z = cand;
            }
            if (is_numerical_multiple_root(r, w.z, w.multiplicity)) {
                merged.push_back(w);
                continue;
            }
            for (std::size_t i = 0; i < clusters.size(); ++i)
                if (wide_label[i] == g) merged.push_back(clusters[i]);
        }
        clusters = std::move(merged);
    }

    if (zero_mult > 0) result.points.push_back({Complex{}, zero_mult});
    for (const auto& c : clusters) result.points.push_back({c.z, c.multiplicity});
    return result;
}

PreimageSet preimages(const Polynomial& p, Complex w, const RootOptions& options) {
    if (p.degree() < 1) throw InvalidArgument("preimages: polynomial must have degree >= 1");
    return roots(p - w, options);
}

double escape_radius(const Polynomial& p, double R) {
    if (p.degree() < 1) throw InvalidArgument("escape_radius: degree must be >= 1");
    if (!p.is_monic()) throw NotMonic("escape_radius: polynomial is not monic");
    double tail = 0.0;
    for (int i = 0; i < p.degree(); ++i) tail += std::abs(p.coeffs()[static_cast<std::size_t>(i)]);
    return std::max(1.0, tail + std::max(R, 1.0));
}

}  // namespace lemlab
