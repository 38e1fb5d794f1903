#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spa {

/// Non-decreasing attachment rule f : N -> (0, inf) with asymptotic slope gamma.
class AttachmentRule {
public:
    enum class Kind { affine, tabulated };

    /// f(k) = gamma * k + beta.
    static AttachmentRule affine(double gamma, double beta);
    /// f(k) = values[k] inside the table, then last value + tail_slope * (k - last index).
    static AttachmentRule tabulated(std::vector<double> values, double tail_slope);

    Kind kind() const noexcept { return kind_; }
    double gamma() const noexcept { return gamma_; }
    /// Intercept f(0) for affine rules; the first table entry otherwise.
    double beta() const noexcept { return beta_; }
    const std::vector<double>& table() const noexcept { return table_; }

    double operator()(std::uint64_t k) const noexcept;

    /// Smallest k with f(k) >= y (right-continuous inverse); 0 when y <= f(0).
    std::uint64_t inverse(double y) const;

    /// (gamma', beta') with f(k) <= gamma' k + beta' for every k. Requires gamma' >= gamma.
    std::pair<double, double> affine_majorant(double gamma_prime) const;

private:
    Kind kind_ = Kind::affine;
    double gamma_ = 0.0;
    double beta_ = 1.0;
    std::vector<double> table_;
};

inline double attachment_eval(const AttachmentRule& f, std::uint64_t k) { return f(k); }

/// Non-increasing profile phi : [0, inf) -> [0, 1], normalized to total integral 1/2
/// by stretching the abscissa of the user-supplied shape.
class ProfileFunction {
public:
    enum class Kind { indicator, polynomial, tabulated };

    /// phi(x) = p * 1{x < 1/(2p)}.
    static ProfileFunction indicator(double p);
    /// phi(x) = min(1, (c x / scale)^-delta), c chosen so that the integral is 1/2.
    static ProfileFunction polynomial(double delta, double scale = 1.0);
    /// Right-continuous step function through (x_i, v_i); first knot at 0, last value 0.
    static ProfileFunction tabulated(std::vector<std::pair<double, double>> knots);

    Kind kind() const noexcept { return kind_; }
    double p() const noexcept { return p_; }
    double delta() const noexcept { return delta_; }
    double scale() const noexcept { return scale_; }
    const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }
    /// Abscissa stretch applied to the raw shape (1 for indicator).
    double stretch() const noexcept { return stretch_; }
    /// False when the raw shape has infinite or zero integral.
    bool normalizable() const noexcept { return normalizable_; }

    double operator()(double x) const noexcept;

    /// inf{x > 0 : phi(x) < u}.
    double inverse(double u) const noexcept;

    /// inf{x >= 0 : phi(x) <= threshold}; +inf when phi never drops to the threshold.
    double cutoff(double threshold) const noexcept;

    /// End of the initial constant piece of phi.
    double flat_end() const noexcept;

    /// Largest x with phi(x) > 0, +inf for unbounded support.
    double support_end() const noexcept;

    /// Closed-form integral of phi over [0, a].
    double integral(double a) const noexcept;

    /// Closed-form integral of phi over [a, inf).
    double tail(double a) const noexcept;

    /// Closed-form integral of v * phi(v) over [0, a].
    double first_moment(double a) const noexcept;

    /// Points where phi is not smooth (jumps or derivative jumps), ascending.
    std::vector<double> kinks() const;

private:
    Kind kind_ = Kind::indicator;
    double p_ = 1.0;
    double delta_ = 2.0;
    double scale_ = 1.0;
    std::vector<std::pair<double, double>> knots_;
    // Knots after the abscissa stretch (tabulated only).
    std::vector<double> xs_;
    std::vector<double> vs_;
    double stretch_ = 1.0;
    bool normalizable_ = true;
};

inline double profile_eval(const ProfileFunction& phi, double x) { return phi(x); }
inline double profile_inverse(const ProfileFunction& phi, double u) { return phi.inverse(u); }

/// Integral of phi over [0, inf) by adaptive quadrature (independent of the closed forms).
double profile_integral_numeric(const ProfileFunction& phi, double abs_tol = 1e-10);

struct Horizon {
    enum class Kind { time, count };
    Kind kind = Kind::count;
    double value = 0.0;

    static Horizon time(double t) { return {Kind::time, t}; }
    static Horizon count(std::uint64_t n) { return {Kind::count, static_cast<double>(n)}; }
};

struct ModelParams {
    AttachmentRule f = AttachmentRule::affine(0.5, 1.0);
    ProfileFunction phi = ProfileFunction::indicator(1.0);
    std::uint64_t seed = 1;
    Horizon horizon = Horizon::count(1000);
};

struct ValidationCheck {
    std::string name;
    bool passed = true;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    double profile_integral = std::numeric_limits<double>::quiet_NaN();

    bool ok() const noexcept;
    /// Messages of the failed checks, joined by "; ".
    std::string summary() const;
};

ValidationReport validate(const ModelParams& params);
ValidationReport validate(const AttachmentRule& f, const ProfileFunction& phi);

/// Thrown by validated entry points when the report has failures.
class InvalidModel : public std::invalid_argument {
public:
    explicit InvalidModel(const ValidationReport& report);
};

void require_valid(const ModelParams& params);

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, int line, const std::string& what);
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

/// Flat "key = value" configuration; '#' starts a comment.
ModelParams parse_config(std::istream& in);
ModelParams load_config(const std::string& path);
/// Inverse of parse_config (keys in a fixed order).
std::string format_config(const ModelParams& params);

}  // namespace spa
