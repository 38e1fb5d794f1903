#include "spa/config.hpp"

#include "spa/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>

namespace spa {

// ---------------------------------------------------------------------------
// AttachmentRule
// ---------------------------------------------------------------------------

AttachmentRule AttachmentRule::affine(double gamma, double beta) {
    AttachmentRule f;
    f.kind_ = Kind::affine;
    f.gamma_ = gamma;
    f.beta_ = beta;
    return f;
}

AttachmentRule AttachmentRule::tabulated(std::vector<double> values, double tail_slope) {
    AttachmentRule f;
    f.kind_ = Kind::tabulated;
    f.gamma_ = tail_slope;
    f.beta_ = values.empty() ? 0.0 : values.front();
    f.table_ = std::move(values);
    return f;
}

double AttachmentRule::operator()(std::uint64_t k) const noexcept {
    if (kind_ == Kind::affine) return gamma_ * static_cast<double>(k) + beta_;
    if (table_.empty()) return 0.0;
    const std::size_t last = table_.size() - 1;
    if (k <= last) return table_[k];
    return table_[last] + gamma_ * static_cast<double>(k - last);
}

std::uint64_t AttachmentRule::inverse(double y) const {
    constexpr auto never = std::numeric_limits<std::uint64_t>::max();
    if (y <= (*this)(0)) return 0;
    std::uint64_t start = 0;
    double base = beta_;
    if (kind_ == Kind::tabulated) {
        for (std::size_t k = 0; k < table_.size(); ++k)
            if (table_[k] >= y) return k;
        start = table_.size() - 1;
        base = table_.back();
    }
    if (!(gamma_ > 0.0)) return never;
    const double steps = std::ceil((y - base) / gamma_);
    if (!(steps < 9.0e18)) return never;
    auto k = start + static_cast<std::uint64_t>(std::max(0.0, steps));
    // Repair rounding in either direction.
    while (k > start && (*this)(k - 1) >= y) --k;
    while ((*this)(k) < y) ++k;
    return k;
}

std::pair<double, double> AttachmentRule::affine_majorant(double gamma_prime) const {
    if (gamma_prime < gamma_) throw std::invalid_argument("majorant slope must be at least the asymptotic slope");
    if (kind_ == Kind::affine) return {gamma_prime, beta_};
    double beta_prime = 0.0;
    for (std::size_t k = 0; k < table_.size(); ++k)
        beta_prime = std::max(beta_prime, table_[k] - gamma_prime * static_cast<double>(k));
    // Beyond the table f(k) - gamma' k is non-increasing because gamma' >= gamma.
    return {gamma_prime, beta_prime};
}

// ---------------------------------------------------------------------------
// ProfileFunction
// ---------------------------------------------------------------------------

ProfileFunction ProfileFunction::indicator(double p) {
    ProfileFunction phi;
    phi.kind_ = Kind::indicator;
    phi.p_ = p;
    phi.normalizable_ = p > 0.0 && p <= 1.0;
    return phi;
}

ProfileFunction ProfileFunction::polynomial(double delta, double scale) {
    ProfileFunction phi;
    phi.kind_ = Kind::polynomial;
    phi.delta_ = delta;
    phi.scale_ = scale;
    phi.normalizable_ = delta > 1.0 && scale > 0.0 && std::isfinite(delta);
    // Raw shape integrates to scale * delta / (delta - 1).
    phi.stretch_ = phi.normalizable_ ? 2.0 * scale * delta / (delta - 1.0) : 1.0;
    return phi;
}

ProfileFunction ProfileFunction::tabulated(std::vector<std::pair<double, double>> knots) {
    ProfileFunction phi;
    phi.kind_ = Kind::tabulated;
    phi.knots_ = std::move(knots);
    double raw = 0.0;
    bool finite = !phi.knots_.empty() && phi.knots_.back().second == 0.0;
    for (std::size_t i = 0; i + 1 < phi.knots_.size(); ++i)
        raw += phi.knots_[i].second * (phi.knots_[i + 1].first - phi.knots_[i].first);
    phi.normalizable_ = finite && raw > 0.0 && std::isfinite(raw);
    phi.stretch_ = phi.normalizable_ ? 2.0 * raw : 1.0;
    for (const auto& [x, v] : phi.knots_) {
        phi.xs_.push_back(x / phi.stretch_);
        phi.vs_.push_back(v);
    }
    return phi;
}

namespace {

// Plateau end of the normalized polynomial profile.
double poly_sigma(double scale, double stretch) { return scale / stretch; }

}  // namespace

double ProfileFunction::operator()(double x) const noexcept {
    switch (kind_) {
        case Kind::indicator:
            return x < 0.5 / p_ ? p_ : 0.0;
        case Kind::polynomial: {
            const double sigma = poly_sigma(scale_, stretch_);
            if (x <= sigma) return 1.0;
            return std::pow(x / sigma, -delta_);
        }
        case Kind::tabulated: {
            if (xs_.empty()) return 0.0;
            auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            if (it == xs_.begin()) return vs_.front();
            const auto i = static_cast<std::size_t>(it - xs_.begin()) - 1;
            if (i + 1 == xs_.size()) return 0.0;
            return vs_[i];
        }
    }
    return 0.0;
}

double ProfileFunction::inverse(double u) const noexcept {
    switch (kind_) {
        case Kind::indicator:
            return u <= p_ ? 0.5 / p_ : 0.0;
        case Kind::polynomial: {
            const double sigma = poly_sigma(scale_, stretch_);
            if (u > 1.0) return 0.0;
            return sigma * std::pow(u, -1.0 / delta_);
        }
        case Kind::tabulated: {
            for (std::size_t i = 0; i < vs_.size(); ++i) {
                const double v = (i + 1 == vs_.size()) ? 0.0 : vs_[i];
                if (v < u) return xs_[i];
            }
            return xs_.empty() ? 0.0 : xs_.back();
        }
    }
    return 0.0;
}

double ProfileFunction::cutoff(double threshold) const noexcept {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (kind_) {
        case Kind::indicator:
            return threshold >= p_ ? 0.0 : 0.5 / p_;
        case Kind::polynomial: {
            if (threshold >= 1.0) return 0.0;
            if (!(threshold > 0.0)) return inf;
            return poly_sigma(scale_, stretch_) * std::pow(threshold, -1.0 / delta_);
        }
        case Kind::tabulated: {
            for (std::size_t i = 0; i < vs_.size(); ++i) {
                const double v = (i + 1 == vs_.size()) ? 0.0 : vs_[i];
                if (v <= threshold) return xs_[i];
            }
            return xs_.empty() ? 0.0 : xs_.back();
        }
    }
    return inf;
}

double ProfileFunction::flat_end() const noexcept {
    switch (kind_) {
        case Kind::indicator:
            return 0.5 / p_;
        case Kind::polynomial:
            return poly_sigma(scale_, stretch_);
        case Kind::tabulated:
            return xs_.size() >= 2 ? xs_[1] : 0.0;
    }
    return 0.0;
}

double ProfileFunction::support_end() const noexcept {
    if (kind_ == Kind::polynomial) return std::numeric_limits<double>::infinity();
    return cutoff(0.0);
}

double ProfileFunction::integral(double a) const noexcept {
    if (a <= 0.0) return 0.0;
    switch (kind_) {
        case Kind::indicator:
            return p_ * std::min(a, 0.5 / p_);
        case Kind::polynomial: {
            const double sigma = poly_sigma(scale_, stretch_);
            if (a <= sigma) return a;
            return sigma + sigma * (1.0 - std::pow(a / sigma, 1.0 - delta_)) / (delta_ - 1.0);
        }
        case Kind::tabulated: {
            double total = 0.0;
            for (std::size_t i = 0; i + 1 < xs_.size() && xs_[i] < a; ++i)
                total += vs_[i] * (std::min(a, xs_[i + 1]) - xs_[i]);
            return total;
        }
    }
    return 0.0;
}

double ProfileFunction::tail(double a) const noexcept {
    a = std::max(a, 0.0);
    switch (kind_) {
        case Kind::indicator:
            return p_ * std::max(0.0, 0.5 / p_ - a);
        case Kind::polynomial: {
            const double sigma = poly_sigma(scale_, stretch_);
            if (a <= sigma) return sigma - a + sigma / (delta_ - 1.0);
            return sigma * std::pow(a / sigma, 1.0 - delta_) / (delta_ - 1.0);
        }
        case Kind::tabulated: {
            double total = 0.0;
            for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
                if (xs_[i + 1] > a) total += vs_[i] * (xs_[i + 1] - std::max(a, xs_[i]));
            return total;
        }
    }
    return 0.0;
}

double ProfileFunction::first_moment(double a) const noexcept {
    if (a <= 0.0) return 0.0;
    switch (kind_) {
        case Kind::indicator: {
            const double b = std::min(a, 0.5 / p_);
            return 0.5 * p_ * b * b;
        }
        case Kind::polynomial: {
            const double sigma = poly_sigma(scale_, stretch_);
            if (a <= sigma) return 0.5 * a * a;
            const double s2 = sigma * sigma;
            if (std::abs(delta_ - 2.0) < 1e-12) return 0.5 * s2 + s2 * std::log(a / sigma);
            return 0.5 * s2 + s2 * (std::pow(a / sigma, 2.0 - delta_) - 1.0) / (2.0 - delta_);
        }
        case Kind::tabulated: {
            double total = 0.0;
            for (std::size_t i = 0; i + 1 < xs_.size() && xs_[i] < a; ++i) {
                const double hi = std::min(a, xs_[i + 1]);
                total += 0.5 * vs_[i] * (hi * hi - xs_[i] * xs_[i]);
            }
            return total;
        }
    }
    return 0.0;
}

std::vector<double> ProfileFunction::kinks() const {
    switch (kind_) {
        case Kind::indicator:
            return {0.5 / p_};
        case Kind::polynomial:
            return {poly_sigma(scale_, stretch_)};
        case Kind::tabulated:
            return xs_.size() > 1 ? std::vector<double>(xs_.begin() + 1, xs_.end()) : std::vector<double>{};
    }
    return {};
}

double profile_integral_numeric(const ProfileFunction& phi, double abs_tol) {
    if (!phi.normalizable()) return std::numeric_limits<double>::infinity();
    auto fn = [&phi](double x) { return phi(x); };
    switch (phi.kind()) {
        case ProfileFunction::Kind::indicator: {
            const double b = 0.5 / phi.p();
            // Integrand is constant on [0, b).
            auto inside = [&phi, b](double x) { return phi(std::min(x, std::nextafter(b, 0.0))); };
            return integrate_simpson(inside, 0.0, b, abs_tol);
        }
        case ProfileFunction::Kind::polynomial: {
            const double sigma = phi.flat_end();
            const double head = integrate_simpson(fn, 0.0, sigma, 0.5 * abs_tol);
            // Tail in logarithmic coordinates; stop once the neglected mass is < 1e-14 sigma.
            const double span = std::log(1e14) / (phi.delta() - 1.0);
            const double lo = std::log(sigma);
            auto logged = [&phi](double v) {
                const double x = std::exp(v);
                return phi(x) * x;
            };
            const double tail = integrate_simpson(logged, lo, lo + span, 0.5 * abs_tol, 60);
            return head + tail;
        }
        case ProfileFunction::Kind::tabulated: {
            double total = 0.0;
            const auto& knots = phi.knots();
            for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
                const double a = knots[i].first / phi.stretch();
                const double b = knots[i + 1].first / phi.stretch();
                const double inner = std::nextafter(b, a);
                auto piece = [&phi, inner](double x) { return phi(std::min(x, inner)); };
                total += integrate_simpson(piece, a, b, abs_tol / static_cast<double>(knots.size()));
            }
            return total;
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

bool ValidationReport::ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& c : checks) {
        if (c.passed) continue;
        if (!out.empty()) out += "; ";
        out += c.name + ": " + c.message;
    }
    return out;
}

namespace {

void add_check(ValidationReport& report, std::string name, bool passed, std::string message) {
    report.checks.push_back({std::move(name), passed, passed ? std::string{} : std::move(message)});
}

void validate_attachment(const AttachmentRule& f, ValidationReport& report) {
    const double gamma = f.gamma();
    add_check(report, "attachment.finite", std::isfinite(gamma) && std::isfinite(f(0)),
              "attachment parameters must be finite");
    add_check(report, "attachment.positive", f(0) > 0.0, "f(0) must be strictly positive");

    bool monotone = gamma >= 0.0;
    if (f.kind() == AttachmentRule::Kind::tabulated) {
        const auto& t = f.table();
        if (t.empty()) monotone = false;
        for (std::size_t k = 1; k < t.size(); ++k)
            if (!(t[k] >= t[k - 1])) monotone = false;
    }
    add_check(report, "attachment.monotone", monotone, "f must be non-decreasing");
    add_check(report, "attachment.slope", gamma >= 0.0 && gamma < 1.0,
              gamma >= 1.0 ? "slope must be < 1" : "slope must be >= 0");
}

void validate_profile(const ProfileFunction& phi, ValidationReport& report) {
    switch (phi.kind()) {
        case ProfileFunction::Kind::indicator:
            add_check(report, "profile.range", phi.p() > 0.0 && phi.p() <= 1.0, "indicator height p must lie in (0, 1]");
            break;
        case ProfileFunction::Kind::polynomial:
            add_check(report, "profile.range", phi.scale() > 0.0, "polynomial scale must be positive");
            add_check(report, "profile.integrable", phi.delta() > 1.0,
                      "integral diverges: polynomial decay exponent delta must exceed 1");
            break;
        case ProfileFunction::Kind::tabulated: {
            const auto& k = phi.knots();
            bool shape = k.size() >= 2 && k.front().first == 0.0;
            bool range = true;
            bool monotone = true;
            for (std::size_t i = 0; i < k.size(); ++i) {
                if (!(k[i].second >= 0.0 && k[i].second <= 1.0)) range = false;
                if (i > 0 && !(k[i].first > k[i - 1].first)) shape = false;
                if (i > 0 && !(k[i].second <= k[i - 1].second)) monotone = false;
            }
            add_check(report, "profile.knots", shape, "knots must start at x = 0 with strictly increasing abscissae");
            add_check(report, "profile.range", range, "profile values must lie in [0, 1]");
            add_check(report, "profile.monotone", monotone, "profile must be non-increasing");
            add_check(report, "profile.integrable", !k.empty() && k.back().second == 0.0,
                      "integral diverges: last knot value must be 0");
            break;
        }
    }
    if (phi.normalizable()) {
        const double integral = profile_integral_numeric(phi);
        report.profile_integral = integral;
        add_check(report, "profile.normalized", std::abs(integral - 0.5) <= 0.5e-9,
                  "profile integral " + std::to_string(integral) + " differs from 1/2");
    } else {
        add_check(report, "profile.normalized", false, "integral diverges or vanishes; cannot normalize");
    }
}

}  // namespace

ValidationReport validate(const AttachmentRule& f, const ProfileFunction& phi) {
    ValidationReport report;
    validate_attachment(f, report);
    validate_profile(phi, report);
    return report;
}

ValidationReport validate(const ModelParams& params) {
    ValidationReport report = validate(params.f, params.phi);
    add_check(report, "horizon.positive", params.horizon.value > 0.0 && std::isfinite(params.horizon.value),
              "horizon must be positive");
    return report;
}

InvalidModel::InvalidModel(const ValidationReport& report)
    : std::invalid_argument("invalid model: " + report.summary()) {}

void require_valid(const ModelParams& params) {
    const auto report = validate(params.f, params.phi);
    if (!report.ok()) throw InvalidModel(report);
}

// ---------------------------------------------------------------------------
// Configuration files
// ---------------------------------------------------------------------------

ConfigError::ConfigError(std::string key, int line, const std::string& what)
    : std::runtime_error("config error at line " + std::to_string(line) + " (key '" + key + "'): " + what),
      key_(std::move(key)),
      line_(line) {}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& value, int line) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) throw ConfigError(key, line, "expected a real number, got '" + value + "'");
    return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value, int line) {
    std::uint64_t out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(key, line, "expected an unsigned integer, got '" + value + "'");
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

struct Entry {
    std::string value;
    int line = 0;
};

}  // namespace

ModelParams parse_config(std::istream& in) {
    static const char* known[] = {"attachment.kind", "attachment.gamma", "attachment.beta", "attachment.values",
                                  "profile.kind",    "profile.p",        "profile.delta",   "profile.scale",
                                  "profile.knots",   "seed",             "horizon.kind",    "horizon.value"};
    std::map<std::string, Entry> entries;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line, line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw ConfigError(key, line_no, "unknown key");
        if (value.empty()) throw ConfigError(key, line_no, "missing value");
        if (entries.count(key)) throw ConfigError(key, line_no, "duplicate key");
        entries[key] = {value, line_no};
    }

    auto real_or = [&](const std::string& key, double fallback) {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : parse_real(key, it->second.value, it->second.line);
    };
    auto text_or = [&](const std::string& key, const std::string& fallback) {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : it->second.value;
    };
    auto line_of = [&](const std::string& key) {
        auto it = entries.find(key);
        return it == entries.end() ? 0 : it->second.line;
    };

    ModelParams params;
    const std::string akind = text_or("attachment.kind", "affine");
    if (akind == "affine") {
        params.f = AttachmentRule::affine(real_or("attachment.gamma", 0.5), real_or("attachment.beta", 1.0));
    } else if (akind == "tabulated") {
        auto it = entries.find("attachment.values");
        if (it == entries.end()) throw ConfigError("attachment.values", line_of("attachment.kind"), "required for tabulated attachment");
        std::vector<double> values;
        for (const auto& v : split(it->second.value, ',')) values.push_back(parse_real("attachment.values", v, it->second.line));
        params.f = AttachmentRule::tabulated(std::move(values), real_or("attachment.gamma", 0.0));
    } else {
        throw ConfigError("attachment.kind", line_of("attachment.kind"), "expected affine or tabulated, got '" + akind + "'");
    }

    const std::string pkind = text_or("profile.kind", "indicator");
    if (pkind == "indicator") {
        params.phi = ProfileFunction::indicator(real_or("profile.p", 1.0));
    } else if (pkind == "polynomial") {
        if (!entries.count("profile.delta")) throw ConfigError("profile.delta", line_of("profile.kind"), "required for polynomial profile");
        params.phi = ProfileFunction::polynomial(real_or("profile.delta", 2.0), real_or("profile.scale", 1.0));
    } else if (pkind == "tabulated") {
        auto it = entries.find("profile.knots");
        if (it == entries.end()) throw ConfigError("profile.knots", line_of("profile.kind"), "required for tabulated profile");
        std::vector<std::pair<double, double>> knots;
        for (const auto& item : split(it->second.value, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw ConfigError("profile.knots", it->second.line, "knot '" + item + "' must be x:value");
            knots.emplace_back(parse_real("profile.knots", trim(item.substr(0, colon)), it->second.line),
                               parse_real("profile.knots", trim(item.substr(colon + 1)), it->second.line));
        }
        params.phi = ProfileFunction::tabulated(std::move(knots));
    } else {
        throw ConfigError("profile.kind", line_of("profile.kind"), "expected indicator, polynomial or tabulated, got '" + pkind + "'");
    }

    if (auto it = entries.find("seed"); it != entries.end())
        params.seed = parse_unsigned("seed", it->second.value, it->second.line);

    const std::string hkind = text_or("horizon.kind", "count");
    const double hvalue = real_or("horizon.value", 1000.0);
    if (hkind == "count") {
        if (hvalue < 0.0 || hvalue != std::floor(hvalue))
            throw ConfigError("horizon.value", line_of("horizon.value"), "vertex count must be a non-negative integer");
        params.horizon = Horizon::count(static_cast<std::uint64_t>(hvalue));
    } else if (hkind == "time") {
        if (hvalue < 0.0) throw ConfigError("horizon.value", line_of("horizon.value"), "time horizon must be non-negative");
        params.horizon = Horizon::time(hvalue);
    } else {
        throw ConfigError("horizon.kind", line_of("horizon.kind"), "expected time or count, got '" + hkind + "'");
    }
    return params;
}

ModelParams load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", 0, "cannot open '" + path + "'");
    return parse_config(in);
}

std::string format_config(const ModelParams& params) {
    std::ostringstream out;
    out << std::setprecision(17);
    if (params.f.kind() == AttachmentRule::Kind::affine) {
        out << "attachment.kind = affine\n";
        out << "attachment.gamma = " << params.f.gamma() << "\n";
        out << "attachment.beta = " << params.f.beta() << "\n";
    } else {
        out << "attachment.kind = tabulated\n";
        out << "attachment.gamma = " << params.f.gamma() << "\n";
        out << "attachment.values = ";
        for (std::size_t i = 0; i < params.f.table().size(); ++i) out << (i ? ", " : "") << params.f.table()[i];
        out << "\n";
    }
    switch (params.phi.kind()) {
        case ProfileFunction::Kind::indicator:
            out << "profile.kind = indicator\nprofile.p = " << params.phi.p() << "\n";
            break;
        case ProfileFunction::Kind::polynomial:
            out << "profile.kind = polynomial\nprofile.delta = " << params.phi.delta()
                << "\nprofile.scale = " << params.phi.scale() << "\n";
            break;
        case ProfileFunction::Kind::tabulated:
            out << "profile.kind = tabulated\nprofile.knots = ";
            for (std::size_t i = 0; i < params.phi.knots().size(); ++i)
                out << (i ? ", " : "") << params.phi.knots()[i].first << ":" << params.phi.knots()[i].second;
            out << "\n";
            break;
    }
    out << "seed = " << params.seed << "\n";
    out << "horizon.kind = " << (params.horizon.kind == Horizon::Kind::count ? "count" : "time") << "\n";
    out << "horizon.value = " << params.horizon.value << "\n";
    return out.str();
}

}  // namespace spa
