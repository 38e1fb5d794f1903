#include "spa/analytics.hpp"

#include "spa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace spa {

double AnalyticDegreeLaw::ccdf(std::size_t k) const {
    if (k > weights.size()) throw std::out_of_range("ccdf beyond truncation");
    double tail = tail_mass;
    for (std::size_t j = weights.size(); j > k; --j) tail += weights[j - 1];
    return tail;
}

AnalyticDegreeLaw mu_weights(const AttachmentRule& f, std::size_t K) {
    AnalyticDegreeLaw law;
    law.truncation = K;
    law.weights.reserve(K + 1);
    double survive = 1.0;  // mu([k, inf))
    for (std::size_t k = 0; k <= K; ++k) {
        const double fk = f(k);
        law.weights.push_back(survive / (1.0 + fk));
        survive *= fk / (1.0 + fk);
    }
    law.tail_mass = survive;
    return law;
}

double mu_affine_asymptotic(double gamma, double beta, std::uint64_t k) {
    if (!(gamma > 0.0 && gamma < 1.0) || !(beta > 0.0))
        throw std::invalid_argument("requires gamma in (0, 1) and beta > 0");
    if (k == 0) return 1.0 / (1.0 + beta);
    const double kk = static_cast<double>(k);
    const double b = beta / gamma;
    const double a = (beta + 1.0) / gamma;
    const double c = (beta + gamma + 1.0) / gamma;
    const double log_value = -std::log(gamma) + std::lgamma(kk + b) + std::lgamma(a) - std::lgamma(kk + c) - std::lgamma(b);
    return std::exp(log_value);
}

double tau(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("tau requires gamma in (0, 1)");
    return 1.0 + 1.0 / gamma;
}

double eta(double gamma, double delta) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("eta requires gamma in (0, 1)");
    if (!(delta > 1.0)) throw std::invalid_argument("eta requires delta > 1");
    return std::min({1.0, 1.0 / gamma - 1.0, delta - 1.0});
}

double tail_mass(const AttachmentRule& f, std::uint64_t k) {
    double survive = 1.0;
    for (std::uint64_t l = 0; l < k && survive > 0.0; ++l) {
        const double fl = f(l);
        survive *= fl / (1.0 + fl);
    }
    return survive;
}

double mean_indegree(const AttachmentRule& f) {
    const double gamma = f.gamma();
    if (!(gamma < 1.0)) return std::numeric_limits<double>::infinity();
    // m = E f(Z); beyond index m0 the rule is gamma k + b, which closes the sum.
    const std::size_t m0 = f.kind() == AttachmentRule::Kind::affine ? 0 : f.table().size() - 1;
    const double b = f(m0) - gamma * static_cast<double>(m0);
    double head = 0.0;
    double survive = 1.0;
    for (std::size_t k = 0; k < m0; ++k) {
        const double fk = f(k);
        const double mu = survive / (1.0 + fk);
        head += (fk - gamma * static_cast<double>(k)) * mu;
        survive *= fk / (1.0 + fk);
    }
    return (head + b * survive) / (1.0 - gamma);
}

std::uint64_t chain_sample(double s0, double torus, const AttachmentRule& f, const ProfileFunction& phi,
                           std::mt19937_64& rng) {
    if (!(s0 > 0.0 && s0 <= 1.0)) throw std::invalid_argument("chain_sample requires 0 < s0 <= 1");
    const double horizon = -std::log(s0);
    std::exponential_distribution<double> clock(1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const bool finite = std::isfinite(torus);
    std::uint64_t k = 0;
    double u = 0.0;
    while (true) {
        const double fk = f(k);
        u += clock(rng) / fk;
        if (u >= horizon) return k;
        if (finite) {
            // Rate on a torus of length t: f(k) * 2 int_0^{s t / (2 f(k))} phi.
            const double s = s0 * std::exp(u);
            if (coin(rng) >= 2.0 * phi.integral(s * torus / (2.0 * fk))) continue;
        }
        ++k;
    }
}

namespace {

int bound_p(double gamma, double beta) {
    if (!(gamma > 0.0)) throw std::invalid_argument("bound requires gamma > 0; use an affine majorant");
    if (!(beta > 0.0)) throw std::invalid_argument("bound requires beta > 0");
    return std::max(0, static_cast<int>(std::ceil(beta / gamma - 1.0)));
}

}  // namespace

double indegree_tail_bound(std::uint64_t k, double s0, double s, double gamma, double beta) {
    const int p = bound_p(gamma, beta);
    if (!(s0 > 0.0 && s0 < s && s <= 1.0)) throw std::invalid_argument("requires 0 < s0 < s <= 1");
    return std::exp(p / 4.0 - static_cast<double>(k) / 8.0 * std::pow(s0 / s, gamma));
}

double linking_constant(double gamma, double beta) {
    const int p = bound_p(gamma, beta);
    return std::exp(p / 4.0 + beta / (8.0 * gamma));
}

double linking_bound(double x, double s, double u, double gamma, double beta, const ProfileFunction& phi) {
    const double c = linking_constant(gamma, beta);
    const double reach = phi.inverse(u);
    if (!(reach > 0.0)) return 0.0;
    return c * std::exp(-std::abs(x) * std::pow(s, gamma) / (8.0 * gamma * reach));
}

double profile_I(const ProfileFunction& phi, double a) {
    if (a <= 0.0) return 0.0;
    return 2.0 * phi.first_moment(a) + a * phi.tail(a);
}

double lambda_tail(double K, const AttachmentRule& f, const ProfileFunction& phi) {
    if (!(K > 0.0)) throw std::invalid_argument("lambda_tail requires K > 0");
    const double m = mean_indegree(f);
    const double flat = phi.flat_end();
    const double ystar = K / flat;

    // F(y) = int_0^y v I(K/v) dv, piecewise with breakpoints at K / kink.
    std::vector<double> breaks;
    for (double x : phi.kinks())
        if (x > 0.0) breaks.push_back(K / x);
    std::sort(breaks.begin(), breaks.end());
    auto integrand = [&](double v) { return v > 0.0 ? v * profile_I(phi, K / v) : 0.0; };
    auto segment = [&](double a, double b) {
        double total = 0.0;
        double lo = a;
        for (double x : breaks) {
            if (x <= lo) continue;
            if (x >= b) break;
            total += integrate_simpson(integrand, lo, x, 1e-14 * K * (x - lo + 1.0));
            lo = x;
        }
        return total + integrate_simpson(integrand, lo, b, 1e-14 * K * (b - lo + 1.0));
    };

    double F = 0.0;        // F(f(k-1))
    double prev = 0.0;     // f(k-1)
    double survive = 1.0;  // mu([k, inf))
    double head = 0.0;     // sum_{k<k*} mu(k) F(f(k))
    double mass_f = 0.0;   // sum_{k<k*} mu(k) f(k)
    for (std::uint64_t k = 0;; ++k) {
        const double fk = f(k);
        if (fk >= ystar) break;
        if (survive < 1e-18) {
            survive = 0.0;
            break;
        }
        F += segment(prev, fk);
        prev = fk;
        const double mu = survive / (1.0 + fk);
        head += mu * F;
        mass_f += mu * fk;
        survive *= fk / (1.0 + fk);
    }
    const double Fstar = F + (prev < ystar ? segment(prev, ystar) : 0.0);
    const double total = head + survive * (Fstar - 0.5 * K * ystar) + 0.5 * K * (m - mass_f);
    return std::clamp(2.0 * total / (K * m), 0.0, 1.0);
}

namespace {

// int_{|x| > W} min(1, c e^{-A |x|}) dx.
double beyond(double W, double A, double c) {
    if (!(A > 0.0)) return std::numeric_limits<double>::infinity();
    const double x0 = std::log(c) / A;
    if (x0 <= W) return 2.0 * c * std::exp(-A * W) / A;
    return 2.0 * ((x0 - W) + 1.0 / A);
}

// Adaptive Simpson with a tolerance relative to a coarse first pass.
double integrate_relative(const std::function<double(double)>& fn, double a, double b, double rel, int depth) {
    const double coarse = integrate_simpson(fn, a, b, std::numeric_limits<double>::max(), 0);
    if (coarse == 0.0) return 0.0;
    return integrate_simpson(fn, a, b, rel * std::abs(coarse), depth);
}

}  // namespace

double truncation_error(double W, double u, const AttachmentRule& f, const ProfileFunction& phi,
                        std::optional<std::pair<double, double>> majorant) {
    if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("palm time must lie in (0, 1]");
    if (!(W >= 0.0)) throw std::invalid_argument("window half-width must be non-negative");
    double gamma = f.gamma();
    double beta = f.beta();
    if (majorant) {
        std::tie(gamma, beta) = *majorant;
        for (std::uint64_t k = 0; k < std::max<std::size_t>(f.table().size(), 1) + 64; ++k)
            if (f(k) > gamma * static_cast<double>(k) + beta * (1.0 + 1e-12))
                throw std::invalid_argument("supplied (gamma', beta') does not dominate f");
        if (gamma < f.gamma()) throw std::invalid_argument("majorant slope below the slope of f");
    } else if (f.kind() != AttachmentRule::Kind::affine) {
        throw std::invalid_argument("truncation_error needs an affine f or an affine majorant (gamma', beta')");
    }
    const double c = linking_constant(gamma, beta);
    const double q = gamma / (1.0 - gamma);

    // Expected far edges for a fixed link value v, integrated over the partner's birth time.
    auto for_value = [&](double v) {
        const double reach = phi.inverse(v);
        if (!(reach > 0.0)) return 0.0;
        const double scale = 1.0 / (8.0 * gamma * reach);
        // Older partner born at s = u w^{1/(1-gamma)} < u.
        auto older = [&](double w) {
            if (!(w > 0.0)) return 0.0;
            const double wq = std::pow(w, q);
            return beyond(W, u * wq * scale, c) * u / (1.0 - gamma) * wq;
        };
        // Younger partner born at r in (u, 1).
        auto younger = [&](double r) { return beyond(W, std::pow(r, 1.0 - gamma) * std::pow(u, gamma) * scale, c); };
        // Up to w* (where log(c)/A = W) every older partner sits on the plateau of
        // min(1, c e^{-A|x|}) and the integral is closed-form; past w* the integrand
        // decays on the scale of w*, so it is integrated over doubling pieces.
        const double wstar = W > 0.0 ? std::pow(std::log(c) / (W * u * scale), 1.0 / q) : 1.0;
        double b = std::min(1.0, wstar);
        double total = 2.0 * u / (1.0 - gamma) *
                       ((std::log(c) + 1.0) * b / (u * scale) - W * std::pow(b, q + 1.0) / (q + 1.0));
        while (b < 1.0) {
            const double next = std::min(1.0, 2.0 * b);
            total += integrate_relative(older, b, next, 1e-10, 24);
            b = next;
        }
        if (u < 1.0) total += integrate_relative(younger, u, 1.0, 1e-10, 24);
        return total;
    };

    switch (phi.kind()) {
        case ProfileFunction::Kind::indicator:
            return phi.p() * for_value(phi.p());
        case ProfileFunction::Kind::tabulated: {
            // phi^{-1} is constant between consecutive distinct knot values.
            std::vector<double> levels;
            for (const auto& [x, value] : phi.knots())
                if (value > 0.0) levels.push_back(value);
            std::sort(levels.begin(), levels.end());
            levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
            double total = 0.0;
            double lo = 0.0;
            for (double level : levels) {
                total += (level - lo) * for_value(0.5 * (lo + level));
                lo = level;
            }
            return total;
        }
        case ProfileFunction::Kind::polynomial: {
            // v = w^r removes the v^{-1/delta} growth of phi^{-1} at 0.
            const double r = std::max(1.0, phi.delta() / (phi.delta() - 1.0));
            auto integrand = [&](double w) {
                if (!(w > 0.0)) return 0.0;
                return for_value(std::pow(w, r)) * r * std::pow(w, r - 1.0);
            };
            // Below w_sat the older plateau covers all of (0, 1) and the integrand is flat;
            // above it the integrand falls off on the scale of w_sat.
            const double reach_sat = W * u / (8.0 * gamma * std::log(c));
            const double w_sat = std::min(1.0, std::pow(phi(reach_sat), 1.0 / r));
            // Inner quadratures carry relative noise, so the outer tolerance is relative
            // too and its depth capped.
            double b = w_sat;
            double total = integrate_relative(integrand, 0.0, b, 1e-7, 12);
            while (b < 1.0) {
                const double next = std::min(1.0, 2.0 * b);
                total += integrate_relative(integrand, b, next, 1e-7, 12);
                b = next;
            }
            return total;
        }
    }
    return 0.0;
}

}  // namespace spa
