#pragma once

#include "spa/config.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace spa {

/// Weights mu(0..K) of the limiting indegree law.
struct AnalyticDegreeLaw {
    std::vector<double> weights;
    std::size_t truncation = 0;
    /// 1 - sum of the listed weights, i.e. mu([K+1, inf)).
    double tail_mass = 1.0;

    double operator[](std::size_t k) const { return weights.at(k); }
    /// mu([k, inf)) for k <= K + 1.
    double ccdf(std::size_t k) const;
};

/// mu(k) = 1/(1+f(k)) * prod_{l<k} f(l)/(1+f(l)), k = 0..K.
AnalyticDegreeLaw mu_weights(const AttachmentRule& f, std::size_t K);

/// Gamma-function form for affine f, evaluated in log domain.
double mu_affine_asymptotic(double gamma, double beta, std::uint64_t k);

double tau(double gamma);
double eta(double gamma, double delta);

/// mu([k, inf)) = prod_{l<k} f(l)/(1+f(l)).
double tail_mass(const AttachmentRule& f, std::uint64_t k);

/// sum_k k mu(k), exact for rules that are affine beyond their table.
double mean_indegree(const AttachmentRule& f);

inline constexpr double infinite_torus = std::numeric_limits<double>::infinity();

/// Indegree at time 1 of a vertex born at s0 on a torus of length `torus`
/// (infinite_torus for the limit), sampled by exponential clocks in
/// logarithmic time; thinning handles the finite torus.
std::uint64_t chain_sample(double s0, double torus, const AttachmentRule& f, const ProfileFunction& phi,
                           std::mt19937_64& rng);

/// e^{p/4} exp(-(k/8)(s0/s)^gamma), p = ceil(beta/gamma - 1).
double indegree_tail_bound(std::uint64_t k, double s0, double s, double gamma, double beta);

/// Constant e^{p/4 + beta/(8 gamma)} of the linking bound.
double linking_constant(double gamma, double beta);

/// c exp(-|x| s^gamma / (8 gamma phi^{-1}(u))); 0 when phi^{-1}(u) = 0.
double linking_bound(double x, double s, double u, double gamma, double beta, const ProfileFunction& phi);

/// I(a) = 2 int_0^a v phi(v) dv + a int_a^inf phi(v) dv.
double profile_I(const ProfileFunction& phi, double a);

/// lambda([K, inf)) for the limiting rescaled edge-length law.
double lambda_tail(double K, const AttachmentRule& f, const ProfileFunction& phi);

/// Upper bound on the expected number of edges between the vertex (0, u) of
/// the limit graph and vertices at distance greater than W. Needs an affine f
/// or an affine majorant (gamma', beta') of f.
double truncation_error(double W, double u, const AttachmentRule& f, const ProfileFunction& phi,
                        std::optional<std::pair<double, double>> majorant = std::nullopt);

}  // namespace spa
