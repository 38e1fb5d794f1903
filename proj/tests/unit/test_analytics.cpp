#include "spa/analytics.hpp"
#include "spa/local_limit.hpp"
#include "spa/quadrature.hpp"
#include "spa/statistics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace spa;

TEST_CASE("mu weights for f = k/2 + 1") {
    const auto mu = mu_weights(AttachmentRule::affine(0.5, 1.0), 10);
    CHECK(mu[0] == doctest::Approx(0.5));
    CHECK(mu[1] == doctest::Approx(0.2));
    CHECK(mu[2] == doctest::Approx(0.1));
    CHECK(mu.truncation == 10);
    double sum = 0.0;
    for (double w : mu.weights) sum += w;
    CHECK(sum + mu.tail_mass == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mu.ccdf(0) == doctest::Approx(1.0));
    CHECK(mu.ccdf(11) == doctest::Approx(mu.tail_mass));
    CHECK(mu.ccdf(3) == doctest::Approx(tail_mass(AttachmentRule::affine(0.5, 1.0), 3)));
}

TEST_CASE("mu against its gamma-function form") {
    const auto mu = mu_weights(AttachmentRule::affine(0.5, 1.0), 1000);
    CHECK(mu_affine_asymptotic(0.5, 1.0, 0) == doctest::Approx(mu[0]).epsilon(1e-14));
    for (std::uint64_t k : {1, 7, 50, 1000}) {
        const double ratio = mu[k] / mu_affine_asymptotic(0.5, 1.0, k);
        CHECK(ratio >= 0.99);
        CHECK(ratio <= 1.01);
    }
    // Point mass slope -tau = -3.
    const double slope = std::log(mu[1000] / mu[500]) / std::log(2.0);
    CHECK(slope == doctest::Approx(-3.0).epsilon(0.05 / 3.0));
}

TEST_CASE("tau and eta") {
    CHECK(tau(0.5) == 3.0);
    CHECK(eta(0.25, 3.0) == 1.0);
    CHECK(eta(0.8, 5.0) == doctest::Approx(0.25));
    CHECK(eta(0.5, 1.5) == doctest::Approx(0.5));
    CHECK_THROWS(tau(1.0));
    CHECK_THROWS(eta(0.5, 1.0));
}

TEST_CASE("mean indegree closed form") {
    CHECK(mean_indegree(AttachmentRule::affine(0.5, 1.0)) == doctest::Approx(2.0));
    CHECK(mean_indegree(AttachmentRule::affine(0.0, 3.0)) == doctest::Approx(3.0));
    const auto f = AttachmentRule::tabulated({1, 1, 2}, 0.3);
    const auto mu = mu_weights(f, 100000);
    double mean = 0.0;
    for (std::size_t k = 0; k < mu.weights.size(); ++k) mean += static_cast<double>(k) * mu[k];
    CHECK(mean_indegree(f) == doctest::Approx(mean).epsilon(1e-6));
}

TEST_CASE("chain_sample") {
    std::mt19937_64 rng(3);
    const auto f = AttachmentRule::affine(0.5, 1.0);
    const auto phi = ProfileFunction::indicator(1.0);
    for (int i = 0; i < 100; ++i) CHECK(chain_sample(1.0, infinite_torus, f, phi, rng) == 0);
    CHECK_THROWS(chain_sample(0.0, infinite_torus, f, phi, rng));

    SUBCASE("uniform birth time reproduces mu") {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<std::uint64_t> samples;
        for (int i = 0; i < 40000; ++i) samples.push_back(chain_sample(1.0 - unif(rng), infinite_torus, f, phi, rng));
        const auto d = distance_metrics(EmpiricalDistribution::naturals(samples), mu_weights(f, 2000));
        CHECK(d.total_variation < 0.02);
    }

    SUBCASE("affine rules grow like s0^-gamma") {
        // For affine f, E f(Z) = beta e^{gamma u} in log time u, so E Z = (beta/gamma)(s0^-gamma - 1).
        for (double s0 : {0.01, 0.2}) {
            ReplicateStats z;
            for (int i = 0; i < 20000; ++i) z.add(static_cast<double>(chain_sample(s0, infinite_torus, f, phi, rng)));
            const double expected = 2.0 * (std::pow(s0, -0.5) - 1.0);
            CHECK(std::abs(z.mean() - expected) < 4.0 * z.stderr_());
        }
    }

    SUBCASE("a finite torus slows the chain down") {
        ReplicateStats finite, infinite;
        for (int i = 0; i < 20000; ++i) {
            finite.add(static_cast<double>(chain_sample(0.05, 20.0, f, phi, rng)));
            infinite.add(static_cast<double>(chain_sample(0.05, infinite_torus, f, phi, rng)));
        }
        CHECK(finite.mean() < infinite.mean());
    }
}

TEST_CASE("tail and linking bounds") {
    // p = ceil(beta/gamma - 1) = 1.
    CHECK(indegree_tail_bound(0, 0.25, 1.0, 0.5, 1.0) == doctest::Approx(std::exp(0.25)));
    CHECK(indegree_tail_bound(16, 0.25, 1.0, 0.5, 1.0) == doctest::Approx(std::exp(0.25 - 1.0)));
    CHECK_THROWS(indegree_tail_bound(1, 0.5, 0.25, 0.5, 1.0));
    const auto phi = ProfileFunction::indicator(1.0);
    CHECK(linking_constant(0.5, 1.0) == doctest::Approx(std::exp(0.5)));
    for (double x : {0.0, 1.0, 3.5, -2.0})
        CHECK(linking_bound(x, 1.0, 0.3, 0.5, 1.0, phi) == doctest::Approx(std::exp(0.5) * std::exp(-std::abs(x) / 2.0)));
    for (std::uint64_t k = 0; k < 200; ++k)
        REQUIRE(indegree_tail_bound(k + 1, 0.25, 1.0, 0.5, 1.0) < indegree_tail_bound(k, 0.25, 1.0, 0.5, 1.0));
}

TEST_CASE("profile_I") {
    const auto ind = ProfileFunction::indicator(1.0);
    for (double a : {0.0, 0.1, 0.3, 0.49}) CHECK(profile_I(ind, a) == doctest::Approx(a / 2.0));
    for (double a : {0.5, 1.0, 10.0}) CHECK(profile_I(ind, a) == doctest::Approx(0.25));

    for (const auto& phi : {ProfileFunction::polynomial(1.5), ProfileFunction::polynomial(3.0, 2.0),
                            ProfileFunction::tabulated({{0, 1}, {0.5, 0.3}, {2, 0}})}) {
        for (double a : {0.05, 0.4, 1.3, 7.0}) {
            const auto pts = phi.kinks();
            double first = 0.0, previous = 0.0;
            auto moment = [&](double v) { return v * phi(v); };
            for (double k : pts) {
                if (k >= a) break;
                first += integrate_simpson(moment, previous, k, 1e-12);
                previous = k;
            }
            first += integrate_simpson(moment, previous, a, 1e-12);
            const double rest = 0.5 - phi.integral(a);
            CHECK(profile_I(phi, a) == doctest::Approx(2.0 * first + a * rest).epsilon(1e-7));
        }
    }
}

TEST_CASE("lambda_tail") {
    const auto f = AttachmentRule::affine(0.25, 1.0);
    const auto phi = ProfileFunction::polynomial(3.0);
    CHECK_THROWS(lambda_tail(0.0, f, phi));
    CHECK(lambda_tail(1e-9, f, phi) == doctest::Approx(1.0).epsilon(1e-6));
    double previous = 1.0;
    for (double K = 0.01; K < 1e5; K *= 1.3) {
        const double v = lambda_tail(K, f, phi);
        REQUIRE(v >= 0.0);
        REQUIRE(v <= previous + 1e-12);
        previous = v;
    }
    const double slope = std::log(lambda_tail(1e4, f, phi) / lambda_tail(1e3, f, phi)) / std::log(10.0);
    CHECK(slope == doctest::Approx(-eta(0.25, 3.0)).epsilon(0.1));

    // Indicator profile, slope 0.8: tail exponent 1/gamma - 1.
    const auto f8 = AttachmentRule::affine(0.8, 1.0);
    const auto ind = ProfileFunction::indicator(1.0);
    const double slope8 = std::log(lambda_tail(1e5, f8, ind) / lambda_tail(1e4, f8, ind)) / std::log(10.0);
    CHECK(slope8 == doctest::Approx(-0.25).epsilon(0.2));
}

TEST_CASE("tail mass decays like k^(1 - tau)") {
    const auto f = AttachmentRule::affine(0.5, 1.0);
    const double slope = std::log(tail_mass(f, 20000) / tail_mass(f, 2000)) / std::log(10.0);
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.01));
    CHECK(tail_mass(f, 0) == 1.0);
}

TEST_CASE("truncation error") {
    const auto f = AttachmentRule::affine(0.5, 1.0);
    const auto phi = ProfileFunction::indicator(1.0);
    double previous = std::numeric_limits<double>::infinity();
    for (double W = 1.0; W <= 256.0; W *= 2.0) {
        const double e = truncation_error(W, 0.5, f, phi);
        CHECK(e > 0.0);
        CHECK(e < previous);
        previous = e;
    }
    // Far edges come from old partners, whose mass falls off like 1/W.
    for (double W : {1e3, 1e4, 1e5, 1e6}) {
        const double ratio = truncation_error(2.0 * W, 0.5, f, phi) / truncation_error(W, 0.5, f, phi);
        CHECK(ratio == doctest::Approx(0.5).epsilon(0.02));
    }
    const auto poly = ProfileFunction::polynomial(2.0);
    const double r = truncation_error(2e5, 0.3, f, poly) / truncation_error(1e5, 0.3, f, poly);
    CHECK(r == doctest::Approx(0.5).epsilon(0.02));
    CHECK_THROWS(truncation_error(5.0, 0.5, AttachmentRule::tabulated({1, 2}, 0.5), phi));
    CHECK(truncation_error(5.0, 0.5, AttachmentRule::tabulated({1, 1.5}, 0.5), phi, std::pair{0.5, 1.0}) > 0.0);
    CHECK_THROWS(truncation_error(5.0, 0.5, AttachmentRule::tabulated({1, 3}, 0.5), phi, std::pair{0.5, 1.0}));
}

TEST_CASE("truncation error bounds the simulated far edges") {
    ModelParams p;
    const double W = 3.0, u = 0.5;
    ReplicateStats far;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const auto rg = build_infinite_approx(StripField(seed), 30.0, u, p);
        const VertexId palm = *rg.palm;
        const auto in = rg.graph.in_lists();
        double count = 0;
        for (VertexId x : rg.graph.out_neighbors(palm)) count += std::abs(rg.coordinates[x]) > W;
        for (VertexId y : in[palm]) count += std::abs(rg.coordinates[y]) > W;
        far.add(count);
    }
    CHECK(far.mean() <= truncation_error(W, u, p.f, p.phi));
}
