#include "spa/growth.hpp"
#include "spa/statistics.hpp"

#include <doctest.h>

#include <cmath>

using namespace spa;

namespace {

EvolvingGraph make(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
    EvolvingGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex(0.1 * static_cast<double>(i), 1.0 + static_cast<double>(i));
    for (auto [y, x] : edges) g.add_edge(y, x);
    return g;
}

EvolvingGraph grown(std::uint64_t n, std::uint64_t seed, double gamma = 0.5) {
    ModelParams p;
    p.f = AttachmentRule::affine(gamma, 1.0);
    p.seed = seed;
    p.horizon = Horizon::count(n);
    return grow(p).graph;
}

// Cubic triangle count over the adjacency matrix.
std::uint64_t brute_triangles(const EvolvingGraph& g) {
    const auto n = g.vertex_count();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (VertexId y = 0; y < n; ++y)
        for (VertexId x : g.out_neighbors(y)) adj[y][x] = adj[x][y] = 1;
    std::uint64_t t = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (adj[a][b])
                for (std::size_t c = b + 1; c < n; ++c) t += adj[a][c] && adj[b][c];
    return t;
}

}  // namespace

TEST_CASE("empty sample is the point mass at zero") {
    const auto e = EmpiricalDistribution::naturals(std::vector<std::uint32_t>{});
    CHECK(e.pmf(0) == 1.0);
    CHECK(e.ccdf(1) == 0.0);
    CHECK(e.mean() == 0.0);
    const auto r = EmpiricalDistribution::reals({});
    CHECK(r.cdf(0.0) == 1.0);
    CHECK(r.ccdf(1e-6) == 0.0);
}

TEST_CASE("star degree laws") {
    const auto g = make(4, {{1, 0}, {2, 0}, {3, 0}});
    const auto in = empirical_indegree(g);
    CHECK(in.pmf(0) == 0.75);
    CHECK(in.pmf(3) == 0.25);
    CHECK(in.pmf(1) == 0.0);
    CHECK(in.ccdf(1) == 0.25);
    CHECK(in.cdf(2) == 0.75);
    CHECK(in.mean() == 0.75);
    CHECK(in.max_value() == 3.0);
    CHECK(in.weights() == std::vector<double>{0.75, 0, 0, 0.25});
    const auto out = empirical_outdegree(g);
    CHECK(out.pmf(0) == 0.25);
    CHECK(out.pmf(1) == 0.75);
}

TEST_CASE("clustering examples") {
    SUBCASE("triangle") {
        const auto c = clustering(make(3, {{1, 0}, {2, 0}, {2, 1}}));
        CHECK(c.global == 1.0);
        CHECK(c.average == 1.0);
        CHECK(c.triangles == 1);
        CHECK(c.open_triangles == 3);
    }
    SUBCASE("path") {
        const auto c = clustering(make(3, {{1, 0}, {2, 1}}));
        CHECK(c.global == 0.0);
        CHECK(c.average == 0.0);
        CHECK(std::isnan(c.local[0]));
        CHECK(c.local[1] == 0.0);
    }
    SUBCASE("star with one extra edge") {
        const auto c = clustering(make(4, {{1, 0}, {2, 0}, {3, 0}, {2, 1}}));
        CHECK(c.global == doctest::Approx(0.6));
        CHECK(c.average == doctest::Approx(7.0 / 9.0));
        CHECK(c.local[0] == doctest::Approx(1.0 / 3.0));
        CHECK(c.local[1] == 1.0);
        CHECK(std::isnan(c.local[3]));
    }
    SUBCASE("no edges") {
        const auto c = clustering(make(5, {}));
        CHECK(c.global == 0.0);
        CHECK(c.average == 0.0);
    }
}

TEST_CASE("edge lengths") {
    EvolvingGraph g;
    g.add_vertex(0.3, 1.0);
    g.add_vertex(0.4, 2.0);
    g.add_edge(1, 0);
    const auto e = empirical_edge_lengths(g, 10.0);
    CHECK(e.sample_count() == 1);
    CHECK(e.mean() == doctest::Approx(1.0));
    CHECK(e.sorted_samples().size() == 1);
    const auto none = empirical_edge_lengths(make(3, {}), 10.0);
    CHECK(none.pmf(0.0) == 1.0);
    CHECK_THROWS(empirical_edge_lengths(g, 0.0));
}

TEST_CASE("tail fits") {
    std::vector<double> xs, ys;
    for (int k = 1; k <= 50; ++k) {
        xs.push_back(k);
        ys.push_back(3.0 / (k * k));
    }
    const auto fit = loglog_fit(xs, ys);
    CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(fit.stderr_ < 1e-9);
    CHECK(fit.points == 50);
    CHECK_THROWS(loglog_fit({1, 2, 3, 4}, {1, 0.5, 0.3, 0.2}));

    const auto mu = mu_weights(AttachmentRule::affine(0.5, 1.0), 3000);
    const auto analytic = tail_exponent_fit([&](double k) { return mu.ccdf(static_cast<std::size_t>(k)); }, 100, 2000);
    CHECK(analytic.slope == doctest::Approx(-2.0).epsilon(0.025));
    CHECK_THROWS(tail_exponent_fit([](double) { return 1.0; }, 10, 11));

    // Pareto sample with exponent 1.5 fitted on the real grid.
    std::vector<double> pareto;
    for (int i = 1; i <= 200000; ++i) pareto.push_back(std::pow((i - 0.5) / 200000.0, -1.0 / 1.5));
    const auto pf = tail_exponent_fit(EmpiricalDistribution::reals(pareto), 2.0, 200.0);
    CHECK(pf.slope == doctest::Approx(-1.5).epsilon(0.02));
}

TEST_CASE("lln averages") {
    const auto g = make(4, {{1, 0}, {2, 0}, {3, 0}});
    CHECK(lln_average(g, functionals::one(), 2.0) == 2.0);
    CHECK(lln_average(g, functionals::indegree_equals(0), 3.0) == 1.0);
    CHECK(lln_average(g, functionals::oldest_tip_open_triangles(), 1.0) == 3.0);
    CHECK_THROWS(lln_average(g, functionals::one(), 0.0));

    // For gamma > 1/2 the oldest-tip open triangles per vertex keep growing.
    const auto big = grown(40000, 3, 0.7);
    const double quarter = lln_average(big.prefix(10000), functionals::oldest_tip_open_triangles(), 10000);
    const double full = lln_average(big, functionals::oldest_tip_open_triangles(), 40000);
    CHECK(full > 1.3 * quarter);
}

TEST_CASE("distances") {
    const std::vector<std::uint32_t> a{0, 1, 1, 2, 5};
    const auto p = EmpiricalDistribution::naturals(a);
    const auto d0 = distance_metrics(p, p);
    CHECK(d0.total_variation == 0.0);
    CHECK(d0.kolmogorov_smirnov == 0.0);
    const auto one = EmpiricalDistribution::naturals(std::vector<std::uint32_t>{0, 0});
    const auto two = EmpiricalDistribution::naturals(std::vector<std::uint32_t>{3});
    const auto d1 = distance_metrics(one, two);
    CHECK(d1.total_variation == 1.0);
    CHECK(d1.kolmogorov_smirnov == 1.0);

    const auto r1 = EmpiricalDistribution::reals({0.5, 1.0, 2.0});
    CHECK(distance_metrics(r1, r1).kolmogorov_smirnov == 0.0);
    const auto r2 = EmpiricalDistribution::reals({5.0, 6.0});
    CHECK(distance_metrics(r1, r2).kolmogorov_smirnov == 1.0);
    CHECK(distance_metrics(r1, r2).total_variation == 1.0);
    const auto r3 = EmpiricalDistribution::reals({0.5, 1.0, 7.0});
    CHECK(distance_metrics(r1, r3).kolmogorov_smirnov == doctest::Approx(1.0 / 3.0));

    // Point mass at 0 against mu: TV = 1 - mu(0), KS = 1 - mu(0).
    const auto mu = mu_weights(AttachmentRule::affine(0.5, 1.0), 50);
    const auto d2 = distance_metrics(EmpiricalDistribution::naturals(std::vector<std::uint32_t>{0}), mu);
    CHECK(d2.total_variation == doctest::Approx(0.5));
    CHECK(d2.kolmogorov_smirnov == doctest::Approx(0.5));
}

TEST_CASE("merge pools samples") {
    auto a = EmpiricalDistribution::naturals(std::vector<std::uint32_t>{0, 1});
    a.merge(EmpiricalDistribution::naturals(std::vector<std::uint32_t>{1, 4}));
    CHECK(a.sample_count() == 4);
    CHECK(a.pmf(1) == 0.5);
    auto r = EmpiricalDistribution::reals({1.0});
    r.merge(EmpiricalDistribution::reals({0.5, 2.0}));
    CHECK(r.sorted_samples() == std::vector<double>{0.5, 1.0, 2.0});
    CHECK_THROWS(a.merge(r));
}

TEST_CASE("property: triangle counters and clustering on grown graphs") {
    for (std::uint64_t seed : {1, 2, 3, 4}) {
        const auto g = grown(800, seed, seed % 2 ? 0.3 : 0.7);
        const auto c = clustering(g);
        CHECK(c.global >= 0.0);
        CHECK(c.global <= 1.0);
        CHECK(c.average >= 0.0);
        CHECK(c.average <= 1.0);
        for (double l : c.local)
            if (!std::isnan(l)) REQUIRE((l >= 0.0 && l <= 1.0));

        const auto per_vertex = triangles_per_vertex(g);
        std::uint64_t through = 0;
        for (auto t : per_vertex) through += t;
        CHECK(through == 3 * c.triangles);
        CHECK(triangles_youngest(g) == c.triangles);
        CHECK(brute_triangles(g) == c.triangles);

        // Connected triples split by the age rank of the tip.
        const auto v = degree_views(g);
        std::uint64_t oldest = 0, youngest = 0, middle = 0;
        for (std::size_t i = 0; i < g.vertex_count(); ++i) {
            const std::uint64_t in = v.indegree[i], out = v.outdegree[i];
            oldest += in * (in - (in > 0)) / 2;
            youngest += out * (out - (out > 0)) / 2;
            middle += in * out;
        }
        CHECK(oldest + youngest + middle == c.open_triangles);

        const auto shifted = g.shifted(0.618);
        const auto cs = clustering(shifted);
        CHECK(cs.triangles == c.triangles);
        CHECK(cs.global == c.global);
        const auto e = empirical_edge_lengths(g, 800.0);
        const auto es = empirical_edge_lengths(shifted, 800.0);
        CHECK(es.mean() == doctest::Approx(e.mean()).epsilon(1e-12));
    }
}

TEST_CASE("property: weights and bin edges") {
    const auto g = grown(5000, 7);
    for (const auto& d : {empirical_indegree(g), empirical_outdegree(g), empirical_edge_lengths(g, 5000.0)}) {
        double sum = 0.0;
        for (double w : d.weights()) {
            REQUIRE(w >= 0.0);
            sum += w;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto edges = empirical_edge_lengths(g, 5000.0).bin_edges();
    REQUIRE(edges.size() > 2);
    CHECK(edges[0] == 0.0);
    CHECK(edges[1] == EmpiricalDistribution::first_edge);
    for (std::size_t i = 1; i < edges.size(); ++i) REQUIRE(edges[i] > edges[i - 1]);
    CHECK(edges.back() >= empirical_edge_lengths(g, 5000.0).max_value());
}

TEST_CASE("replicate statistics") {
    ReplicateStats s;
    for (double x : {1.0, 2.0, 3.0, 4.0}) s.add(x);
    CHECK(s.mean() == 2.5);
    CHECK(s.variance() == doctest::Approx(5.0 / 3.0));
    ReplicateStats t;
    t.add(10.0);
    s.merge(t);
    CHECK(s.count == 5);
    CHECK(s.mean() == 4.0);
}
