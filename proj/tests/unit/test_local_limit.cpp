#include "spa/growth.hpp"
#include "spa/local_limit.hpp"
#include "spa/statistics.hpp"

#include <doctest.h>

using namespace spa;

TEST_CASE("strips are pure functions of seed and index") {
    StripField a(3), b(3), c(4);
    for (std::int64_t n = -5; n < 5; ++n) {
        const auto sa = a.strip(n), sb = b.strip(n);
        REQUIRE(sa.size() == sb.size());
        for (std::size_t i = 0; i < sa.size(); ++i) {
            CHECK(sa[i].position == sb[i].position);
            CHECK(sa[i].time == sb[i].time);
            CHECK(sa[i].key == sb[i].key);
            CHECK(sa[i].position >= n);
            CHECK(sa[i].position < n + 1);
            CHECK(sa[i].time > 0.0);
            CHECK(sa[i].time <= 1.0);
        }
    }
    const auto wide = a.strips(-10, 10);
    const auto narrow = a.strips(-3, 2);
    for (const auto& p : narrow) {
        const bool found = std::any_of(wide.begin(), wide.end(), [&](const StripPoint& q) {
            return q.key == p.key && q.position == p.position && q.time == p.time;
        });
        CHECK(found);
    }
    bool differs = false;
    for (std::int64_t n = 0; n < 20 && !differs; ++n) {
        const auto sa = a.strip(n), sc = c.strip(n);
        differs = sa.size() != sc.size() || (!sa.empty() && sa[0].position != sc[0].position);
    }
    CHECK(differs);
    CHECK(StripField::palm_key(0) != StripField::point_key(0, 0));
}

TEST_CASE("strip counts are Poisson with mean one") {
    StripField f(9);
    ReplicateStats counts;
    for (std::int64_t n = 0; n < 20000; ++n) counts.add(static_cast<double>(f.strip(n).size()));
    CHECK(counts.mean() == doctest::Approx(1.0).epsilon(0.03));
    CHECK(counts.variance() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("build_rescaled") {
    ModelParams p;
    const StripField field(2);
    const auto g = build_rescaled(field, 50.0, p);
    CHECK(g.kind == RescaledGraph::Kind::torus);
    CHECK(g.extent == 50.0);
    CHECK(g.graph.vertex_count() == g.keys.size());
    for (std::size_t i = 0; i < g.coordinates.size(); ++i) {
        CHECK(g.coordinates[i] > -25.0);
        CHECK(g.coordinates[i] <= 25.0);
    }
    CHECK(build_rescaled(field, 50.0, p).graph == g.graph);
    CHECK(build_rescaled(field, 50.0, p, GrowthMode::naive()).graph == g.graph);
    CHECK_THROWS(build_rescaled(field, 0.0, p));
    for (VertexId v = 0; v < g.graph.vertex_count(); ++v) CHECK(g.find(g.keys[v]) == v);
    CHECK_FALSE(g.find(StripField::palm_key(0)).has_value());
}

TEST_CASE("rescaled torus has the law of the grown graph") {
    // G_t on the unit torus, scaled by t, is G^t; compare pooled indegrees.
    ModelParams p;
    std::vector<std::uint32_t> rescaled, grown;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto r = build_rescaled(StripField(seed), 200.0, p);
        const auto a = degree_views(r.graph).indegree;
        rescaled.insert(rescaled.end(), a.begin(), a.end());
        ModelParams q = p;
        q.seed = 1000 + seed;
        q.horizon = Horizon::time(200.0);
        const auto b = degree_views(grow(q).graph).indegree;
        grown.insert(grown.end(), b.begin(), b.end());
    }
    const auto d = distance_metrics(EmpiricalDistribution::naturals(rescaled), EmpiricalDistribution::naturals(grown));
    CHECK(d.kolmogorov_smirnov < 0.04);
}

TEST_CASE("palm vertex") {
    ModelParams p;
    const StripField field(5);
    const auto with = build_infinite_approx(field, 20.0, 0.4, p);
    const auto without = build_infinite_approx(field, 20.0, std::nullopt, p);
    REQUIRE(with.palm.has_value());
    CHECK(with.coordinates[*with.palm] == 0.0);
    CHECK(with.keys[*with.palm] == StripField::palm_key(0));
    CHECK(with.graph.vertex_count() == without.graph.vertex_count() + 1);
    CHECK_FALSE(without.palm.has_value());
    // Vertices older than the palm point see the same graph among themselves.
    const VertexId cut = *with.palm;
    CHECK(with.graph.prefix(cut) == without.graph.prefix(cut));

    // Nobody is younger than u = 1.
    CHECK(palm_indegrees(field, {5, 10, 20}, 1.0, p) == std::vector<std::uint32_t>{0, 0, 0});
    CHECK_THROWS(build_infinite_approx(field, 0.5, 0.3, p));
    CHECK_THROWS(build_infinite_approx(field, 5.0, 0.0, p));
}

TEST_CASE("property: palm indegree is monotone in the window") {
    ModelParams p;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto z = palm_indegrees(StripField(seed), {1, 2, 5, 10, 20, 40}, 0.05, p);
        for (std::size_t i = 1; i < z.size(); ++i) REQUIRE(z[i] >= z[i - 1]);
    }
}

TEST_CASE("couple_across_t") {
    ModelParams p;
    const StripField field(7);
    const auto probes = central_probes(field, 10.0);
    CHECK(couple_across_t(field, {50.0}, probes, p).steps.empty());
    const auto report = couple_across_t(field, {40.0, 80.0, 160.0}, probes, p);
    REQUIRE(report.steps.size() == 2);
    CHECK(report.steps[0].t_from == 40.0);
    CHECK(report.steps[1].t_to == 160.0);
    for (const auto& s : report.steps) {
        CHECK(s.probes == probes.size());
        CHECK(s.changed <= s.probes);
    }
    CHECK_THROWS(couple_across_t(field, {80.0, 40.0}, probes, p));
    CHECK_THROWS(couple_across_t(field, {10.0, 40.0}, central_probes(field, 30.0), p));
    CHECK(StabilizationStep{}.fraction() == 0.0);
}

TEST_CASE("central probes") {
    const StripField field(1);
    for (double r : {0.5, 3.0, 10.0}) {
        const auto keys = central_probes(field, r);
        const auto g = build_infinite_approx(field, 12.0, std::nullopt, ModelParams{});
        std::size_t inside = 0;
        for (double x : g.coordinates) inside += std::abs(x) <= r;
        CHECK(keys.size() == inside);
        CHECK(std::is_sorted(keys.begin(), keys.end()));
    }
}
