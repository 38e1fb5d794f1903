#include "spa/graph.hpp"
#include "spa/growth.hpp"

#include <doctest.h>

#include <numeric>
#include <sstream>

using namespace spa;

TEST_CASE("add_vertex") {
    EvolvingGraph g;
    CHECK(g.add_vertex(0.3, 1.2) == 0);
    CHECK(g.add_vertex(0.7, 2.5) == 1);
    CHECK_THROWS_AS(g.add_vertex(0.1, 2.0), GraphError);
    CHECK_THROWS_AS(g.add_vertex(0.1, 2.5), GraphError);
    CHECK(g.indegree(1) == 0);
}

TEST_CASE("add_edge") {
    EvolvingGraph g;
    g.add_vertex(0.1, 1.0);
    g.add_vertex(0.2, 2.0);
    g.add_edge(1, 0);
    CHECK(g.indegree(0) == 1);
    CHECK(g.outdegree(1) == 1);
    CHECK_THROWS_AS(g.add_edge(1, 0), GraphError);
    CHECK_THROWS_AS(g.add_edge(0, 1), GraphError);
    CHECK_THROWS_AS(g.add_edge(1, 1), GraphError);
    CHECK_THROWS(g.add_edge(5, 0));
}

TEST_CASE("torus_distance") {
    EvolvingGraph g;
    g.add_vertex(0.1, 1);
    g.add_vertex(0.9, 2);
    g.add_vertex(0.2, 3);
    g.add_vertex(0.6, 4);
    CHECK(g.torus_distance(0, 1) == doctest::Approx(0.2));
    CHECK(g.torus_distance(2, 3) == doctest::Approx(0.4));
    EvolvingGraph h(Geometry{10.0, true});
    h.add_vertex(0.0, 1);
    h.add_vertex(5.0, 2);
    CHECK(h.torus_distance(0, 1) == 5.0);
}

TEST_CASE("degree_views") {
    EvolvingGraph path;
    for (int i = 0; i < 3; ++i) path.add_vertex(0.1 * i, i + 1.0);
    path.add_edge(1, 0);
    path.add_edge(2, 1);
    auto v = degree_views(path);
    CHECK(v.indegree == std::vector<std::uint32_t>{1, 1, 0});
    CHECK(v.outdegree == std::vector<std::uint32_t>{0, 1, 1});
    CHECK(v.degree == std::vector<std::uint32_t>{1, 2, 1});

    CHECK(degree_views(EvolvingGraph{}).indegree.empty());

    EvolvingGraph star;
    for (int i = 0; i < 4; ++i) star.add_vertex(0.1 * i, i + 1.0);
    for (VertexId y = 1; y < 4; ++y) star.add_edge(y, 0);
    v = degree_views(star);
    CHECK(v.indegree[0] == 3);
    CHECK(v.outdegree == std::vector<std::uint32_t>{0, 1, 1, 1});
}

TEST_CASE("set_out_edges validates its input") {
    EvolvingGraph g;
    for (int i = 0; i < 4; ++i) g.add_vertex(0.1 * i, i + 1.0);
    g.set_out_edges(3, {0, 2});
    CHECK(g.indegree(0) == 1);
    CHECK(g.indegree(2) == 1);
    CHECK_THROWS_AS(g.set_out_edges(2, {1, 0}), GraphError);
    CHECK_THROWS_AS(g.set_out_edges(2, {2}), GraphError);
}

TEST_CASE("property: degree sums and serialization round trip on grown graphs") {
    for (std::uint64_t seed : {1, 2, 3}) {
        ModelParams p;
        p.seed = seed;
        p.horizon = Horizon::count(3000);
        const auto g = grow(p).graph;
        const auto v = degree_views(g);
        const auto in = std::accumulate(v.indegree.begin(), v.indegree.end(), std::uint64_t{0});
        const auto out = std::accumulate(v.outdegree.begin(), v.outdegree.end(), std::uint64_t{0});
        CHECK(in == g.edge_count());
        CHECK(out == g.edge_count());
        for (VertexId y = 0; y < g.vertex_count(); ++y)
            for (VertexId x : g.out_neighbors(y)) REQUIRE(g.vertex(y).birth_time > g.vertex(x).birth_time);

        std::stringstream vs, es;
        write_vertices_csv(g, vs);
        write_edges_csv(g, es);
        const auto back = read_graph_csv(vs, es);
        CHECK(back == g);
        std::stringstream vs2, es2;
        write_vertices_csv(back, vs2);
        write_edges_csv(back, es2);
        CHECK(vs2.str() == vs.str());
        CHECK(es2.str() == es.str());
    }
}

TEST_CASE("CSV headers and malformed input") {
    EvolvingGraph g;
    g.add_vertex(0.25, 1.5);
    g.add_vertex(0.5, 2.0);
    g.add_edge(1, 0);
    std::stringstream vs, es;
    write_vertices_csv(g, vs);
    write_edges_csv(g, es);
    CHECK(vs.str().rfind("id,position,birth_time\n", 0) == 0);
    CHECK(es.str() == "younger,older\n1,0\n");

    std::istringstream bad_v("id,position,birth_time\n0,0.1,1\n1,0.2,0.5\n");
    std::istringstream ok_e("younger,older\n");
    CHECK_THROWS(read_graph_csv(bad_v, ok_e));
    std::istringstream ok_v("id,position,birth_time\n0,0.1,1\n1,0.2,2\n");
    std::istringstream bad_e("younger,older\n0,1\n");
    CHECK_THROWS(read_graph_csv(ok_v, bad_e));
}

TEST_CASE("prefix and shifted views") {
    ModelParams p;
    p.horizon = Horizon::count(500);
    const auto g = grow(p).graph;
    const auto pre = g.prefix(200);
    CHECK(pre.vertex_count() == 200);
    for (VertexId y = 0; y < 200; ++y) CHECK(std::vector<VertexId>(pre.out_neighbors(y).begin(), pre.out_neighbors(y).end()) ==
                                             std::vector<VertexId>(g.out_neighbors(y).begin(), g.out_neighbors(y).end()));
    const auto s = g.shifted(0.37);
    CHECK(s.edge_count() == g.edge_count());
    for (VertexId y = 0; y < g.vertex_count(); y += 7)
        for (VertexId x : g.out_neighbors(y)) CHECK(s.torus_distance(y, x) == doctest::Approx(g.torus_distance(y, x)));
}
