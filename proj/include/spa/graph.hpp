#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spa {

using VertexId = std::uint32_t;

struct Vertex {
    VertexId id = 0;
    double position = 0.0;
    double birth_time = 0.0;
};

/// Circle of the given length, or a free-boundary segment [0, length).
struct Geometry {
    double length = 1.0;
    bool periodic = true;

    double distance(double a, double b) const noexcept {
        const double d = a > b ? a - b : b - a;
        if (!periodic) return d;
        return d < length - d ? d : length - d;
    }
};

class GraphError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Oriented younger -> older graph with live indegree counters.
/// Out-lists are kept sorted; in-lists are rebuilt on demand.
class EvolvingGraph {
public:
    explicit EvolvingGraph(Geometry geometry = {}) : geometry_(geometry) {}

    VertexId add_vertex(double position, double birth_time);
    void add_edge(VertexId younger, VertexId older);

    /// Attach the whole out-list of the newest vertex at once.
    /// `older_sorted` must be strictly increasing and below `younger`.
    void set_out_edges(VertexId younger, std::vector<VertexId> older_sorted);

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return edges_; }
    const Geometry& geometry() const noexcept { return geometry_; }
    double torus_length() const noexcept { return geometry_.length; }

    const Vertex& vertex(VertexId id) const { return vertices_.at(id); }
    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    std::span<const VertexId> out_neighbors(VertexId id) const { return out_.at(id); }
    std::uint32_t indegree(VertexId id) const { return indegree_.at(id); }
    std::uint32_t outdegree(VertexId id) const { return static_cast<std::uint32_t>(out_.at(id).size()); }
    bool has_edge(VertexId younger, VertexId older) const;

    double torus_distance(VertexId a, VertexId b) const {
        return geometry_.distance(vertex(a).position, vertex(b).position);
    }

    /// Younger neighbours of each vertex, ascending.
    std::vector<std::vector<VertexId>> in_lists() const;
    /// Undirected neighbour lists, ascending.
    std::vector<std::vector<VertexId>> undirected_adjacency() const;

    /// Subgraph induced by the first n vertices.
    EvolvingGraph prefix(std::size_t n) const;
    /// Copy with every position moved by `offset` (mod length on a torus).
    EvolvingGraph shifted(double offset) const;

    bool operator==(const EvolvingGraph& other) const;

private:
    Geometry geometry_;
    std::vector<Vertex> vertices_;
    std::vector<std::vector<VertexId>> out_;
    std::vector<std::uint32_t> indegree_;
    std::size_t edges_ = 0;
};

struct DegreeViews {
    std::vector<std::uint32_t> indegree;
    std::vector<std::uint32_t> outdegree;
    std::vector<std::uint32_t> degree;
};

DegreeViews degree_views(const EvolvingGraph& g);

// CSV files: "id,position,birth_time" and "younger,older" (sorted).
void write_vertices_csv(const EvolvingGraph& g, std::ostream& out);
void write_edges_csv(const EvolvingGraph& g, std::ostream& out);
void save_graph(const EvolvingGraph& g, const std::string& prefix);
EvolvingGraph read_graph_csv(std::istream& vertices, std::istream& edges, Geometry geometry = {});
EvolvingGraph load_graph(const std::string& vertices_path, const std::string& edges_path, Geometry geometry = {});

/// Shortest round-trip decimal with 17 significant digits.
std::string format_real(double value);

}  // namespace spa
