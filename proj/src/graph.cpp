#include "spa/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace spa {

VertexId EvolvingGraph::add_vertex(double position, double birth_time) {
    if (!std::isfinite(birth_time) || (!vertices_.empty() && !(birth_time > vertices_.back().birth_time)))
        throw GraphError("birth time must exceed every existing birth time");
    if (vertices_.size() >= std::numeric_limits<VertexId>::max()) throw GraphError("vertex id space exhausted");
    const auto id = static_cast<VertexId>(vertices_.size());
    vertices_.push_back({id, position, birth_time});
    out_.emplace_back();
    indegree_.push_back(0);
    return id;
}

void EvolvingGraph::add_edge(VertexId younger, VertexId older) {
    if (younger >= vertices_.size() || older >= vertices_.size()) throw GraphError("edge endpoint does not exist");
    if (younger == older) throw GraphError("self-loop");
    if (!(vertices_[younger].birth_time > vertices_[older].birth_time))
        throw GraphError("edge must point from the younger to the older vertex");
    auto& list = out_[younger];
    auto it = std::lower_bound(list.begin(), list.end(), older);
    if (it != list.end() && *it == older) throw GraphError("duplicate edge");
    list.insert(it, older);
    ++indegree_[older];
    ++edges_;
}

void EvolvingGraph::set_out_edges(VertexId younger, std::vector<VertexId> older_sorted) {
    if (younger >= vertices_.size()) throw GraphError("edge endpoint does not exist");
    if (!out_[younger].empty()) throw GraphError("out-list already set");
    for (std::size_t i = 0; i < older_sorted.size(); ++i) {
        if (older_sorted[i] >= younger) throw GraphError("edge must point from the younger to the older vertex");
        if (i > 0 && older_sorted[i] <= older_sorted[i - 1]) throw GraphError("duplicate edge");
    }
    for (VertexId x : older_sorted) ++indegree_[x];
    edges_ += older_sorted.size();
    out_[younger] = std::move(older_sorted);
}

bool EvolvingGraph::has_edge(VertexId younger, VertexId older) const {
    if (younger >= out_.size()) return false;
    return std::binary_search(out_[younger].begin(), out_[younger].end(), older);
}

std::vector<std::vector<VertexId>> EvolvingGraph::in_lists() const {
    std::vector<std::vector<VertexId>> in(vertices_.size());
    for (std::size_t x = 0; x < in.size(); ++x) in[x].reserve(indegree_[x]);
    for (std::size_t y = 0; y < out_.size(); ++y)
        for (VertexId x : out_[y]) in[x].push_back(static_cast<VertexId>(y));
    return in;
}

std::vector<std::vector<VertexId>> EvolvingGraph::undirected_adjacency() const {
    std::vector<std::vector<VertexId>> adj(vertices_.size());
    for (std::size_t v = 0; v < adj.size(); ++v) adj[v].reserve(indegree_[v] + out_[v].size());
    // Out-neighbours are older (smaller ids), so appending them first keeps each list sorted.
    for (std::size_t v = 0; v < adj.size(); ++v) adj[v].insert(adj[v].end(), out_[v].begin(), out_[v].end());
    for (std::size_t y = 0; y < out_.size(); ++y)
        for (VertexId x : out_[y]) adj[x].push_back(static_cast<VertexId>(y));
    return adj;
}

EvolvingGraph EvolvingGraph::prefix(std::size_t n) const {
    n = std::min(n, vertices_.size());
    EvolvingGraph g(geometry_);
    g.vertices_.assign(vertices_.begin(), vertices_.begin() + static_cast<std::ptrdiff_t>(n));
    g.out_.assign(out_.begin(), out_.begin() + static_cast<std::ptrdiff_t>(n));
    g.indegree_.assign(n, 0);
    for (const auto& list : g.out_) {
        g.edges_ += list.size();
        for (VertexId x : list) ++g.indegree_[x];
    }
    return g;
}

EvolvingGraph EvolvingGraph::shifted(double offset) const {
    EvolvingGraph g = *this;
    for (auto& v : g.vertices_) {
        v.position += offset;
        if (geometry_.periodic) {
            v.position = std::fmod(v.position, geometry_.length);
            if (v.position < 0.0) v.position += geometry_.length;
        }
    }
    return g;
}

bool EvolvingGraph::operator==(const EvolvingGraph& other) const {
    if (vertices_.size() != other.vertices_.size() || edges_ != other.edges_) return false;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].position != other.vertices_[i].position ||
            vertices_[i].birth_time != other.vertices_[i].birth_time)
            return false;
    }
    return out_ == other.out_;
}

DegreeViews degree_views(const EvolvingGraph& g) {
    DegreeViews v;
    const auto n = g.vertex_count();
    v.indegree.resize(n);
    v.outdegree.resize(n);
    v.degree.resize(n);
    for (VertexId i = 0; i < n; ++i) {
        v.indegree[i] = g.indegree(i);
        v.outdegree[i] = g.outdegree(i);
        v.degree[i] = v.indegree[i] + v.outdegree[i];
    }
    return v;
}

std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

void write_vertices_csv(const EvolvingGraph& g, std::ostream& out) {
    out << "id,position,birth_time\n";
    std::string line;
    for (const auto& v : g.vertices()) {
        line = std::to_string(v.id);
        line += ',';
        line += format_real(v.position);
        line += ',';
        line += format_real(v.birth_time);
        line += '\n';
        out << line;
    }
}

void write_edges_csv(const EvolvingGraph& g, std::ostream& out) {
    out << "younger,older\n";
    std::string line;
    for (VertexId y = 0; y < g.vertex_count(); ++y) {
        for (VertexId x : g.out_neighbors(y)) {
            line = std::to_string(y);
            line += ',';
            line += std::to_string(x);
            line += '\n';
            out << line;
        }
    }
}

void save_graph(const EvolvingGraph& g, const std::string& prefix) {
    std::ofstream vf(prefix + ".vertices.csv", std::ios::binary);
    std::ofstream ef(prefix + ".edges.csv", std::ios::binary);
    if (!vf || !ef) throw std::runtime_error("cannot write graph files with prefix '" + prefix + "'");
    write_vertices_csv(g, vf);
    write_edges_csv(g, ef);
}

namespace {

template <class T>
T parse_field(std::string_view text, const char* what, std::size_t line) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::runtime_error(std::string("bad ") + what + " at line " + std::to_string(line));
    return value;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

void strip_cr(std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
}

}  // namespace

EvolvingGraph read_graph_csv(std::istream& vertices, std::istream& edges, Geometry geometry) {
    EvolvingGraph g(geometry);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(vertices, line)) throw std::runtime_error("vertex file is empty");
    strip_cr(line);
    if (line != "id,position,birth_time") throw std::runtime_error("unexpected vertex header '" + line + "'");
    line_no = 1;
    while (std::getline(vertices, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 3) throw std::runtime_error("vertex row needs 3 fields at line " + std::to_string(line_no));
        const auto id = parse_field<std::uint64_t>(cells[0], "id", line_no);
        if (id != g.vertex_count()) throw std::runtime_error("vertex ids must be dense and ordered at line " + std::to_string(line_no));
        g.add_vertex(parse_field<double>(cells[1], "position", line_no), parse_field<double>(cells[2], "birth_time", line_no));
    }

    if (!std::getline(edges, line)) throw std::runtime_error("edge file is empty");
    strip_cr(line);
    if (line != "younger,older") throw std::runtime_error("unexpected edge header '" + line + "'");
    line_no = 1;
    std::vector<VertexId> pending;
    std::int64_t current = -1;
    auto flush = [&] {
        if (current >= 0) g.set_out_edges(static_cast<VertexId>(current), std::move(pending));
        pending.clear();
    };
    while (std::getline(edges, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 2) throw std::runtime_error("edge row needs 2 fields at line " + std::to_string(line_no));
        const auto y = parse_field<std::uint32_t>(cells[0], "younger", line_no);
        const auto x = parse_field<std::uint32_t>(cells[1], "older", line_no);
        if (y >= g.vertex_count()) throw std::runtime_error("unknown vertex at line " + std::to_string(line_no));
        if (static_cast<std::int64_t>(y) < current) throw std::runtime_error("edge rows not sorted at line " + std::to_string(line_no));
        if (static_cast<std::int64_t>(y) != current) {
            flush();
            current = y;
        }
        pending.push_back(x);
    }
    flush();
    return g;
}

EvolvingGraph load_graph(const std::string& vertices_path, const std::string& edges_path, Geometry geometry) {
    std::ifstream vf(vertices_path, std::ios::binary);
    if (!vf) throw std::runtime_error("cannot open '" + vertices_path + "'");
    std::ifstream ef(edges_path, std::ios::binary);
    if (!ef) throw std::runtime_error("cannot open '" + edges_path + "'");
    return read_graph_csv(vf, ef, geometry);
}

}  // namespace spa
