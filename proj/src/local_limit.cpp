#include "spa/local_limit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace spa {

namespace {

constexpr std::int64_t strip_offset = std::int64_t{1} << 40;

// Poisson(1) by inversion of its CDF.
std::uint32_t poisson_one(double u) {
    double p = std::exp(-1.0);
    double cdf = p;
    std::uint32_t k = 0;
    while (u >= cdf && k < 64) {
        ++k;
        p /= k;
        cdf += p;
    }
    return k;
}

bool by_time(const StripPoint& a, const StripPoint& b) { return a.time < b.time || (a.time == b.time && a.key < b.key); }

}  // namespace

std::uint64_t StripField::point_key(std::int64_t strip, std::uint32_t index) noexcept {
    return (static_cast<std::uint64_t>(strip + strip_offset) << 16) | index;
}

std::vector<StripPoint> StripField::strip(std::int64_t n) const {
    const auto id = static_cast<std::uint64_t>(n);
    const std::uint32_t count = poisson_one(random_.uniform(Stream::strip_count, id));
    std::vector<StripPoint> points;
    points.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const double x = static_cast<double>(n) + random_.uniform(Stream::strip_position, id, i);
        const double s = 1.0 - random_.uniform(Stream::strip_time, id, i);
        points.push_back({x, s, point_key(n, i)});
    }
    return points;
}

std::vector<StripPoint> StripField::strips(std::int64_t first, std::int64_t last) const {
    std::vector<StripPoint> points;
    for (std::int64_t n = first; n < last; ++n) {
        auto part = strip(n);
        points.insert(points.end(), part.begin(), part.end());
    }
    return points;
}

std::optional<VertexId> RescaledGraph::find(std::uint64_t key) const {
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (keys[i] == key) return static_cast<VertexId>(i);
    return std::nullopt;
}

std::vector<std::uint64_t> RescaledGraph::neighbour_keys(VertexId v) const {
    std::vector<std::uint64_t> out;
    for (VertexId x : graph.out_neighbors(v)) out.push_back(keys[x]);
    for (VertexId y = v + 1; y < graph.vertex_count(); ++y)
        if (graph.has_edge(y, v)) out.push_back(keys[y]);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

RescaledGraph assemble(std::vector<StripPoint> points, Geometry geometry, double shift, RescaledGraph::Kind kind,
                       double extent, std::optional<std::uint64_t> palm_key, const ModelParams& params,
                       std::uint64_t seed, GrowthMode mode) {
    const auto report = validate(params.f, params.phi);
    if (!report.ok()) throw InvalidModel(report);
    std::sort(points.begin(), points.end(), by_time);
    GraphBuilder builder(params.f, params.phi, geometry, mode, seed);
    RescaledGraph out;
    out.kind = kind;
    out.extent = extent;
    out.keys.reserve(points.size());
    out.coordinates.reserve(points.size());
    for (const auto& p : points) {
        double pos = p.position + shift;
        if (geometry.periodic) {
            if (pos < 0.0) pos += geometry.length;
            if (pos >= geometry.length) pos -= geometry.length;
        }
        const VertexId id = builder.add(pos, p.time, p.key);
        out.keys.push_back(p.key);
        out.coordinates.push_back(p.position);
        if (palm_key && p.key == *palm_key) out.palm = id;
    }
    out.graph = builder.release();
    return out;
}

}  // namespace

RescaledGraph build_rescaled(const StripField& field, double t, const ModelParams& params, GrowthMode mode) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("torus length must be positive");
    const double half = 0.5 * t;
    auto points = field.strips(static_cast<std::int64_t>(std::floor(-half)), static_cast<std::int64_t>(std::floor(half)) + 1);
    std::erase_if(points, [half](const StripPoint& p) { return !(p.position > -half && p.position <= half); });
    return assemble(std::move(points), Geometry{t, true}, 0.0, RescaledGraph::Kind::torus, t, std::nullopt, params,
                    field.seed(), mode);
}

RescaledGraph build_infinite_approx(const StripField& field, double W, std::optional<double> palm_time,
                                    const ModelParams& params, GrowthMode mode) {
    if (!(W >= 1.0) || !std::isfinite(W)) throw std::invalid_argument("window half-width must be at least 1");
    const auto M = static_cast<std::int64_t>(std::ceil(W));
    auto points = field.strips(-M, M);
    std::optional<std::uint64_t> palm_key;
    if (palm_time) {
        if (!(*palm_time > 0.0 && *palm_time <= 1.0)) throw std::invalid_argument("palm time must lie in (0, 1]");
        palm_key = StripField::palm_key(0);
        points.push_back({0.0, *palm_time, *palm_key});
    }
    const double m = static_cast<double>(M);
    return assemble(std::move(points), Geometry{2.0 * m, false}, m, RescaledGraph::Kind::window, m, palm_key, params,
                    field.seed(), mode);
}

std::vector<std::uint64_t> central_probes(const StripField& field, double radius) {
    std::vector<std::uint64_t> keys;
    const auto lo = static_cast<std::int64_t>(std::floor(-radius));
    const auto hi = static_cast<std::int64_t>(std::ceil(radius));
    for (const auto& p : field.strips(lo, hi))
        if (std::abs(p.position) <= radius) keys.push_back(p.key);
    std::sort(keys.begin(), keys.end());
    return keys;
}

StabilizationReport couple_across_t(const StripField& field, const std::vector<double>& t_list,
                                    const std::vector<std::uint64_t>& probe_keys, const ModelParams& params) {
    StabilizationReport report;
    if (t_list.size() < 2) return report;
    for (std::size_t i = 1; i < t_list.size(); ++i)
        if (!(t_list[i] > t_list[i - 1])) throw std::invalid_argument("t values must increase");

    std::vector<std::vector<std::uint64_t>> previous;
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        const auto g = build_rescaled(field, t_list[i], params);
        std::unordered_map<std::uint64_t, VertexId> index;
        for (std::size_t v = 0; v < g.keys.size(); ++v) index.emplace(g.keys[v], static_cast<VertexId>(v));
        const auto in = g.graph.in_lists();
        std::vector<std::vector<std::uint64_t>> current;
        current.reserve(probe_keys.size());
        for (std::uint64_t key : probe_keys) {
            auto it = index.find(key);
            if (it == index.end()) throw std::invalid_argument("probe lies outside the smallest window");
            std::vector<std::uint64_t> nb;
            for (VertexId x : g.graph.out_neighbors(it->second)) nb.push_back(g.keys[x]);
            for (VertexId y : in[it->second]) nb.push_back(g.keys[y]);
            std::sort(nb.begin(), nb.end());
            current.push_back(std::move(nb));
        }
        if (i > 0) {
            StabilizationStep step{t_list[i - 1], t_list[i], probe_keys.size(), 0};
            for (std::size_t p = 0; p < probe_keys.size(); ++p)
                if (current[p] != previous[p]) ++step.changed;
            report.steps.push_back(step);
        }
        previous = std::move(current);
    }
    return report;
}

std::vector<std::uint32_t> palm_indegrees(const StripField& field, const std::vector<double>& widths, double u,
                                          const ModelParams& params) {
    std::vector<std::uint32_t> out;
    out.reserve(widths.size());
    for (double W : widths) {
        const auto g = build_infinite_approx(field, W, u, params);
        out.push_back(g.graph.indegree(*g.palm));
    }
    return out;
}

}  // namespace spa
