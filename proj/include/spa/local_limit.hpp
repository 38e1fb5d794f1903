#pragma once

#include "spa/config.hpp"
#include "spa/graph.hpp"
#include "spa/growth.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace spa {

struct StripPoint {
    double position = 0.0;  // coordinate on the real line
    double time = 0.0;      // birth time in (0, 1]
    std::uint64_t key = 0;  // name in the pair randomness
};

/// Unit-intensity Poisson process on R x (0, 1], generated strip by strip.
/// Strip n covers [n, n+1); its points depend only on (seed, n).
class StripField {
public:
    explicit StripField(std::uint64_t seed) : seed_(seed), random_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::vector<StripPoint> strip(std::int64_t n) const;
    /// Points of strips first..last-1.
    std::vector<StripPoint> strips(std::int64_t first, std::int64_t last) const;

    static std::uint64_t point_key(std::int64_t strip, std::uint32_t index) noexcept;
    /// Keys reserved for inserted distinguished vertices.
    static constexpr std::uint64_t palm_key(std::uint32_t index) noexcept {
        return (std::uint64_t{1} << 63) | index;
    }

private:
    std::uint64_t seed_;
    PairRandomness random_;
};

struct RescaledGraph {
    enum class Kind { torus, window };
    Kind kind = Kind::torus;
    /// Torus length t, or window half-width ceil(W).
    double extent = 0.0;
    EvolvingGraph graph;
    std::vector<std::uint64_t> keys;
    /// Position of each vertex on the real line before wrapping or shifting.
    std::vector<double> coordinates;
    std::optional<VertexId> palm;

    std::optional<VertexId> find(std::uint64_t key) const;
    /// Keys of all neighbours of the vertex with this key, ascending.
    std::vector<std::uint64_t> neighbour_keys(VertexId v) const;
};

/// G^t on the torus of length t; (-t/2, t/2] is identified with [0, t).
RescaledGraph build_rescaled(const StripField& field, double t, const ModelParams& params,
                             GrowthMode mode = GrowthMode::fast(0.0));

/// Construction on all points of strips [-ceil(W), ceil(W)) with free boundary,
/// optionally with an inserted vertex at (0, palm_time).
RescaledGraph build_infinite_approx(const StripField& field, double W, std::optional<double> palm_time,
                                    const ModelParams& params, GrowthMode mode = GrowthMode::fast(0.0));

/// Keys of the points with |x| <= radius.
std::vector<std::uint64_t> central_probes(const StripField& field, double radius);

struct StabilizationStep {
    double t_from = 0.0;
    double t_to = 0.0;
    std::size_t probes = 0;
    std::size_t changed = 0;
    double fraction() const { return probes ? static_cast<double>(changed) / static_cast<double>(probes) : 0.0; }
};

struct StabilizationReport {
    std::vector<StabilizationStep> steps;
};

/// For consecutive t values, count probes whose incident edge set changed.
StabilizationReport couple_across_t(const StripField& field, const std::vector<double>& t_list,
                                    const std::vector<std::uint64_t>& probe_keys, const ModelParams& params);

/// Indegree of the inserted vertex (0, u) for each half-width in `widths`.
std::vector<std::uint32_t> palm_indegrees(const StripField& field, const std::vector<double>& widths, double u,
                                          const ModelParams& params);

}  // namespace spa
