#pragma once

#include "spa/config.hpp"
#include "spa/graph.hpp"
#include "spa/random.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace spa {

struct GrowthMode {
    enum class Kind { exact_naive, fast };
    Kind kind = Kind::fast;
    double prune_threshold = 1e-12;

    static GrowthMode naive() { return {Kind::exact_naive, 0.0}; }
    static GrowthMode fast(double prune_threshold = 1e-12) { return {Kind::fast, prune_threshold}; }
};

/// Pair-visit counters. Every skipped pair had connection probability at most
/// the prune threshold, so `divergence_bound` bounds the probability that the
/// run differs from the naive one.
struct GrowthAudit {
    std::uint64_t pairs_total = 0;
    std::uint64_t pairs_visited = 0;
    std::uint64_t pairs_skipped = 0;
    double prune_threshold = 0.0;
    double divergence_bound = 0.0;
};

/// phi(t * dist / f(k)).
double connect_probability(const ModelParams& params, double t, double dist, std::uint64_t k);

struct Candidate {
    VertexId older = 0;
    bool connect = false;
};

/// Applies the construction rule one arrival at a time. Each newcomer at time t
/// links to older x iff V(newcomer, x) <= phi(t d / f(Z_x(t-))), all decisions of
/// one arrival taken against the indegrees before it.
class GraphBuilder {
public:
    GraphBuilder(const AttachmentRule& f, const ProfileFunction& phi, Geometry geometry, GrowthMode mode,
                 std::uint64_t seed);

    /// Insert a vertex; `key` names it in the pair randomness.
    VertexId add(double position, double time, std::uint64_t key);

    /// Decisions the next `add` would take, for every older vertex the mode visits,
    /// in increasing id order. Does not modify the graph.
    std::vector<Candidate> candidate_scan(double position, double time, std::uint64_t key) const;

    const EvolvingGraph& graph() const noexcept { return graph_; }
    EvolvingGraph release() { return std::move(graph_); }
    const GrowthAudit& audit() const noexcept { return audit_; }
    const PairRandomness& randomness() const noexcept { return random_; }
    std::uint64_t key(VertexId id) const { return keys_.at(id); }

private:
    struct Tier {
        double fmax = 0.0;
        std::uint32_t count = 0;
        std::uint32_t buckets = 1;
        std::vector<std::vector<std::uint64_t>> key_terms;
        std::vector<std::vector<VertexId>> ids;
    };

    template <class Visit>
    void scan(double position, double time, std::uint64_t row, Visit&& visit, std::uint64_t& visited) const;
    template <class Visit>
    void scan_tier(const Tier& tier, double position, double time, double cutoff, std::uint64_t row, Visit& visit,
                   std::uint64_t& visited) const;

    std::uint32_t tier_of(double fvalue) const noexcept;
    std::uint32_t bucket_of(const Tier& tier, double position) const noexcept;
    void index_insert(VertexId id);
    void index_remove(VertexId id);
    void regrid(Tier& tier);

    class CoarseBound;

    AttachmentRule f_;
    ProfileFunction phi_;
    Geometry geometry_;
    GrowthMode mode_;
    PairRandomness random_;
    double f0_;
    double cutoff_;
    EvolvingGraph graph_;
    GrowthAudit audit_;
    std::shared_ptr<const CoarseBound> coarse_;

    std::vector<std::uint64_t> keys_;
    std::vector<std::uint64_t> key_terms_;
    std::vector<double> positions_;
    std::vector<double> fvalues_;
    std::vector<std::uint32_t> indegrees_;
    std::vector<std::uint32_t> tier_;
    std::vector<std::uint32_t> bucket_;
    std::vector<std::uint32_t> slot_;
    std::vector<Tier> tiers_;
    std::vector<VertexId> targets_;
    mutable std::vector<std::uint32_t> hits_;
};

struct GrowthResult {
    EvolvingGraph graph;
    GrowthAudit audit;
    double final_time = 0.0;
};

/// Arrival times and positions of the unit-rate Poisson process used by `grow`.
/// Identical for every horizon, so a shorter run is a prefix of a longer one.
struct Arrival {
    double time = 0.0;
    double position = 0.0;
};
Arrival arrival(const PairRandomness& random, std::uint64_t index, double previous_time);

/// Grow G_t on the unit torus up to the horizon.
GrowthResult grow(const ModelParams& params, GrowthMode mode = GrowthMode::fast());

}  // namespace spa
