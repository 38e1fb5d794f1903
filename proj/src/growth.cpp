#include "spa/growth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace spa {

namespace {

// Relative margin on the pruning radius and absolute slack on bucket gaps; both
// dwarf the rounding error of t * d / f so skipped and pre-filtered pairs are
// exactly those the naive rule rejects.
constexpr double radius_margin = 1e-9;
constexpr double gap_slack = 1e-12;
// A tier's grid doubles once it averages more than this many members per bucket.
constexpr std::uint32_t bucket_load = 128;

// Largest integer T with (h >> 11) < T  <=>  unit_open_closed(h) <= p.
std::uint64_t acceptance_bound(double p) noexcept {
    if (p >= 1.0) return std::uint64_t{1} << 53;
    if (!(p > 0.0)) return 0;
    return static_cast<std::uint64_t>(std::floor(p * 0x1.0p53));
}

}  // namespace

// Upper bound on acceptance_bound(phi(z)) by table lookup: z is truncated to
// its exponent and top four mantissa bits, and phi is non-increasing.
class GraphBuilder::CoarseBound {
public:
    explicit CoarseBound(const ProfileFunction& phi) {
        top_ = acceptance_bound(phi(0.0));
        double lo = phi.flat_end() * 0.5;
        if (!(lo > 0.0)) lo = 1e-300;
        double hi = phi.cutoff(0.0);
        if (!std::isfinite(hi) || hi > lo * 0x1.0p90) hi = lo * 0x1.0p90;
        lo_ = key(lo);
        hi_ = std::max(lo_, key(hi));
        for (std::uint64_t k = lo_; k <= hi_; ++k) table_.push_back(acceptance_bound(phi(std::bit_cast<double>(k << 48))));
    }

    std::uint64_t operator()(double z) const noexcept {
        const std::uint64_t k = key(z);
        if (k < lo_) return top_;
        return table_[std::min(k, hi_) - lo_];
    }

private:
    static std::uint64_t key(double z) noexcept { return std::bit_cast<std::uint64_t>(z) >> 48; }

    std::uint64_t top_ = 0;
    std::uint64_t lo_ = 0;
    std::uint64_t hi_ = 0;
    std::vector<std::uint64_t> table_;
};

namespace {

#if defined(__GNUC__) && defined(__x86_64__)
#define SPA_MULTIVERSION __attribute__((target_clones("avx512f", "avx2", "default")))
#else
#define SPA_MULTIVERSION
#endif

// Indices i with (mix64(row + terms[i]) >> 11) < bound. Hashes are computed in
// fixed-size chunks so the mixer vectorizes; hits are rare.
SPA_MULTIVERSION
std::size_t filter_keys(std::uint64_t row, const std::uint64_t* terms, std::size_t n, std::uint64_t bound,
                        std::uint32_t* hits) {
    constexpr std::size_t chunk = 64;
    std::size_t k = 0;
    for (std::size_t base = 0; base < n; base += chunk) {
        const std::size_t m = n - base < chunk ? n - base : chunk;
        std::uint64_t hv[chunk];
        for (std::size_t j = 0; j < m; ++j) hv[j] = mix64(row + terms[base + j]);
        std::uint64_t any = 0;
        for (std::size_t j = 0; j < m; ++j) any |= static_cast<std::uint64_t>((hv[j] >> 11) < bound);
        if (!any) continue;
        for (std::size_t j = 0; j < m; ++j)
            if ((hv[j] >> 11) < bound) hits[k++] = static_cast<std::uint32_t>(base + j);
    }
    return k;
}

}  // namespace

double connect_probability(const ModelParams& params, double t, double dist, std::uint64_t k) {
    return params.phi(t * dist / params.f(k));
}

GraphBuilder::GraphBuilder(const AttachmentRule& f, const ProfileFunction& phi, Geometry geometry, GrowthMode mode,
                           std::uint64_t seed)
    : f_(f),
      phi_(phi),
      geometry_(geometry),
      mode_(mode),
      random_(seed),
      f0_(f(0)),
      cutoff_(phi.cutoff(mode.kind == GrowthMode::Kind::fast ? mode.prune_threshold : 0.0)),
      graph_(geometry),
      coarse_(std::make_shared<const CoarseBound>(phi)) {
    audit_.prune_threshold = mode.kind == GrowthMode::Kind::fast ? mode.prune_threshold : 0.0;
}

std::uint32_t GraphBuilder::tier_of(double fvalue) const noexcept {
    const double r = fvalue / f0_;
    if (!(r >= 2.0)) return 0;
    return static_cast<std::uint32_t>(std::min(std::ilogb(r), 62));
}

std::uint32_t GraphBuilder::bucket_of(const Tier& tier, double position) const noexcept {
    const double scaled = position / geometry_.length * tier.buckets;
    if (!(scaled > 0.0)) return 0;
    return std::min(static_cast<std::uint32_t>(scaled), tier.buckets - 1);
}

void GraphBuilder::index_insert(VertexId id) {
    const auto t = tier_of(fvalues_[id]);
    if (t >= tiers_.size()) {
        tiers_.resize(t + 1);
        for (auto& tier : tiers_) {
            if (tier.key_terms.empty()) {
                tier.key_terms.resize(1);
                tier.ids.resize(1);
            }
        }
    }
    Tier& tier = tiers_[t];
    tier.fmax = std::max(tier.fmax, fvalues_[id]);
    const auto b = bucket_of(tier, positions_[id]);
    tier_[id] = t;
    bucket_[id] = b;
    slot_[id] = static_cast<std::uint32_t>(tier.ids[b].size());
    tier.ids[b].push_back(id);
    tier.key_terms[b].push_back(key_terms_[id]);
    if (++tier.count > bucket_load * tier.buckets) regrid(tier);
}

void GraphBuilder::index_remove(VertexId id) {
    Tier& tier = tiers_[tier_[id]];
    auto& ids = tier.ids[bucket_[id]];
    auto& terms = tier.key_terms[bucket_[id]];
    const auto s = slot_[id];
    const VertexId moved = ids.back();
    ids[s] = moved;
    terms[s] = terms.back();
    slot_[moved] = s;
    ids.pop_back();
    terms.pop_back();
    --tier.count;
}

void GraphBuilder::regrid(Tier& tier) {
    std::vector<VertexId> members;
    members.reserve(tier.count);
    for (const auto& ids : tier.ids) members.insert(members.end(), ids.begin(), ids.end());
    tier.buckets *= 2;
    tier.ids.assign(tier.buckets, {});
    tier.key_terms.assign(tier.buckets, {});
    // Ascending ids keep the scan order within each bucket reproducible.
    std::sort(members.begin(), members.end());
    for (VertexId id : members) {
        const auto b = bucket_of(tier, positions_[id]);
        bucket_[id] = b;
        slot_[id] = static_cast<std::uint32_t>(tier.ids[b].size());
        tier.ids[b].push_back(id);
        tier.key_terms[b].push_back(key_terms_[id]);
    }
}

template <class Visit>
void GraphBuilder::scan_tier(const Tier& tier, double y, double t, double cutoff, std::uint64_t row, Visit& visit,
                             std::uint64_t& visited) const {
    const double length = geometry_.length;
    const double width = length / tier.buckets;
    const double fmax = tier.fmax;
    const double limit = fmax * cutoff * (1.0 + radius_margin);
    const double slack = gap_slack * length;
    const auto nb = static_cast<std::int64_t>(tier.buckets);

    std::int64_t lo = 0;
    std::int64_t hi = nb - 1;
    if (std::isfinite(limit)) {
        const double radius = limit / t + width;
        if (geometry_.periodic) {
            if (2.0 * radius < length) {
                lo = static_cast<std::int64_t>(std::floor((y - radius) / width));
                hi = static_cast<std::int64_t>(std::floor((y + radius) / width));
                if (hi - lo + 1 >= nb) {
                    lo = 0;
                    hi = nb - 1;
                }
            }
        } else {
            lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((y - radius) / width)));
            hi = std::min<std::int64_t>(nb - 1, static_cast<std::int64_t>(std::floor((y + radius) / width)));
        }
    }

    for (std::int64_t raw = lo; raw <= hi; ++raw) {
        const auto b = static_cast<std::size_t>(((raw % nb) + nb) % nb);
        const auto& terms = tier.key_terms[b];
        if (terms.empty()) continue;
        const double start = static_cast<double>(b) * width;
        double gap;
        if (geometry_.periodic) {
            gap = geometry_.distance(y, start + 0.5 * width) - 0.5 * width;
        } else {
            gap = std::max(start - y, y - (start + width));
        }
        gap = std::max(0.0, gap - slack);
        if (t * gap > limit) continue;

        const auto bound = (*coarse_)(t * gap / fmax);
        visited += terms.size();
        if (bound == 0) continue;
        const auto& ids = tier.ids[b];
        if (hits_.size() < terms.size()) hits_.resize(terms.size());
        const std::size_t found = filter_keys(row, terms.data(), terms.size(), bound, hits_.data());
        for (std::size_t k = 0; k < found; ++k) {
            const std::size_t i = hits_[k];
            const VertexId x = ids[i];
            const double z = t * geometry_.distance(y, positions_[x]) / fvalues_[x];
            const std::uint64_t h = mix64(row + terms[i]);
            // The table bound rejects most hits without evaluating phi.
            visit(x, (h >> 11) < (*coarse_)(z) && unit_open_closed(h) <= phi_(z));
        }
    }
}

template <class Visit>
void GraphBuilder::scan(double y, double t, std::uint64_t row, Visit&& visit, std::uint64_t& visited) const {
    if (mode_.kind == GrowthMode::Kind::exact_naive) {
        const auto n = positions_.size();
        for (std::size_t x = 0; x < n; ++x) {
            const double u = unit_open_closed(mix64(row + key_terms_[x]));
            const double p = phi_(t * geometry_.distance(y, positions_[x]) / fvalues_[x]);
            visit(static_cast<VertexId>(x), u <= p);
        }
        visited += n;
        return;
    }
    for (const auto& tier : tiers_)
        if (tier.count > 0) scan_tier(tier, y, t, cutoff_, row, visit, visited);
}

std::vector<Candidate> GraphBuilder::candidate_scan(double position, double time, std::uint64_t key) const {
    std::vector<Candidate> out;
    std::uint64_t visited = 0;
    const std::uint64_t row = random_.row(key);
    if (mode_.kind == GrowthMode::Kind::exact_naive) {
        scan(position, time, row, [&](VertexId x, bool c) { out.push_back({x, c}); }, visited);
        return out;
    }
    // Report every visited pair, including those rejected by the bucket pre-filter.
    for (const auto& tier : tiers_) {
        if (tier.count == 0) continue;
        std::vector<VertexId> seen;
        const double fmax = tier.fmax;
        const double limit = fmax * cutoff_ * (1.0 + radius_margin);
        for (std::size_t b = 0; b < tier.ids.size(); ++b) {
            const double width = geometry_.length / tier.buckets;
            const double start = static_cast<double>(b) * width;
            double gap = geometry_.periodic ? geometry_.distance(position, start + 0.5 * width) - 0.5 * width
                                            : std::max(start - position, position - (start + width));
            gap = std::max(0.0, gap - gap_slack * geometry_.length);
            if (time * gap > limit) continue;
            seen.insert(seen.end(), tier.ids[b].begin(), tier.ids[b].end());
        }
        for (VertexId x : seen) {
            const double u = unit_open_closed(mix64(row + key_terms_[x]));
            const double p = phi_(time * geometry_.distance(position, positions_[x]) / fvalues_[x]);
            out.push_back({x, u <= p});
        }
    }
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.older < b.older; });
    return out;
}

VertexId GraphBuilder::add(double position, double time, std::uint64_t key) {
    const std::uint64_t row = random_.row(key);
    targets_.clear();
    std::uint64_t visited = 0;
    scan(position, time, row, [this](VertexId x, bool c) {
        if (c) targets_.push_back(x);
    }, visited);
    std::sort(targets_.begin(), targets_.end());

    const VertexId id = graph_.add_vertex(position, time);
    const auto older = static_cast<std::uint64_t>(id);
    audit_.pairs_total += older;
    audit_.pairs_visited += visited;
    audit_.pairs_skipped += older - visited;
    audit_.divergence_bound = static_cast<double>(audit_.pairs_skipped) * audit_.prune_threshold;

    const bool indexed = mode_.kind == GrowthMode::Kind::fast;
    for (VertexId x : targets_) {
        const double fx = f_(++indegrees_[x]);
        fvalues_[x] = fx;
        if (!indexed) continue;
        if (tier_of(fx) != tier_[x]) {
            index_remove(x);
            index_insert(x);
        } else {
            Tier& tier = tiers_[tier_[x]];
            tier.fmax = std::max(tier.fmax, fx);
        }
    }
    graph_.set_out_edges(id, targets_);

    keys_.push_back(key);
    key_terms_.push_back((key + 1) * golden_gamma);
    positions_.push_back(position);
    fvalues_.push_back(f0_);
    indegrees_.push_back(0);
    tier_.push_back(0);
    bucket_.push_back(0);
    slot_.push_back(0);
    if (indexed) index_insert(id);
    return id;
}

Arrival arrival(const PairRandomness& random, std::uint64_t index, double previous_time) {
    const double gap = -std::log1p(-random.uniform(Stream::arrival_gap, index));
    return {previous_time + gap, random.uniform(Stream::arrival_position, index)};
}

GrowthResult grow(const ModelParams& params, GrowthMode mode) {
    const auto report = validate(params.f, params.phi);
    if (!report.ok()) throw InvalidModel(report);
    if (mode.kind == GrowthMode::Kind::fast && !(mode.prune_threshold >= 0.0))
        throw std::invalid_argument("prune threshold must be non-negative");

    GraphBuilder builder(params.f, params.phi, Geometry{1.0, true}, mode, params.seed);
    double now = 0.0;
    if (params.horizon.kind == Horizon::Kind::count) {
        const auto n = static_cast<std::uint64_t>(params.horizon.value);
        for (std::uint64_t i = 0; i < n; ++i) {
            const Arrival a = arrival(builder.randomness(), i, now);
            now = a.time;
            builder.add(a.position, a.time, i);
        }
    } else {
        for (std::uint64_t i = 0;; ++i) {
            const Arrival a = arrival(builder.randomness(), i, now);
            if (a.time > params.horizon.value) break;
            now = a.time;
            builder.add(a.position, a.time, i);
        }
        now = params.horizon.value;
    }
    GrowthResult result;
    result.audit = builder.audit();
    result.graph = builder.release();
    result.final_time = now;
    return result;
}

}  // namespace spa
