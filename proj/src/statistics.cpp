#include "spa/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace spa {

// ---------------------------------------------------------------------------
// EmpiricalDistribution
// ---------------------------------------------------------------------------

namespace {

template <class T>
void from_naturals(std::span<const T> values, std::vector<std::uint64_t>& counts) {
    for (T v : values) {
        if (v >= counts.size()) counts.resize(static_cast<std::size_t>(v) + 1, 0);
        ++counts[static_cast<std::size_t>(v)];
    }
}

}  // namespace

EmpiricalDistribution EmpiricalDistribution::naturals(std::span<const std::uint32_t> values) {
    EmpiricalDistribution d;
    from_naturals(values, d.counts_);
    d.samples_ = values.size();
    return d;
}

EmpiricalDistribution EmpiricalDistribution::naturals(std::span<const std::uint64_t> values) {
    EmpiricalDistribution d;
    from_naturals(values, d.counts_);
    d.samples_ = values.size();
    return d;
}

EmpiricalDistribution EmpiricalDistribution::reals(std::vector<double> values) {
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("real samples must be finite and non-negative");
    EmpiricalDistribution d;
    d.support_ = Support::reals;
    d.samples_ = values.size();
    d.sorted_ = std::move(values);
    std::sort(d.sorted_.begin(), d.sorted_.end());
    return d;
}

double EmpiricalDistribution::cdf(double x) const {
    if (samples_ == 0) return x >= 0.0 ? 1.0 : 0.0;
    const double n = static_cast<double>(samples_);
    if (support_ == Support::reals) {
        const auto below = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
        return static_cast<double>(below) / n;
    }
    if (x < 0.0) return 0.0;
    const auto top = std::min<double>(std::floor(x), static_cast<double>(counts_.size()) - 1.0);
    std::uint64_t acc = 0;
    for (std::size_t k = 0; static_cast<double>(k) <= top; ++k) acc += counts_[k];
    return static_cast<double>(acc) / n;
}

double EmpiricalDistribution::ccdf(double x) const {
    if (samples_ == 0) return x <= 0.0 ? 1.0 : 0.0;
    const double n = static_cast<double>(samples_);
    if (support_ == Support::reals) {
        const auto below = std::lower_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
        return static_cast<double>(sorted_.size() - static_cast<std::size_t>(below)) / n;
    }
    const double from = std::max(0.0, std::ceil(x));
    std::uint64_t acc = 0;
    for (std::size_t k = counts_.size(); k > 0 && static_cast<double>(k - 1) >= from; --k) acc += counts_[k - 1];
    return static_cast<double>(acc) / n;
}

double EmpiricalDistribution::pmf(double x) const {
    if (samples_ == 0) return x == 0.0 ? 1.0 : 0.0;
    const double n = static_cast<double>(samples_);
    if (support_ == Support::reals) {
        auto [lo, hi] = std::equal_range(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(hi - lo) / n;
    }
    if (x < 0.0 || x != std::floor(x) || x >= static_cast<double>(counts_.size())) return 0.0;
    return static_cast<double>(counts_[static_cast<std::size_t>(x)]) / n;
}

double EmpiricalDistribution::mean() const {
    if (samples_ == 0) return 0.0;
    double total = 0.0;
    if (support_ == Support::reals) {
        for (double v : sorted_) total += v;
    } else {
        for (std::size_t k = 0; k < counts_.size(); ++k) total += static_cast<double>(k) * static_cast<double>(counts_[k]);
    }
    return total / static_cast<double>(samples_);
}

double EmpiricalDistribution::max_value() const {
    if (samples_ == 0) return 0.0;
    if (support_ == Support::reals) return sorted_.back();
    for (std::size_t k = counts_.size(); k > 0; --k)
        if (counts_[k - 1]) return static_cast<double>(k - 1);
    return 0.0;
}

std::vector<double> EmpiricalDistribution::bin_edges() const {
    if (support_ == Support::naturals) return {};
    std::vector<double> edges{0.0, first_edge};
    const double top = max_value();
    while (edges.back() <= top) edges.push_back(edges.back() * edge_ratio);
    return edges;
}

std::vector<double> EmpiricalDistribution::weights() const {
    if (samples_ == 0) return {1.0};
    const double n = static_cast<double>(samples_);
    std::vector<double> w;
    if (support_ == Support::naturals) {
        const auto top = static_cast<std::size_t>(max_value());
        w.resize(top + 1);
        for (std::size_t k = 0; k <= top; ++k) w[k] = static_cast<double>(counts_[k]) / n;
        return w;
    }
    const auto edges = bin_edges();
    w.assign(edges.size() - 1, 0.0);
    std::size_t bin = 0;
    for (double v : sorted_) {
        while (bin + 2 < edges.size() && v >= edges[bin + 1]) ++bin;
        w[bin] += 1.0 / n;
    }
    return w;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
    if (other.samples_ == 0) return;
    if (samples_ == 0) {
        *this = other;
        return;
    }
    if (support_ != other.support_) throw std::invalid_argument("cannot merge distributions of different support");
    if (support_ == Support::naturals) {
        if (counts_.size() < other.counts_.size()) counts_.resize(other.counts_.size(), 0);
        for (std::size_t k = 0; k < other.counts_.size(); ++k) counts_[k] += other.counts_[k];
    } else {
        std::vector<double> merged;
        merged.reserve(sorted_.size() + other.sorted_.size());
        std::merge(sorted_.begin(), sorted_.end(), other.sorted_.begin(), other.sorted_.end(), std::back_inserter(merged));
        sorted_ = std::move(merged);
    }
    samples_ += other.samples_;
}

EmpiricalDistribution empirical_indegree(const EvolvingGraph& g) {
    std::vector<std::uint32_t> values(g.vertex_count());
    for (VertexId v = 0; v < values.size(); ++v) values[v] = g.indegree(v);
    return EmpiricalDistribution::naturals(std::span<const std::uint32_t>(values));
}

EmpiricalDistribution empirical_outdegree(const EvolvingGraph& g) {
    std::vector<std::uint32_t> values(g.vertex_count());
    for (VertexId v = 0; v < values.size(); ++v) values[v] = g.outdegree(v);
    return EmpiricalDistribution::naturals(std::span<const std::uint32_t>(values));
}

EmpiricalDistribution empirical_edge_lengths(const EvolvingGraph& g, double rescale) {
    if (!(rescale > 0.0)) throw std::invalid_argument("rescale must be positive");
    std::vector<double> lengths;
    lengths.reserve(g.edge_count());
    for (VertexId y = 0; y < g.vertex_count(); ++y)
        for (VertexId x : g.out_neighbors(y)) lengths.push_back(rescale * g.torus_distance(y, x));
    return EmpiricalDistribution::reals(std::move(lengths));
}

// ---------------------------------------------------------------------------
// Clustering
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t hub_degree = 1024;

}  // namespace

std::vector<std::uint64_t> triangles_per_vertex(const EvolvingGraph& g) {
    const auto adj = g.undirected_adjacency();
    const std::size_t n = adj.size();
    std::vector<std::uint64_t> tri(n, 0);
    std::vector<std::unordered_set<VertexId>> hubs(n);
    for (std::size_t v = 0; v < n; ++v)
        if (adj[v].size() >= hub_degree) hubs[v].insert(adj[v].begin(), adj[v].end());

    for (VertexId u = 0; u < n; ++u) {
        const auto& nu = adj[u];
        for (VertexId v : nu) {
            if (v <= u) continue;
            const auto& nv = adj[v];
            // Common neighbours w > v.
            const bool hub_u = !hubs[u].empty();
            const bool hub_v = !hubs[v].empty();
            if (hub_u || hub_v) {
                const auto& scan = hub_u && (!hub_v || nv.size() <= nu.size()) ? nv : nu;
                const auto& set = &scan == &nv ? hubs[u] : hubs[v];
                for (auto it = std::upper_bound(scan.begin(), scan.end(), v); it != scan.end(); ++it) {
                    if (set.count(*it)) {
                        ++tri[u];
                        ++tri[v];
                        ++tri[*it];
                    }
                }
                continue;
            }
            auto a = std::upper_bound(nu.begin(), nu.end(), v);
            auto b = std::upper_bound(nv.begin(), nv.end(), v);
            while (a != nu.end() && b != nv.end()) {
                if (*a < *b) {
                    ++a;
                } else if (*b < *a) {
                    ++b;
                } else {
                    ++tri[u];
                    ++tri[v];
                    ++tri[*a];
                    ++a;
                    ++b;
                }
            }
        }
    }
    return tri;
}

std::uint64_t triangles_youngest(const EvolvingGraph& g) {
    std::uint64_t total = 0;
    for (VertexId y = 0; y < g.vertex_count(); ++y) {
        const auto older = g.out_neighbors(y);
        // Pairs a < b among the older neighbours of y that are linked (b -> a).
        for (VertexId b : older) {
            const auto ob = g.out_neighbors(b);
            auto i = older.begin();
            auto j = ob.begin();
            while (i != older.end() && *i < b && j != ob.end()) {
                if (*i < *j) {
                    ++i;
                } else if (*j < *i) {
                    ++j;
                } else {
                    ++total;
                    ++i;
                    ++j;
                }
            }
        }
    }
    return total;
}

Clustering clustering(const EvolvingGraph& g) {
    Clustering c;
    const auto tri = triangles_per_vertex(g);
    const std::size_t n = g.vertex_count();
    c.local.assign(n, std::numeric_limits<double>::quiet_NaN());
    std::uint64_t through = 0;
    double local_sum = 0.0;
    std::size_t v2 = 0;
    for (VertexId v = 0; v < n; ++v) {
        const std::uint64_t d = g.indegree(v) + g.outdegree(v);
        through += tri[v];
        if (d < 2) continue;
        const std::uint64_t pairs = d * (d - 1) / 2;
        c.open_triangles += pairs;
        c.local[v] = static_cast<double>(tri[v]) / static_cast<double>(pairs);
        local_sum += c.local[v];
        ++v2;
    }
    c.triangles = through / 3;
    c.global = c.open_triangles ? 3.0 * static_cast<double>(c.triangles) / static_cast<double>(c.open_triangles) : 0.0;
    c.average = v2 ? local_sum / static_cast<double>(v2) : 0.0;
    return c;
}

// ---------------------------------------------------------------------------
// Tail fits
// ---------------------------------------------------------------------------

TailFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (!(xs[i] > 0.0 && ys[i] > 0.0)) continue;
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    if (lx.size() < 5) throw std::invalid_argument("tail fit needs at least 5 non-empty CCDF points");
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("tail fit needs distinct abscissae");
    TailFit fit;
    fit.slope = sxy / sxx;
    fit.points = lx.size();
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - my - fit.slope * (lx[i] - mx);
        ssr += r * r;
    }
    fit.stderr_ = std::sqrt(ssr / (n - 2.0) / sxx);
    return fit;
}

namespace {

std::vector<double> log_points(double lo, double hi, bool integers) {
    if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("tail fit range must satisfy 0 < lo < hi");
    std::vector<double> pts;
    const int per_decade = 20;
    const int steps = static_cast<int>(std::floor(per_decade * std::log10(hi / lo) + 1e-9));
    for (int i = 0; i <= steps; ++i) {
        double x = lo * std::pow(10.0, static_cast<double>(i) / per_decade);
        if (integers) x = std::round(x);
        if (x < lo || x > hi) continue;
        if (pts.empty() || x > pts.back()) pts.push_back(x);
    }
    if (integers && pts.back() < hi && std::round(hi) == hi) pts.push_back(hi);
    return pts;
}

}  // namespace

TailFit tail_exponent_fit(const std::function<double(double)>& ccdf, double lo, double hi, bool integers) {
    const auto xs = log_points(lo, hi, integers);
    std::vector<double> ys;
    ys.reserve(xs.size());
    for (double x : xs) ys.push_back(ccdf(x));
    return loglog_fit(xs, ys);
}

TailFit tail_exponent_fit(const EmpiricalDistribution& dist, double lo, double hi) {
    if (dist.support() == EmpiricalDistribution::Support::naturals)
        return tail_exponent_fit([&dist](double x) { return dist.ccdf(x); }, lo, hi, true);
    std::vector<double> xs;
    std::vector<double> ys;
    double edge = EmpiricalDistribution::first_edge;
    while (edge < lo * (1.0 - 1e-12)) edge *= EmpiricalDistribution::edge_ratio;
    for (; edge <= hi * (1.0 + 1e-12); edge *= EmpiricalDistribution::edge_ratio) {
        xs.push_back(edge);
        ys.push_back(dist.ccdf(edge));
    }
    return loglog_fit(xs, ys);
}

// ---------------------------------------------------------------------------
// Averages and distances
// ---------------------------------------------------------------------------

double lln_average(const EvolvingGraph& g, const VertexFunctional& xi, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("normalizer must be positive");
    double total = 0.0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) total += xi(g, v);
    return total / t;
}

namespace functionals {

VertexFunctional one() {
    return [](const EvolvingGraph&, VertexId) { return 1.0; };
}

VertexFunctional indegree_equals(std::uint32_t j) {
    return [j](const EvolvingGraph& g, VertexId v) { return g.indegree(v) == j ? 1.0 : 0.0; };
}

VertexFunctional oldest_tip_open_triangles() {
    return [](const EvolvingGraph& g, VertexId v) {
        const double z = g.indegree(v);
        return z * (z - 1.0) / 2.0;
    };
}

}  // namespace functionals

Distances distance_metrics(const EmpiricalDistribution& p, const EmpiricalDistribution& q) {
    if (p.support() != q.support() && p.sample_count() && q.sample_count())
        throw std::invalid_argument("distributions have different supports");
    Distances d;
    const bool reals = (p.sample_count() ? p.support() : q.support()) == EmpiricalDistribution::Support::reals;
    if (!reals) {
        const auto top = static_cast<std::size_t>(std::max(p.max_value(), q.max_value()));
        double cp = 0.0;
        double cq = 0.0;
        double tv = 0.0;
        for (std::size_t k = 0; k <= top; ++k) {
            const double a = p.pmf(static_cast<double>(k));
            const double b = q.pmf(static_cast<double>(k));
            tv += std::abs(a - b);
            cp += a;
            cq += b;
            d.kolmogorov_smirnov = std::max(d.kolmogorov_smirnov, std::abs(cp - cq));
        }
        d.total_variation = 0.5 * tv;
        return d;
    }
    // Reals: KS over all sample points, TV on the common reporting grid.
    const auto ep = p.bin_edges();
    const auto eq = q.bin_edges();
    const auto& edges = ep.size() >= eq.size() ? ep : eq;
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double hi = std::nextafter(edges[i + 1], 0.0);
        const double lo = std::nextafter(edges[i], 0.0);
        const double mp = p.cdf(hi) - (i == 0 ? 0.0 : p.cdf(lo));
        const double mq = q.cdf(hi) - (i == 0 ? 0.0 : q.cdf(lo));
        tv += std::abs(mp - mq);
    }
    d.total_variation = 0.5 * tv;
    // The CDF gap is maximal right after a jump of either sample.
    const auto& a = p.sorted_samples();
    const auto& b = q.sorted_samples();
    const double na = static_cast<double>(std::max<std::size_t>(a.size(), 1));
    const double nb = static_cast<double>(std::max<std::size_t>(b.size(), 1));
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        const double x = j == b.size() || (i < a.size() && a[i] <= b[j]) ? a[i] : b[j];
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        const double fa = a.empty() ? (x >= 0.0 ? 1.0 : 0.0) : static_cast<double>(i) / na;
        const double fb = b.empty() ? (x >= 0.0 ? 1.0 : 0.0) : static_cast<double>(j) / nb;
        d.kolmogorov_smirnov = std::max(d.kolmogorov_smirnov, std::abs(fa - fb));
    }
    return d;
}

Distances distance_metrics(const EmpiricalDistribution& p, const AnalyticDegreeLaw& mu) {
    if (p.support() != EmpiricalDistribution::Support::naturals && p.sample_count())
        throw std::invalid_argument("degree law comparison needs a distribution on the naturals");
    Distances d;
    const std::size_t K = mu.truncation;
    double tv = 0.0;
    double cp = 0.0;
    double cq = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
        const double a = p.pmf(static_cast<double>(k));
        const double b = mu.weights[k];
        tv += std::abs(a - b);
        cp += a;
        cq += b;
        d.kolmogorov_smirnov = std::max(d.kolmogorov_smirnov, std::abs(cp - cq));
    }
    tv += std::abs((1.0 - cp) - mu.tail_mass);
    d.total_variation = 0.5 * tv;
    return d;
}

}  // namespace spa
