#pragma once

#include "spa/analytics.hpp"
#include "spa/graph.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace spa {

/// Normalized histogram over the naturals, or over the non-negative reals.
/// Real samples are kept exactly; `bin_edges` gives the geometric reporting grid
/// (0, 1e-3, then ratio 1.1). An empty sample is the point mass at 0.
class EmpiricalDistribution {
public:
    enum class Support { naturals, reals };

    static EmpiricalDistribution naturals(std::span<const std::uint32_t> values);
    static EmpiricalDistribution naturals(std::span<const std::uint64_t> values);
    static EmpiricalDistribution reals(std::vector<double> values);

    Support support() const noexcept { return support_; }
    std::size_t sample_count() const noexcept { return samples_; }

    /// P{X = k} (naturals) or P{X = x} (reals, exact ties).
    double pmf(double x) const;
    /// P{X <= x}.
    double cdf(double x) const;
    /// P{X >= x}.
    double ccdf(double x) const;
    double mean() const;
    double max_value() const;

    /// pmf over 0..max (naturals) or mass per reporting bin (reals).
    std::vector<double> weights() const;
    std::vector<double> bin_edges() const;
    /// Raw real samples in ascending order (empty on the naturals).
    const std::vector<double>& sorted_samples() const noexcept { return sorted_; }

    /// Pool another sample of the same support.
    void merge(const EmpiricalDistribution& other);

    static constexpr double first_edge = 1e-3;
    static constexpr double edge_ratio = 1.1;

private:
    Support support_ = Support::naturals;
    std::size_t samples_ = 0;
    std::vector<std::uint64_t> counts_;  // naturals
    std::vector<double> sorted_;         // reals
};

EmpiricalDistribution empirical_indegree(const EvolvingGraph& g);
EmpiricalDistribution empirical_outdegree(const EvolvingGraph& g);
/// rescale * torus distance over all edges.
EmpiricalDistribution empirical_edge_lengths(const EvolvingGraph& g, double rescale);

struct Clustering {
    double global = 0.0;
    double average = 0.0;
    /// NaN for vertices of degree below two.
    std::vector<double> local;
    std::uint64_t triangles = 0;
    std::uint64_t open_triangles = 0;
};

Clustering clustering(const EvolvingGraph& g);

/// Triangles through each vertex by merge-join over undirected edges (u < v < w),
/// hashing the neighbourhoods of vertices of degree >= 1024.
std::vector<std::uint64_t> triangles_per_vertex(const EvolvingGraph& g);
/// Triangle count attributing each triangle to its youngest vertex.
std::uint64_t triangles_youngest(const EvolvingGraph& g);

struct TailFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    std::size_t points = 0;
};

/// Least-squares slope of log CCDF against log x at log-spaced points in [lo, hi]
/// (about 20 per decade on the integers, the reporting bin edges on the reals).
TailFit tail_exponent_fit(const EmpiricalDistribution& dist, double lo, double hi);
/// Same on an arbitrary CCDF, sampled at log-spaced integers (or reals) in [lo, hi].
TailFit tail_exponent_fit(const std::function<double(double)>& ccdf, double lo, double hi, bool integers = true);
/// Plain least squares through (log x, log y) for positive y.
TailFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys);

using VertexFunctional = std::function<double(const EvolvingGraph&, VertexId)>;

/// (1/t) sum over vertices of xi.
double lln_average(const EvolvingGraph& g, const VertexFunctional& xi, double t);

namespace functionals {
VertexFunctional one();
VertexFunctional indegree_equals(std::uint32_t j);
/// Open triangles whose tip is the oldest of the three vertices: C(Z_x, 2).
VertexFunctional oldest_tip_open_triangles();
}  // namespace functionals

struct Distances {
    double total_variation = 0.0;
    double kolmogorov_smirnov = 0.0;
};

Distances distance_metrics(const EmpiricalDistribution& p, const EmpiricalDistribution& q);
Distances distance_metrics(const EmpiricalDistribution& p, const AnalyticDegreeLaw& mu);

/// Mergeable (count, sum, sum of squares) accumulator.
struct ReplicateStats {
    std::uint64_t count = 0;
    double sum = 0.0;
    double sumsq = 0.0;

    void add(double x) {
        ++count;
        sum += x;
        sumsq += x * x;
    }
    void merge(const ReplicateStats& o) {
        count += o.count;
        sum += o.sum;
        sumsq += o.sumsq;
    }
    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
    double variance() const {
        if (count < 2) return 0.0;
        const double n = static_cast<double>(count);
        return std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0));
    }
    double stderr_() const { return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

}  // namespace spa
