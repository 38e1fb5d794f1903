#pragma once

#include "spa/config.hpp"
#include "spa/growth.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace spa::acceptance {

/// Overrides of the reference workload. Unset fields use each criterion's own value.
/// A run below the reference workload cannot fail: a would-be failure is reported
/// as inconclusive.
struct Budget {
    std::optional<std::uint64_t> vertices;    // graph size for grown runs
    std::optional<std::uint32_t> seeds;       // independent graphs or fields
    std::optional<std::uint64_t> samples;     // chain samples
    std::optional<std::uint32_t> replicates;  // rescaled replicates
    std::uint64_t base_seed = 1;
    unsigned threads = 1;
};

enum class Status { pass, fail, inconclusive };

const char* to_string(Status status) noexcept;

struct CriterionResult {
    std::string id;
    std::string title;
    Status status = Status::fail;
    std::string measured;
    std::string expected;
    double seconds = 0.0;
    bool reduced_budget = false;
    nlohmann::json details = nlohmann::json::object();

    nlohmann::json to_json() const;
};

/// One line: "C1  PASS  degree law  measured=... expected=... (12.3 s)".
std::string format_line(const CriterionResult& result);

struct GrownGraph {
    GrowthResult result;
    double seconds = 0.0;
};

/// Budget plus a cache of grown graphs shared between criteria.
class Context {
public:
    explicit Context(Budget budget = {}) : budget_(budget) {}

    const Budget& budget() const noexcept { return budget_; }

    std::shared_ptr<const GrownGraph> grown(const ModelParams& params, GrowthMode mode = GrowthMode::fast());

    std::uint64_t vertices(std::uint64_t reference) const { return budget_.vertices.value_or(reference); }
    std::uint32_t seeds(std::uint32_t reference) const { return budget_.seeds.value_or(reference); }
    std::uint64_t samples(std::uint64_t reference) const { return budget_.samples.value_or(reference); }
    std::uint32_t replicates(std::uint32_t reference) const { return budget_.replicates.value_or(reference); }
    std::uint64_t seed(std::uint32_t i) const { return budget_.base_seed + i; }

    /// Run fn(i) for i in [0, count) on the budget's worker threads.
    void parallel(std::size_t count, const std::function<void(std::size_t)>& fn) const;

private:
    Budget budget_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const GrownGraph>> cache_;
};

CriterionResult degree_law(Context& ctx);             // C1
CriterionResult power_law_exponent(Context& ctx);     // C2
CriterionResult chain_oracle(Context& ctx);           // C3
CriterionResult generator_oracle(Context& ctx);       // C4
CriterionResult indegree_tail_bound(Context& ctx);    // C5
CriterionResult outdegree_light_tail(Context& ctx);   // C6
CriterionResult clustering_transition(Context& ctx);  // C7
CriterionResult edge_length_exponent(Context& ctx);   // C8
CriterionResult local_convergence(Context& ctx);      // C9
CriterionResult lln_sanity(Context& ctx);             // C10

struct Criterion {
    std::string id;
    std::function<CriterionResult(Context&)> run;
};

const std::vector<Criterion>& criteria();

/// degrees, outdegree, clustering, edge-lengths, bounds, coupling, oracle.
const std::vector<std::string>& suite_names();
/// Criterion ids of a suite; throws std::invalid_argument for an unknown name.
std::vector<std::string> suite_criteria(const std::string& suite);

std::vector<CriterionResult> run_suite(const std::string& suite, Context& ctx);
std::vector<CriterionResult> run_all(Context& ctx);

}  // namespace spa::acceptance
