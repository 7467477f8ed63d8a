#ifndef PIBOUND_ANALYSIS_HPP
#define PIBOUND_ANALYSIS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pibound/checker.hpp"
#include "pibound/congruence.hpp"
#include "pibound/semantics.hpp"
#include "pibound/typeenv.hpp"

namespace pibound {

/// Observation of one step's effect on the subject's type: the annotation (or
/// environment binding) before and after, against the expected successor.
struct FidelityRecord {
    std::size_t step = 0;
    std::string subject;
    bool subject_free = false;
    TypeRef before;            // null when the binding is missing
    TypeRef after;             // null when the binding is missing
    TypeRef expected;          // null when the successor is undefined
    bool match = false;
    bool successor_accepted = false;
};

struct FidelityOptions {
    TypeSystem system = TypeSystem::Depth;
    VarMode mode = VarMode::Lenient;
};

/// Checks every step of the trace: bound subjects against the annotation
/// written into the successor state, free subjects against the evolving
/// environment; re-runs the checker on each successor. Mismatches are
/// reported as data, never thrown.
std::vector<FidelityRecord> fidelity_check(const TypeEnv& env, const Trace& trace,
                                           const FidelityOptions& opts = {});

std::string render_fidelity(const std::vector<FidelityRecord>& records);

struct StateMetrics {
    std::size_t state = 0; // 0 is the initial process
    DepthReport depth;
    std::size_t recs = 0;
    std::size_t max_occupancy = 0; // over bound names in this state
};

struct BoundednessReport {
    std::size_t steps_executed = 0;
    Policy policy = Policy::Leftmost;
    std::uint64_t seed = 0;
    std::vector<StateMetrics> per_state;
    std::size_t max_depth_estimate = 0;
    std::size_t max_restriction_count_normalized = 0;
    /// Per bound name, the largest number of parallel components of its scope
    /// in which it occurs, over all states (inner normal forms).
    std::map<std::string, std::size_t> max_component_occupancy;
    /// The normalized restriction count kept growing through the trace. A
    /// finite trace cannot prove unboundedness; this only flags a witness at
    /// the measured horizon.
    bool restriction_growth_witness = false;
};

BoundednessReport measure(const ProcRef& p, std::size_t max_steps, Policy policy,
                          std::uint64_t seed = 0);

std::string render_measure_text(const BoundednessReport& r);
std::string render_measure_json(const BoundednessReport& r);

/// Parallel-component occupancy of every bound name in the inner normal form
/// of p.
std::map<std::string, std::size_t> component_occupancy(const ProcRef& p);

struct RecsCount {
    std::size_t count = 0;
    std::map<std::string, std::size_t> recv;
};

/// Number of simultaneous recursion instances and the multiset of recursion
/// variable occurrences.
RecsCount recs(const ProcRef& p);

/// Sum of the type depths over the environment and the internal environment
/// of p.
std::size_t depth_budget(const TypeEnv& env, const ProcRef& p);

struct Decomposition {
    ProcRef recursive_part; // carries all recursion instances and restrictions
    ProcRef plain_part;     // restriction-free, recursion-free
    std::size_t recs_recursive = 0;
};

/// Splits p, up to congruence, into a part holding every recursion instance
/// and restriction, and a restriction-free remainder.
Decomposition decompose_normal_form(const ProcRef& p);

/// Parses an environment declaration: one `name : TYPE` binding per line,
/// names may carry a polarity suffix; // comments and blank lines allowed.
TypeEnv parse_env(const std::string& text);

} // namespace pibound

#endif
