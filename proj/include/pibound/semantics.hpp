#ifndef PIBOUND_SEMANTICS_HPP
#define PIBOUND_SEMANTICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pibound/process.hpp"
#include "pibound/typeenv.hpp"

namespace pibound {

/// Annotation of a reduction step: the subject name, plus a marker when the
/// step needed recursive unfolding.
struct ReductionLabel {
    std::string subject;
    bool unfolded = false;

    std::string str() const {
        return unfolded ? "{Rec," + subject + "}" : "{" + subject + "}";
    }
};

using Path = std::vector<int>;
std::string path_str(const Path& path);

/// Positions of the communicating prefix pair (in the unfolded term when
/// unfolding was needed) and the recursion binders that were unfolded.
struct RedexDescription {
    Path input_path;
    Path output_path;
    std::vector<std::string> unfolded_binders;

    std::string str() const;
};

struct Redex {
    ReductionLabel label;
    ProcRef result;
    RedexDescription description;
};

struct TraceStep {
    Redex redex;
    ProcRef after;
};

enum class Policy { Leftmost, Random, Fair };

std::string policy_name(Policy p);

struct Trace {
    ProcRef initial;
    std::vector<TraceStep> steps;
    Policy policy = Policy::Leftmost;
    std::uint64_t seed = 0;

    const ProcRef& state(std::size_t i) const {
        return i == 0 ? initial : steps[i - 1].after;
    }
    std::size_t state_count() const { return steps.size() + 1; }
};

/// A process with one hole at an active position: the hole sits under
/// restrictions and parallel compositions only.
struct UnfoldingContext {
    ProcRef term; // the decomposed process, hole occupant still in place
    Path hole;

    /// The subterm currently filling the hole.
    ProcRef occupant() const;
};

/// Restriction binders above the hole.
std::set<std::string> known_bound_names(const UnfoldingContext& c);

/// The context with its hole filled by p.
ProcRef plug(const UnfoldingContext& c, const ProcRef& p);

/// One context per recursion binder in the active region of p.
std::vector<UnfoldingContext> unfolding_contexts(const ProcRef& p);

/// One result per recursion binder in the active region (not under a prefix
/// or another binder), unfolded with freshened bound names.
std::vector<ProcRef> unfoldings(const ProcRef& p);

/// Every enabled communication, directly or through at most one unfolding per
/// participant. Free recursion variables are inert; callers wanting full
/// behaviour should pass recursion-closed processes.
std::vector<Redex> redexes(const ProcRef& p);

/// Result of the index-th redex; throws std::out_of_range past the end.
ProcRef step(const ProcRef& p, std::size_t index);

Trace run(const ProcRef& p, std::size_t max_steps, Policy policy, std::uint64_t seed = 0);

/// The internal type environment: every restriction-bound name, active or
/// not, mapped to its current annotation. Unannotated restrictions are
/// skipped.
TypeEnv internal_env(const ProcRef& p);

/// One line per step: index, label, redex description, successor.
std::string render_trace(const Trace& trace);

} // namespace pibound

#endif
