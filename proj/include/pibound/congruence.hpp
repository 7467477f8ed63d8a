#ifndef PIBOUND_CONGRUENCE_HPP
#define PIBOUND_CONGRUENCE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "pibound/process.hpp"

namespace pibound {

/// Parallel components of p with Nil components dropped. A non-Par node is
/// its own single component; an all-Nil term yields the empty list.
std::vector<ProcRef> flatten_par(const ProcRef& p);

/// Left-folded parallel composition; the empty list gives Nil.
ProcRef repar(const std::vector<ProcRef>& comps);

/// Congruent term in which every restriction encloses only parallel
/// components that use its name. Superfluous restrictions are dropped.
ProcRef inner_normal_form(const ProcRef& p);

/// Congruent term of shape new x1 .. new xk in P1 where every xi is used and
/// no further restriction in P1 is extrudable. Restriction bodies under
/// prefixes and recursion binders are left in place.
ProcRef outer_normal_form(const ProcRef& p);

/// Drops restrictions binding names that do not occur in their bodies,
/// everywhere in the term. Idempotent.
ProcRef normalize(const ProcRef& p);

/// Maximal number of active nested restrictions. Prefixes hide their bodies;
/// recursion binders are transparent.
std::size_t nest(const ProcRef& p);

/// Upper bound on the depth of p: nest of the inner normal form of the
/// normalized term.
std::size_t depth_estimate(const ProcRef& p);

/// Exact minimum of nest over the congruence class of p, found by
/// breadth-first search over scope rearrangements. Absent when the search
/// exceeds `budget` explored states.
std::optional<std::size_t> depth_oracle(const ProcRef& p, std::size_t budget = 50000);

/// Whether q is reachable from p by the oracle's congruence moves within
/// `budget` explored states. Absent when the budget runs out before either
/// finding q or exhausting the class.
std::optional<bool> congruent_within(const ProcRef& p, const ProcRef& q,
                                     std::size_t budget = 50000);

/// Canonical representative used as a search key: parallel components sorted,
/// Nil components and unused restrictions removed, restriction chains ordered
/// by name.
ProcRef canonical_form(const ProcRef& p);

struct DepthReport {
    std::size_t nest_raw = 0;
    std::size_t depth_estimate = 0;
    std::optional<std::size_t> oracle_depth;
    std::size_t restriction_count_normalized = 0;
};

DepthReport depth_report(const ProcRef& p, std::optional<std::size_t> oracle_budget);

} // namespace pibound

#endif
