#include "pibound/congruence.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <string>

#include "pibound/printer.hpp"

namespace pibound {

std::vector<ProcRef> flatten_par(const ProcRef& p) {
    std::vector<ProcRef> out;
    std::function<void(const ProcRef&)> walk = [&](const ProcRef& cur) {
        if (cur->is<ParNode>()) {
            const auto& n = cur->as<ParNode>();
            walk(n.left);
            walk(n.right);
        } else if (!cur->is<NilNode>()) {
            out.push_back(cur);
        }
    };
    walk(p);
    return out;
}

ProcRef repar(const std::vector<ProcRef>& comps) {
    if (comps.empty())
        return nil();
    ProcRef acc = comps.front();
    for (std::size_t i = 1; i < comps.size(); ++i)
        acc = par(acc, comps[i]);
    return acc;
}

namespace {

// Reorders a maximal chain of nested restrictions by name (New-1 swaps).
ProcRef sort_restriction_chain(const ProcRef& p) {
    std::vector<std::pair<std::string, TypeRef>> binders;
    ProcRef core = p;
    while (core->is<RestrictNode>()) {
        const auto& n = core->as<RestrictNode>();
        binders.emplace_back(n.name, n.annot);
        core = n.body;
    }
    std::stable_sort(binders.begin(), binders.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    ProcRef acc = core;
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        acc = restrict_(it->first, it->second, acc);
    return acc;
}

ProcRef inf_walk(const ProcRef& p);

// Pushes nu x over an already inner-normal body, splitting off components
// that do not use x and descending through inner restrictions when that
// shrinks the scope further.
ProcRef inf_restrict(const std::string& x, const TypeRef& annot, const ProcRef& body) {
    auto comps = flatten_par(body);
    if (comps.empty())
        return nil(); // nu x 0 == 0
    std::vector<ProcRef> keep, rest;
    std::vector<bool> kept(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (free_names(comps[i]).count(x)) {
            keep.push_back(comps[i]);
            kept[i] = true;
        } else {
            rest.push_back(comps[i]);
        }
    }
    if (keep.empty())
        return repar(comps); // derived identity: nu x P == P when x unused
    ProcRef unit;
    if (keep.size() == 1 && keep.front()->is<RestrictNode>()) {
        const auto& inner = keep.front()->as<RestrictNode>();
        auto dcomps = flatten_par(inner.body);
        bool splittable = dcomps.size() >= 2 &&
                          std::any_of(dcomps.begin(), dcomps.end(), [&](const ProcRef& d) {
                              return !free_names(d).count(x);
                          });
        if (splittable)
            unit = restrict_(inner.name, inner.annot, inf_restrict(x, annot, inner.body));
        else
            unit = sort_restriction_chain(restrict_(x, annot, keep.front()));
    } else {
        unit = sort_restriction_chain(restrict_(x, annot, repar(keep)));
    }
    std::vector<ProcRef> rebuilt;
    bool placed = false;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (kept[i]) {
            if (!placed) {
                rebuilt.push_back(unit);
                placed = true;
            }
        } else {
            rebuilt.push_back(comps[i]);
        }
    }
    return repar(rebuilt);
}

ProcRef inf_walk(const ProcRef& p) {
    return std::visit(
        overloaded{
            [&](const InputNode& n) -> ProcRef {
                return input(n.subject, n.object, inf_walk(n.body));
            },
            [&](const OutputNode& n) -> ProcRef {
                return output(n.subject, n.object, inf_walk(n.body));
            },
            [&](const ParNode&) -> ProcRef {
                std::vector<ProcRef> comps;
                for (const auto& c : flatten_par(p))
                    comps.push_back(inf_walk(c));
                return repar(comps);
            },
            [&](const RestrictNode& n) -> ProcRef {
                return inf_restrict(n.name, n.annot, inf_walk(n.body));
            },
            [&](const RecNode& n) -> ProcRef { return rec(n.var, inf_walk(n.body)); },
            [&](const VarNode&) -> ProcRef { return p; },
            [&](const NilNode&) -> ProcRef { return p; },
        },
        p->node());
}

} // namespace

ProcRef inner_normal_form(const ProcRef& p) {
    return inf_walk(p);
}

namespace {

void onf_gather(const ProcRef& p, std::vector<std::pair<std::string, TypeRef>>& binders,
                std::vector<ProcRef>& comps) {
    if (p->is<ParNode>()) {
        const auto& n = p->as<ParNode>();
        onf_gather(n.left, binders, comps);
        onf_gather(n.right, binders, comps);
    } else if (p->is<RestrictNode>()) {
        const auto& n = p->as<RestrictNode>();
        std::vector<std::pair<std::string, TypeRef>> inner_binders;
        std::vector<ProcRef> inner_comps;
        onf_gather(n.body, inner_binders, inner_comps);
        bool used = std::any_of(inner_comps.begin(), inner_comps.end(),
                                [&](const ProcRef& c) { return free_names(c).count(n.name); });
        if (used)
            binders.emplace_back(n.name, n.annot);
        binders.insert(binders.end(), inner_binders.begin(), inner_binders.end());
        comps.insert(comps.end(), inner_comps.begin(), inner_comps.end());
    } else if (!p->is<NilNode>()) {
        comps.push_back(p);
    }
}

} // namespace

ProcRef outer_normal_form(const ProcRef& p) {
    std::vector<std::pair<std::string, TypeRef>> binders;
    std::vector<ProcRef> comps;
    onf_gather(p, binders, comps);
    ProcRef core = repar(comps);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        core = restrict_(it->first, it->second, core);
    return core;
}

ProcRef normalize(const ProcRef& p) {
    return std::visit(
        overloaded{
            [&](const InputNode& n) -> ProcRef {
                return input(n.subject, n.object, normalize(n.body));
            },
            [&](const OutputNode& n) -> ProcRef {
                return output(n.subject, n.object, normalize(n.body));
            },
            [&](const ParNode& n) -> ProcRef {
                return par(normalize(n.left), normalize(n.right));
            },
            [&](const RestrictNode& n) -> ProcRef {
                ProcRef body = normalize(n.body);
                if (!free_names(body).count(n.name))
                    return body;
                return restrict_(n.name, n.annot, body);
            },
            [&](const RecNode& n) -> ProcRef { return rec(n.var, normalize(n.body)); },
            [&](const VarNode&) -> ProcRef { return p; },
            [&](const NilNode&) -> ProcRef { return p; },
        },
        p->node());
}

std::size_t nest(const ProcRef& p) {
    return std::visit(
        overloaded{
            [&](const InputNode&) { return std::size_t{0}; },
            [&](const OutputNode&) { return std::size_t{0}; },
            [&](const ParNode& n) { return std::max(nest(n.left), nest(n.right)); },
            [&](const RestrictNode& n) { return 1 + nest(n.body); },
            [&](const RecNode& n) { return nest(n.body); },
            [&](const VarNode&) { return std::size_t{0}; },
            [&](const NilNode&) { return std::size_t{0}; },
        },
        p->node());
}

std::size_t depth_estimate(const ProcRef& p) {
    return nest(inner_normal_form(normalize(p)));
}

// ---- bounded exhaustive search over the congruence class -----------------

namespace {

ProcRef canon_walk(const ProcRef& p) {
    // Scope placement under a prefix never contributes to nest, so prefix
    // bodies are frozen in their inner normal form; only active-region
    // scopes are left for the move relation to explore.
    return std::visit(
        overloaded{
            [&](const InputNode& n) -> ProcRef {
                return input(n.subject, n.object, canon_walk(inf_walk(n.body)));
            },
            [&](const OutputNode& n) -> ProcRef {
                return output(n.subject, n.object, canon_walk(inf_walk(n.body)));
            },
            [&](const ParNode&) -> ProcRef {
                std::vector<ProcRef> comps;
                for (const auto& c : flatten_par(p))
                    comps.push_back(canon_walk(c));
                std::vector<std::pair<std::string, ProcRef>> keyed;
                for (auto& c : comps)
                    if (!c->is<NilNode>())
                        keyed.emplace_back(print_process(c), c);
                std::stable_sort(keyed.begin(), keyed.end(),
                                 [](const auto& a, const auto& b) { return a.first < b.first; });
                std::vector<ProcRef> sorted;
                for (auto& [_, c] : keyed)
                    sorted.push_back(c);
                return repar(sorted);
            },
            [&](const RestrictNode& n) -> ProcRef {
                ProcRef body = canon_walk(n.body);
                if (!free_names(body).count(n.name))
                    return body;
                return sort_restriction_chain(restrict_(n.name, n.annot, body));
            },
            [&](const RecNode& n) -> ProcRef { return rec(n.var, canon_walk(n.body)); },
            [&](const VarNode&) -> ProcRef { return p; },
            [&](const NilNode&) -> ProcRef { return p; },
        },
        p->node());
}

// Successors of a state under scope rearrangement: for every restriction in
// the active region (through par, restriction and recursion bodies), push it
// over the components that use its name, or hoist a component's restriction
// over its siblings.
void scope_moves(const ProcRef& p, const std::function<void(ProcRef)>& emit);

void moves_in_container(const std::vector<ProcRef>& comps,
                        const std::function<ProcRef(std::vector<ProcRef>)>& rebuild,
                        const std::function<void(ProcRef)>& emit) {
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (comps[i]->is<RestrictNode>()) {
            // Work on the whole restriction chain so that a New-1 reorder
            // followed by a scope push counts as a single move.
            std::vector<std::pair<std::string, TypeRef>> chain;
            ProcRef core = comps[i];
            while (core->is<RestrictNode>()) {
                const auto& r = core->as<RestrictNode>();
                chain.emplace_back(r.name, r.annot);
                core = r.body;
            }
            auto inner = flatten_par(core);
            for (std::size_t b = 0; b < chain.size(); ++b) {
                // lower: chain(M) -> chain-minus-z ( nu z (M_z) | M_rest )
                std::vector<ProcRef> keep, rest;
                for (const auto& c : inner) {
                    if (free_names(c).count(chain[b].first))
                        keep.push_back(c);
                    else
                        rest.push_back(c);
                }
                if (rest.empty() || keep.empty())
                    continue;
                std::vector<ProcRef> regrouped;
                regrouped.push_back(restrict_(chain[b].first, chain[b].second, repar(keep)));
                regrouped.insert(regrouped.end(), rest.begin(), rest.end());
                ProcRef unit = repar(regrouped);
                for (std::size_t k = chain.size(); k-- > 0;)
                    if (k != b)
                        unit = restrict_(chain[k].first, chain[k].second, unit);
                std::vector<ProcRef> next = comps;
                next[i] = unit;
                emit(rebuild(std::move(next)));
            }
            // raise: (nu x M) | N -> nu x (M | N)
            if (comps.size() >= 2) {
                const auto& n = comps[i]->as<RestrictNode>();
                std::vector<ProcRef> merged = flatten_par(n.body);
                for (std::size_t j = 0; j < comps.size(); ++j)
                    if (j != i)
                        merged.push_back(comps[j]);
                emit(rebuild({restrict_(n.name, n.annot, repar(merged))}));
            }
        }
        // moves inside the component itself
        std::size_t idx = i;
        scope_moves(comps[i], [&](ProcRef replaced) {
            std::vector<ProcRef> next = comps;
            next[idx] = std::move(replaced);
            emit(rebuild(std::move(next)));
        });
    }
}

void scope_moves(const ProcRef& p, const std::function<void(ProcRef)>& emit) {
    std::visit(overloaded{
                   [&](const InputNode&) {},
                   [&](const OutputNode&) {},
                   [&](const ParNode&) {
                       moves_in_container(flatten_par(p),
                                          [](std::vector<ProcRef> cs) { return repar(cs); },
                                          emit);
                   },
                   [&](const RestrictNode& n) {
                       moves_in_container(
                           flatten_par(n.body),
                           [&](std::vector<ProcRef> cs) {
                               return restrict_(n.name, n.annot, repar(cs));
                           },
                           emit);
                   },
                   [&](const RecNode& n) {
                       moves_in_container(
                           flatten_par(n.body),
                           [&](std::vector<ProcRef> cs) { return rec(n.var, repar(cs)); },
                           emit);
                   },
                   [&](const VarNode&) {},
                   [&](const NilNode&) {},
               },
               p->node());
}

// The outermost restriction spine has no enclosing container, so the root is
// treated as one; every other restriction gets its moves from its parent.
void root_moves(const ProcRef& p, const std::function<void(ProcRef)>& emit) {
    moves_in_container(flatten_par(p),
                       [](std::vector<ProcRef> cs) { return repar(cs); }, emit);
}

struct SearchOutcome {
    std::size_t min_nest = 0;
    bool found_target = false;
    bool exhausted = false; // true when the whole class fit in the budget
};

SearchOutcome class_search(const ProcRef& start, const ProcRef* target,
                           std::size_t budget) {
    SearchOutcome out;
    ProcRef first = canonical_form(start);
    std::string target_key = target ? print_process(canonical_form(*target)) : "";
    std::map<std::string, bool> seen;
    std::deque<ProcRef> queue;
    seen[print_process(first)] = true;
    queue.push_back(first);
    out.min_nest = nest(first);
    if (target && print_process(first) == target_key)
        out.found_target = true;
    std::size_t expanded = 0;
    while (!queue.empty()) {
        if (expanded++ >= budget)
            return out; // exhausted == false
        ProcRef cur = queue.front();
        queue.pop_front();
        root_moves(cur, [&](ProcRef next) {
            ProcRef c = canonical_form(next);
            std::string key = print_process(c);
            if (seen.emplace(key, true).second) {
                out.min_nest = std::min(out.min_nest, nest(c));
                if (target && key == target_key)
                    out.found_target = true;
                queue.push_back(c);
            }
        });
    }
    out.exhausted = true;
    return out;
}

} // namespace

ProcRef canonical_form(const ProcRef& p) {
    return canon_walk(p);
}

std::optional<std::size_t> depth_oracle(const ProcRef& p, std::size_t budget) {
    SearchOutcome out = class_search(p, nullptr, budget);
    if (!out.exhausted)
        return std::nullopt;
    return out.min_nest;
}

std::optional<bool> congruent_within(const ProcRef& p, const ProcRef& q,
                                     std::size_t budget) {
    SearchOutcome out = class_search(p, &q, budget);
    if (out.found_target)
        return true;
    if (out.exhausted)
        return false;
    return std::nullopt;
}

DepthReport depth_report(const ProcRef& p, std::optional<std::size_t> oracle_budget) {
    DepthReport r;
    r.nest_raw = nest(p);
    r.depth_estimate = depth_estimate(p);
    r.restriction_count_normalized = count_restrictions(normalize(p));
    if (oracle_budget)
        r.oracle_depth = depth_oracle(p, *oracle_budget);
    return r;
}

} // namespace pibound
