#include "pibound/semantics.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <stdexcept>

#include "pibound/printer.hpp"

namespace pibound {

std::string path_str(const Path& path) {
    if (path.empty())
        return "@";
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0)
            out += ".";
        out += std::to_string(path[i]);
    }
    return out;
}

std::string RedexDescription::str() const {
    std::string out = "in=" + path_str(input_path) + " out=" + path_str(output_path);
    if (!unfolded_binders.empty()) {
        out += " unfold=";
        for (std::size_t i = 0; i < unfolded_binders.size(); ++i) {
            if (i > 0)
                out += ",";
            out += unfolded_binders[i];
        }
    }
    return out;
}

std::string policy_name(Policy p) {
    switch (p) {
    case Policy::Leftmost: return "leftmost";
    case Policy::Random: return "random";
    case Policy::Fair: return "fair";
    }
    return "leftmost";
}

namespace {

ProcRef node_at(const ProcRef& p, const Path& path, std::size_t from = 0) {
    if (from == path.size())
        return p;
    int idx = path[from];
    return std::visit(
        overloaded{
            [&](const InputNode& n) { return node_at(n.body, path, from + 1); },
            [&](const OutputNode& n) { return node_at(n.body, path, from + 1); },
            [&](const ParNode& n) {
                return node_at(idx == 0 ? n.left : n.right, path, from + 1);
            },
            [&](const RestrictNode& n) { return node_at(n.body, path, from + 1); },
            [&](const RecNode& n) { return node_at(n.body, path, from + 1); },
            [&](const VarNode&) -> ProcRef {
                throw std::logic_error("bad path into process");
            },
            [&](const NilNode&) -> ProcRef {
                throw std::logic_error("bad path into process");
            },
        },
        p->node());
}

ProcRef replace_at(const ProcRef& p, const Path& path, const ProcRef& replacement,
                   std::size_t from = 0) {
    if (from == path.size())
        return replacement;
    int idx = path[from];
    return std::visit(
        overloaded{
            [&](const InputNode& n) -> ProcRef {
                return input(n.subject, n.object,
                             replace_at(n.body, path, replacement, from + 1));
            },
            [&](const OutputNode& n) -> ProcRef {
                return output(n.subject, n.object,
                              replace_at(n.body, path, replacement, from + 1));
            },
            [&](const ParNode& n) -> ProcRef {
                if (idx == 0)
                    return par(replace_at(n.left, path, replacement, from + 1), n.right);
                return par(n.left, replace_at(n.right, path, replacement, from + 1));
            },
            [&](const RestrictNode& n) -> ProcRef {
                return restrict_(n.name, n.annot,
                                 replace_at(n.body, path, replacement, from + 1));
            },
            [&](const RecNode& n) -> ProcRef {
                return rec(n.var, replace_at(n.body, path, replacement, from + 1));
            },
            [&](const VarNode&) -> ProcRef {
                throw std::logic_error("bad path into process");
            },
            [&](const NilNode&) -> ProcRef {
                throw std::logic_error("bad path into process");
            },
        },
        p->node());
}

struct ActivePrefix {
    Path path;
    bool is_input = false;
    PolarizedName subject;
};

// Prefixes reachable through parallel composition and restriction only.
void collect_active_prefixes(const ProcRef& p, Path path, std::vector<ActivePrefix>& out) {
    std::visit(overloaded{
                   [&](const InputNode& n) {
                       out.push_back({path, true, n.subject});
                   },
                   [&](const OutputNode& n) {
                       out.push_back({path, false, n.subject});
                   },
                   [&](const ParNode& n) {
                       Path l = path;
                       l.push_back(0);
                       collect_active_prefixes(n.left, std::move(l), out);
                       Path r = path;
                       r.push_back(1);
                       collect_active_prefixes(n.right, std::move(r), out);
                   },
                   [&](const RestrictNode& n) {
                       path.push_back(0);
                       collect_active_prefixes(n.body, std::move(path), out);
                   },
                   [&](const RecNode&) {},
                   [&](const VarNode&) {},
                   [&](const NilNode&) {},
               },
               p->node());
}

struct ActiveRec {
    Path path;
    std::string var;
};

void collect_active_recs(const ProcRef& p, Path path, std::vector<ActiveRec>& out) {
    std::visit(overloaded{
                   [&](const InputNode&) {},
                   [&](const OutputNode&) {},
                   [&](const ParNode& n) {
                       Path l = path;
                       l.push_back(0);
                       collect_active_recs(n.left, std::move(l), out);
                       Path r = path;
                       r.push_back(1);
                       collect_active_recs(n.right, std::move(r), out);
                   },
                   [&](const RestrictNode& n) {
                       path.push_back(0);
                       collect_active_recs(n.body, std::move(path), out);
                   },
                   [&](const RecNode& n) { out.push_back({std::move(path), n.var}); },
                   [&](const VarNode&) {},
                   [&](const NilNode&) {},
               },
               p->node());
}

ProcRef unfold_at(const ProcRef& whole, const Path& rec_path) {
    ProcRef node = node_at(whole, rec_path);
    const auto& r = node->as<RecNode>();
    std::set<std::string> used = all_names(whole);
    std::set<std::string> used_vars = all_rec_vars(whole);
    ProcRef unfolded = substitute_recvar(r.body, r.var, node, used, used_vars);
    return replace_at(whole, rec_path, unfolded);
}

bool path_within(const Path& prefix, const Path& path) {
    if (prefix.size() > path.size())
        return false;
    return std::equal(prefix.begin(), prefix.end(), path.begin());
}

// Locates the restriction binding `name`, if any, returning its path.
bool find_binder(const ProcRef& p, const std::string& name, Path& acc, Path& found) {
    bool hit = false;
    std::visit(overloaded{
                   [&](const InputNode& n) {
                       acc.push_back(0);
                       hit = find_binder(n.body, name, acc, found);
                       acc.pop_back();
                   },
                   [&](const OutputNode& n) {
                       acc.push_back(0);
                       hit = find_binder(n.body, name, acc, found);
                       acc.pop_back();
                   },
                   [&](const ParNode& n) {
                       acc.push_back(0);
                       hit = find_binder(n.left, name, acc, found);
                       acc.pop_back();
                       if (!hit) {
                           acc.push_back(1);
                           hit = find_binder(n.right, name, acc, found);
                           acc.pop_back();
                       }
                   },
                   [&](const RestrictNode& n) {
                       if (n.name == name) {
                           found = acc;
                           hit = true;
                           return;
                       }
                       acc.push_back(0);
                       hit = find_binder(n.body, name, acc, found);
                       acc.pop_back();
                   },
                   [&](const RecNode& n) {
                       acc.push_back(0);
                       hit = find_binder(n.body, name, acc, found);
                       acc.pop_back();
                   },
                   [&](const VarNode&) {},
                   [&](const NilNode&) {},
               },
               p->node());
    return hit;
}

// Advances the annotation of the subject's restriction, when it exists, is a
// pair, and has a defined successor.
ProcRef step_subject_annotation(const ProcRef& p, const std::string& subject) {
    Path acc, binder_path;
    if (!find_binder(p, subject, acc, binder_path))
        return p;
    ProcRef node = node_at(p, binder_path);
    const auto& r = node->as<RestrictNode>();
    if (!r.annot)
        return p;
    auto next = type_successor(r.annot);
    if (!next)
        return p;
    return replace_at(p, binder_path, restrict_(r.name, *next, r.body));
}

Path common_prefix(const Path& a, const Path& b) {
    Path out;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i] != b[i])
            break;
        out.push_back(a[i]);
    }
    return out;
}

// After substituting the sent name into the input's continuation, the
// restriction binding it (when any) must cover the input position as well.
// If it does not, it is lifted to the least common ancestor of the two
// prefixes.
ProcRef repair_sent_scope(const ProcRef& p, const std::string& sent, const Path& input_path,
                          const Path& lca) {
    Path acc, binder_path;
    if (!find_binder(p, sent, acc, binder_path))
        return p;
    if (path_within(binder_path, input_path))
        return p;
    ProcRef node = node_at(p, binder_path);
    const auto& r = node->as<RestrictNode>();
    ProcRef without = replace_at(p, binder_path, r.body);
    ProcRef target = node_at(without, lca);
    return replace_at(without, lca, restrict_(r.name, r.annot, target));
}

// Com-Annot at the given prefix positions of t, composed with New-Annot
// annotation stepping and the scope lift for the communicated name.
ProcRef apply_com(const ProcRef& t, const Path& input_path, const Path& output_path) {
    const auto& in_node = node_at(t, input_path)->as<InputNode>();
    const auto& out_node = node_at(t, output_path)->as<OutputNode>();
    ProcRef new_in = substitute_name(in_node.body, in_node.object, out_node.object);
    ProcRef t1 = replace_at(t, input_path, new_in);
    ProcRef t2 = replace_at(t1, output_path, out_node.body);
    ProcRef t3 = step_subject_annotation(t2, in_node.subject.base);
    return repair_sent_scope(t3, out_node.object.base, input_path,
                             common_prefix(input_path, output_path));
}

bool polarities_compatible(Polarity in_pol, Polarity out_pol) {
    return in_pol == dual(out_pol);
}

// All Com pairs of t whose participating prefixes satisfy `admit`.
void com_pairs(const ProcRef& t, const std::function<bool(const Path&, const Path&)>& admit,
               bool unfolded, const std::vector<std::string>& binders,
               std::vector<Redex>& out) {
    std::vector<ActivePrefix> prefixes;
    collect_active_prefixes(t, {}, prefixes);
    for (const auto& in : prefixes) {
        if (!in.is_input)
            continue;
        for (const auto& o : prefixes) {
            if (o.is_input)
                continue;
            if (in.subject.base != o.subject.base)
                continue;
            if (!polarities_compatible(in.subject.pol, o.subject.pol))
                continue;
            if (!admit(in.path, o.path))
                continue;
            Redex r;
            r.label = {in.subject.base, unfolded};
            r.description = {in.path, o.path, binders};
            r.result = apply_com(t, in.path, o.path);
            out.push_back(std::move(r));
        }
    }
}

} // namespace

ProcRef UnfoldingContext::occupant() const {
    return node_at(term, hole);
}

std::set<std::string> known_bound_names(const UnfoldingContext& c) {
    std::set<std::string> out;
    ProcRef cur = c.term;
    for (std::size_t i = 0; i < c.hole.size(); ++i) {
        if (cur->is<RestrictNode>()) {
            out.insert(cur->as<RestrictNode>().name);
            cur = cur->as<RestrictNode>().body;
        } else if (cur->is<ParNode>()) {
            const auto& n = cur->as<ParNode>();
            cur = c.hole[i] == 0 ? n.left : n.right;
        } else {
            throw std::logic_error("hole is not at an active position");
        }
    }
    return out;
}

ProcRef plug(const UnfoldingContext& c, const ProcRef& p) {
    return replace_at(c.term, c.hole, p);
}

std::vector<UnfoldingContext> unfolding_contexts(const ProcRef& p) {
    std::vector<ActiveRec> recs;
    collect_active_recs(p, {}, recs);
    std::vector<UnfoldingContext> out;
    out.reserve(recs.size());
    for (const auto& r : recs)
        out.push_back({p, r.path});
    return out;
}

std::vector<ProcRef> unfoldings(const ProcRef& p) {
    std::vector<ActiveRec> recs;
    collect_active_recs(p, {}, recs);
    std::vector<ProcRef> out;
    out.reserve(recs.size());
    for (const auto& r : recs)
        out.push_back(unfold_at(p, r.path));
    return out;
}

std::vector<Redex> redexes(const ProcRef& p) {
    std::vector<Redex> out;
    com_pairs(p, [](const Path&, const Path&) { return true; }, false, {}, out);

    std::vector<ActiveRec> recs;
    collect_active_recs(p, {}, recs);
    // prefixes each unfolding exposes, used to prune the pair enumeration
    std::vector<std::vector<ActivePrefix>> exposed(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        ProcRef u = unfold_at(p, recs[i].path);
        std::vector<ActivePrefix> prefixes;
        collect_active_prefixes(u, {}, prefixes);
        for (const auto& pre : prefixes)
            if (path_within(recs[i].path, pre.path))
                exposed[i].push_back(pre);
        com_pairs(u,
                  [&](const Path& in, const Path& o) {
                      return path_within(recs[i].path, in) ||
                             path_within(recs[i].path, o);
                  },
                  true, {recs[i].var}, out);
    }
    auto can_synchronize = [](const std::vector<ActivePrefix>& a,
                              const std::vector<ActivePrefix>& b) {
        for (const auto& x : a)
            for (const auto& y : b)
                if (x.is_input != y.is_input && x.subject.base == y.subject.base &&
                    polarities_compatible(x.is_input ? x.subject.pol : y.subject.pol,
                                          x.is_input ? y.subject.pol : x.subject.pol))
                    return true;
        return false;
    };
    for (std::size_t i = 0; i < recs.size(); ++i) {
        for (std::size_t j = i + 1; j < recs.size(); ++j) {
            if (!can_synchronize(exposed[i], exposed[j]))
                continue;
            ProcRef u = unfold_at(unfold_at(p, recs[i].path), recs[j].path);
            com_pairs(u,
                      [&](const Path& in, const Path& o) {
                          bool cross_ij = path_within(recs[i].path, in) &&
                                          path_within(recs[j].path, o);
                          bool cross_ji = path_within(recs[j].path, in) &&
                                          path_within(recs[i].path, o);
                          return cross_ij || cross_ji;
                      },
                      true, {recs[i].var, recs[j].var}, out);
        }
    }
    return out;
}

ProcRef step(const ProcRef& p, std::size_t index) {
    auto rs = redexes(p);
    if (index >= rs.size())
        throw std::out_of_range("step: redex index " + std::to_string(index) +
                                " out of range (have " + std::to_string(rs.size()) + ")");
    return rs[index].result;
}

Trace run(const ProcRef& p, std::size_t max_steps, Policy policy, std::uint64_t seed) {
    Trace trace;
    trace.initial = p;
    trace.policy = policy;
    trace.seed = seed;
    std::mt19937_64 rng(seed);
    ProcRef cur = p;
    for (std::size_t k = 0; k < max_steps; ++k) {
        auto rs = redexes(cur);
        if (rs.empty())
            break;
        std::size_t idx = 0;
        switch (policy) {
        case Policy::Leftmost: idx = 0; break;
        case Policy::Random: idx = static_cast<std::size_t>(rng() % rs.size()); break;
        case Policy::Fair: idx = k % rs.size(); break;
        }
        cur = rs[idx].result;
        trace.steps.push_back({std::move(rs[idx]), cur});
    }
    return trace;
}

TypeEnv internal_env(const ProcRef& p) {
    TypeEnv env;
    std::function<void(const ProcRef&)> walk = [&](const ProcRef& cur) {
        std::visit(overloaded{
                       [&](const InputNode& n) { walk(n.body); },
                       [&](const OutputNode& n) { walk(n.body); },
                       [&](const ParNode& n) {
                           walk(n.left);
                           walk(n.right);
                       },
                       [&](const RestrictNode& n) {
                           if (n.annot)
                               env.bind(eps(n.name), n.annot);
                           walk(n.body);
                       },
                       [&](const RecNode& n) { walk(n.body); },
                       [&](const VarNode&) {},
                       [&](const NilNode&) {},
                   },
                   cur->node());
    };
    walk(p);
    return env;
}

std::string render_trace(const Trace& trace) {
    std::string out;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        out += std::to_string(i) + "\t" + s.redex.label.str() + "\t" +
               s.redex.description.str() + "\t" + print_process(s.after) + "\n";
    }
    return out;
}

} // namespace pibound
