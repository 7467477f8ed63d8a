#include "pibound/process.hpp"

#include <functional>

namespace pibound {

ProcRef nil() {
    static const ProcRef instance = std::make_shared<const Process>(NilNode{});
    return instance;
}
ProcRef pvar(std::string var) {
    return std::make_shared<const Process>(VarNode{std::move(var)});
}
ProcRef input(PolarizedName subject, std::string object, ProcRef body) {
    return std::make_shared<const Process>(
        InputNode{std::move(subject), std::move(object), std::move(body)});
}
ProcRef output(PolarizedName subject, PolarizedName object, ProcRef body) {
    return std::make_shared<const Process>(
        OutputNode{std::move(subject), std::move(object), std::move(body)});
}
ProcRef par(ProcRef left, ProcRef right) {
    return std::make_shared<const Process>(ParNode{std::move(left), std::move(right)});
}
ProcRef restrict_(std::string name, TypeRef annot, ProcRef body) {
    return std::make_shared<const Process>(
        RestrictNode{std::move(name), std::move(annot), std::move(body)});
}
ProcRef rec(std::string var, ProcRef body) {
    return std::make_shared<const Process>(RecNode{std::move(var), std::move(body)});
}

namespace {

void collect_free(const ProcRef& p, std::set<std::string> bound,
                  std::set<PolarizedName>& out) {
    std::visit(
        overloaded{
            [&](const InputNode& n) {
                if (!bound.count(n.subject.base))
                    out.insert(n.subject);
                auto inner = bound;
                inner.insert(n.object);
                collect_free(n.body, std::move(inner), out);
            },
            [&](const OutputNode& n) {
                if (!bound.count(n.subject.base))
                    out.insert(n.subject);
                if (!bound.count(n.object.base))
                    out.insert(n.object);
                collect_free(n.body, std::move(bound), out);
            },
            [&](const ParNode& n) {
                collect_free(n.left, bound, out);
                collect_free(n.right, std::move(bound), out);
            },
            [&](const RestrictNode& n) {
                auto inner = std::move(bound);
                inner.insert(n.name);
                collect_free(n.body, std::move(inner), out);
            },
            [&](const RecNode& n) { collect_free(n.body, std::move(bound), out); },
            [&](const VarNode&) {},
            [&](const NilNode&) {},
        },
        p->node());
}

} // namespace

std::set<PolarizedName> free_polarized_names(const ProcRef& p) {
    std::set<PolarizedName> out;
    collect_free(p, {}, out);
    return out;
}

std::set<std::string> free_names(const ProcRef& p) {
    std::set<std::string> out;
    for (const auto& pn : free_polarized_names(p))
        out.insert(pn.base);
    return out;
}

std::set<std::string> bound_names(const ProcRef& p) {
    std::set<std::string> out;
    std::visit(overloaded{
                   [&](const InputNode& n) {
                       out.insert(n.object);
                       auto inner = bound_names(n.body);
                       out.insert(inner.begin(), inner.end());
                   },
                   [&](const OutputNode& n) {
                       auto inner = bound_names(n.body);
                       out.insert(inner.begin(), inner.end());
                   },
                   [&](const ParNode& n) {
                       auto l = bound_names(n.left);
                       auto r = bound_names(n.right);
                       out.insert(l.begin(), l.end());
                       out.insert(r.begin(), r.end());
                   },
                   [&](const RestrictNode& n) {
                       out.insert(n.name);
                       auto inner = bound_names(n.body);
                       out.insert(inner.begin(), inner.end());
                   },
                   [&](const RecNode& n) { out = bound_names(n.body); },
                   [&](const VarNode&) {},
                   [&](const NilNode&) {},
               },
               p->node());
    return out;
}

std::set<std::string> all_names(const ProcRef& p) {
    auto out = free_names(p);
    auto bn = bound_names(p);
    out.insert(bn.begin(), bn.end());
    return out;
}

std::set<std::string> all_rec_vars(const ProcRef& p) {
    std::set<std::string> out;
    std::visit(overloaded{
                   [&](const InputNode& n) { out = all_rec_vars(n.body); },
                   [&](const OutputNode& n) { out = all_rec_vars(n.body); },
                   [&](const ParNode& n) {
                       out = all_rec_vars(n.left);
                       auto r = all_rec_vars(n.right);
                       out.insert(r.begin(), r.end());
                   },
                   [&](const RestrictNode& n) { out = all_rec_vars(n.body); },
                   [&](const RecNode& n) {
                       out = all_rec_vars(n.body);
                       out.insert(n.var);
                   },
                   [&](const VarNode& n) { out.insert(n.var); },
                   [&](const NilNode&) {},
               },
               p->node());
    return out;
}

namespace {

void collect_free_vars(const ProcRef& p, std::set<std::string> bound,
                       std::set<std::string>& out) {
    std::visit(overloaded{
                   [&](const InputNode& n) { collect_free_vars(n.body, std::move(bound), out); },
                   [&](const OutputNode& n) { collect_free_vars(n.body, std::move(bound), out); },
                   [&](const ParNode& n) {
                       collect_free_vars(n.left, bound, out);
                       collect_free_vars(n.right, std::move(bound), out);
                   },
                   [&](const RestrictNode& n) { collect_free_vars(n.body, std::move(bound), out); },
                   [&](const RecNode& n) {
                       auto inner = std::move(bound);
                       inner.insert(n.var);
                       collect_free_vars(n.body, std::move(inner), out);
                   },
                   [&](const VarNode& n) {
                       if (!bound.count(n.var))
                           out.insert(n.var);
                   },
                   [&](const NilNode&) {},
               },
               p->node());
}

// Renames bound names per `renaming` and substitutes subst_from -> subst_to
// at free occurrences. Binders clashing with `avoid` are freshened against
// `used`.
ProcRef rewrite_names(const ProcRef& p, std::map<std::string, std::string> renaming,
                      const std::string* subst_from, const PolarizedName* subst_to,
                      const std::set<std::string>& avoid, std::set<std::string>& used) {
    auto apply = [&](const PolarizedName& pn) -> PolarizedName {
        auto it = renaming.find(pn.base);
        if (it != renaming.end())
            return PolarizedName{it->second, pn.pol};
        if (subst_from && pn.base == *subst_from)
            return *subst_to;
        return pn;
    };
    auto rebind = [&](const std::string& binder,
                      std::map<std::string, std::string>& map) -> std::string {
        if (avoid.count(binder)) {
            std::string fresh = fresh_name(binder, used);
            map[binder] = fresh;
            return fresh;
        }
        map.erase(binder); // shadowing stops an outer renaming
        return binder;
    };
    return std::visit(
        overloaded{
            [&](const InputNode& n) -> ProcRef {
                auto subject = apply(n.subject);
                auto inner = renaming;
                // the binder shadows the substituted name as well
                if (subst_from && n.object == *subst_from) {
                    auto obj = rebind(n.object, inner);
                    return input(subject, obj,
                                 rewrite_names(n.body, std::move(inner), nullptr, nullptr,
                                               avoid, used));
                }
                auto obj = rebind(n.object, inner);
                return input(subject, obj,
                             rewrite_names(n.body, std::move(inner), subst_from, subst_to,
                                           avoid, used));
            },
            [&](const OutputNode& n) -> ProcRef {
                return output(apply(n.subject), apply(n.object),
                              rewrite_names(n.body, renaming, subst_from, subst_to, avoid,
                                            used));
            },
            [&](const ParNode& n) -> ProcRef {
                return par(rewrite_names(n.left, renaming, subst_from, subst_to, avoid, used),
                           rewrite_names(n.right, renaming, subst_from, subst_to, avoid,
                                         used));
            },
            [&](const RestrictNode& n) -> ProcRef {
                auto inner = renaming;
                if (subst_from && n.name == *subst_from) {
                    auto name = rebind(n.name, inner);
                    return restrict_(name, n.annot,
                                     rewrite_names(n.body, std::move(inner), nullptr,
                                                   nullptr, avoid, used));
                }
                auto name = rebind(n.name, inner);
                return restrict_(name, n.annot,
                                 rewrite_names(n.body, std::move(inner), subst_from,
                                               subst_to, avoid, used));
            },
            [&](const RecNode& n) -> ProcRef {
                return rec(n.var, rewrite_names(n.body, renaming, subst_from, subst_to,
                                                avoid, used));
            },
            [&](const VarNode&) -> ProcRef { return p; },
            [&](const NilNode&) -> ProcRef { return p; },
        },
        p->node());
}

} // namespace

std::set<std::string> free_rec_vars(const ProcRef& p) {
    std::set<std::string> out;
    collect_free_vars(p, {}, out);
    return out;
}

ProcRef substitute_name(const ProcRef& p, const std::string& x, const PolarizedName& y) {
    if (!free_names(p).count(x))
        return p;
    std::set<std::string> used = all_names(p);
    used.insert(x);
    used.insert(y.base);
    // only binders equal to the incoming name can capture
    std::set<std::string> avoid{y.base};
    return rewrite_names(p, {}, &x, &y, avoid, used);
}

namespace {

// Copy of q with every bound name and every recursion binder freshened
// against the given used sets.
ProcRef freshened_copy(const ProcRef& q, std::set<std::string>& used,
                       std::set<std::string>& used_vars,
                       std::map<std::string, std::string> name_map,
                       std::map<std::string, std::string> var_map) {
    auto apply = [&](const PolarizedName& pn) -> PolarizedName {
        auto it = name_map.find(pn.base);
        return it == name_map.end() ? pn : PolarizedName{it->second, pn.pol};
    };
    return std::visit(
        overloaded{
            [&](const InputNode& n) -> ProcRef {
                auto inner = name_map;
                inner[n.object] = fresh_name(n.object, used);
                auto obj = inner[n.object];
                return input(apply(n.subject), obj,
                             freshened_copy(n.body, used, used_vars, std::move(inner),
                                            var_map));
            },
            [&](const OutputNode& n) -> ProcRef {
                return output(apply(n.subject), apply(n.object),
                              freshened_copy(n.body, used, used_vars, name_map, var_map));
            },
            [&](const ParNode& n) -> ProcRef {
                return par(freshened_copy(n.left, used, used_vars, name_map, var_map),
                           freshened_copy(n.right, used, used_vars, name_map, var_map));
            },
            [&](const RestrictNode& n) -> ProcRef {
                auto inner = name_map;
                inner[n.name] = fresh_name(n.name, used);
                auto name = inner[n.name];
                return restrict_(name, n.annot,
                                 freshened_copy(n.body, used, used_vars, std::move(inner),
                                                var_map));
            },
            [&](const RecNode& n) -> ProcRef {
                auto inner = var_map;
                inner[n.var] = fresh_name(n.var, used_vars);
                auto var = inner[n.var];
                return rec(var, freshened_copy(n.body, used, used_vars, name_map,
                                               std::move(inner)));
            },
            [&](const VarNode& n) -> ProcRef {
                auto it = var_map.find(n.var);
                return it == var_map.end() ? q : pvar(it->second);
            },
            [&](const NilNode&) -> ProcRef { return q; },
        },
        q->node());
}

ProcRef subst_recvar_walk(const ProcRef& p, const std::string& var, const ProcRef& q,
                          std::set<std::string>& used, std::set<std::string>& used_vars) {
    return std::visit(
        overloaded{
            [&](const InputNode& n) -> ProcRef {
                return input(n.subject, n.object,
                             subst_recvar_walk(n.body, var, q, used, used_vars));
            },
            [&](const OutputNode& n) -> ProcRef {
                return output(n.subject, n.object,
                              subst_recvar_walk(n.body, var, q, used, used_vars));
            },
            [&](const ParNode& n) -> ProcRef {
                return par(subst_recvar_walk(n.left, var, q, used, used_vars),
                           subst_recvar_walk(n.right, var, q, used, used_vars));
            },
            [&](const RestrictNode& n) -> ProcRef {
                return restrict_(n.name, n.annot,
                                 subst_recvar_walk(n.body, var, q, used, used_vars));
            },
            [&](const RecNode& n) -> ProcRef {
                if (n.var == var)
                    return p; // shadowed
                return rec(n.var, subst_recvar_walk(n.body, var, q, used, used_vars));
            },
            [&](const VarNode& n) -> ProcRef {
                if (n.var != var)
                    return p;
                return freshened_copy(q, used, used_vars, {}, {});
            },
            [&](const NilNode&) -> ProcRef { return p; },
        },
        p->node());
}

} // namespace

ProcRef substitute_recvar(const ProcRef& p, const std::string& var, const ProcRef& q,
                          std::set<std::string>& used, std::set<std::string>& used_vars) {
    return subst_recvar_walk(p, var, q, used, used_vars);
}

ProcRef substitute_recvar(const ProcRef& p, const std::string& var, const ProcRef& q) {
    std::set<std::string> used = all_names(p);
    auto qn = all_names(q);
    used.insert(qn.begin(), qn.end());
    std::set<std::string> used_vars = all_rec_vars(p);
    auto qv = all_rec_vars(q);
    used_vars.insert(qv.begin(), qv.end());
    return subst_recvar_walk(p, var, q, used, used_vars);
}

namespace {

bool closed_walk(const ProcRef& p, std::set<std::string>& binders,
                 std::set<std::string> in_scope) {
    return std::visit(
        overloaded{
            [&](const InputNode& n) { return closed_walk(n.body, binders, std::move(in_scope)); },
            [&](const OutputNode& n) { return closed_walk(n.body, binders, std::move(in_scope)); },
            [&](const ParNode& n) {
                return closed_walk(n.left, binders, in_scope) &&
                       closed_walk(n.right, binders, std::move(in_scope));
            },
            [&](const RestrictNode& n) { return closed_walk(n.body, binders, std::move(in_scope)); },
            [&](const RecNode& n) {
                if (binders.count(n.var))
                    return false; // duplicate binder
                binders.insert(n.var);
                auto inner = std::move(in_scope);
                inner.insert(n.var);
                return closed_walk(n.body, binders, std::move(inner));
            },
            [&](const VarNode& n) { return in_scope.count(n.var) > 0; },
            [&](const NilNode&) { return true; },
        },
        p->node());
}

// True when every occurrence of `var` in p sits under at least one prefix.
bool occurrences_guarded(const ProcRef& p, const std::string& var, bool under_prefix) {
    return std::visit(
        overloaded{
            [&](const InputNode& n) { return occurrences_guarded(n.body, var, true); },
            [&](const OutputNode& n) { return occurrences_guarded(n.body, var, true); },
            [&](const ParNode& n) {
                return occurrences_guarded(n.left, var, under_prefix) &&
                       occurrences_guarded(n.right, var, under_prefix);
            },
            [&](const RestrictNode& n) {
                return occurrences_guarded(n.body, var, under_prefix);
            },
            [&](const RecNode& n) {
                if (n.var == var)
                    return true; // shadowed
                return occurrences_guarded(n.body, var, under_prefix);
            },
            [&](const VarNode& n) { return n.var != var || under_prefix; },
            [&](const NilNode&) { return true; },
        },
        p->node());
}

} // namespace

bool is_recursion_closed(const ProcRef& p) {
    std::set<std::string> binders;
    return closed_walk(p, binders, {});
}

bool rec_body_guards(const ProcRef& body, const std::string& var) {
    return occurrences_guarded(body, var, false);
}

bool is_guarded(const ProcRef& p) {
    return std::visit(
        overloaded{
            [&](const InputNode& n) { return is_guarded(n.body); },
            [&](const OutputNode& n) { return is_guarded(n.body); },
            [&](const ParNode& n) { return is_guarded(n.left) && is_guarded(n.right); },
            [&](const RestrictNode& n) { return is_guarded(n.body); },
            [&](const RecNode& n) {
                return occurrences_guarded(n.body, n.var, false) && is_guarded(n.body);
            },
            [&](const VarNode&) { return true; },
            [&](const NilNode&) { return true; },
        },
        p->node());
}

namespace {

bool distinct_walk(const ProcRef& p, std::set<std::string>& seen,
                   const std::set<std::string>& free) {
    auto check = [&](const std::string& binder, const ProcRef& body) {
        if (seen.count(binder) || free.count(binder))
            return false;
        seen.insert(binder);
        return distinct_walk(body, seen, free);
    };
    return std::visit(
        overloaded{
            [&](const InputNode& n) { return check(n.object, n.body); },
            [&](const OutputNode& n) { return distinct_walk(n.body, seen, free); },
            [&](const ParNode& n) {
                return distinct_walk(n.left, seen, free) && distinct_walk(n.right, seen, free);
            },
            [&](const RestrictNode& n) { return check(n.name, n.body); },
            [&](const RecNode& n) { return distinct_walk(n.body, seen, free); },
            [&](const VarNode&) { return true; },
            [&](const NilNode&) { return true; },
        },
        p->node());
}

ProcRef freshen_walk(const ProcRef& p, std::map<std::string, std::string> renaming,
                     std::set<std::string>& used) {
    auto apply = [&](const PolarizedName& pn) -> PolarizedName {
        auto it = renaming.find(pn.base);
        return it == renaming.end() ? pn : PolarizedName{it->second, pn.pol};
    };
    return std::visit(
        overloaded{
            [&](const InputNode& n) -> ProcRef {
                auto inner = renaming;
                inner[n.object] = fresh_name(n.object, used);
                auto obj = inner[n.object];
                return input(apply(n.subject), obj, freshen_walk(n.body, std::move(inner), used));
            },
            [&](const OutputNode& n) -> ProcRef {
                return output(apply(n.subject), apply(n.object),
                              freshen_walk(n.body, renaming, used));
            },
            [&](const ParNode& n) -> ProcRef {
                return par(freshen_walk(n.left, renaming, used),
                           freshen_walk(n.right, renaming, used));
            },
            [&](const RestrictNode& n) -> ProcRef {
                auto inner = renaming;
                inner[n.name] = fresh_name(n.name, used);
                auto name = inner[n.name];
                return restrict_(name, n.annot, freshen_walk(n.body, std::move(inner), used));
            },
            [&](const RecNode& n) -> ProcRef {
                return rec(n.var, freshen_walk(n.body, renaming, used));
            },
            [&](const VarNode&) -> ProcRef { return p; },
            [&](const NilNode&) -> ProcRef { return p; },
        },
        p->node());
}

} // namespace

bool has_distinct_bound_names(const ProcRef& p) {
    std::set<std::string> seen;
    return distinct_walk(p, seen, free_names(p));
}

ProcRef freshen_apart(const ProcRef& p) {
    if (has_distinct_bound_names(p))
        return p;
    std::set<std::string> used = free_names(p);
    return freshen_walk(p, {}, used);
}

std::size_t count_rec_nodes(const ProcRef& p) {
    return std::visit(
        overloaded{
            [&](const InputNode& n) { return count_rec_nodes(n.body); },
            [&](const OutputNode& n) { return count_rec_nodes(n.body); },
            [&](const ParNode& n) {
                return count_rec_nodes(n.left) + count_rec_nodes(n.right);
            },
            [&](const RestrictNode& n) { return count_rec_nodes(n.body); },
            [&](const RecNode& n) { return count_rec_nodes(n.body) + 1; },
            [&](const VarNode&) { return std::size_t{0}; },
            [&](const NilNode&) { return std::size_t{0}; },
        },
        p->node());
}

std::size_t count_restrictions(const ProcRef& p) {
    return std::visit(
        overloaded{
            [&](const InputNode& n) { return count_restrictions(n.body); },
            [&](const OutputNode& n) { return count_restrictions(n.body); },
            [&](const ParNode& n) {
                return count_restrictions(n.left) + count_restrictions(n.right);
            },
            [&](const RestrictNode& n) { return count_restrictions(n.body) + 1; },
            [&](const RecNode& n) { return count_restrictions(n.body); },
            [&](const VarNode&) { return std::size_t{0}; },
            [&](const NilNode&) { return std::size_t{0}; },
        },
        p->node());
}

std::map<std::string, std::size_t> rec_var_occurrences(const ProcRef& p) {
    std::map<std::string, std::size_t> out;
    std::function<void(const ProcRef&)> walk = [&](const ProcRef& cur) {
        std::visit(overloaded{
                       [&](const InputNode& n) { walk(n.body); },
                       [&](const OutputNode& n) { walk(n.body); },
                       [&](const ParNode& n) {
                           walk(n.left);
                           walk(n.right);
                       },
                       [&](const RestrictNode& n) { walk(n.body); },
                       [&](const RecNode& n) { walk(n.body); },
                       [&](const VarNode& n) { ++out[n.var]; },
                       [&](const NilNode&) {},
                   },
                   cur->node());
    };
    walk(p);
    return out;
}

namespace {

using Renaming = std::map<std::string, std::string>;

bool alpha_walk(const ProcRef& a, const ProcRef& b, Renaming names, Renaming vars) {
    auto name_match = [&](const PolarizedName& x, const PolarizedName& y) {
        if (x.pol != y.pol)
            return false;
        auto it = names.find(x.base);
        return it == names.end() ? x.base == y.base : it->second == y.base;
    };
    if (a->node().index() != b->node().index())
        return false;
    return std::visit(
        overloaded{
            [&](const InputNode& n) {
                const auto& m = b->as<InputNode>();
                if (!name_match(n.subject, m.subject))
                    return false;
                names[n.object] = m.object;
                return alpha_walk(n.body, m.body, std::move(names), std::move(vars));
            },
            [&](const OutputNode& n) {
                const auto& m = b->as<OutputNode>();
                return name_match(n.subject, m.subject) && name_match(n.object, m.object) &&
                       alpha_walk(n.body, m.body, std::move(names), std::move(vars));
            },
            [&](const ParNode& n) {
                const auto& m = b->as<ParNode>();
                return alpha_walk(n.left, m.left, names, vars) &&
                       alpha_walk(n.right, m.right, std::move(names), std::move(vars));
            },
            [&](const RestrictNode& n) {
                const auto& m = b->as<RestrictNode>();
                bool annots_match = (n.annot == nullptr) == (m.annot == nullptr) &&
                                    (n.annot == nullptr || type_equal(n.annot, m.annot));
                if (!annots_match)
                    return false;
                names[n.name] = m.name;
                return alpha_walk(n.body, m.body, std::move(names), std::move(vars));
            },
            [&](const RecNode& n) {
                const auto& m = b->as<RecNode>();
                vars[n.var] = m.var;
                return alpha_walk(n.body, m.body, std::move(names), std::move(vars));
            },
            [&](const VarNode& n) {
                const auto& m = b->as<VarNode>();
                auto it = vars.find(n.var);
                return it == vars.end() ? n.var == m.var : it->second == m.var;
            },
            [&](const NilNode&) { return true; },
        },
        a->node());
}

} // namespace

bool alpha_equal(const ProcRef& a, const ProcRef& b) {
    return alpha_walk(a, b, {}, {});
}

bool proc_equal(const ProcRef& a, const ProcRef& b) {
    if (a == b)
        return true;
    if (a->node().index() != b->node().index())
        return false;
    return std::visit(
        overloaded{
            [&](const InputNode& n) {
                const auto& m = b->as<InputNode>();
                return n.subject == m.subject && n.object == m.object &&
                       proc_equal(n.body, m.body);
            },
            [&](const OutputNode& n) {
                const auto& m = b->as<OutputNode>();
                return n.subject == m.subject && n.object == m.object &&
                       proc_equal(n.body, m.body);
            },
            [&](const ParNode& n) {
                const auto& m = b->as<ParNode>();
                return proc_equal(n.left, m.left) && proc_equal(n.right, m.right);
            },
            [&](const RestrictNode& n) {
                const auto& m = b->as<RestrictNode>();
                bool annots_match = (n.annot == nullptr) == (m.annot == nullptr) &&
                                    (n.annot == nullptr || type_equal(n.annot, m.annot));
                return n.name == m.name && annots_match && proc_equal(n.body, m.body);
            },
            [&](const RecNode& n) {
                const auto& m = b->as<RecNode>();
                return n.var == m.var && proc_equal(n.body, m.body);
            },
            [&](const VarNode& n) { return n.var == b->as<VarNode>().var; },
            [&](const NilNode&) { return true; },
        },
        a->node());
}

} // namespace pibound
