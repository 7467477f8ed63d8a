#include "pibound/checker.hpp"

#include "pibound/printer.hpp"

namespace pibound {

std::string CheckError::message() const {
    std::string out = "cannot type: " + print_process(subterm);
    for (const auto& a : attempts)
        out += "\n  rule " + a.rule + ": " + a.violation;
    return out;
}

namespace {

struct Checker {
    TypeSystem system;
    VarMode mode;

    CheckResult fail(const ProcRef& p, std::vector<RuleAttempt> attempts) const {
        return CheckError{p, std::move(attempts)};
    }

    Derivation node(std::string rule, const TypeEnv& env, const RecEnv& recenv,
                    const ProcRef& p, std::vector<Derivation> premises = {},
                    std::vector<std::string> notes = {}) const {
        return Derivation{std::move(rule), env,      recenv,
                          p,               std::move(premises), std::move(notes)};
    }

    CheckResult check(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p) const {
        return std::visit(
            overloaded{
                [&](const InputNode& n) { return check_input(env, recenv, p, n); },
                [&](const OutputNode& n) { return check_output(env, recenv, p, n); },
                [&](const ParNode& n) { return check_par(env, recenv, p, n); },
                [&](const RestrictNode& n) { return check_restrict(env, recenv, p, n); },
                [&](const RecNode& n) { return check_rec(env, recenv, p, n); },
                [&](const VarNode& n) { return check_var(env, recenv, p, n); },
                [&](const NilNode&) { return check_nil(env, recenv, p); },
            },
            p->node());
    }

    CheckResult check_nil(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p) const {
        for (const auto& [name, t] : env.bindings()) {
            if (!type_is_unlimited(t))
                return fail(p, {{"Nil", "environment is not unlimited: " + name.str() +
                                            " : " + to_string(t)}});
        }
        return node("Nil", env, recenv, p, {}, {"environment unlimited"});
    }

    CheckResult check_var(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p,
                          const VarNode& n) const {
        const TypeEnv* bound = recenv.lookup(n.var);
        if (!bound)
            return fail(p, {{"Var", "recursion variable " + n.var +
                                        " has no binding in the recursion environment"}});
        for (const auto& [name, t] : env.bindings()) {
            if (mode == VarMode::Lenient && type_is_terminal(t))
                continue;
            if (!bound->contains(name))
                return fail(p, {{"Var", "name " + name.str() + " : " + to_string(t) +
                                            " is not in the environment bound to " +
                                            n.var}});
        }
        if (!env_predicates(lin_part(env)).terminal)
            return fail(p, {{"Var", "linear part of the environment is not terminal"}});
        return node("Var", env, recenv, p, {},
                    {"domain included in env of " + n.var, "linear part terminal"});
    }

    CheckResult check_input(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p,
                            const InputNode& n) const {
        const TypeRef* subject = env.lookup(n.subject);
        if (!subject)
            return fail(p, {{"In-1", "subject " + n.subject.str() + " is not bound"},
                            {"In-2", "subject " + n.subject.str() + " is not bound"}});
        const TypeRef& st = *subject;
        if (st->kind() == Type::Kind::Endpoint) {
            const EndpointRef& s = st->endpoint();
            if (s->kind() != EndpointType::Kind::In)
                return fail(p, {{"In-1", "subject " + n.subject.str() + " has type " +
                                             to_string(st) +
                                             ", which does not start with an input"}});
            const TypeRef& payload = s->payload();
            if (type_is_terminal(payload) && payload->kind() == Type::Kind::Endpoint)
                return fail(p, {{"In-1", "object type must differ from end"}});
            if (env.contains(eps(n.object)))
                return fail(p, {{"In-1", "object " + n.object + " shadows a binding"}});
            TypeEnv premise = env.with_replaced(n.subject, ty_endpoint(s->cont()))
                                  .with_binding(eps(n.object), payload);
            auto sub = check(premise, recenv, n.body);
            if (!accepted(sub))
                return sub;
            return node("In-1", env, recenv, p, {derivation(sub)}, {"object type not end"});
        }
        if (st->kind() == Type::Kind::Chan) {
            const TypeRef& payload = st->payload();
            if (type_is_terminal(payload) && payload->kind() == Type::Kind::Endpoint)
                return fail(p, {{"In-2", "object type must differ from end"}});
            if (env.contains(eps(n.object)))
                return fail(p, {{"In-2", "object " + n.object + " shadows a binding"}});
            TypeEnv premise = env.with_binding(eps(n.object), payload);
            auto sub = check(premise, recenv, n.body);
            if (!accepted(sub))
                return sub;
            return node("In-2", env, recenv, p, {derivation(sub)}, {"object type not end"});
        }
        return fail(p, {{"In-1", "subject " + n.subject.str() +
                                     " is bound to a pair; sessions are used through "
                                     "their polarized endpoints"}});
    }

    CheckResult check_output(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p,
                             const OutputNode& n) const {
        const TypeRef* subject = env.lookup(n.subject);
        if (!subject)
            return fail(p, {{"Out-1", "subject " + n.subject.str() + " is not bound"},
                            {"Out-2", "subject " + n.subject.str() + " is not bound"}});
        const TypeRef& st = *subject;
        if (st->kind() == Type::Kind::Endpoint) {
            const EndpointRef& s = st->endpoint();
            if (s->kind() != EndpointType::Kind::Out)
                return fail(p, {{"Out-1", "subject " + n.subject.str() + " has type " +
                                              to_string(st) +
                                              ", which does not start with an output"}});
            const TypeRef& payload = s->payload();
            if (type_is_terminal(payload) && payload->kind() == Type::Kind::Endpoint)
                return fail(p, {{"Out-1", "object type must differ from end"}});
            const TypeRef* obj = env.lookup(n.object);
            if (!obj)
                return fail(p, {{"Out-1", "object " + n.object.str() + " is not bound"}});
            if (!type_equal(*obj, payload))
                return fail(p, {{"Out-1", "object " + n.object.str() + " has type " +
                                              to_string(*obj) + " but the subject sends " +
                                              to_string(payload)}});
            TypeEnv premise =
                env.without(n.object).with_replaced(n.subject, ty_endpoint(s->cont()));
            auto sub = check(premise, recenv, n.body);
            if (!accepted(sub))
                return sub;
            return node("Out-1", env, recenv, p, {derivation(sub)},
                        {"object type not end", "object delegated"});
        }
        if (st->kind() == Type::Kind::Chan) {
            const TypeRef& payload = st->payload();
            const TypeRef* obj = env.lookup(n.object);
            if (!obj)
                return fail(p, {{"Out-2", "object " + n.object.str() + " is not bound"}});
            if (!type_equal(*obj, payload))
                return fail(p, {{"Out-2", "object " + n.object.str() + " has type " +
                                              to_string(*obj) + " but the channel carries " +
                                              to_string(payload)}});
            if (!type_is_unlimited(payload))
                return fail(p, {{"Out-2", "object type " + to_string(payload) +
                                              " is not unlimited"}});
            auto sub = check(env, recenv, n.body);
            if (!accepted(sub))
                return sub;
            return node("Out-2", env, recenv, p, {derivation(sub)}, {"object type unlimited"});
        }
        return fail(p, {{"Out-1", "subject " + n.subject.str() +
                                      " is bound to a pair; sessions are used through "
                                      "their polarized endpoints"}});
    }

    CheckResult check_par(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p,
                          const ParNode& n) const {
        SplitResult split = env_split(env, n.left, n.right);
        if (!split.ok)
            return fail(p, {{"Par", "name " + split.doubly_used +
                                        " occurs free in both parallel components"}});
        RecEnv rec1 = recenv.restricted_to(free_rec_vars(n.left));
        RecEnv rec2 = recenv.restricted_to(free_rec_vars(n.right));
        if (system == TypeSystem::Name) {
            NbAddResult add = nb_pair_add(split.left, rec1, split.right, rec2);
            if (!add.ok)
                return fail(p, {{"Par", add.violation}});
        }
        auto left = check(split.left, rec1, n.left);
        if (!accepted(left))
            return left;
        auto right = check(split.right, rec2, n.right);
        if (!accepted(right))
            return right;
        return node("Par", env, recenv, p, {derivation(left), derivation(right)},
                    {"environment split by free occurrence"});
    }

    CheckResult check_restrict(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p,
                               const RestrictNode& n) const {
        if (!n.annot)
            return fail(p, {{"Session", "restriction has no type annotation"},
                            {"Chan", "restriction has no type annotation"}});
        if (system == TypeSystem::Name && !nb_type_wellformed(n.annot)) {
            std::string rule = n.annot->kind() == Type::Kind::Chan ? "Chan" : "Session";
            return fail(p, {{rule, "annotation " + to_string(n.annot) +
                                       " is outside the restricted type grammar"}});
        }
        if (n.annot->kind() == Type::Kind::Pair) {
            if (!is_balanced(n.annot))
                return fail(p, {{"Session", "annotation " + to_string(n.annot) +
                                                " is not balanced"}});
            TypeEnv premise = env.with_binding(plus(n.name), ty_endpoint(n.annot->left()))
                                  .with_binding(minus(n.name), ty_endpoint(n.annot->right()));
            auto sub = check(premise, recenv, n.body);
            if (!accepted(sub))
                return sub;
            return node("Session", env, recenv, p, {derivation(sub)},
                        {"annotation balanced"});
        }
        if (n.annot->kind() == Type::Kind::Chan) {
            if (!recenv.empty())
                return fail(p, {{"Chan", "recursion environment must be empty to bind a "
                                         "channel, but contains " +
                                             std::to_string(recenv.bindings().size()) +
                                             " variable(s)"}});
            TypeEnv premise = env.with_binding(eps(n.name), n.annot);
            auto sub = check(premise, recenv, n.body);
            if (!accepted(sub))
                return sub;
            return node("Chan", env, recenv, p, {derivation(sub)},
                        {"recursion environment empty"});
        }
        return fail(p, {{"Session", "annotation " + to_string(n.annot) +
                                        " is a lone endpoint; restriction annotations "
                                        "must be pairs or channels"}});
    }

    CheckResult check_rec(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p,
                          const RecNode& n) const {
        // adding X : env to the recursion environment requires agreement on X
        const TypeEnv* existing = recenv.lookup(n.var);
        if (existing && !(*existing == env))
            return fail(p, {{"Rec", "recursion variable " + n.var +
                                        " is already bound to a different environment"}});
        auto sub = check(env, recenv.with_binding(n.var, env), n.body);
        if (!accepted(sub))
            return sub;
        return node("Rec", env, recenv, p, {derivation(sub)}, {n.var + " bound to environment"});
    }
};

} // namespace

CheckResult check(TypeSystem system, const TypeEnv& env, const RecEnv& recenv,
                  const ProcRef& p, VarMode mode) {
    return Checker{system, mode}.check(env, recenv, p);
}

CheckResult check_depth(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p,
                        VarMode mode) {
    return check(TypeSystem::Depth, env, recenv, p, mode);
}

CheckResult check_name(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p,
                       VarMode mode) {
    return check(TypeSystem::Name, env, recenv, p, mode);
}

std::string render_derivation(const Derivation& d, std::size_t indent) {
    std::string pad(indent * 2, ' ');
    std::string out = pad + "rule " + d.rule + ": " + print_process(d.proc) + "\n";
    for (const auto& premise : d.premises)
        out += render_derivation(premise, indent + 1);
    return out;
}

std::string render_check_result(const CheckResult& r) {
    if (accepted(r))
        return "result: accepted\n" + render_derivation(derivation(r));
    return "result: rejected\n" + check_error(r).message() + "\n";
}

std::vector<std::string> rules_used(const Derivation& d) {
    std::vector<std::string> out{d.rule};
    for (const auto& premise : d.premises) {
        auto sub = rules_used(premise);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

} // namespace pibound
