#include "pibound/typeenv.hpp"

#include <algorithm>

namespace pibound {

void TypeEnv::bind(PolarizedName n, TypeRef t) {
    if (bindings_.count(n))
        throw EnvError("name already bound: " + n.str(), {n.str()});
    bindings_.emplace(std::move(n), std::move(t));
}

TypeEnv TypeEnv::with_binding(PolarizedName n, TypeRef t) const {
    TypeEnv out = *this;
    out.bind(std::move(n), std::move(t));
    return out;
}

TypeEnv TypeEnv::with_replaced(const PolarizedName& n, TypeRef t) const {
    TypeEnv out = *this;
    auto it = out.bindings_.find(n);
    if (it == out.bindings_.end())
        throw EnvError("no binding to replace: " + n.str(), {n.str()});
    it->second = std::move(t);
    return out;
}

TypeEnv TypeEnv::without(const PolarizedName& n) const {
    TypeEnv out = *this;
    out.bindings_.erase(n);
    return out;
}

std::set<PolarizedName> TypeEnv::domain() const {
    std::set<PolarizedName> out;
    for (const auto& [n, _] : bindings_)
        out.insert(n);
    return out;
}

bool TypeEnv::operator==(const TypeEnv& other) const {
    if (bindings_.size() != other.bindings_.size())
        return false;
    auto it = other.bindings_.begin();
    for (const auto& [n, t] : bindings_) {
        if (it->first != n || !type_equal(it->second, t))
            return false;
        ++it;
    }
    return true;
}

std::string TypeEnv::str() const {
    std::string out;
    for (const auto& [n, t] : bindings_) {
        if (!out.empty())
            out += ", ";
        out += n.str() + " : " + to_string(t);
    }
    return out.empty() ? "(empty)" : out;
}

bool type_is_unlimited(const TypeRef& t) {
    if (t->kind() == Type::Kind::Chan)
        return true;
    return t->kind() == Type::Kind::Endpoint &&
           t->endpoint()->kind() == EndpointType::Kind::End;
}

bool type_is_terminal(const TypeRef& t) {
    if (t->kind() == Type::Kind::Endpoint)
        return t->endpoint()->kind() == EndpointType::Kind::End;
    if (t->kind() == Type::Kind::Pair)
        return t->left()->kind() == EndpointType::Kind::End &&
               t->right()->kind() == EndpointType::Kind::End;
    return false;
}

namespace {

// Endpoint types of the restricted grammar: prefixes whose payloads are
// themselves restricted pairs or channel towers.
bool nb_linear_endpoint(const EndpointRef& s);

bool nb_unlimited_tower(const TypeRef& t) {
    if (t->kind() != Type::Kind::Chan)
        return false;
    const TypeRef& payload = t->payload();
    if (payload->kind() == Type::Kind::Endpoint &&
        payload->endpoint()->kind() == EndpointType::Kind::End)
        return true; // #end is the base of the tower
    return nb_unlimited_tower(payload);
}

bool nb_linear_pair(const TypeRef& t) {
    return t->kind() == Type::Kind::Pair && nb_linear_endpoint(t->left()) &&
           nb_linear_endpoint(t->right());
}

bool nb_linear_endpoint(const EndpointRef& s) {
    if (s->kind() == EndpointType::Kind::End)
        return true;
    const TypeRef& payload = s->payload();
    if (!nb_linear_pair(payload) && !nb_unlimited_tower(payload))
        return false;
    return nb_linear_endpoint(s->cont());
}

} // namespace

bool nb_type_wellformed(const TypeRef& t) {
    return nb_linear_pair(t) || nb_unlimited_tower(t);
}

EnvPredicates env_predicates(const TypeEnv& env) {
    EnvPredicates p{true, true, true, true, true, true};
    for (const auto& [_, t] : env.bindings()) {
        p.unlimited &= type_is_unlimited(t);
        p.linear &= t->kind() != Type::Kind::Chan;
        p.terminal &= type_is_terminal(t);
        p.balanced &= is_balanced(t);
        p.limited &= t->kind() == Type::Kind::Pair && is_balanced(t) && nb_linear_pair(t);
        p.skew &= t->kind() != Type::Kind::Chan;
    }
    return p;
}

TypeEnv lin_part(const TypeEnv& env) {
    TypeEnv out;
    for (const auto& [n, t] : env.bindings())
        if (t->kind() != Type::Kind::Chan)
            out.bind(n, t);
    return out;
}

TypeEnv env_add(const TypeEnv& a, const TypeEnv& b) {
    std::vector<std::string> shared;
    for (const auto& [n, _] : b.bindings())
        if (a.contains(n))
            shared.push_back(n.str());
    if (!shared.empty()) {
        std::string msg = "type environments overlap on:";
        for (const auto& n : shared)
            msg += " " + n;
        throw EnvError(msg, shared);
    }
    TypeEnv out = a;
    for (const auto& [n, t] : b.bindings())
        out.bind(n, t);
    return out;
}

RecEnv RecEnv::with_binding(std::string var, TypeEnv env) const {
    RecEnv out = *this;
    out.bindings_[std::move(var)] = std::move(env);
    return out;
}

RecEnv RecEnv::restricted_to(const std::set<std::string>& vars) const {
    RecEnv out;
    for (const auto& [v, env] : bindings_)
        if (vars.count(v))
            out.bindings_.emplace(v, env);
    return out;
}

RecEnv recenv_add(const RecEnv& a, const RecEnv& b) {
    RecEnv out = a;
    for (const auto& [v, env] : b.bindings()) {
        auto existing = out.lookup(v);
        if (existing && !(*existing == env))
            throw EnvError("recursion environments disagree on " + v, {v});
        if (!existing)
            out = out.with_binding(v, env);
    }
    return out;
}

SplitResult env_split(const TypeEnv& env, const ProcRef& p1, const ProcRef& p2) {
    SplitResult r;
    auto used1 = free_polarized_names(p1);
    auto used2 = free_polarized_names(p2);
    for (const auto& [n, t] : env.bindings()) {
        bool in1 = used1.count(n) > 0;
        bool in2 = used2.count(n) > 0;
        if (in1 && in2) {
            r.doubly_used = n.str();
            return r;
        }
        if (in2)
            r.right.bind(n, t);
        else
            r.left.bind(n, t); // used left or unused
    }
    r.ok = true;
    return r;
}

NbAddResult nb_pair_add(const TypeEnv& env1, const RecEnv& rec1, const TypeEnv& env2,
                        const RecEnv& rec2) {
    NbAddResult r;
    if (!rec1.empty() && !rec2.empty()) {
        r.violation = "both recursion environments are non-empty";
        return r;
    }
    if (!rec1.empty()) {
        if (!env_predicates(env1).linear) {
            r.violation = "recursive side has a non-linear type environment";
            return r;
        }
        if (!env_predicates(env2).unlimited) {
            r.violation = "non-recursive side has a non-unlimited type environment";
            return r;
        }
    }
    if (!rec2.empty()) {
        if (!env_predicates(env2).linear) {
            r.violation = "recursive side has a non-linear type environment";
            return r;
        }
        if (!env_predicates(env1).unlimited) {
            r.violation = "non-recursive side has a non-unlimited type environment";
            return r;
        }
    }
    r.env = env_add(env1, env2);
    r.recenv = recenv_add(rec1, rec2);
    r.ok = true;
    return r;
}

} // namespace pibound
