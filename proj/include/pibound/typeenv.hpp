#ifndef PIBOUND_TYPEENV_HPP
#define PIBOUND_TYPEENV_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pibound/names.hpp"
#include "pibound/process.hpp"
#include "pibound/types.hpp"

namespace pibound {

class EnvError : public std::runtime_error {
public:
    EnvError(std::string message, std::vector<std::string> names)
        : std::runtime_error(std::move(message)), names_(std::move(names)) {}
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
};

/// Finite map from polarized names to types.
class TypeEnv {
public:
    TypeEnv() = default;

    bool contains(const PolarizedName& n) const { return bindings_.count(n) > 0; }
    const TypeRef* lookup(const PolarizedName& n) const {
        auto it = bindings_.find(n);
        return it == bindings_.end() ? nullptr : &it->second;
    }
    std::size_t size() const { return bindings_.size(); }
    bool empty() const { return bindings_.empty(); }
    const std::map<PolarizedName, TypeRef>& bindings() const { return bindings_; }

    /// Adds a binding; throws EnvError if the name is already bound.
    void bind(PolarizedName n, TypeRef t);

    TypeEnv with_binding(PolarizedName n, TypeRef t) const;
    /// Replaces an existing binding.
    TypeEnv with_replaced(const PolarizedName& n, TypeRef t) const;
    TypeEnv without(const PolarizedName& n) const;

    std::set<PolarizedName> domain() const;

    bool operator==(const TypeEnv& other) const;

    std::string str() const;

private:
    std::map<PolarizedName, TypeRef> bindings_;
};

// Per-binding classification.
bool type_is_unlimited(const TypeRef& t); // #T or end
bool type_is_terminal(const TypeRef& t);  // end or (end, end)

struct EnvPredicates {
    bool unlimited = false;
    bool linear = false;
    bool terminal = false;
    bool balanced = false;
    bool limited = false;
    bool skew = false;
};

EnvPredicates env_predicates(const TypeEnv& env);

/// Largest sub-environment with no channel-typed binding.
TypeEnv lin_part(const TypeEnv& env);

/// Disjoint union; throws EnvError listing the shared names.
TypeEnv env_add(const TypeEnv& a, const TypeEnv& b);

/// Finite map from recursion variables to type environments.
class RecEnv {
public:
    RecEnv() = default;

    bool contains(const std::string& var) const { return bindings_.count(var) > 0; }
    const TypeEnv* lookup(const std::string& var) const {
        auto it = bindings_.find(var);
        return it == bindings_.end() ? nullptr : &it->second;
    }
    bool empty() const { return bindings_.empty(); }
    const std::map<std::string, TypeEnv>& bindings() const { return bindings_; }

    RecEnv with_binding(std::string var, TypeEnv env) const;
    /// Sub-environment for the given variables.
    RecEnv restricted_to(const std::set<std::string>& vars) const;

    bool operator==(const RecEnv& other) const = default;

private:
    std::map<std::string, TypeEnv> bindings_;
};

/// Union; overlapping variables must map to identical environments, otherwise
/// an EnvError naming the variable is thrown.
RecEnv recenv_add(const RecEnv& a, const RecEnv& b);

struct SplitResult {
    bool ok = false;
    TypeEnv left;
    TypeEnv right;
    std::string doubly_used; // set on failure
};

/// Partitions env by free occurrence: bindings used by p1 go left, by p2 go
/// right, unused bindings go left. A name free in both components fails the
/// split.
SplitResult env_split(const TypeEnv& env, const ProcRef& p1, const ProcRef& p2);

/// Whether t conforms to the restricted type grammar of the name-bounded
/// system: channel payloads are channel towers bottoming out at #end, and
/// session payloads are pairs or channel towers.
bool nb_type_wellformed(const TypeRef& t);

struct NbAddResult {
    bool ok = false;
    std::string violation;
    TypeEnv env;
    RecEnv recenv;
};

/// Pairwise addition of (env, recenv) pairs for the name-bounded system. The
/// side conditions apply when a recursion environment is present: the side
/// carrying it must be linear and the other side unlimited; both sides
/// carrying one is rejected outright.
NbAddResult nb_pair_add(const TypeEnv& env1, const RecEnv& rec1, const TypeEnv& env2,
                        const RecEnv& rec2);

} // namespace pibound

#endif
