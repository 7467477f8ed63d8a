#ifndef PIBOUND_PROCESS_HPP
#define PIBOUND_PROCESS_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pibound/names.hpp"
#include "pibound/types.hpp"

namespace pibound {

class Process;
using ProcRef = std::shared_ptr<const Process>;

struct InputNode {
    PolarizedName subject;
    std::string object; // binding occurrence, polarity epsilon
    ProcRef body;
};
struct OutputNode {
    PolarizedName subject;
    PolarizedName object;
    ProcRef body;
};
struct ParNode {
    ProcRef left;
    ProcRef right;
};
struct RestrictNode {
    std::string name;  // binding occurrence, polarity epsilon
    TypeRef annot;     // null when parsed in untyped mode
    ProcRef body;
};
struct RecNode {
    std::string var;
    ProcRef body;
};
struct VarNode {
    std::string var;
};
struct NilNode {};

/// Immutable process term. All operations below are pure; terms are shared
/// freely via ProcRef.
class Process {
public:
    using Node = std::variant<InputNode, OutputNode, ParNode, RestrictNode,
                              RecNode, VarNode, NilNode>;

    explicit Process(Node n) : node_(std::move(n)) {}
    const Node& node() const { return node_; }

    template <class T> bool is() const {
        return std::holds_alternative<T>(node_);
    }
    template <class T> const T& as() const { return std::get<T>(node_); }

private:
    Node node_;
};

ProcRef nil();
ProcRef pvar(std::string var);
ProcRef input(PolarizedName subject, std::string object, ProcRef body);
ProcRef output(PolarizedName subject, PolarizedName object, ProcRef body);
ProcRef par(ProcRef left, ProcRef right);
ProcRef restrict_(std::string name, TypeRef annot, ProcRef body);
ProcRef rec(std::string var, ProcRef body);

/// Helper for std::visit over Process::Node.
template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

// ---- scope queries ------------------------------------------------------

std::set<std::string> free_names(const ProcRef& p);
std::set<std::string> bound_names(const ProcRef& p);
/// Free occurrences with their polarities (the keys used by type
/// environments).
std::set<PolarizedName> free_polarized_names(const ProcRef& p);
/// Every identifier occurring in the term, free or bound.
std::set<std::string> all_names(const ProcRef& p);
std::set<std::string> all_rec_vars(const ProcRef& p);
std::set<std::string> free_rec_vars(const ProcRef& p);

// ---- substitution -------------------------------------------------------

/// Capture-avoiding substitution of the polarized name y for all free
/// occurrences of x. Substituted occurrences take y's polarity.
ProcRef substitute_name(const ProcRef& p, const std::string& x,
                        const PolarizedName& y);

/// Replaces every free occurrence of recursion variable X by q. Each inserted
/// copy of q has its bound names and recursion binders freshened against
/// `used` / `used_vars` so the result keeps all binders pairwise distinct.
ProcRef substitute_recvar(const ProcRef& p, const std::string& var,
                          const ProcRef& q, std::set<std::string>& used,
                          std::set<std::string>& used_vars);

/// Convenience overload seeding the used sets from p and q themselves.
ProcRef substitute_recvar(const ProcRef& p, const std::string& var,
                          const ProcRef& q);

// ---- well-formedness ----------------------------------------------------

/// Every recursion variable occurrence sits under a matching binder and all
/// binders are pairwise distinct.
bool is_recursion_closed(const ProcRef& p);

/// Every recursion body guards its own variable under an input or output
/// prefix.
bool is_guarded(const ProcRef& p);

/// Whether every occurrence of `var` in `body` sits under a prefix.
bool rec_body_guards(const ProcRef& body, const std::string& var);

/// All bound names pairwise distinct and distinct from the free names.
bool has_distinct_bound_names(const ProcRef& p);

/// Renames bound names (with #k suffixes) until has_distinct_bound_names
/// holds. Recursion binders are left untouched.
ProcRef freshen_apart(const ProcRef& p);

/// Count of Rec nodes in the term.
std::size_t count_rec_nodes(const ProcRef& p);
/// Count of Restriction nodes in the term.
std::size_t count_restrictions(const ProcRef& p);
/// Multiset of recursion-variable occurrences.
std::map<std::string, std::size_t> rec_var_occurrences(const ProcRef& p);

/// Structural equality modulo consistent renaming of bound names and
/// recursion binders.
bool alpha_equal(const ProcRef& a, const ProcRef& b);

/// Exact structural equality (names, polarities and annotations included).
bool proc_equal(const ProcRef& a, const ProcRef& b);

} // namespace pibound

#endif
