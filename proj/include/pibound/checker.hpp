#ifndef PIBOUND_CHECKER_HPP
#define PIBOUND_CHECKER_HPP

#include <string>
#include <variant>
#include <vector>

#include "pibound/process.hpp"
#include "pibound/typeenv.hpp"

namespace pibound {

/// Treatment of the Var rule's domain-inclusion side condition. Strict
/// implements the rule table literally; Lenient exempts bindings of terminal
/// type, which have been used up by the time the variable is reached.
enum class VarMode { Strict, Lenient };

enum class TypeSystem { Depth, Name };

struct Derivation {
    std::string rule; // In-1, In-2, Out-1, Out-2, Par, Session, Chan, Rec, Var, Nil
    TypeEnv env;
    RecEnv recenv;
    ProcRef proc;
    std::vector<Derivation> premises;
    std::vector<std::string> side_conditions;
};

struct RuleAttempt {
    std::string rule;
    std::string violation;
};

struct CheckError {
    ProcRef subterm;
    std::vector<RuleAttempt> attempts; // non-empty

    std::string message() const;
};

using CheckResult = std::variant<Derivation, CheckError>;

inline bool accepted(const CheckResult& r) {
    return std::holds_alternative<Derivation>(r);
}
inline const Derivation& derivation(const CheckResult& r) {
    return std::get<Derivation>(r);
}
inline const CheckError& check_error(const CheckResult& r) {
    return std::get<CheckError>(r);
}

/// The type system for depth-boundedness.
CheckResult check_depth(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p,
                        VarMode mode = VarMode::Lenient);

/// The name-boundedness system: same rules over the restricted type grammar,
/// with pairwise addition at Par.
CheckResult check_name(const TypeEnv& env, const RecEnv& recenv, const ProcRef& p,
                       VarMode mode = VarMode::Lenient);

CheckResult check(TypeSystem system, const TypeEnv& env, const RecEnv& recenv,
                  const ProcRef& p, VarMode mode = VarMode::Lenient);

std::string render_derivation(const Derivation& d, std::size_t indent = 0);
std::string render_check_result(const CheckResult& r);

/// Rules used in a derivation, in prefix order.
std::vector<std::string> rules_used(const Derivation& d);

} // namespace pibound

#endif
