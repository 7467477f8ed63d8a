#ifndef PIBOUND_TYPES_HPP
#define PIBOUND_TYPES_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

namespace pibound {

class Type;
class EndpointType;
using TypeRef = std::shared_ptr<const Type>;
using EndpointRef = std::shared_ptr<const EndpointType>;

/// An endpoint type S: a finite sequence of !T. / ?T. prefixes ending in
/// `end`. Non-recursive by construction.
class EndpointType {
public:
    enum class Kind { Out, In, End };

    Kind kind() const { return kind_; }
    const TypeRef& payload() const { return payload_; }   // Out/In only
    const EndpointRef& cont() const { return cont_; }     // Out/In only

    static EndpointRef make_end();
    static EndpointRef make_out(TypeRef payload, EndpointRef cont);
    static EndpointRef make_in(TypeRef payload, EndpointRef cont);

private:
    EndpointType(Kind k, TypeRef payload, EndpointRef cont)
        : kind_(k), payload_(std::move(payload)), cont_(std::move(cont)) {}
    Kind kind_;
    TypeRef payload_;
    EndpointRef cont_;
};

/// A type T: a lone endpoint type, a pair of endpoint types (the two sides of
/// a session channel), or an unlimited channel type #T.
class Type {
public:
    enum class Kind { Endpoint, Pair, Chan };

    Kind kind() const { return kind_; }
    const EndpointRef& endpoint() const { return left_; } // Endpoint only
    const EndpointRef& left() const { return left_; }     // Pair only
    const EndpointRef& right() const { return right_; }   // Pair only
    const TypeRef& payload() const { return payload_; }   // Chan only

    static TypeRef make_endpoint(EndpointRef s);
    static TypeRef make_pair(EndpointRef left, EndpointRef right);
    static TypeRef make_chan(TypeRef payload);

private:
    Type(Kind k, EndpointRef l, EndpointRef r, TypeRef payload)
        : kind_(k), left_(std::move(l)), right_(std::move(r)),
          payload_(std::move(payload)) {}
    Kind kind_;
    EndpointRef left_;
    EndpointRef right_;
    TypeRef payload_;
};

// Shorthand constructors.
EndpointRef ep_end();
EndpointRef ep_out(TypeRef payload, EndpointRef cont);
EndpointRef ep_in(TypeRef payload, EndpointRef cont);
TypeRef ty_end();                       // lone endpoint `end`
TypeRef ty_endpoint(EndpointRef s);
TypeRef ty_pair(EndpointRef l, EndpointRef r);
TypeRef ty_chan(TypeRef payload);

bool endpoint_equal(const EndpointRef& a, const EndpointRef& b);
bool type_equal(const TypeRef& a, const TypeRef& b);

/// Structural dual: swaps inputs and outputs, fixes `end`.
EndpointRef dual(const EndpointRef& s);

/// Whether a type is balanced: pairs must be (S, dual(S)); everything else
/// passes.
bool is_balanced(const TypeRef& t);

/// The successor T-down of a type after one communication on its channel:
/// both endpoint prefixes are shed for a pair of one output and one input
/// head; channel types are fixed points. Absent for ended, mismatched, or
/// lone-endpoint types.
std::optional<TypeRef> type_successor(const TypeRef& t);

/// Prefix count of an endpoint type.
std::size_t endpoint_depth(const EndpointRef& s);

/// Depth of a type: prefix count of the longest endpoint; 0 for channels.
std::size_t type_depth(const TypeRef& t);

std::string to_string(const EndpointRef& s);
std::string to_string(const TypeRef& t);

} // namespace pibound

#endif
