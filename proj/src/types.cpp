#include "pibound/types.hpp"

#include <algorithm>

namespace pibound {

EndpointRef EndpointType::make_end() {
    static const EndpointRef instance{new EndpointType(Kind::End, nullptr, nullptr)};
    return instance;
}
EndpointRef EndpointType::make_out(TypeRef payload, EndpointRef cont) {
    return EndpointRef{new EndpointType(Kind::Out, std::move(payload), std::move(cont))};
}
EndpointRef EndpointType::make_in(TypeRef payload, EndpointRef cont) {
    return EndpointRef{new EndpointType(Kind::In, std::move(payload), std::move(cont))};
}

TypeRef Type::make_endpoint(EndpointRef s) {
    return TypeRef{new Type(Kind::Endpoint, std::move(s), nullptr, nullptr)};
}
TypeRef Type::make_pair(EndpointRef left, EndpointRef right) {
    return TypeRef{new Type(Kind::Pair, std::move(left), std::move(right), nullptr)};
}
TypeRef Type::make_chan(TypeRef payload) {
    return TypeRef{new Type(Kind::Chan, nullptr, nullptr, std::move(payload))};
}

EndpointRef ep_end() { return EndpointType::make_end(); }
EndpointRef ep_out(TypeRef payload, EndpointRef cont) {
    return EndpointType::make_out(std::move(payload), std::move(cont));
}
EndpointRef ep_in(TypeRef payload, EndpointRef cont) {
    return EndpointType::make_in(std::move(payload), std::move(cont));
}
TypeRef ty_end() { return Type::make_endpoint(ep_end()); }
TypeRef ty_endpoint(EndpointRef s) { return Type::make_endpoint(std::move(s)); }
TypeRef ty_pair(EndpointRef l, EndpointRef r) {
    return Type::make_pair(std::move(l), std::move(r));
}
TypeRef ty_chan(TypeRef payload) { return Type::make_chan(std::move(payload)); }

bool endpoint_equal(const EndpointRef& a, const EndpointRef& b) {
    if (a == b)
        return true;
    if (!a || !b || a->kind() != b->kind())
        return false;
    if (a->kind() == EndpointType::Kind::End)
        return true;
    return type_equal(a->payload(), b->payload()) && endpoint_equal(a->cont(), b->cont());
}

bool type_equal(const TypeRef& a, const TypeRef& b) {
    if (a == b)
        return true;
    if (!a || !b || a->kind() != b->kind())
        return false;
    switch (a->kind()) {
    case Type::Kind::Endpoint:
        return endpoint_equal(a->endpoint(), b->endpoint());
    case Type::Kind::Pair:
        return endpoint_equal(a->left(), b->left()) && endpoint_equal(a->right(), b->right());
    case Type::Kind::Chan:
        return type_equal(a->payload(), b->payload());
    }
    return false;
}

EndpointRef dual(const EndpointRef& s) {
    switch (s->kind()) {
    case EndpointType::Kind::End:
        return ep_end();
    case EndpointType::Kind::Out:
        return ep_in(s->payload(), dual(s->cont()));
    case EndpointType::Kind::In:
        return ep_out(s->payload(), dual(s->cont()));
    }
    return ep_end();
}

bool is_balanced(const TypeRef& t) {
    if (t->kind() != Type::Kind::Pair)
        return true;
    return endpoint_equal(t->left(), dual(t->right()));
}

std::optional<TypeRef> type_successor(const TypeRef& t) {
    if (t->kind() == Type::Kind::Chan)
        return t;
    if (t->kind() != Type::Kind::Pair)
        return std::nullopt;
    auto lk = t->left()->kind();
    auto rk = t->right()->kind();
    bool out_in = lk == EndpointType::Kind::Out && rk == EndpointType::Kind::In;
    bool in_out = lk == EndpointType::Kind::In && rk == EndpointType::Kind::Out;
    if (!out_in && !in_out)
        return std::nullopt;
    return ty_pair(t->left()->cont(), t->right()->cont());
}

std::size_t endpoint_depth(const EndpointRef& s) {
    std::size_t d = 0;
    for (EndpointRef cur = s; cur->kind() != EndpointType::Kind::End; cur = cur->cont())
        ++d;
    return d;
}

std::size_t type_depth(const TypeRef& t) {
    switch (t->kind()) {
    case Type::Kind::Endpoint:
        return endpoint_depth(t->endpoint());
    case Type::Kind::Pair:
        return std::max(endpoint_depth(t->left()), endpoint_depth(t->right()));
    case Type::Kind::Chan:
        return 0;
    }
    return 0;
}

std::string to_string(const EndpointRef& s) {
    switch (s->kind()) {
    case EndpointType::Kind::End:
        return "end";
    case EndpointType::Kind::Out:
        return "!" + to_string(s->payload()) + "." + to_string(s->cont());
    case EndpointType::Kind::In:
        return "?" + to_string(s->payload()) + "." + to_string(s->cont());
    }
    return "end";
}

std::string to_string(const TypeRef& t) {
    switch (t->kind()) {
    case Type::Kind::Endpoint:
        return to_string(t->endpoint());
    case Type::Kind::Pair:
        return "(" + to_string(t->left()) + ", " + to_string(t->right()) + ")";
    case Type::Kind::Chan:
        return "#" + to_string(t->payload());
    }
    return "";
}

} // namespace pibound
