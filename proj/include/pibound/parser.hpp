#ifndef PIBOUND_PARSER_HPP
#define PIBOUND_PARSER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

#include "pibound/process.hpp"
#include "pibound/types.hpp"

namespace pibound {

struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, SourceSpan span)
        : std::runtime_error(message + " at line " + std::to_string(span.line) +
                             ", column " + std::to_string(span.column)),
          span_(span), message_(std::move(message)) {}
    const SourceSpan& span() const { return span_; }
    const std::string& message() const { return message_; }

private:
    SourceSpan span_;
    std::string message_;
};

struct ParseOptions {
    /// Accept `new x in P` without a type annotation. Used for pure
    /// simulation; the checkers reject unannotated restrictions.
    bool allow_untyped = false;
};

/// Parses the concrete type syntax: `end`, `!T.S`, `?T.S`, `(S, S)`, `#T`,
/// parentheses for grouping.
TypeRef parse_type(const std::string& text);

/// Parses a process, checks guardedness and binder distinctness, and freshens
/// bound names apart.
ProcRef parse_process(const std::string& text, const ParseOptions& opts = {});

} // namespace pibound

#endif
