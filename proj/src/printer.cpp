#include "pibound/printer.hpp"

#include <vector>

namespace pibound {

namespace {

// A par element that is not last needs parentheses when printing it bare
// would let a trailing `rec`/`new` body swallow the rest of the chain.
bool needs_paren_nonfinal(const ProcRef& p) {
    return std::visit(overloaded{
                          [&](const InputNode& n) { return needs_paren_nonfinal(n.body); },
                          [&](const OutputNode& n) { return needs_paren_nonfinal(n.body); },
                          [](const ParNode&) { return true; },
                          [](const RestrictNode&) { return true; },
                          [](const RecNode&) { return true; },
                          [](const VarNode&) { return false; },
                          [](const NilNode&) { return false; },
                      },
                      p->node());
}

void flatten_left(const ProcRef& p, std::vector<ProcRef>& out) {
    if (p->is<ParNode>()) {
        const auto& n = p->as<ParNode>();
        flatten_left(n.left, out);
        out.push_back(n.right);
    } else {
        out.push_back(p);
    }
}

std::string print_full(const ProcRef& p);

std::string print_unit(const ProcRef& p) {
    if (p->is<ParNode>())
        return "(" + print_full(p) + ")";
    return print_full(p);
}

std::string print_full(const ProcRef& p) {
    return std::visit(
        overloaded{
            [&](const InputNode& n) {
                return n.subject.str() + "?(" + n.object + ")." + print_unit(n.body);
            },
            [&](const OutputNode& n) {
                return n.subject.str() + "!(" + n.object.str() + ")." + print_unit(n.body);
            },
            [&](const ParNode&) {
                std::vector<ProcRef> elems;
                flatten_left(p, elems);
                std::string out;
                for (std::size_t i = 0; i < elems.size(); ++i) {
                    bool last = i + 1 == elems.size();
                    bool paren = last ? elems[i]->is<ParNode>()
                                      : needs_paren_nonfinal(elems[i]);
                    if (i > 0)
                        out += " | ";
                    out += paren ? "(" + print_full(elems[i]) + ")" : print_full(elems[i]);
                }
                return out;
            },
            [&](const RestrictNode& n) {
                std::string head = "new " + n.name;
                if (n.annot)
                    head += " : " + to_string(n.annot);
                return head + " in " + print_full(n.body);
            },
            [&](const RecNode& n) { return "rec " + n.var + ". " + print_full(n.body); },
            [&](const VarNode& n) { return n.var; },
            [&](const NilNode&) { return std::string("0"); },
        },
        p->node());
}

} // namespace

std::string print_process(const ProcRef& p) {
    return print_full(p);
}

} // namespace pibound
