#include "pibound/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace pibound {

namespace {

enum class Tok {
    LParen, RParen, Comma, Dot, Colon, Pipe, Bang, Question, Plus, Minus,
    Hash, Zero, Ident, UpIdent, KwEnd, KwNew, KwIn, KwRec, Eof,
};

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { tokenize(); }
    const std::vector<Token>& tokens() const { return tokens_; }

private:
    void tokenize() {
        std::size_t i = 0, line = 1, col = 1;
        auto span_at = [&](std::size_t start, std::size_t end, std::size_t l,
                           std::size_t c) { return SourceSpan{start, end, l, c}; };
        while (i < src_.size()) {
            char c = src_[i];
            if (c == '\n') {
                ++i, ++line, col = 1;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i, ++col;
                continue;
            }
            if (c == '/' && i + 1 < src_.size() && src_[i + 1] == '/') {
                while (i < src_.size() && src_[i] != '\n')
                    ++i, ++col;
                continue;
            }
            std::size_t start = i, start_line = line, start_col = col;
            auto push = [&](Tok k, std::size_t len) {
                tokens_.push_back({k, src_.substr(start, len),
                                   span_at(start, start + len, start_line, start_col)});
                i += len;
                col += len;
            };
            switch (c) {
            case '(': push(Tok::LParen, 1); continue;
            case ')': push(Tok::RParen, 1); continue;
            case ',': push(Tok::Comma, 1); continue;
            case '.': push(Tok::Dot, 1); continue;
            case ':': push(Tok::Colon, 1); continue;
            case '|': push(Tok::Pipe, 1); continue;
            case '!': push(Tok::Bang, 1); continue;
            case '?': push(Tok::Question, 1); continue;
            case '+': push(Tok::Plus, 1); continue;
            case '-': push(Tok::Minus, 1); continue;
            case '#': push(Tok::Hash, 1); continue;
            case '0': push(Tok::Zero, 1); continue;
            default: break;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t j = i + 1;
                while (j < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                    ++j;
                // freshness suffix #<digits> belongs to the identifier
                if (j < src_.size() && src_[j] == '#' && j + 1 < src_.size() &&
                    std::isdigit(static_cast<unsigned char>(src_[j + 1]))) {
                    ++j;
                    while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j])))
                        ++j;
                }
                std::string word = src_.substr(i, j - i);
                Tok kind;
                if (word == "end")
                    kind = Tok::KwEnd;
                else if (word == "new")
                    kind = Tok::KwNew;
                else if (word == "in")
                    kind = Tok::KwIn;
                else if (word == "rec")
                    kind = Tok::KwRec;
                else if (std::isupper(static_cast<unsigned char>(c)))
                    kind = Tok::UpIdent;
                else
                    kind = Tok::Ident;
                push(kind, j - i);
                continue;
            }
            throw ParseError("unexpected character '" + std::string(1, c) + "'",
                             span_at(i, i + 1, line, col));
        }
        tokens_.push_back({Tok::Eof, "", span_at(i, i, line, col)});
    }

    const std::string& src_;
    std::vector<Token> tokens_;
};

class Parser {
public:
    Parser(const std::string& src, ParseOptions opts)
        : lexer_(src), opts_(opts) {}

    TypeRef type_only() {
        TypeRef t = parse_type_expr();
        expect(Tok::Eof, "expected end of input after type");
        return t;
    }

    ProcRef process_only() {
        ProcRef p = parse_par();
        expect(Tok::Eof, "expected end of input after process");
        return freshen_apart(p);
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        const auto& toks = lexer_.tokens();
        return i < toks.size() ? toks[i] : toks.back();
    }
    const Token& advance() { return lexer_.tokens()[pos_++]; }
    bool check(Tok k) const { return peek().kind == k; }
    bool accept(Tok k) {
        if (!check(k))
            return false;
        ++pos_;
        return true;
    }
    const Token& expect(Tok k, const std::string& what) {
        if (!check(k))
            throw ParseError(what + ", got '" + peek().text + "'", peek().span);
        return lexer_.tokens()[pos_++];
    }

    // ---- types ----------------------------------------------------------

    EndpointRef expect_endpoint(const TypeRef& t, const SourceSpan& span,
                                const std::string& where) {
        if (t->kind() != Type::Kind::Endpoint)
            throw ParseError(where + " must be an endpoint type", span);
        return t->endpoint();
    }

    TypeRef parse_type_expr() {
        const Token& tok = peek();
        switch (tok.kind) {
        case Tok::KwEnd:
            advance();
            return ty_end();
        case Tok::Bang:
        case Tok::Question: {
            bool is_out = tok.kind == Tok::Bang;
            advance();
            TypeRef payload = parse_type_expr();
            expect(Tok::Dot, "expected '.' after prefix payload type");
            const Token& cont_tok = peek();
            TypeRef cont_t = parse_type_expr();
            EndpointRef cont = expect_endpoint(cont_t, cont_tok.span, "prefix continuation");
            return ty_endpoint(is_out ? ep_out(payload, cont) : ep_in(payload, cont));
        }
        case Tok::Hash:
            advance();
            return ty_chan(parse_type_expr());
        case Tok::LParen: {
            advance();
            const Token& first_tok = peek();
            TypeRef first = parse_type_expr();
            if (accept(Tok::Comma)) {
                EndpointRef left = expect_endpoint(first, first_tok.span, "pair component");
                const Token& second_tok = peek();
                TypeRef second = parse_type_expr();
                EndpointRef right =
                    expect_endpoint(second, second_tok.span, "pair component");
                expect(Tok::RParen, "expected ')' closing pair type");
                return ty_pair(left, right);
            }
            expect(Tok::RParen, "expected ')' closing type");
            return first;
        }
        default:
            throw ParseError("expected a type", tok.span);
        }
    }

    // ---- processes ------------------------------------------------------

    Polarity parse_polarity() {
        if (accept(Tok::Plus))
            return Polarity::Plus;
        if (accept(Tok::Minus))
            return Polarity::Minus;
        return Polarity::Epsilon;
    }

    std::string parse_binding_name(const std::string& what) {
        const Token& tok = expect(Tok::Ident, "expected a name for " + what);
        if (check(Tok::Plus) || check(Tok::Minus))
            throw ParseError("polarity is not allowed on a binding occurrence", peek().span);
        return tok.text;
    }

    ProcRef parse_par() {
        ProcRef left = parse_unit();
        while (accept(Tok::Pipe)) {
            ProcRef right = parse_unit();
            left = par(std::move(left), std::move(right));
        }
        return left;
    }

    ProcRef parse_unit() {
        const Token& tok = peek();
        switch (tok.kind) {
        case Tok::Zero:
            advance();
            return nil();
        case Tok::LParen: {
            advance();
            ProcRef p = parse_par();
            expect(Tok::RParen, "expected ')'");
            return p;
        }
        case Tok::UpIdent: {
            advance();
            return pvar(tok.text);
        }
        case Tok::KwRec: {
            advance();
            const Token& var_tok = expect(Tok::UpIdent, "expected a recursion variable");
            if (!rec_binders_.insert(var_tok.text).second)
                throw ParseError("duplicate recursion binder '" + var_tok.text + "'",
                                 var_tok.span);
            expect(Tok::Dot, "expected '.' after recursion variable");
            ProcRef body = parse_par();
            if (!rec_body_guards(body, var_tok.text))
                throw ParseError("unguarded recursion variable '" + var_tok.text + "'",
                                 var_tok.span);
            return rec(var_tok.text, std::move(body));
        }
        case Tok::KwNew: {
            advance();
            std::string name = parse_binding_name("the restriction");
            TypeRef annot;
            if (accept(Tok::Colon)) {
                annot = parse_type_expr();
            } else if (!opts_.allow_untyped) {
                throw ParseError("restriction requires a type annotation "
                                 "(': T'); untyped form is only accepted in untyped mode",
                                 peek().span);
            }
            expect(Tok::KwIn, "expected 'in' after restriction");
            ProcRef body = parse_par();
            return restrict_(std::move(name), std::move(annot), std::move(body));
        }
        case Tok::Ident:
            return parse_prefix();
        default:
            throw ParseError("expected a process", tok.span);
        }
    }

    ProcRef parse_prefix() {
        const Token& name_tok = expect(Tok::Ident, "expected a channel name");
        Polarity pol = parse_polarity();
        PolarizedName subject{name_tok.text, pol};
        if (accept(Tok::Question)) {
            expect(Tok::LParen, "expected '(' after '?'");
            std::string object = parse_binding_name("the input object");
            expect(Tok::RParen, "expected ')' after input object");
            expect(Tok::Dot, "expected '.' after input prefix");
            return input(subject, std::move(object), parse_unit());
        }
        if (accept(Tok::Bang)) {
            expect(Tok::LParen, "expected '(' after '!'");
            const Token& obj_tok = expect(Tok::Ident, "expected an output object");
            Polarity obj_pol = parse_polarity();
            expect(Tok::RParen, "expected ')' after output object");
            expect(Tok::Dot, "expected '.' after output prefix");
            return output(subject, PolarizedName{obj_tok.text, obj_pol}, parse_unit());
        }
        throw ParseError("expected '?' or '!' after channel name", peek().span);
    }

    Lexer lexer_;
    ParseOptions opts_;
    std::size_t pos_ = 0;
    std::set<std::string> rec_binders_;
};

} // namespace

TypeRef parse_type(const std::string& text) {
    return Parser(text, {}).type_only();
}

ProcRef parse_process(const std::string& text, const ParseOptions& opts) {
    return Parser(text, opts).process_only();
}

} // namespace pibound
