#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <unordered_set>

#include "dsos/error.hpp"
#include "dsos/syntax/text.hpp"

namespace dsos::syntax {

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
    Tok type = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

const std::unordered_set<std::string>& keywords() {
    static const std::unordered_set<std::string> k{
        "skip",   "var",    "let",     "in",     "fun",   "record",     "if",      "then",
        "else",   "print",  "update",  "true",   "false", "nil",        "not",     "and",
        "or",     "class",  "object",  "new",    "call",  "of",         "read",    "into",
        "async",  "yield",  "return",  "method", "lambda", "invoke",    "completion",
        "implements"};
    return k;
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
                ++j;
            }
            t.type = Tok::Ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.type = Tok::Number;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else {
            static const char* two[] = {":=", "<=", "==", "!=", "||"};
            t.type = Tok::Symbol;
            bool matched = false;
            for (const char* s : two) {
                if (src.substr(i, 2) == s) {
                    t.text = s;
                    advance(2);
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                static const std::string singles = ";=(){}[],.+-*<>@:";
                if (singles.find(c) == std::string::npos) {
                    throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
                }
                t.text = std::string(1, c);
                advance(1);
            }
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, std::vector<std::string>* warnings)
        : toks_(std::move(toks)), warnings_(warnings) {}

    Term program() {
        Term t = par_level();
        if (peek().type != Tok::End) fail("unexpected '" + peek().text + "'");
        return t;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::string>* warnings_;

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool is_sym(std::string_view s, std::size_t ahead = 0) const {
        return peek(ahead).type == Tok::Symbol && peek(ahead).text == s;
    }
    bool is_kw(std::string_view s, std::size_t ahead = 0) const {
        return peek(ahead).type == Tok::Ident && peek(ahead).text == s;
    }
    bool is_plain_ident(std::size_t ahead = 0) const {
        return peek(ahead).type == Tok::Ident && !keywords().contains(peek(ahead).text);
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(msg, peek().line, peek().column);
    }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    void expect_sym(std::string_view s) {
        if (!is_sym(s)) fail("expected '" + std::string(s) + "' but found '" + peek().text + "'");
        take();
    }
    void expect_kw(std::string_view s) {
        if (!is_kw(s)) fail("expected '" + std::string(s) + "' but found '" + peek().text + "'");
        take();
    }
    std::string ident() {
        if (!is_plain_ident()) fail("expected identifier but found '" + peek().text + "'");
        return take().text;
    }
    std::uint64_t number() {
        if (peek().type != Tok::Number) fail("expected number but found '" + peek().text + "'");
        const std::string text = take().text;
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{}) fail("number out of range: " + text);
        return v;
    }

    bool at_stmt_end() const {
        return peek().type == Tok::End || is_sym("}") || is_sym(")") || is_sym("]") ||
               is_sym("||");
    }

    Term par_level() {
        Term t = seq_level();
        while (is_sym("||")) {
            take();
            t = par(std::move(t), seq_level());
        }
        return t;
    }

    Term seq_level() {
        Term first = stmt();
        if (is_sym(";")) {
            take();
            if (at_stmt_end()) return first;
            return seq(std::move(first), seq_level());
        }
        return first;
    }

    Term block() {
        expect_sym("{");
        if (is_sym("}")) {
            take();
            return nil();
        }
        Term t = par_level();
        expect_sym("}");
        return t;
    }

    std::string opt_param() {
        expect_sym("(");
        std::string p = "_";
        if (!is_sym(")")) p = ident();
        expect_sym(")");
        return p;
    }

    std::set<std::string> id_list() {
        std::set<std::string> ids{ident()};
        while (is_sym(",")) {
            take();
            ids.insert(ident());
        }
        return ids;
    }

    Term stmt() {
        if (is_kw("var")) {
            take();
            std::string x = ident();
            Term init = nil();
            if (is_sym(":=")) {
                take();
                init = expr();
            }
            return var_decl(std::move(x), std::move(init));
        }
        if (is_plain_ident() && is_sym(":=", 1)) {
            std::string x = ident();
            take();
            return assign(std::move(x), expr());
        }
        if (is_plain_ident() && is_sym("[", 1)) {
            std::string o = ident();
            take();
            Term body = is_sym("]") ? nil() : par_level();
            expect_sym("]");
            return object(std::move(o), std::move(body));
        }
        if (is_kw("let")) {
            take();
            expect_kw("var");
            std::string x = ident();
            expect_sym(":=");
            Term bound = expr();
            expect_kw("in");
            return let(std::move(x), std::move(bound), stmt());
        }
        if (is_kw("fun")) {
            take();
            std::string f = ident();
            std::string p = opt_param();
            return fun_decl(std::move(f), std::move(p), block());
        }
        if (is_kw("method")) {
            take();
            std::string m = ident();
            std::string p = opt_param();
            return method_def(std::move(m), std::move(p), block());
        }
        if (is_kw("record")) {
            take();
            std::string r = ident();
            expect_sym("{");
            auto fields = field_list();
            expect_sym("}");
            return rec_decl(std::move(r), std::move(fields));
        }
        if (is_kw("if")) {
            take();
            Term c = expr();
            expect_kw("then");
            Term a = stmt();
            expect_kw("else");
            return if_then_else(std::move(c), std::move(a), stmt());
        }
        if (is_kw("print")) {
            take();
            return print(expr());
        }
        if (is_kw("return")) {
            take();
            return return_(expr());
        }
        if (is_kw("object")) {
            take();
            std::string o = ident();
            return object(std::move(o), block());
        }
        if (is_kw("class")) return class_decl();
        if (is_kw("async")) {
            take();
            return async(block());
        }
        if (is_kw("call")) {
            take();
            std::string m = ident();
            expect_sym("(");
            Term arg = is_sym(")") ? nil() : par_level();
            expect_sym(")");
            expect_kw("of");
            Term callee = expr();
            expect_kw("in");
            std::string fut = ident();
            return call(std::move(m), std::move(arg), std::move(callee), std::move(fut));
        }
        if (is_kw("read")) {
            take();
            std::string fut = ident();
            expect_kw("into");
            return read(std::move(fut), ident());
        }
        return expr();
    }

    Term class_decl() {
        expect_kw("class");
        std::string c = ident();
        if (is_kw("implements")) {
            take();
            auto ifaces = id_list();
            if (warnings_) {
                std::string list;
                for (const auto& i : ifaces) list += (list.empty() ? "" : ", ") + i;
                warnings_->push_back("class " + c + ": implements clause ignored (" + list + ")");
            }
        }
        expect_sym("{");
        std::vector<Term> attrs;
        std::vector<std::pair<std::string, Term>> methods;
        while (!is_sym("}")) {
            if (is_sym(";")) {
                take();
                continue;
            }
            if (is_kw("var")) {
                take();
                std::string x = ident();
                Term init = nil();
                if (is_sym(":=")) {
                    take();
                    init = expr();
                }
                attrs.push_back(var_decl(std::move(x), std::move(init)));
                continue;
            }
            std::string m = ident();
            std::string p = opt_param();
            methods.emplace_back(std::move(m), lambda(std::move(p), block()));
        }
        expect_sym("}");
        Term a = nil();
        for (auto it = attrs.rbegin(); it != attrs.rend(); ++it) {
            a = a.is_nil() ? *it : seq(*it, a);
        }
        return class_def(std::move(c), std::move(a), std::move(methods));
    }

    std::vector<std::pair<std::string, Term>> field_list() {
        std::vector<std::pair<std::string, Term>> fields;
        while (!is_sym("}")) {
            std::string l = ident();
            expect_sym("=");
            fields.emplace_back(std::move(l), expr());
            if (!is_sym(",")) break;
            take();
        }
        return fields;
    }

    Term expr() { return or_expr(); }

    Term or_expr() {
        Term t = and_expr();
        while (is_kw("or")) {
            take();
            t = binop(BinaryOp::Or, std::move(t), and_expr());
        }
        return t;
    }

    Term and_expr() {
        Term t = cmp_expr();
        while (is_kw("and")) {
            take();
            t = binop(BinaryOp::And, std::move(t), cmp_expr());
        }
        return t;
    }

    Term cmp_expr() {
        Term t = add_expr();
        static const std::pair<const char*, BinaryOp> ops[] = {
            {"<", BinaryOp::Lt}, {"<=", BinaryOp::Le}, {"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}};
        for (auto [s, op] : ops) {
            if (is_sym(s)) {
                take();
                return binop(op, std::move(t), add_expr());
            }
        }
        return t;
    }

    Term add_expr() {
        Term t = mul_expr();
        while (is_sym("+") || is_sym("-")) {
            BinaryOp op = take().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
            t = binop(op, std::move(t), mul_expr());
        }
        return t;
    }

    Term mul_expr() {
        Term t = unary();
        while (is_sym("*")) {
            take();
            t = binop(BinaryOp::Mul, std::move(t), unary());
        }
        return t;
    }

    Term unary() {
        if (is_kw("not")) {
            take();
            return not_(unary());
        }
        return postfix();
    }

    bool juxtaposed_arg_start() const {
        const Token& t = peek();
        if (t.type == Tok::Number) return true;
        if (t.type == Tok::Symbol) return t.text == "@";
        return is_plain_ident() || t.text == "true" || t.text == "false" || t.text == "nil";
    }

    Term postfix() {
        if (!is_plain_ident()) return atom();
        std::string name = ident();
        if (is_sym(".")) {
            take();
            return rec_proj(std::move(name), ident());
        }
        if (is_sym("(")) {
            take();
            if (is_sym(")")) {
                take();
                return app(std::move(name), nil());
            }
            std::vector<Term> args{par_level()};
            while (is_sym(",")) {
                take();
                args.push_back(par_level());
            }
            expect_sym(")");
            if (args.size() == 1) return app(std::move(name), std::move(args[0]));
            if (args.size() == 3) return activate(std::move(name), args[0], args[1], args[2]);
            fail("expected one or three arguments");
        }
        if (juxtaposed_arg_start()) return app(std::move(name), atom());
        return var_ref(std::move(name));
    }

    Term atom() {
        const Token& t = peek();
        if (t.type == Tok::Number) return nat(number());
        if (is_kw("true")) {
            take();
            return boolean(true);
        }
        if (is_kw("false")) {
            take();
            return boolean(false);
        }
        if (is_kw("nil")) {
            take();
            return nil();
        }
        if (is_kw("skip")) {
            take();
            return skip();
        }
        if (is_kw("yield")) {
            take();
            return yield();
        }
        if (is_sym("@")) {
            take();
            return obj_ref(ident());
        }
        if (is_kw("new")) {
            take();
            return new_(ident());
        }
        if (is_kw("update")) {
            take();
            expect_sym("{");
            std::string k = ident();
            expect_sym(":");
            auto ids = id_list();
            expect_sym("}");
            if (k == "v") return update_v(std::move(ids));
            if (k == "f") return update_f(std::move(ids));
            if (k == "r") return update_r(std::move(ids));
            if (k == "c") return update_c(std::move(ids));
            fail("unknown update kind '" + k + "'");
        }
        if (is_kw("let")) {
            // expression form; the body extends as far as possible
            take();
            expect_kw("var");
            std::string x = ident();
            expect_sym(":=");
            Term bound = expr();
            expect_kw("in");
            return let(std::move(x), std::move(bound), stmt());
        }
        if (is_kw("lambda")) {
            take();
            std::string p = opt_param();
            return lambda(std::move(p), block());
        }
        if (is_kw("invoke")) {
            take();
            expect_sym("<");
            expect_sym("@");
            std::string caller = ident();
            expect_sym(",");
            std::uint64_t n = number();
            expect_sym(",");
            std::string m = ident();
            expect_sym("(");
            Term v = is_sym(")") ? nil() : par_level();
            expect_sym(")");
            expect_sym(">");
            return msg_invoke(std::move(caller), n, std::move(m), std::move(v));
        }
        if (is_kw("completion")) {
            take();
            expect_sym("<");
            std::uint64_t n = number();
            expect_sym(",");
            Term v = atom_or_postfix();
            expect_sym(">");
            return msg_completion(n, std::move(v));
        }
        if (is_sym("(")) {
            take();
            Term inner = par_level();
            expect_sym(")");
            return inner;
        }
        if (is_sym("{")) {
            // `{ l = e, ... }` and `{}` are record literals; anything else is a block.
            if (is_sym("}", 1) || (peek(1).type == Tok::Ident && is_sym("=", 2))) {
                take();
                auto fields = field_list();
                expect_sym("}");
                return record_lit(std::move(fields));
            }
            return block();
        }
        if (is_plain_ident()) return var_ref(ident());
        fail(t.type == Tok::End ? std::string("unexpected end of input") : "unexpected '" + t.text + "'");
    }

    Term atom_or_postfix() { return is_plain_ident() ? postfix() : atom(); }
};

}  // namespace

Term parse_term(std::string_view text, std::vector<std::string>* warnings) {
    Parser p(lex(text), warnings);
    return p.program();
}

}  // namespace dsos::syntax
