#include <string>

#include "dsos/syntax/text.hpp"

namespace dsos::syntax {

namespace {

// Binding strength, lowest first. Matches the parser's levels.
enum Level : int { Par = 0, Seq = 1, Stmt = 2, Or = 3, And = 4, Cmp = 5, Add = 6, Mul = 7,
                   Unary = 8, Postfix = 9, Atom = 10 };

int binop_level(BinaryOp op) {
    switch (op) {
        case BinaryOp::Or: return Or;
        case BinaryOp::And: return And;
        case BinaryOp::Add:
        case BinaryOp::Sub: return Add;
        case BinaryOp::Mul: return Mul;
        default: return Cmp;
    }
}

int level_of(const Term& t) {
    switch (t.kind()) {
        case TermKind::Par: return Par;
        case TermKind::Seq: return Seq;
        case TermKind::Let:
        case TermKind::VarDecl:
        case TermKind::Assign:
        case TermKind::FunDecl:
        case TermKind::RecDecl:
        case TermKind::If:
        case TermKind::Print:
        case TermKind::Object:
        case TermKind::MethodDef:
        case TermKind::Return:
        case TermKind::ClassDef:
        case TermKind::Async:
        case TermKind::Call:
        case TermKind::Read: return Stmt;
        case TermKind::BinOp: return binop_level(t.op());
        case TermKind::Not: return Unary;
        case TermKind::App:
        case TermKind::RecProj:
        case TermKind::Activate: return Postfix;
        default: return Atom;
    }
}

class Renderer {
public:
    std::string out;

    void term(const Term& t, int ctx) {
        const bool wrap = level_of(t) < ctx;
        if (wrap) out += '(';
        bare(t);
        if (wrap) out += ')';
    }

private:
    void block(const Term& body) {
        out += "{ ";
        term(body, Par);
        out += " }";
    }

    void param(const std::string& p) {
        out += '(';
        if (p != "_") out += p;
        out += ')';
    }

    void arg_list(const Term& arg) {
        out += '(';
        if (!arg.is_nil()) term(arg, Par);
        out += ')';
    }

    void ids(const std::vector<std::string>& names, std::size_t from = 0) {
        for (std::size_t i = from; i < names.size(); ++i) {
            if (i > from) out += ", ";
            out += names[i];
        }
    }

    void fields(const Term& t) {
        bool first = true;
        for (const auto& [l, e] : record_fields(t)) {
            if (!first) out += ", ";
            first = false;
            out += l + " = ";
            term(e, Or);
        }
    }

    void bare(const Term& t) {
        switch (t.kind()) {
            case TermKind::Nil: out += "nil"; break;
            case TermKind::Nat: out += std::to_string(t.number()); break;
            case TermKind::Bool: out += t.as_bool() ? "true" : "false"; break;
            case TermKind::ObjRef: out += "@" + t.name(); break;
            case TermKind::Skip: out += "skip"; break;
            case TermKind::Yield: out += "yield"; break;
            case TermKind::VarRef: out += t.name(); break;
            case TermKind::Seq:
                term(t.kid(0), Stmt);
                out += "; ";
                term(t.kid(1), Seq);
                break;
            case TermKind::Par:
                term(t.kid(0), Par);
                out += " || ";
                term(t.kid(1), Seq);
                break;
            case TermKind::Let:
                out += "let var " + t.name() + " := ";
                term(t.kid(0), Or);
                out += " in ";
                term(t.kid(1), Stmt);
                break;
            case TermKind::VarDecl:
                out += "var " + t.name() + " := ";
                term(t.kid(0), Or);
                break;
            case TermKind::Assign:
                out += t.name() + " := ";
                term(t.kid(0), Or);
                break;
            case TermKind::FunDecl:
                out += "fun " + t.name(0);
                param(t.name(1));
                out += ' ';
                block(t.kid(0));
                break;
            case TermKind::MethodDef:
                out += "method " + t.name(0);
                param(t.name(1));
                out += ' ';
                block(t.kid(0));
                break;
            case TermKind::App:
                out += t.name();
                arg_list(t.kid(0));
                break;
            case TermKind::RecDecl:
                out += "record " + t.name() + " { ";
                fields(t);
                out += " }";
                break;
            case TermKind::RecordLit:
                out += '{';
                fields(t);
                out += '}';
                break;
            case TermKind::RecProj: out += t.name(0) + "." + t.name(1); break;
            case TermKind::If:
                out += "if ";
                term(t.kid(0), Or);
                out += " then ";
                term(t.kid(1), Stmt);
                out += " else ";
                term(t.kid(2), Stmt);
                break;
            case TermKind::BinOp: {
                const int lvl = binop_level(t.op());
                const bool cmp = lvl == Cmp;
                term(t.kid(0), cmp ? lvl + 1 : lvl);
                out += " ";
                out += op_symbol(t.op());
                out += " ";
                term(t.kid(1), lvl + 1);
                break;
            }
            case TermKind::Not:
                out += "not ";
                term(t.kid(0), Unary);
                break;
            case TermKind::Print:
                out += "print ";
                term(t.kid(0), Or);
                break;
            case TermKind::Return:
                out += "return ";
                term(t.kid(0), Or);
                break;
            case TermKind::UpdateV:
            case TermKind::UpdateF:
            case TermKind::UpdateR:
            case TermKind::UpdateC: {
                const char* k = t.is(TermKind::UpdateV)   ? "v"
                                : t.is(TermKind::UpdateF) ? "f"
                                : t.is(TermKind::UpdateR) ? "r"
                                                          : "c";
                out += "update{";
                out += k;
                out += ": ";
                ids(t.names());
                out += '}';
                break;
            }
            case TermKind::Lambda:
                out += "lambda";
                param(t.name());
                out += ' ';
                block(t.kid(0));
                break;
            case TermKind::Object:
                out += "object " + t.name() + " ";
                block(t.kid(0));
                break;
            case TermKind::ClassDef: {
                out += "class " + t.name() + " { ";
                const Term* a = &class_attrs(t);
                while (!a->is_nil()) {
                    const Term& decl = a->is(TermKind::Seq) ? a->kid(0) : *a;
                    term(decl, Stmt);
                    out += "; ";
                    if (!a->is(TermKind::Seq)) break;
                    a = &a->kid(1);
                }
                for (const auto& [m, lam] : class_methods(t)) {
                    out += m;
                    param(lam.name());
                    out += ' ';
                    block(lam.kid(0));
                    out += ' ';
                }
                out += '}';
                break;
            }
            case TermKind::New: out += "new " + t.name(); break;
            case TermKind::Async:
                out += "async ";
                block(t.kid(0));
                break;
            case TermKind::Call:
                out += "call " + t.name(0);
                arg_list(t.kid(0));
                out += " of ";
                term(t.kid(1), Or);
                out += " in " + t.name(1);
                break;
            case TermKind::Read: out += "read " + t.name(0) + " into " + t.name(1); break;
            case TermKind::Activate:
                out += t.name() + "(";
                term(t.kid(0), Par);
                out += ", ";
                term(t.kid(1), Par);
                out += ", ";
                term(t.kid(2), Par);
                out += ')';
                break;
            case TermKind::MsgInvoke:
                out += "invoke<@" + t.name(0) + ", " + std::to_string(t.number()) + ", " +
                       t.name(1);
                arg_list(t.kid(0));
                out += '>';
                break;
            case TermKind::MsgCompletion:
                out += "completion<" + std::to_string(t.number()) + ", ";
                term(t.kid(0), Postfix);
                out += '>';
                break;
        }
    }
};

}  // namespace

std::string render(const Term& t) {
    Renderer r;
    r.term(t, Par);
    return r.out;
}

}  // namespace dsos::syntax
