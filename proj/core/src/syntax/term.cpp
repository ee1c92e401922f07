#include "dsos/syntax/term.hpp"

#include <functional>
#include <stdexcept>

namespace dsos::syntax {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::vector<std::string> sorted(const std::set<std::string>& s) {
    return {s.begin(), s.end()};
}

}  // namespace

std::string_view kind_name(TermKind kind) {
    switch (kind) {
        case TermKind::Nil: return "nil";
        case TermKind::Nat: return "nat";
        case TermKind::Bool: return "bool";
        case TermKind::ObjRef: return "objref";
        case TermKind::Skip: return "skip";
        case TermKind::Seq: return "seq";
        case TermKind::VarRef: return "varref";
        case TermKind::Let: return "let";
        case TermKind::VarDecl: return "vardecl";
        case TermKind::Assign: return "assign";
        case TermKind::FunDecl: return "fundecl";
        case TermKind::App: return "app";
        case TermKind::RecDecl: return "recdecl";
        case TermKind::RecProj: return "recproj";
        case TermKind::If: return "if";
        case TermKind::BinOp: return "binop";
        case TermKind::Not: return "not";
        case TermKind::Print: return "print";
        case TermKind::UpdateV: return "update_v";
        case TermKind::UpdateF: return "update_f";
        case TermKind::UpdateR: return "update_r";
        case TermKind::Lambda: return "lambda";
        case TermKind::RecordLit: return "record";
        case TermKind::Object: return "object";
        case TermKind::Par: return "par";
        case TermKind::MethodDef: return "methoddef";
        case TermKind::Return: return "return";
        case TermKind::ClassDef: return "classdef";
        case TermKind::New: return "new";
        case TermKind::Async: return "async";
        case TermKind::Yield: return "yield";
        case TermKind::Call: return "call";
        case TermKind::Read: return "read";
        case TermKind::Activate: return "activate";
        case TermKind::UpdateC: return "update_c";
        case TermKind::MsgInvoke: return "invoke";
        case TermKind::MsgCompletion: return "completion";
    }
    return "?";
}

std::string_view op_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::And: return "and";
        case BinaryOp::Or: return "or";
    }
    return "?";
}

Term::Term() {
    static const auto nil_node = std::make_shared<const Node>();
    node_ = nil_node;
}

Term Term::make(TermKind kind, std::uint64_t number, std::vector<std::string> names,
                std::vector<Term> kids) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->number = number;
    n->names = std::move(names);
    n->kids = std::move(kids);
    return Term(std::move(n));
}

bool Term::is_value() const {
    switch (kind()) {
        case TermKind::Nil:
        case TermKind::Nat:
        case TermKind::Bool:
        case TermKind::ObjRef:
            return true;
        default:
            return false;
    }
}

std::uint64_t Term::as_nat() const {
    if (kind() != TermKind::Nat) throw std::logic_error("not a natural");
    return number();
}

bool Term::as_bool() const {
    if (kind() != TermKind::Bool) throw std::logic_error("not a boolean");
    return number() != 0;
}

BinaryOp Term::op() const {
    if (kind() != TermKind::BinOp) throw std::logic_error("not a binary operation");
    return static_cast<BinaryOp>(number());
}

std::set<std::string> Term::delta() const {
    return {names().begin(), names().end()};
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    return a.kind() == b.kind() && a.number() == b.number() && a.names() == b.names() &&
           a.kids() == b.kids();
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    if (auto c = a.number() <=> b.number(); c != 0) return c;
    if (auto c = a.names() <=> b.names(); c != 0) return c;
    return a.kids() <=> b.kids();
}

std::size_t Term::hash() const {
    std::size_t h = static_cast<std::size_t>(kind());
    h = mix(h, std::hash<std::uint64_t>{}(number()));
    for (const auto& n : names()) h = mix(h, std::hash<std::string>{}(n));
    for (const auto& k : kids()) h = mix(h, k.hash());
    return h;
}

Term nil() { return Term(); }
Term nat(std::uint64_t n) { return Term::make(TermKind::Nat, n, {}, {}); }
Term boolean(bool b) { return Term::make(TermKind::Bool, b ? 1 : 0, {}, {}); }
Term obj_ref(std::string o) { return Term::make(TermKind::ObjRef, 0, {std::move(o)}, {}); }
Term skip() { return Term::make(TermKind::Skip, 0, {}, {}); }
Term seq(Term first, Term second) {
    return Term::make(TermKind::Seq, 0, {}, {std::move(first), std::move(second)});
}
Term var_ref(std::string x) { return Term::make(TermKind::VarRef, 0, {std::move(x)}, {}); }
Term let(std::string x, Term bound, Term body) {
    return Term::make(TermKind::Let, 0, {std::move(x)}, {std::move(bound), std::move(body)});
}
Term var_decl(std::string x, Term init) {
    return Term::make(TermKind::VarDecl, 0, {std::move(x)}, {std::move(init)});
}
Term assign(std::string x, Term rhs) {
    return Term::make(TermKind::Assign, 0, {std::move(x)}, {std::move(rhs)});
}
Term fun_decl(std::string f, std::string param, Term body) {
    return Term::make(TermKind::FunDecl, 0, {std::move(f), std::move(param)}, {std::move(body)});
}
Term app(std::string f, Term arg) {
    return Term::make(TermKind::App, 0, {std::move(f)}, {std::move(arg)});
}

namespace {
Term fields_term(TermKind kind, std::vector<std::string> names,
                 std::vector<std::pair<std::string, Term>> fields) {
    std::vector<Term> kids;
    for (auto& [l, e] : fields) {
        names.push_back(std::move(l));
        kids.push_back(std::move(e));
    }
    return Term::make(kind, 0, std::move(names), std::move(kids));
}
}  // namespace

Term rec_decl(std::string r, std::vector<std::pair<std::string, Term>> fields) {
    return fields_term(TermKind::RecDecl, {std::move(r)}, std::move(fields));
}
Term rec_proj(std::string r, std::string l) {
    return Term::make(TermKind::RecProj, 0, {std::move(r), std::move(l)}, {});
}
Term if_then_else(Term cond, Term then_branch, Term else_branch) {
    return Term::make(TermKind::If, 0, {},
                      {std::move(cond), std::move(then_branch), std::move(else_branch)});
}
Term binop(BinaryOp op, Term lhs, Term rhs) {
    return Term::make(TermKind::BinOp, static_cast<std::uint64_t>(op), {},
                      {std::move(lhs), std::move(rhs)});
}
Term not_(Term e) { return Term::make(TermKind::Not, 0, {}, {std::move(e)}); }
Term print(Term e) { return Term::make(TermKind::Print, 0, {}, {std::move(e)}); }
Term update_v(std::set<std::string> delta) {
    return Term::make(TermKind::UpdateV, 0, sorted(delta), {});
}
Term update_f(std::set<std::string> delta) {
    return Term::make(TermKind::UpdateF, 0, sorted(delta), {});
}
Term update_r(std::set<std::string> delta) {
    return Term::make(TermKind::UpdateR, 0, sorted(delta), {});
}
Term lambda(std::string param, Term body) {
    return Term::make(TermKind::Lambda, 0, {std::move(param)}, {std::move(body)});
}
Term record_lit(std::vector<std::pair<std::string, Term>> fields) {
    return fields_term(TermKind::RecordLit, {}, std::move(fields));
}
Term object(std::string o, Term body) {
    return Term::make(TermKind::Object, 0, {std::move(o)}, {std::move(body)});
}
Term par(Term left, Term right) {
    return Term::make(TermKind::Par, 0, {}, {std::move(left), std::move(right)});
}
Term method_def(std::string m, std::string param, Term body) {
    return Term::make(TermKind::MethodDef, 0, {std::move(m), std::move(param)}, {std::move(body)});
}
Term return_(Term e) { return Term::make(TermKind::Return, 0, {}, {std::move(e)}); }
Term class_def(std::string c, Term attrs, std::vector<std::pair<std::string, Term>> methods) {
    std::vector<std::string> names{std::move(c)};
    std::vector<Term> kids{std::move(attrs)};
    for (auto& [m, body] : methods) {
        names.push_back(std::move(m));
        kids.push_back(std::move(body));
    }
    return Term::make(TermKind::ClassDef, 0, std::move(names), std::move(kids));
}
Term new_(std::string c) { return Term::make(TermKind::New, 0, {std::move(c)}, {}); }
Term async(Term body) { return Term::make(TermKind::Async, 0, {}, {std::move(body)}); }
Term yield() { return Term::make(TermKind::Yield, 0, {}, {}); }
Term call(std::string m, Term arg, Term callee, std::string future) {
    return Term::make(TermKind::Call, 0, {std::move(m), std::move(future)},
                      {std::move(arg), std::move(callee)});
}
Term read(std::string future, std::string x) {
    return Term::make(TermKind::Read, 0, {std::move(future), std::move(x)}, {});
}
Term activate(std::string m, Term caller, Term label, Term arg) {
    return Term::make(TermKind::Activate, 0, {std::move(m)},
                      {std::move(caller), std::move(label), std::move(arg)});
}
Term update_c(std::set<std::string> delta) {
    return Term::make(TermKind::UpdateC, 0, sorted(delta), {});
}
Term msg_invoke(std::string caller, std::uint64_t n, std::string m, Term v) {
    return Term::make(TermKind::MsgInvoke, n, {std::move(caller), std::move(m)}, {std::move(v)});
}
Term msg_completion(std::uint64_t n, Term v) {
    return Term::make(TermKind::MsgCompletion, n, {}, {std::move(v)});
}

std::vector<std::pair<std::string, Term>> record_fields(const Term& t) {
    std::size_t first = t.is(TermKind::RecDecl) ? 1 : 0;
    std::vector<std::pair<std::string, Term>> out;
    for (std::size_t i = first; i < t.names().size(); ++i) {
        out.emplace_back(t.name(i), t.kid(i - first));
    }
    return out;
}

std::vector<std::pair<std::string, Term>> class_methods(const Term& t) {
    std::vector<std::pair<std::string, Term>> out;
    for (std::size_t i = 1; i < t.names().size(); ++i) out.emplace_back(t.name(i), t.kid(i));
    return out;
}

const Term& class_attrs(const Term& t) { return t.kid(0); }

}  // namespace dsos::syntax
