#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dsos::syntax {

// Every construct of both reference languages. Proteus programs use the
// sequential subset; Creol systems add the object-level forms.
enum class TermKind : std::uint8_t {
    // values (value-added syntax)
    Nil,
    Nat,
    Bool,
    ObjRef,
    // sequential constructs
    Skip,
    Seq,
    VarRef,
    Let,
    VarDecl,
    Assign,
    FunDecl,
    App,
    RecDecl,
    RecProj,
    If,
    BinOp,
    Not,
    Print,
    UpdateV,
    UpdateF,
    UpdateR,
    // code stored in tables
    Lambda,
    RecordLit,
    // concurrent objects
    Object,
    Par,
    MethodDef,
    Return,
    ClassDef,
    New,
    Async,
    Yield,
    Call,
    Read,
    Activate,
    UpdateC,
    MsgInvoke,
    MsgCompletion,
};

enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Lt, Le, Eq, Ne, And, Or };

std::string_view kind_name(TermKind kind);
std::string_view op_symbol(BinaryOp op);

/// Immutable, structurally compared program term.
///
/// Nodes share a uniform layout: a kind, one integer payload (naturals,
/// booleans, operators), a list of identifier names and a list of children.
/// Copies are cheap; subterms are shared.
class Term {
public:
    Term();  // nil

    TermKind kind() const { return node_->kind; }
    std::uint64_t number() const { return node_->number; }
    const std::vector<std::string>& names() const { return node_->names; }
    const std::vector<Term>& kids() const { return node_->kids; }
    const std::string& name(std::size_t i = 0) const { return node_->names.at(i); }
    const Term& kid(std::size_t i) const { return node_->kids.at(i); }

    bool is(TermKind k) const { return kind() == k; }
    bool is_value() const;
    bool is_nil() const { return kind() == TermKind::Nil; }

    std::uint64_t as_nat() const;
    bool as_bool() const;
    BinaryOp op() const;
    /// Δ of an update construct.
    std::set<std::string> delta() const;

    friend bool operator==(const Term& a, const Term& b);
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

    std::size_t hash() const;

    static Term make(TermKind kind, std::uint64_t number, std::vector<std::string> names,
                     std::vector<Term> kids);

private:
    struct Node {
        TermKind kind = TermKind::Nil;
        std::uint64_t number = 0;
        std::vector<std::string> names;
        std::vector<Term> kids;
    };
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Constructors, one per term kind.
Term nil();
Term nat(std::uint64_t n);
Term boolean(bool b);
Term obj_ref(std::string o);
Term skip();
Term seq(Term first, Term second);
Term var_ref(std::string x);
Term let(std::string x, Term bound, Term body);
Term var_decl(std::string x, Term init);
Term assign(std::string x, Term rhs);
Term fun_decl(std::string f, std::string param, Term body);
Term app(std::string f, Term arg);
Term rec_decl(std::string r, std::vector<std::pair<std::string, Term>> fields);
Term rec_proj(std::string r, std::string l);
Term if_then_else(Term cond, Term then_branch, Term else_branch);
Term binop(BinaryOp op, Term lhs, Term rhs);
Term not_(Term e);
Term print(Term e);
Term update_v(std::set<std::string> delta);
Term update_f(std::set<std::string> delta);
Term update_r(std::set<std::string> delta);
Term lambda(std::string param, Term body);
Term record_lit(std::vector<std::pair<std::string, Term>> fields);
Term object(std::string o, Term body);
Term par(Term left, Term right);
Term method_def(std::string m, std::string param, Term body);
Term return_(Term e);
/// `attrs` is a statement made of attribute declarations (nil when none);
/// `methods` are (name, lambda) pairs.
Term class_def(std::string c, Term attrs, std::vector<std::pair<std::string, Term>> methods);
Term new_(std::string c);
Term async(Term body);
Term yield();
Term call(std::string m, Term arg, Term callee, std::string future);
Term read(std::string future, std::string x);
Term activate(std::string m, Term caller, Term label, Term arg);
Term update_c(std::set<std::string> delta);
Term msg_invoke(std::string caller, std::uint64_t n, std::string m, Term v);
Term msg_completion(std::uint64_t n, Term v);

/// Fields of a RecDecl or RecordLit.
std::vector<std::pair<std::string, Term>> record_fields(const Term& t);
/// Methods of a ClassDef as (name, lambda) pairs.
std::vector<std::pair<std::string, Term>> class_methods(const Term& t);
const Term& class_attrs(const Term& t);

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace dsos::syntax
