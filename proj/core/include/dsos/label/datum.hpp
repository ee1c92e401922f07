#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dsos/syntax/term.hpp"

namespace dsos::label {

class Datum;
using DatumMap = std::map<std::string, Datum>;
/// Multiset kept sorted so that structural equality is order-independent.
using DatumBag = std::vector<Datum>;

/// Immutable semantic object stored in a label component.
///
/// One of: the unit object, a natural, an atom (short string), a program
/// term, a finite map from identifiers, or a finite multiset.
class Datum {
public:
    enum class Kind : std::uint8_t { Unit, Nat, Atom, Term, Map, Bag };

    Datum();  // unit

    static Datum unit() { return Datum(); }
    static Datum nat(std::uint64_t n);
    static Datum atom(std::string s);
    static Datum term(syntax::Term t);
    static Datum map(DatumMap m = {});
    static Datum bag(DatumBag b = {});

    Kind kind() const { return kind_; }
    bool is_map() const { return kind_ == Kind::Map; }
    bool is_bag() const { return kind_ == Kind::Bag; }

    std::uint64_t as_nat() const;
    const std::string& as_atom() const;
    const syntax::Term& as_term() const;
    const DatumMap& as_map() const;
    const DatumBag& as_bag() const;

    // map helpers; all return new values
    const Datum* lookup(const std::string& key) const;
    bool contains(const std::string& key) const { return lookup(key) != nullptr; }
    Datum with(const std::string& key, Datum value) const;
    Datum without(const std::string& key) const;

    // bag helpers
    Datum inserted(Datum elem) const;
    /// Removes one occurrence; unchanged when absent.
    Datum erased(const Datum& elem) const;
    std::size_t count(const Datum& elem) const;

    friend bool operator==(const Datum& a, const Datum& b);
    friend std::strong_ordering operator<=>(const Datum& a, const Datum& b);

private:
    Kind kind_ = Kind::Unit;
    std::uint64_t nat_ = 0;
    std::string atom_;
    syntax::Term term_;
    std::shared_ptr<const DatumMap> map_;
    std::shared_ptr<const DatumBag> bag_;
};

/// Short human-readable rendering, used by pretty output and diagnostics.
std::string to_string(const Datum& d);

}  // namespace dsos::label
