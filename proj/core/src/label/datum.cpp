#include "dsos/label/datum.hpp"

#include <algorithm>
#include <stdexcept>

#include "dsos/syntax/text.hpp"

namespace dsos::label {

namespace {
const DatumMap& empty_map() {
    static const DatumMap m;
    return m;
}
const DatumBag& empty_bag() {
    static const DatumBag b;
    return b;
}
}  // namespace

Datum::Datum() = default;

Datum Datum::nat(std::uint64_t n) {
    Datum d;
    d.kind_ = Kind::Nat;
    d.nat_ = n;
    return d;
}

Datum Datum::atom(std::string s) {
    Datum d;
    d.kind_ = Kind::Atom;
    d.atom_ = std::move(s);
    return d;
}

Datum Datum::term(syntax::Term t) {
    Datum d;
    d.kind_ = Kind::Term;
    d.term_ = std::move(t);
    return d;
}

Datum Datum::map(DatumMap m) {
    Datum d;
    d.kind_ = Kind::Map;
    if (!m.empty()) d.map_ = std::make_shared<const DatumMap>(std::move(m));
    return d;
}

Datum Datum::bag(DatumBag b) {
    std::sort(b.begin(), b.end());
    Datum d;
    d.kind_ = Kind::Bag;
    if (!b.empty()) d.bag_ = std::make_shared<const DatumBag>(std::move(b));
    return d;
}

std::uint64_t Datum::as_nat() const {
    if (kind_ != Kind::Nat) throw std::logic_error("datum is not a natural");
    return nat_;
}

const std::string& Datum::as_atom() const {
    if (kind_ != Kind::Atom) throw std::logic_error("datum is not an atom");
    return atom_;
}

const syntax::Term& Datum::as_term() const {
    if (kind_ != Kind::Term) throw std::logic_error("datum is not a term");
    return term_;
}

const DatumMap& Datum::as_map() const {
    if (kind_ != Kind::Map) throw std::logic_error("datum is not a map");
    return map_ ? *map_ : empty_map();
}

const DatumBag& Datum::as_bag() const {
    if (kind_ != Kind::Bag) throw std::logic_error("datum is not a bag");
    return bag_ ? *bag_ : empty_bag();
}

const Datum* Datum::lookup(const std::string& key) const {
    const auto& m = as_map();
    auto it = m.find(key);
    return it == m.end() ? nullptr : &it->second;
}

Datum Datum::with(const std::string& key, Datum value) const {
    DatumMap m = as_map();
    m.insert_or_assign(key, std::move(value));
    return map(std::move(m));
}

Datum Datum::without(const std::string& key) const {
    if (!contains(key)) return *this;
    DatumMap m = as_map();
    m.erase(key);
    return map(std::move(m));
}

Datum Datum::inserted(Datum elem) const {
    DatumBag b = as_bag();
    b.insert(std::upper_bound(b.begin(), b.end(), elem), std::move(elem));
    Datum d;
    d.kind_ = Kind::Bag;
    d.bag_ = std::make_shared<const DatumBag>(std::move(b));
    return d;
}

Datum Datum::erased(const Datum& elem) const {
    const auto& src = as_bag();
    auto it = std::lower_bound(src.begin(), src.end(), elem);
    if (it == src.end() || !(*it == elem)) return *this;
    DatumBag b = src;
    b.erase(b.begin() + (it - src.begin()));
    return bag(std::move(b));
}

std::size_t Datum::count(const Datum& elem) const {
    const auto& b = as_bag();
    auto [lo, hi] = std::equal_range(b.begin(), b.end(), elem);
    return static_cast<std::size_t>(hi - lo);
}

bool operator==(const Datum& a, const Datum& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Datum& a, const Datum& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    switch (a.kind_) {
        case Datum::Kind::Unit: return std::strong_ordering::equal;
        case Datum::Kind::Nat: return a.nat_ <=> b.nat_;
        case Datum::Kind::Atom: return a.atom_ <=> b.atom_;
        case Datum::Kind::Term: return a.term_ <=> b.term_;
        case Datum::Kind::Map:
            if (a.map_ == b.map_) return std::strong_ordering::equal;
            return a.as_map() <=> b.as_map();
        case Datum::Kind::Bag:
            if (a.bag_ == b.bag_) return std::strong_ordering::equal;
            return a.as_bag() <=> b.as_bag();
    }
    return std::strong_ordering::equal;
}

std::string to_string(const Datum& d) {
    switch (d.kind()) {
        case Datum::Kind::Unit: return "()";
        case Datum::Kind::Nat: return std::to_string(d.as_nat());
        case Datum::Kind::Atom: return d.as_atom().empty() ? "\"\"" : d.as_atom();
        case Datum::Kind::Term: return syntax::render(d.as_term());
        case Datum::Kind::Map: {
            std::string s = "{";
            bool first = true;
            for (const auto& [k, v] : d.as_map()) {
                if (!first) s += ", ";
                first = false;
                s += k + "↦" + to_string(v);
            }
            return s + "}";
        }
        case Datum::Kind::Bag: {
            std::string s = "[";
            bool first = true;
            for (const auto& v : d.as_bag()) {
                if (!first) s += ", ";
                first = false;
                s += to_string(v);
            }
            return s + "]";
        }
    }
    return "?";
}

}  // namespace dsos::label
