#pragma once

// Second transcriptions of the upgrade formulas over plain standard
// containers. Values are opaque strings (rendered code or values), so
// nothing here depends on the library's data model.

#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace oracle {

using Ids = std::set<std::string>;
using Table = std::map<std::string, std::string>;

struct TableUpdate {
    Table rho;
    Table rho_u;
    bool operator==(const TableUpdate&) const = default;
};

/// Two-branch update of a store by its upgrade store.
TableUpdate table_update(const Ids& delta, const Table& rho, const Table& rho_u, bool consume_all);

using Methods = std::map<std::string, std::string>;
using Versions = std::map<std::string, std::uint64_t>;

struct ClassState {
    std::map<std::string, Methods> c;
    std::map<std::string, std::string> a;
    Versions un;
    std::map<std::string, Methods> uc;
    std::map<std::string, std::string> ua;
    std::map<std::string, Versions> ud;
    bool operator==(const ClassState&) const = default;
};

/// rho ⊑ rho': every required class present with at least that version.
bool requires_met(const Versions& rho, const Versions& rho_prime);

/// Class upgrade endofunctor.
ClassState class_upgrade(const Ids& delta, const ClassState& in);

}  // namespace oracle
