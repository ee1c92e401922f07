#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dsos/creol/creol.hpp"
#include "dsos/label/signature.hpp"
#include "dsos/syntax/term.hpp"
#include "dsos/uts/uts.hpp"

// Seeded random inputs for property checks. Every generator draws only
// from the engine passed in, so equal seeds give equal data.

namespace dsos::gen {

using Rng = std::mt19937_64;

std::size_t below(Rng& rng, std::size_t n);

/// nil, a natural below 100, or a boolean.
syntax::Term value(Rng& rng);

/// Map over a subset of `keys` with values from `elem`.
template <class F>
label::Datum map_over(Rng& rng, const std::vector<std::string>& keys, F elem) {
    label::DatumMap m;
    for (const auto& k : keys) {
        if (below(rng, 2)) m.emplace(k, elem(rng));
    }
    return label::Datum::map(std::move(m));
}

/// Random subset of `pool`, possibly empty.
uts::Delta delta(Rng& rng, const std::vector<std::string>& pool);

/// Variable store, function table and record table.
label::Datum store(Rng& rng, const std::vector<std::string>& keys);
label::Datum fun_table(Rng& rng, const std::vector<std::string>& keys);
label::Datum rec_table(Rng& rng, const std::vector<std::string>& keys);

/// Full Proteus snapshot with random data and upgrade components.
label::Snapshot proteus_snapshot(Rng& rng);

/// Random C, A, UN, UC, UA, UD over a small class and method alphabet.
creol::ClassTables class_tables(Rng& rng);

/// Full Creol snapshot: random global tables, empty objects and pools.
label::Snapshot creol_snapshot(Rng& rng);

struct SystemShape {
    std::size_t max_objects = 4;
    std::size_t max_calls = 3;
};

/// Terminating system of server objects and callers. Every call is
/// answered, so runs end without blocking.
syntax::Term creol_system(Rng& rng, SystemShape shape = {});

/// Sequential program declaring the bindings of `rho`, firing
/// update{v: delta}, then reading every variable mentioned.
syntax::Term update_program(const label::Datum& rho, const uts::Delta& delta);

}  // namespace dsos::gen
