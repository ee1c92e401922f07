#pragma once

#include <map>
#include <string>
#include <vector>

#include "dsos/label/signature.hpp"
#include "dsos/syntax/term.hpp"

namespace dsos::engine {

/// One binding of the monolithic heap: a variable value, a function
/// (lambda) or a record (record literal).
struct HeapCell {
    enum class Sort { Var, Fun, Rec };
    Sort sort = Sort::Var;
    syntax::Term content;
    friend bool operator==(const HeapCell&, const HeapCell&) = default;
};

using Heap = std::map<std::string, HeapCell>;

struct OracleTrace {
    /// terms[0] is the program; terms[i] follows i steps.
    std::vector<syntax::Term> terms;
    std::vector<Heap> heaps;
    bool stuck = false;
    std::string reason;
};

/// Rejects programs that use one identifier for two sorts.
/// Throws InvalidProgram.
void check_disjoint(const syntax::Term& program);

/// Single-heap interpreter of the sequential language. `pending` holds
/// upgrade bindings consumed by update constructs. Output of print is
/// discarded.
OracleTrace oracle_run(const syntax::Term& program, const Heap& pending = {},
                       bool consume_all = false, std::size_t fuel = 100000);

/// The union of the S, F and R components of a snapshot.
Heap heap_union(const label::Snapshot& snap);

}  // namespace dsos::engine
