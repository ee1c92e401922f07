#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dsos/engine/run.hpp"

namespace dsos::engine {

struct StateGraph {
    struct Edge {
        std::size_t from;
        std::size_t to;
        std::string rule;
        std::string actor;
        bool jump = false;
    };

    std::vector<Configuration> states;
    std::vector<Edge> edges;
    /// Classification of states without successors.
    std::map<std::size_t, RunStatus> terminal;
    std::size_t depth = 0;

    std::vector<std::size_t> terminal_states(RunStatus kind) const;
};

/// Breadth-first enumeration of every scheduler choice. Throws
/// DepthExceeded when states remain unexpanded at `max_depth` or the
/// state count passes `max_states`.
StateGraph explore(const Language& lang, const Term& program, std::size_t max_depth,
                   std::size_t max_states = 100000);

}  // namespace dsos::engine
