#pragma once

#include <string>
#include <vector>

#include "fstm/regex_ast.hpp"
#include "fstm/verdict.hpp"

namespace fstm {

// Complete DFA: the transition function is total (a sink state is added
// when needed) and states of a minimal DFA are canonically numbered in
// breadth-first order from the start with symbols explored in ascending
// order, so equal languages give byte-identical tables.
struct Dfa {
    int num_states = 0;
    int alphabet_size = 0;
    int start = 0;
    std::vector<std::vector<int>> next; // [state][symbol]
    std::vector<bool> accepting;

    bool operator==(const Dfa&) const = default;
    bool accepts(const std::string& s) const;
};

Dfa minimal_dfa(const RegexAst& r, int alphabet_size);

struct DfaStats {
    int nodes = 0;
    int edges = 0;      // (state, symbol) transitions, sink included
    double density = 0; // |E| / (|V| (|V|-1)) rounded to the nearest tenth
};

DfaStats dfa_stats(const Dfa& d);

// Decides language equality via minimal-DFA identity; a NotEquivalent
// verdict carries a shortest (then lexicographically first)
// distinguishing string, possibly the empty string.
Verdict regex_equivalent(const RegexAst& a, const RegexAst& b, int alphabet_size);

std::string to_dot(const Dfa& d);

} // namespace fstm
