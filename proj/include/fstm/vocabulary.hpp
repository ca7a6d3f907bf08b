#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fstm/cfg.hpp"

namespace fstm {

struct VocabParams {
    int num_propositions = 12;
    int num_predicates = 8;
    int num_objects = 12;
    int min_predicate_arity = 1;
    int max_predicate_arity = 2;
    double free_variable_prob = 0.25;
    int alphabet_size = 2;
    enum class Mode { Synthetic, English };
    Mode mode = Mode::Synthetic;
    uint64_t seed = 0;

    std::string validate() const; // empty when ok
};

struct PredicateEntry {
    std::string name;
    int arity = 1;
    std::string gloss; // english mode only
};

struct PropositionEntry {
    std::string name;
    std::string gloss;
};

struct Vocabulary {
    std::vector<PropositionEntry> propositions;
    std::vector<PredicateEntry> predicates;
    std::vector<std::string> objects;
    int alphabet_size = 2;

    static std::string variable_name(int i) { return "x" + std::to_string(i + 1); }

    const PredicateEntry* find_predicate(const std::string& name) const;
    bool has_proposition(const std::string& name) const;
};

// Bundled word lists standing in for external vocabulary databases.
std::span<const char* const> verb_word_list();
std::span<const char* const> name_word_list();

// Deterministic for a given (params, seed).  Throws when a word list is
// smaller than the requested count.
Vocabulary make_vocabulary(const VocabParams& params);

} // namespace fstm
