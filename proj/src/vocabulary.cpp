#include "fstm/vocabulary.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "fstm/rng.hpp"

namespace fstm {

std::string VocabParams::validate() const {
    if (num_propositions < 1 || num_predicates < 1 || num_objects < 1)
        return "vocabulary counts must be >= 1";
    if (min_predicate_arity < 1 || min_predicate_arity > max_predicate_arity)
        return "predicate arity range must satisfy 1 <= min <= max";
    if (free_variable_prob < 0.0 || free_variable_prob > 1.0)
        return "free_variable_prob must lie in [0, 1]";
    if (alphabet_size < 1 || alphabet_size > 10)
        return "alphabet_size must lie in [1, 10]";
    return "";
}

const PredicateEntry* Vocabulary::find_predicate(const std::string& name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

bool Vocabulary::has_proposition(const std::string& name) const {
    return std::any_of(propositions.begin(), propositions.end(),
                       [&](const PropositionEntry& p) { return p.name == name; });
}

namespace {

std::vector<std::string> draw_words(std::span<const char* const> list, int count, Rng& rng) {
    if (count > static_cast<int>(list.size()))
        throw std::runtime_error("word list exhausted: requested " + std::to_string(count) +
                                 " of " + std::to_string(list.size()));
    std::vector<std::string> pool(list.begin(), list.end());
    rng.shuffle(pool);
    pool.resize(count);
    return pool;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

Vocabulary make_vocabulary(const VocabParams& params) {
    if (auto err = params.validate(); !err.empty()) throw std::runtime_error(err);
    Rng rng(params.seed);
    Vocabulary v;
    v.alphabet_size = params.alphabet_size;

    const bool english = params.mode == VocabParams::Mode::English;
    std::vector<std::string> verbs, names;
    if (english) {
        verbs = draw_words(verb_word_list(), params.num_predicates, rng);
        names = draw_words(name_word_list(), params.num_objects, rng);
    }

    for (int i = 0; i < params.num_propositions; ++i) {
        PropositionEntry e;
        e.name = "p" + std::to_string(i + 1);
        if (english) {
            const char* verb = verb_word_list()[rng.index(verb_word_list().size())];
            const char* name = name_word_list()[rng.index(name_word_list().size())];
            e.gloss = std::string(name) + " likes to " + lower(verb);
        }
        v.propositions.push_back(std::move(e));
    }

    int arity_span = params.max_predicate_arity - params.min_predicate_arity + 1;
    for (int i = 0; i < params.num_predicates; ++i) {
        PredicateEntry e;
        e.arity = params.min_predicate_arity + static_cast<int>(rng.below(arity_span));
        if (english) {
            e.name = verbs[i];
            e.gloss = "to " + lower(verbs[i]);
        } else {
            e.name = "pred" + std::to_string(i + 1);
        }
        v.predicates.push_back(std::move(e));
    }

    for (int i = 0; i < params.num_objects; ++i)
        v.objects.push_back(english ? names[i] : "p" + std::to_string(i + 1));

    return v;
}

} // namespace fstm
