#include "fstm/grounding.hpp"

#include <stdexcept>

#include "fstm/parse.hpp"
#include "fstm/rng.hpp"

namespace fstm {

GroundExpression ground_expression(const CfgExpression& expr, const Vocabulary& vocab,
                                   const VocabParams& params, GrammarKind kind, Rng& rng) {
    // Quantifier variables are assigned left to right from the prefix, so
    // every later predicate slot may draw from the full prefix.
    std::vector<std::string> prefix_vars;
    for (const auto& tok : expr.tokens)
        if (tok.text == "f")
            prefix_vars.push_back(Vocabulary::variable_name(static_cast<int>(prefix_vars.size())));

    std::string text;
    size_t next_var = 0;
    for (const auto& tok : expr.tokens) {
        if (kind == GrammarKind::Regex) {
            if (tok.text == "sigma")
                text += static_cast<char>('0' + rng.below(vocab.alphabet_size));
            else
                text += tok.text;
            continue;
        }
        if (!text.empty()) text += ' ';
        if (tok.text == "v") {
            text += vocab.propositions[rng.index(vocab.propositions.size())].name;
        } else if (tok.text == "f") {
            text += prefix_vars[next_var++];
        } else if (tok.text == "p") {
            const PredicateEntry& pred = vocab.predicates[rng.index(vocab.predicates.size())];
            text += pred.name;
            text += '(';
            for (int a = 0; a < pred.arity; ++a) {
                if (a) text += ", ";
                std::string arg = vocab.objects[rng.index(vocab.objects.size())];
                if (!prefix_vars.empty() && rng.chance(params.free_variable_prob))
                    arg = prefix_vars[rng.index(prefix_vars.size())];
                text += arg;
            }
            text += ')';
        } else {
            text += tok.text;
        }
    }

    GroundExpression out;
    if (kind == GrammarKind::Regex) {
        ParseOutcome p = parse_regex(text, vocab.alphabet_size);
        if (!p.ok())
            throw std::runtime_error("grounded regex failed to parse: " + text + " (" +
                                     p.error->detail + ")");
        out.regex = p.regex;
        out.text = print_regex(*p.regex);
    } else {
        LogicMode mode = is_fol_kind(kind) ? LogicMode::Fol : LogicMode::Pl;
        ParseOutcome p = parse_logic(text, mode, &vocab);
        if (!p.ok())
            throw std::runtime_error("grounded formula failed to parse: " + text + " (" +
                                     p.error->detail + ")");
        out.formula = p.formula;
        out.text = print_formula(*p.formula);
    }
    return out;
}

GroundExpression ground_expression(const CfgExpression& expr, const Vocabulary& vocab,
                                   const VocabParams& params, GrammarKind kind, uint64_t seed) {
    Rng rng(seed);
    return ground_expression(expr, vocab, params, kind, rng);
}

} // namespace fstm
