#pragma once

#include <cstdint>

#include "fstm/cfg.hpp"
#include "fstm/formula.hpp"
#include "fstm/regex_ast.hpp"
#include "fstm/vocabulary.hpp"

namespace fstm {

class Rng;

struct GroundExpression {
    FormulaPtr formula; // logic kinds
    RegexPtr regex;     // regex kind
    std::string text;   // canonical printed form
};

// Replaces the placeholder terminals of an all-terminal CFG expression by
// vocabulary entries: "v" by a proposition, "p" by a grounded predicate,
// "f" by the next bound variable (x1, x2, ... left to right), "sigma" by
// an alphabet symbol.  Predicate arguments are objects, each replaced by
// a variable from the quantifier prefix with probability
// free_variable_prob; with no quantifiers in scope the constant is kept,
// so grounded sentences are always closed.
GroundExpression ground_expression(const CfgExpression& expr, const Vocabulary& vocab,
                                   const VocabParams& params, GrammarKind kind, Rng& rng);

GroundExpression ground_expression(const CfgExpression& expr, const Vocabulary& vocab,
                                   const VocabParams& params, GrammarKind kind, uint64_t seed);

} // namespace fstm
