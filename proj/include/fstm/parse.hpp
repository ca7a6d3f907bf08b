#pragma once

#include <optional>
#include <string>

#include "fstm/cfg.hpp"
#include "fstm/formula.hpp"
#include "fstm/regex_ast.hpp"
#include "fstm/vocabulary.hpp"

namespace fstm {

enum class ParseErrorReason {
    LexError,
    GrammarError,
    UnknownSymbol,
    ArityMismatch,
    UnboundVariable,
    EmptyOutput,
};

std::string to_string(ParseErrorReason reason);

struct ParseError {
    ParseErrorReason reason;
    std::string detail;
    std::string span; // offending text, when known
};

struct ParseOutcome {
    FormulaPtr formula; // set on logic success
    RegexPtr regex;     // set on regex success
    std::optional<ParseError> error;

    bool ok() const { return !error.has_value(); }
};

// Total on arbitrary text.  Accepts Unicode and ASCII operator spellings,
// validates FOL predicates against the vocabulary when one is given, and
// strips surrounding prose by extracting the longest parsable span.
ParseOutcome parse_logic(const std::string& text, LogicMode mode,
                         const Vocabulary* vocab = nullptr);

ParseOutcome parse_regex(const std::string& text, int alphabet_size);

struct LeakageResult {
    bool violation = false;
    std::string span; // the leaked fragment
    std::string what; // "operator glyph" or "formal subexpression"
};

// Flags natural-language text that copies formal syntax: any operator
// glyph, or any substring that parses to a formula/regex with at least
// two atoms.  Vocabulary names on their own are permitted.
LeakageResult leakage_check(const std::string& nl, GrammarKind kind,
                            const Vocabulary* vocab = nullptr);

} // namespace fstm
