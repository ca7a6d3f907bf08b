#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace fstm {

// Grammar-level symbols.  Terminals carry the literal token text; the
// placeholder terminals "v" (proposition), "p" (predicate), "f" (bound
// variable) and "S" (alphabet symbol, spelled "sigma" in grammar files)
// are substituted by the vocabulary during grounding.

struct CfgSymbol {
    std::string text;
    bool terminal = true;
    bool operator==(const CfgSymbol&) const = default;
    auto operator<=>(const CfgSymbol&) const = default;
};

struct CfgRule {
    std::string lhs;
    std::vector<CfgSymbol> rhs; // empty = epsilon production
};

struct Cfg {
    std::string start;
    std::vector<CfgRule> rules;
    std::set<std::string> nonterminals;

    std::vector<const CfgRule*> rules_for(const std::string& nt) const;
    bool has_epsilon_rule(const std::string& nt) const;

    // Empty when well-formed, else a message naming the offending symbol.
    std::string validate() const;
};

enum class GrammarKind { Ksat, Pl, FolSynthetic, FolEnglish, Regex };

std::string to_string(GrammarKind kind);
GrammarKind grammar_kind_from_string(const std::string& s);
bool is_logic_kind(GrammarKind kind);
bool is_fol_kind(GrammarKind kind);

// The four builtin grammars; k-SAT is parameterized by clause width.
Cfg builtin_grammar(GrammarKind kind, int k = 3);

// Parses a grammar file: one "Lhs -> sym sym | sym ..." rule set per line,
// "#" comments, "eps" for the empty right side.  The first left side is
// the start symbol.  Throws std::runtime_error naming undeclared symbols.
Cfg parse_cfg_file(const std::string& text);

// A fully expanded (all-terminal) derivation result.
struct CfgExpression {
    std::vector<CfgSymbol> tokens;
    int depth = 0; // parse-tree depth: deepest terminal, epsilon-free

    std::string text() const;
    int operator_tokens() const;                    // occurrences of logic operator tokens
    std::map<std::string, int> per_operator() const;
};

} // namespace fstm
