#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fstm {

// Logic ASTs cover both propositional formulas and prenex first-order
// sentences with one node vocabulary.  Nodes are immutable and shared.

enum class FormulaKind { Prop, Pred, Not, And, Or, Forall, Exists };

struct Term {
    enum class Kind { Object, Variable };
    Kind kind = Kind::Object;
    std::string name;

    static Term object(std::string n) { return {Kind::Object, std::move(n)}; }
    static Term variable(std::string n) { return {Kind::Variable, std::move(n)}; }
    bool operator==(const Term&) const = default;
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
    FormulaKind kind;
    std::string name;                 // Prop/Pred name, or the quantified variable
    std::vector<Term> args;           // Pred only
    std::vector<FormulaPtr> children; // Not: 1, And/Or: >=2, quantifiers: 1 body

    static FormulaPtr prop(std::string name);
    static FormulaPtr pred(std::string name, std::vector<Term> args);
    static FormulaPtr negation(FormulaPtr child);
    static FormulaPtr conjunction(std::vector<FormulaPtr> children);
    static FormulaPtr disjunction(std::vector<FormulaPtr> children);
    static FormulaPtr forall(std::string var, FormulaPtr body);
    static FormulaPtr exists(std::string var, FormulaPtr body);

    const FormulaPtr& body() const { return children.front(); }
};

bool structurally_equal(const Formula& a, const Formula& b);

enum class SymbolStyle { Unicode, Ascii };

// Deterministic fully parenthesized rendering; the canonical interchange
// form used in datasets, prompts and result records.
std::string print_formula(const Formula& f, SymbolStyle style = SymbolStyle::Unicode);

// Dataset modes.  Pl forbids predicates and quantifiers; Fol requires
// closed prenex sentences.
enum class LogicMode { Pl, Fol };

// Returns an empty optional when well-formed, else a description of the
// first violated invariant.
std::optional<std::string> validate_formula(const Formula& f, LogicMode mode);

struct ComplexityProfile {
    int operator_count = 0;
    std::map<std::string, int> per_operator; // keys: and, or, not, forall, exists, star
    int cfg_depth = 0;                       // 0 when no derivation is known

    bool operator==(const ComplexityProfile&) const = default;
};

// Counts every textual operator occurrence: an n-ary And/Or contributes
// (children - 1) to its key, each Not and each quantifier contributes 1.
ComplexityProfile complexity_of(const Formula& f, int cfg_depth = 0);

// Names of all propositions / predicates / objects / variables occurring,
// in order of first occurrence (the order prompts list them in).
struct OccurringNames {
    std::vector<std::string> propositions;
    std::vector<std::string> predicates;
    std::vector<std::string> objects;
    std::vector<std::string> variables;
};
OccurringNames occurring_names(const Formula& f);

} // namespace fstm
