#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fstm/formula.hpp"
#include "fstm/verdict.hpp"

namespace fstm {

// ---------------------------------------------------------------------
// Propositional equivalence: complete.

enum class PlMethod { Auto, TruthTable, Dpll };

// Truth-table over the union of atoms up to 20 atoms, DPLL on the XOR
// beyond that; always decides.  NotEquivalent carries a falsifying
// assignment.
Verdict pl_equivalent(const Formula& f1, const Formula& f2, PlMethod method = PlMethod::Auto);

bool eval_pl(const Formula& f, const std::map<std::string, bool>& assignment);

// ---------------------------------------------------------------------
// First-order equivalence: sound, three-valued.

struct FolBudget {
    int max_model_size = 4;
    long max_proof_steps = 50000;
    std::chrono::milliseconds timeout{10000};
    long max_ground_clauses = 200000; // grounding blowup guard
};

// Countermodel search over universes 1..max_model_size first (constants
// are kept distinct, padded with fresh elements), then resolution proofs
// of both implications.  Resource exhaustion yields Unknown.
Verdict fol_equivalent(const Formula& f1, const Formula& f2, const FolBudget& budget = {});

// Evaluates a closed sentence in a finite model; "=" is identity.
bool eval_in_model(const Formula& f, const FiniteModel& m);

// ---------------------------------------------------------------------
// Clause form, exposed for the prover and its tests.

struct FolTerm {
    enum class Kind { Var, Const, Func };
    Kind kind = Kind::Const;
    std::string name;
    std::vector<FolTerm> args; // Func only

    static FolTerm var(std::string n) { return {Kind::Var, std::move(n), {}}; }
    static FolTerm constant(std::string n) { return {Kind::Const, std::move(n), {}}; }
    static FolTerm func(std::string n, std::vector<FolTerm> a) {
        return {Kind::Func, std::move(n), std::move(a)};
    }
    bool operator==(const FolTerm&) const = default;
};

struct Literal {
    bool positive = true;
    std::string pred;
    std::vector<FolTerm> args;
    bool operator==(const Literal&) const = default;
};

using Clause = std::vector<Literal>;

// NNF -> standardize apart -> prenex -> Skolemize -> distribute.
// Equisatisfiable with f; Skolem symbols are fresh per call.
std::vector<Clause> clausify(const Formula& f);

std::string to_string(const FolTerm& t);
std::string to_string(const Literal& l);
std::string to_string(const Clause& c);

} // namespace fstm
