#include "fstm/logic_verifier.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fstm {

// =====================================================================
// Propositional machinery

namespace {

void collect_atoms(const Formula& f, std::vector<std::string>& out, std::set<std::string>& seen) {
    if (f.kind == FormulaKind::Prop) {
        if (seen.insert(f.name).second) out.push_back(f.name);
        return;
    }
    if (f.kind == FormulaKind::Pred)
        throw std::invalid_argument("predicate node in a propositional formula");
    if (f.kind == FormulaKind::Forall || f.kind == FormulaKind::Exists)
        throw std::invalid_argument("quantifier in a propositional formula");
    for (const auto& c : f.children) collect_atoms(*c, out, seen);
}

bool eval_indexed(const Formula& f, const std::map<std::string, int>& index,
                  const std::vector<bool>& values) {
    switch (f.kind) {
    case FormulaKind::Prop:
        return values[index.at(f.name)];
    case FormulaKind::Not:
        return !eval_indexed(*f.children[0], index, values);
    case FormulaKind::And:
        for (const auto& c : f.children)
            if (!eval_indexed(*c, index, values)) return false;
        return true;
    case FormulaKind::Or:
        for (const auto& c : f.children)
            if (eval_indexed(*c, index, values)) return true;
        return false;
    default:
        throw std::invalid_argument("non-propositional node");
    }
}

// ---- CNF via Tseitin + DPLL -----------------------------------------

struct CnfBuilder {
    // variables are 1-based; literal = +v / -v
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
    std::map<std::string, int> atom_var;

    int fresh() { return ++num_vars; }

    int atom(const std::string& name) {
        auto it = atom_var.find(name);
        if (it != atom_var.end()) return it->second;
        int v = fresh();
        atom_var.emplace(name, v);
        return v;
    }

    // returns a literal equisatisfiably equivalent to the subformula
    int encode(const Formula& f) {
        switch (f.kind) {
        case FormulaKind::Prop:
            return atom(f.name);
        case FormulaKind::Not:
            return -encode(*f.children[0]);
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<int> parts;
            parts.reserve(f.children.size());
            for (const auto& c : f.children) parts.push_back(encode(*c));
            int x = fresh();
            bool conj = f.kind == FormulaKind::And;
            std::vector<int> big{conj ? x : -x};
            for (int p : parts) {
                clauses.push_back({conj ? -x : x, conj ? p : -p});
                big.push_back(conj ? -p : p);
            }
            clauses.push_back(std::move(big));
            return x;
        }
        default:
            throw std::invalid_argument("non-propositional node");
        }
    }
};

// Plain recursive DPLL with unit propagation; returns a model when
// satisfiable.  0 = unassigned, 1 = true, -1 = false.
struct Dpll {
    const std::vector<std::vector<int>>& clauses;
    std::vector<int8_t> value;

    explicit Dpll(const std::vector<std::vector<int>>& cs, int num_vars)
        : clauses(cs), value(num_vars + 1, 0) {}

    int8_t lit_value(int lit) const {
        int8_t v = value[std::abs(lit)];
        return lit > 0 ? v : static_cast<int8_t>(-v);
    }

    bool propagate(std::vector<int>& trail) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& c : clauses) {
                int unassigned = 0, last = 0;
                bool satisfied = false;
                for (int lit : c) {
                    int8_t v = lit_value(lit);
                    if (v > 0) {
                        satisfied = true;
                        break;
                    }
                    if (v == 0) {
                        ++unassigned;
                        last = lit;
                    }
                }
                if (satisfied) continue;
                if (unassigned == 0) return false; // conflict
                if (unassigned == 1) {
                    value[std::abs(last)] = last > 0 ? 1 : -1;
                    trail.push_back(std::abs(last));
                    changed = true;
                }
            }
        }
        return true;
    }

    bool solve() {
        std::vector<int> trail;
        if (!propagate(trail)) {
            for (int v : trail) value[v] = 0;
            return false;
        }
        // branch on the first literal of the shortest open clause; this
        // keeps the search driven by what propagation can finish next
        int branch = 0;
        int8_t preferred = 1;
        size_t best_open = SIZE_MAX;
        for (const auto& c : clauses) {
            size_t open = 0;
            int first_lit = 0;
            bool satisfied = false;
            for (int lit : c) {
                int8_t v = lit_value(lit);
                if (v > 0) {
                    satisfied = true;
                    break;
                }
                if (v == 0) {
                    ++open;
                    if (!first_lit) first_lit = lit;
                }
            }
            if (satisfied) continue;
            if (open < best_open) {
                best_open = open;
                branch = std::abs(first_lit);
                preferred = first_lit > 0 ? 1 : -1;
                if (open <= 2) break;
            }
        }
        if (branch == 0) return true; // every clause satisfied
        for (int8_t choice : {preferred, static_cast<int8_t>(-preferred)}) {
            value[branch] = choice;
            if (solve()) return true;
        }
        value[branch] = 0;
        for (int v : trail) value[v] = 0;
        return false;
    }
};

// satisfiability of (f1 xor f2); returns a witness over the atom union
std::optional<std::map<std::string, bool>> sat_xor(const Formula& f1, const Formula& f2) {
    CnfBuilder b;
    int a = b.encode(f1);
    int c = b.encode(f2);
    b.clauses.push_back({a, c});
    b.clauses.push_back({-a, -c});
    Dpll solver(b.clauses, b.num_vars);
    if (!solver.solve()) return std::nullopt;
    std::map<std::string, bool> model;
    for (const auto& [name, var] : b.atom_var) model[name] = solver.value[var] > 0;
    return model;
}

std::optional<std::map<std::string, bool>> sat_single(const Formula& f) {
    CnfBuilder b;
    b.clauses.push_back({b.encode(f)});
    Dpll solver(b.clauses, b.num_vars);
    if (!solver.solve()) return std::nullopt;
    std::map<std::string, bool> model;
    for (const auto& [name, var] : b.atom_var) model[name] = solver.value[var] > 0;
    return model;
}

} // namespace

bool eval_pl(const Formula& f, const std::map<std::string, bool>& assignment) {
    switch (f.kind) {
    case FormulaKind::Prop: {
        auto it = assignment.find(f.name);
        return it != assignment.end() && it->second;
    }
    case FormulaKind::Not:
        return !eval_pl(*f.children[0], assignment);
    case FormulaKind::And:
        for (const auto& c : f.children)
            if (!eval_pl(*c, assignment)) return false;
        return true;
    case FormulaKind::Or:
        for (const auto& c : f.children)
            if (eval_pl(*c, assignment)) return true;
        return false;
    default:
        throw std::invalid_argument("non-propositional node");
    }
}

Verdict pl_equivalent(const Formula& f1, const Formula& f2, PlMethod method) {
    std::vector<std::string> atoms;
    std::set<std::string> seen;
    collect_atoms(f1, atoms, seen);
    collect_atoms(f2, atoms, seen);

    bool use_table = method == PlMethod::TruthTable ||
                     (method == PlMethod::Auto && atoms.size() <= 20);
    if (use_table && atoms.size() > 30)
        throw std::invalid_argument("truth table over more than 30 atoms");

    if (use_table) {
        std::map<std::string, int> index;
        for (size_t i = 0; i < atoms.size(); ++i) index[atoms[i]] = static_cast<int>(i);
        std::vector<bool> values(atoms.size(), false);
        for (uint64_t mask = 0; mask < (uint64_t(1) << atoms.size()); ++mask) {
            for (size_t i = 0; i < atoms.size(); ++i) values[i] = (mask >> i) & 1;
            if (eval_indexed(f1, index, values) != eval_indexed(f2, index, values)) {
                Verdict v;
                v.value = Verdict::Value::NotEquivalent;
                std::map<std::string, bool> assignment;
                for (size_t i = 0; i < atoms.size(); ++i) assignment[atoms[i]] = values[i];
                v.falsifying_assignment = std::move(assignment);
                return v;
            }
        }
        return Verdict::make_equivalent();
    }

    if (auto witness = sat_xor(f1, f2)) {
        Verdict v;
        v.value = Verdict::Value::NotEquivalent;
        v.falsifying_assignment = std::move(*witness);
        return v;
    }
    return Verdict::make_equivalent();
}

// =====================================================================
// Clause form

std::string to_string(const FolTerm& t) {
    std::string s = t.name;
    if (t.kind == FolTerm::Kind::Func) {
        s += '(';
        for (size_t i = 0; i < t.args.size(); ++i) {
            if (i) s += ',';
            s += to_string(t.args[i]);
        }
        s += ')';
    }
    return s;
}

std::string to_string(const Literal& l) {
    std::string s = l.positive ? "" : "~";
    s += l.pred;
    if (!l.args.empty()) {
        s += '(';
        for (size_t i = 0; i < l.args.size(); ++i) {
            if (i) s += ',';
            s += to_string(l.args[i]);
        }
        s += ')';
    }
    return s;
}

std::string to_string(const Clause& c) {
    if (c.empty()) return "{}";
    std::string s = "{";
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += " | ";
        s += to_string(c[i]);
    }
    return s + "}";
}

namespace {

// Negation-normal-form node over literals only.
struct NnfNode {
    enum class Kind { Lit, And, Or, Forall, Exists };
    Kind kind = Kind::Lit;
    Literal lit;          // Lit
    std::string var;      // quantifiers
    std::vector<NnfNode> children;
};

NnfNode to_nnf(const Formula& f, bool positive) {
    switch (f.kind) {
    case FormulaKind::Prop: {
        NnfNode n;
        n.lit = {positive, f.name, {}};
        return n;
    }
    case FormulaKind::Pred: {
        NnfNode n;
        n.lit.positive = positive;
        n.lit.pred = f.name;
        for (const Term& t : f.args)
            n.lit.args.push_back(t.kind == Term::Kind::Variable ? FolTerm::var(t.name)
                                                                : FolTerm::constant(t.name));
        return n;
    }
    case FormulaKind::Not:
        return to_nnf(*f.children[0], !positive);
    case FormulaKind::And:
    case FormulaKind::Or: {
        NnfNode n;
        bool conj = (f.kind == FormulaKind::And) == positive;
        n.kind = conj ? NnfNode::Kind::And : NnfNode::Kind::Or;
        for (const auto& c : f.children) n.children.push_back(to_nnf(*c, positive));
        return n;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        NnfNode n;
        bool universal = (f.kind == FormulaKind::Forall) == positive;
        n.kind = universal ? NnfNode::Kind::Forall : NnfNode::Kind::Exists;
        n.var = f.name;
        n.children.push_back(to_nnf(*f.children[0], positive));
        return n;
    }
    }
    throw std::logic_error("unreachable formula kind");
}

struct SkolemCtx {
    int next_var = 0;
    int next_sk = 0;
    std::vector<FolTerm> universals;
    std::map<std::string, std::vector<FolTerm>> env; // var name -> binding stack
};

void subst_term(FolTerm& t, SkolemCtx& ctx) {
    if (t.kind == FolTerm::Kind::Var) {
        auto it = ctx.env.find(t.name);
        if (it != ctx.env.end() && !it->second.empty()) t = it->second.back();
        // a free variable would stay in place; inputs are closed sentences
        return;
    }
    for (auto& a : t.args) subst_term(a, ctx);
}

// quantifier-free NNF tree with Skolemized, renamed terms
NnfNode skolemize(const NnfNode& n, SkolemCtx& ctx) {
    switch (n.kind) {
    case NnfNode::Kind::Lit: {
        NnfNode out = n;
        for (auto& a : out.lit.args) subst_term(a, ctx);
        return out;
    }
    case NnfNode::Kind::And:
    case NnfNode::Kind::Or: {
        NnfNode out;
        out.kind = n.kind;
        for (const auto& c : n.children) out.children.push_back(skolemize(c, ctx));
        return out;
    }
    case NnfNode::Kind::Forall: {
        FolTerm fresh = FolTerm::var("V" + std::to_string(ctx.next_var++));
        ctx.env[n.var].push_back(fresh);
        ctx.universals.push_back(fresh);
        NnfNode out = skolemize(n.children[0], ctx);
        ctx.universals.pop_back();
        ctx.env[n.var].pop_back();
        return out;
    }
    case NnfNode::Kind::Exists: {
        std::string sk = "sk" + std::to_string(++ctx.next_sk);
        FolTerm term = ctx.universals.empty() ? FolTerm::constant(sk)
                                              : FolTerm::func(sk, ctx.universals);
        ctx.env[n.var].push_back(term);
        NnfNode out = skolemize(n.children[0], ctx);
        ctx.env[n.var].pop_back();
        return out;
    }
    }
    throw std::logic_error("unreachable nnf kind");
}

bool literal_complementary(const Literal& a, const Literal& b) {
    return a.positive != b.positive && a.pred == b.pred && a.args == b.args;
}

void add_clause(std::vector<Clause>& out, Clause c) {
    // dedupe literals, drop tautologies
    std::sort(c.begin(), c.end(), [](const Literal& a, const Literal& b) {
        return to_string(a) < to_string(b);
    });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = i + 1; j < c.size(); ++j)
            if (literal_complementary(c[i], c[j])) return;
    out.push_back(std::move(c));
}

// distribute Or over And
std::vector<Clause> to_clauses(const NnfNode& n, size_t cap) {
    switch (n.kind) {
    case NnfNode::Kind::Lit:
        return {{n.lit}};
    case NnfNode::Kind::And: {
        std::vector<Clause> out;
        for (const auto& c : n.children) {
            auto sub = to_clauses(c, cap);
            for (auto& cl : sub) add_clause(out, std::move(cl));
            if (out.size() > cap) throw std::length_error("clause cap exceeded");
        }
        return out;
    }
    case NnfNode::Kind::Or: {
        std::vector<Clause> acc{{}};
        for (const auto& c : n.children) {
            auto sub = to_clauses(c, cap);
            std::vector<Clause> next;
            for (const auto& left : acc)
                for (const auto& right : sub) {
                    Clause merged = left;
                    merged.insert(merged.end(), right.begin(), right.end());
                    next.push_back(std::move(merged));
                    if (next.size() > cap) throw std::length_error("clause cap exceeded");
                }
            acc = std::move(next);
        }
        std::vector<Clause> out;
        for (auto& cl : acc) add_clause(out, std::move(cl));
        return out;
    }
    default:
        throw std::logic_error("quantifier survived skolemization");
    }
}

std::vector<Clause> clausify_impl(const Formula& f, size_t cap) {
    NnfNode nnf = to_nnf(f, true);
    SkolemCtx ctx;
    NnfNode matrix = skolemize(nnf, ctx);
    return to_clauses(matrix, cap);
}

} // namespace

std::vector<Clause> clausify(const Formula& f) { return clausify_impl(f, 100000); }

// =====================================================================
// Resolution prover

namespace {

using Subst = std::map<std::string, FolTerm>;

FolTerm walk(FolTerm t, const Subst& s) {
    while (t.kind == FolTerm::Kind::Var) {
        auto it = s.find(t.name);
        if (it == s.end()) break;
        t = it->second;
    }
    return t;
}

bool occurs(const std::string& var, const FolTerm& t, const Subst& s) {
    FolTerm w = walk(t, s);
    if (w.kind == FolTerm::Kind::Var) return w.name == var;
    for (const auto& a : w.args)
        if (occurs(var, a, s)) return true;
    return false;
}

bool unify_terms(const FolTerm& a, const FolTerm& b, Subst& s) {
    FolTerm x = walk(a, s), y = walk(b, s);
    if (x.kind == FolTerm::Kind::Var) {
        if (y.kind == FolTerm::Kind::Var && y.name == x.name) return true;
        if (occurs(x.name, y, s)) return false;
        s[x.name] = y;
        return true;
    }
    if (y.kind == FolTerm::Kind::Var) return unify_terms(y, x, s);
    if (x.kind != y.kind || x.name != y.name || x.args.size() != y.args.size()) return false;
    for (size_t i = 0; i < x.args.size(); ++i)
        if (!unify_terms(x.args[i], y.args[i], s)) return false;
    return true;
}

bool unify_literals(const Literal& a, const Literal& b, Subst& s) {
    if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!unify_terms(a.args[i], b.args[i], s)) return false;
    return true;
}

FolTerm apply_subst(const FolTerm& t, const Subst& s) {
    FolTerm w = walk(t, s);
    if (w.kind == FolTerm::Kind::Func)
        for (auto& a : w.args) a = apply_subst(a, s);
    return w;
}

Literal apply_subst(const Literal& l, const Subst& s) {
    Literal out = l;
    for (auto& a : out.args) a = apply_subst(a, s);
    return out;
}

Clause apply_subst(const Clause& c, const Subst& s) {
    Clause out;
    out.reserve(c.size());
    for (const auto& l : c) out.push_back(apply_subst(l, s));
    return out;
}

void rename_term(FolTerm& t, const std::string& suffix) {
    if (t.kind == FolTerm::Kind::Var) t.name += suffix;
    for (auto& a : t.args) rename_term(a, suffix);
}

Clause rename_clause(const Clause& c, const std::string& suffix) {
    Clause out = c;
    for (auto& l : out)
        for (auto& a : l.args) rename_term(a, suffix);
    return out;
}

size_t term_size(const FolTerm& t) {
    size_t n = 1;
    for (const auto& a : t.args) n += term_size(a);
    return n;
}

size_t clause_weight(const Clause& c) {
    size_t n = 0;
    for (const auto& l : c) {
        n += 1;
        for (const auto& a : l.args) n += term_size(a);
    }
    return n;
}

// match: one-way unification binding only variables of the pattern
bool match_terms(const FolTerm& pat, const FolTerm& t, Subst& s) {
    if (pat.kind == FolTerm::Kind::Var) {
        auto it = s.find(pat.name);
        if (it != s.end()) return it->second == t;
        s[pat.name] = t;
        return true;
    }
    if (pat.kind != t.kind || pat.name != t.name || pat.args.size() != t.args.size()) return false;
    for (size_t i = 0; i < pat.args.size(); ++i)
        if (!match_terms(pat.args[i], t.args[i], s)) return false;
    return true;
}

bool subsumes_rec(const Clause& c, size_t i, const Clause& d, const Subst& s) {
    if (i == c.size()) return true;
    for (const auto& lit : d) {
        if (lit.positive != c[i].positive || lit.pred != c[i].pred ||
            lit.args.size() != c[i].args.size())
            continue;
        Subst trial = s;
        bool ok = true;
        for (size_t k = 0; k < lit.args.size() && ok; ++k)
            ok = match_terms(c[i].args[k], lit.args[k], trial);
        if (ok && subsumes_rec(c, i + 1, d, trial)) return true;
    }
    return false;
}

// theta-subsumption: some instance of c is a sub-multiset of d
bool subsumes(const Clause& c, const Clause& d) {
    if (c.size() > d.size()) return false;
    return subsumes_rec(c, 0, d, {});
}

struct ProofResult {
    enum class Status { Proved, Saturated, StepBudget, Timeout };
    Status status = Status::Saturated;
    long steps = 0;
};

struct Prover {
    long max_steps;
    std::chrono::steady_clock::time_point deadline;

    struct Entry {
        Clause clause;
        size_t weight;
        long id;
    };
    std::deque<Entry> passive;
    std::vector<Entry> active;
    long next_id = 0;
    long steps = 0;

    Prover(long max_steps_, std::chrono::steady_clock::time_point deadline_)
        : max_steps(max_steps_), deadline(deadline_) {}

    void enqueue(Clause c) {
        for (const auto& e : active)
            if (subsumes(e.clause, c)) return;
        for (const auto& e : passive)
            if (subsumes(e.clause, c)) return;
        Entry entry{std::move(c), 0, next_id++};
        entry.weight = clause_weight(entry.clause);
        passive.push_back(std::move(entry));
    }

    // smallest clause first, oldest on ties
    std::deque<Entry>::iterator select() {
        auto best = passive.begin();
        for (auto it = passive.begin(); it != passive.end(); ++it)
            if (it->clause.size() < best->clause.size() ||
                (it->clause.size() == best->clause.size() &&
                 (it->weight < best->weight ||
                  (it->weight == best->weight && it->id < best->id))))
                best = it;
        return best;
    }

    void resolvents(const Clause& a, const Clause& b, std::vector<Clause>& out) {
        for (size_t i = 0; i < a.size(); ++i) {
            if (!a[i].positive) continue;
            for (size_t j = 0; j < b.size(); ++j) {
                if (b[j].positive) continue;
                Subst s;
                if (!unify_literals(a[i], b[j], s)) continue;
                Clause r;
                for (size_t k = 0; k < a.size(); ++k)
                    if (k != i) r.push_back(apply_subst(a[k], s));
                for (size_t k = 0; k < b.size(); ++k)
                    if (k != j) r.push_back(apply_subst(b[k], s));
                std::vector<Clause> cleaned;
                add_clause(cleaned, std::move(r));
                if (!cleaned.empty()) out.push_back(std::move(cleaned.front()));
            }
        }
    }

    void factors(const Clause& c, std::vector<Clause>& out) {
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = i + 1; j < c.size(); ++j) {
                if (c[i].positive != c[j].positive) continue;
                Subst s;
                if (!unify_literals(c[i], c[j], s)) continue;
                Clause f;
                for (size_t k = 0; k < c.size(); ++k)
                    if (k != j) f.push_back(apply_subst(c[k], s));
                std::vector<Clause> cleaned;
                add_clause(cleaned, std::move(f));
                if (!cleaned.empty()) out.push_back(std::move(cleaned.front()));
            }
    }

    ProofResult run(std::vector<Clause> input) {
        for (auto& c : input) {
            if (c.empty()) return {ProofResult::Status::Proved, steps};
            enqueue(std::move(c));
        }
        while (!passive.empty()) {
            if (steps > max_steps) return {ProofResult::Status::StepBudget, steps};
            if (std::chrono::steady_clock::now() > deadline)
                return {ProofResult::Status::Timeout, steps};

            auto it = select();
            Entry given = std::move(*it);
            passive.erase(it);

            bool redundant = false;
            for (const auto& e : active)
                if (subsumes(e.clause, given.clause)) {
                    redundant = true;
                    break;
                }
            if (redundant) continue;

            Clause renamed = rename_clause(given.clause, "'");
            std::vector<Clause> fresh;
            factors(given.clause, fresh);
            for (const auto& e : active) {
                resolvents(renamed, e.clause, fresh);
                resolvents(e.clause, renamed, fresh);
            }
            // self-resolution via the renamed copy
            resolvents(renamed, given.clause, fresh);
            resolvents(given.clause, renamed, fresh);

            active.push_back(std::move(given));
            for (auto& c : fresh) {
                ++steps;
                if (c.empty()) return {ProofResult::Status::Proved, steps};
                enqueue(std::move(c));
                if (steps > max_steps) return {ProofResult::Status::StepBudget, steps};
            }
        }
        return {ProofResult::Status::Saturated, steps};
    }
};

} // namespace

// =====================================================================
// Finite-model evaluation and countermodel search

namespace {

struct GroundCtx {
    const FiniteModel& model;
    std::map<std::string, int> env; // variable -> element
};

bool eval_model_rec(const Formula& f, GroundCtx& ctx) {
    switch (f.kind) {
    case FormulaKind::Prop: {
        auto it = ctx.model.predicate_tables.find(f.name + "/0");
        return it != ctx.model.predicate_tables.end() && !it->second.empty() && it->second[0];
    }
    case FormulaKind::Pred: {
        std::vector<int> elems;
        for (const Term& t : f.args) {
            if (t.kind == Term::Kind::Variable) {
                elems.push_back(ctx.env.at(t.name));
            } else {
                auto it = ctx.model.objects.find(t.name);
                elems.push_back(it == ctx.model.objects.end() ? 0 : it->second);
            }
        }
        if (f.name == "=" && elems.size() == 2) return elems[0] == elems[1];
        auto it = ctx.model.predicate_tables.find(f.name + "/" + std::to_string(f.args.size()));
        if (it == ctx.model.predicate_tables.end()) return false;
        size_t row = 0;
        for (int e : elems) row = row * ctx.model.universe_size + static_cast<size_t>(e);
        return row < it->second.size() && it->second[row];
    }
    case FormulaKind::Not:
        return !eval_model_rec(*f.children[0], ctx);
    case FormulaKind::And:
        for (const auto& c : f.children)
            if (!eval_model_rec(*c, ctx)) return false;
        return true;
    case FormulaKind::Or:
        for (const auto& c : f.children)
            if (eval_model_rec(*c, ctx)) return true;
        return false;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        bool universal = f.kind == FormulaKind::Forall;
        auto shadowed = ctx.env.find(f.name);
        std::optional<int> saved;
        if (shadowed != ctx.env.end()) saved = shadowed->second;
        bool result = universal;
        for (int e = 0; e < ctx.model.universe_size; ++e) {
            ctx.env[f.name] = e;
            bool v = eval_model_rec(*f.children[0], ctx);
            if (universal != v) {
                result = !universal;
                break;
            }
        }
        if (saved)
            ctx.env[f.name] = *saved;
        else
            ctx.env.erase(f.name);
        return result;
    }
    }
    throw std::logic_error("unreachable formula kind");
}

void collect_signature(const Formula& f, std::set<std::string>& constants,
                       std::map<std::string, int>& preds) {
    switch (f.kind) {
    case FormulaKind::Prop:
        preds.emplace(f.name + "/0", 0);
        break;
    case FormulaKind::Pred: {
        if (f.name != "=") preds.emplace(f.name + "/" + std::to_string(f.args.size()),
                                         static_cast<int>(f.args.size()));
        for (const Term& t : f.args)
            if (t.kind == Term::Kind::Object) constants.insert(t.name);
        break;
    }
    default:
        break;
    }
    for (const auto& c : f.children) collect_signature(*c, constants, preds);
}

// Ground a sentence over a k-element universe into a propositional
// formula over "pred/arity|row" atoms, folding constants from "=".
struct GroundedProp {
    std::optional<bool> constant;
    FormulaPtr formula; // set when constant is empty
};

GroundedProp ground_const(bool b) { return {b, nullptr}; }

GroundedProp ground_sentence(const Formula& f, int k, const std::map<std::string, int>& constants,
                             std::map<std::string, int>& env, long& size_meter, long cap) {
    if (++size_meter > cap) throw std::length_error("grounding cap exceeded");
    switch (f.kind) {
    case FormulaKind::Prop:
        return {std::nullopt, Formula::prop(f.name + "/0|")};
    case FormulaKind::Pred: {
        std::vector<int> elems;
        for (const Term& t : f.args)
            elems.push_back(t.kind == Term::Kind::Variable ? env.at(t.name)
                                                           : constants.at(t.name));
        if (f.name == "=" && elems.size() == 2) return ground_const(elems[0] == elems[1]);
        std::string atom = f.name + "/" + std::to_string(f.args.size()) + "|";
        for (size_t i = 0; i < elems.size(); ++i) {
            if (i) atom += ',';
            atom += std::to_string(elems[i]);
        }
        return {std::nullopt, Formula::prop(atom)};
    }
    case FormulaKind::Not: {
        GroundedProp c = ground_sentence(*f.children[0], k, constants, env, size_meter, cap);
        if (c.constant) return ground_const(!*c.constant);
        return {std::nullopt, Formula::negation(c.formula)};
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
        bool conj = f.kind == FormulaKind::And;
        std::vector<FormulaPtr> parts;
        for (const auto& c : f.children) {
            GroundedProp g = ground_sentence(*c, k, constants, env, size_meter, cap);
            if (g.constant) {
                if (*g.constant != conj) return ground_const(!conj); // short-circuit
                continue;
            }
            parts.push_back(g.formula);
        }
        if (parts.empty()) return ground_const(conj);
        if (parts.size() == 1) return {std::nullopt, parts[0]};
        return {std::nullopt,
                conj ? Formula::conjunction(std::move(parts)) : Formula::disjunction(std::move(parts))};
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        bool conj = f.kind == FormulaKind::Forall;
        auto shadowed = env.find(f.name);
        std::optional<int> saved;
        if (shadowed != env.end()) saved = shadowed->second;
        auto restore = [&] {
            if (saved)
                env[f.name] = *saved;
            else
                env.erase(f.name);
        };
        std::vector<FormulaPtr> parts;
        for (int e = 0; e < k; ++e) {
            env[f.name] = e;
            GroundedProp g = ground_sentence(*f.children[0], k, constants, env, size_meter, cap);
            if (g.constant) {
                if (*g.constant != conj) {
                    restore();
                    return ground_const(!conj);
                }
                continue;
            }
            parts.push_back(g.formula);
        }
        restore();
        if (parts.empty()) return ground_const(conj);
        if (parts.size() == 1) return {std::nullopt, parts[0]};
        return {std::nullopt,
                conj ? Formula::conjunction(std::move(parts)) : Formula::disjunction(std::move(parts))};
    }
    }
    throw std::logic_error("unreachable formula kind");
}

} // namespace

bool eval_in_model(const Formula& f, const FiniteModel& m) {
    GroundCtx ctx{m, {}};
    return eval_model_rec(f, ctx);
}

Verdict fol_equivalent(const Formula& f1, const Formula& f2, const FolBudget& budget) {
    auto deadline = std::chrono::steady_clock::now() + budget.timeout;

    if (structurally_equal(f1, f2)) {
        Verdict v = Verdict::make_equivalent();
        v.proof_steps = 0;
        return v;
    }

    std::set<std::string> const_set;
    std::map<std::string, int> preds;
    collect_signature(f1, const_set, preds);
    collect_signature(f2, const_set, preds);
    std::vector<std::string> constants(const_set.begin(), const_set.end());

    bool timed_out = false;

    // (a) countermodel search over increasing universe sizes
    for (int k = 1; k <= budget.max_model_size; ++k) {
        if (static_cast<int>(constants.size()) > k) continue;
        if (std::chrono::steady_clock::now() > deadline) {
            timed_out = true;
            break;
        }
        std::map<std::string, int> cmap;
        for (size_t i = 0; i < constants.size(); ++i) cmap[constants[i]] = static_cast<int>(i);
        try {
            std::map<std::string, int> env;
            long meter = 0;
            GroundedProp g1 = ground_sentence(f1, k, cmap, env, meter, budget.max_ground_clauses);
            GroundedProp g2 = ground_sentence(f2, k, cmap, env, meter, budget.max_ground_clauses);

            std::optional<std::map<std::string, bool>> witness;
            if (g1.constant && g2.constant) {
                if (*g1.constant != *g2.constant) witness.emplace(); // differs under any tables
            } else if (g1.constant) {
                // tables must force g2 to the opposite value
                witness = sat_single(*g1.constant ? *Formula::negation(g2.formula) : *g2.formula);
            } else if (g2.constant) {
                witness = sat_single(*g2.constant ? *Formula::negation(g1.formula) : *g1.formula);
            } else {
                witness = sat_xor(*g1.formula, *g2.formula);
            }

            if (witness) {
                FiniteModel model;
                model.universe_size = k;
                model.objects = cmap;
                for (const auto& [key, arity] : preds) {
                    size_t rows = 1;
                    for (int i = 0; i < arity; ++i) rows *= static_cast<size_t>(k);
                    model.predicate_arity[key.substr(0, key.find('/'))] = arity;
                    model.predicate_tables[key] = std::vector<bool>(rows, false);
                }
                for (const auto& [atom, value] : *witness) {
                    auto bar = atom.find('|');
                    std::string key = atom.substr(0, bar);
                    std::string tuple = atom.substr(bar + 1);
                    size_t row = 0;
                    if (!tuple.empty()) {
                        std::istringstream ts(tuple);
                        std::string part;
                        while (std::getline(ts, part, ','))
                            row = row * static_cast<size_t>(k) +
                                  static_cast<size_t>(std::stoi(part));
                    }
                    auto it = model.predicate_tables.find(key);
                    if (it == model.predicate_tables.end())
                        it = model.predicate_tables.emplace(key, std::vector<bool>(1, false)).first;
                    if (row < it->second.size()) it->second[row] = value;
                }
                // the witness must really separate the sentences
                if (eval_in_model(f1, model) != eval_in_model(f2, model)) {
                    Verdict v;
                    v.value = Verdict::Value::NotEquivalent;
                    v.countermodel = std::move(model);
                    return v;
                }
            }
        } catch (const std::length_error&) {
            break; // grounding too large; fall through to proof search
        }
    }

    // (b) resolution proofs of both implications
    if (!timed_out) {
        auto prove_implication = [&](const Formula& from, const Formula& to,
                                     long& steps) -> std::optional<ProofResult::Status> {
            std::vector<Clause> clauses;
            try {
                clauses = clausify_impl(*Formula::conjunction({std::make_shared<Formula>(from),
                                                               Formula::negation(
                                                                   std::make_shared<Formula>(to))}),
                                        static_cast<size_t>(budget.max_ground_clauses));
            } catch (const std::length_error&) {
                return ProofResult::Status::StepBudget;
            }
            Prover prover(budget.max_proof_steps, deadline);
            ProofResult r = prover.run(std::move(clauses));
            steps += r.steps;
            if (r.status == ProofResult::Status::Proved) return std::nullopt;
            return r.status;
        };

        long steps = 0;
        auto s1 = prove_implication(f1, f2, steps);
        if (!s1) {
            auto s2 = prove_implication(f2, f1, steps);
            if (!s2) {
                Verdict v = Verdict::make_equivalent();
                v.proof_steps = steps;
                return v;
            }
            if (*s2 == ProofResult::Status::Timeout) timed_out = true;
        } else if (*s1 == ProofResult::Status::Timeout) {
            timed_out = true;
        }
    }

    return Verdict::make_unknown(timed_out ? "timeout" : "budget");
}

} // namespace fstm
