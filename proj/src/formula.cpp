#include "fstm/formula.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fstm {

namespace {

FormulaPtr make_node(FormulaKind kind, std::string name, std::vector<Term> args,
                     std::vector<FormulaPtr> children) {
    auto node = std::make_shared<Formula>();
    node->kind = kind;
    node->name = std::move(name);
    node->args = std::move(args);
    node->children = std::move(children);
    return node;
}

} // namespace

FormulaPtr Formula::prop(std::string name) {
    return make_node(FormulaKind::Prop, std::move(name), {}, {});
}

FormulaPtr Formula::pred(std::string name, std::vector<Term> args) {
    return make_node(FormulaKind::Pred, std::move(name), std::move(args), {});
}

FormulaPtr Formula::negation(FormulaPtr child) {
    if (!child) throw std::invalid_argument("negation of null formula");
    return make_node(FormulaKind::Not, "", {}, {std::move(child)});
}

FormulaPtr Formula::conjunction(std::vector<FormulaPtr> children) {
    if (children.size() < 2) throw std::invalid_argument("conjunction needs >= 2 children");
    return make_node(FormulaKind::And, "", {}, std::move(children));
}

FormulaPtr Formula::disjunction(std::vector<FormulaPtr> children) {
    if (children.size() < 2) throw std::invalid_argument("disjunction needs >= 2 children");
    return make_node(FormulaKind::Or, "", {}, std::move(children));
}

FormulaPtr Formula::forall(std::string var, FormulaPtr body) {
    if (!body) throw std::invalid_argument("quantifier over null body");
    return make_node(FormulaKind::Forall, std::move(var), {}, {std::move(body)});
}

FormulaPtr Formula::exists(std::string var, FormulaPtr body) {
    if (!body) throw std::invalid_argument("quantifier over null body");
    return make_node(FormulaKind::Exists, std::move(var), {}, {std::move(body)});
}

bool structurally_equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind || a.name != b.name || a.args != b.args ||
        a.children.size() != b.children.size())
        return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(*a.children[i], *b.children[i])) return false;
    return true;
}

namespace {

struct StyleTokens {
    const char* land;
    const char* lor;
    const char* lnot;
    const char* forall;
    const char* exists;
};

StyleTokens tokens_for(SymbolStyle style) {
    if (style == SymbolStyle::Unicode) return {"∧", "∨", "¬", "∀", "∃"};
    return {"&", "|", "~", "all", "exists"};
}

void print_rec(const Formula& f, const StyleTokens& t, SymbolStyle style, std::string& out) {
    switch (f.kind) {
    case FormulaKind::Prop:
        out += f.name;
        break;
    case FormulaKind::Pred: {
        out += f.name;
        out += '(';
        for (size_t i = 0; i < f.args.size(); ++i) {
            if (i) out += ", ";
            out += f.args[i].name;
        }
        out += ')';
        break;
    }
    case FormulaKind::Not:
        out += t.lnot;
        print_rec(*f.children[0], t, style, out);
        break;
    case FormulaKind::And:
    case FormulaKind::Or: {
        const char* op = f.kind == FormulaKind::And ? t.land : t.lor;
        out += '(';
        for (size_t i = 0; i < f.children.size(); ++i) {
            if (i) {
                out += ' ';
                out += op;
                out += ' ';
            }
            print_rec(*f.children[i], t, style, out);
        }
        out += ')';
        break;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists:
        out += f.kind == FormulaKind::Forall ? t.forall : t.exists;
        if (style == SymbolStyle::Ascii) out += ' ';
        out += f.name;
        out += ". ";
        print_rec(*f.children[0], t, style, out);
        break;
    }
}

} // namespace

std::string print_formula(const Formula& f, SymbolStyle style) {
    std::string out;
    print_rec(f, tokens_for(style), style, out);
    return out;
}

namespace {

std::optional<std::string> validate_rec(const Formula& f, LogicMode mode, bool in_matrix,
                                        std::set<std::string>& bound) {
    switch (f.kind) {
    case FormulaKind::Prop:
        return std::nullopt;
    case FormulaKind::Pred:
        if (mode == LogicMode::Pl) return "predicate node in propositional mode";
        for (const Term& a : f.args)
            if (a.kind == Term::Kind::Variable && !bound.count(a.name))
                return "unbound variable " + a.name;
        return std::nullopt;
    case FormulaKind::Not:
    case FormulaKind::And:
    case FormulaKind::Or:
        for (const auto& c : f.children) {
            if (c->kind == FormulaKind::Forall || c->kind == FormulaKind::Exists)
                return "quantifier below a connective (not prenex)";
            if (auto e = validate_rec(*c, mode, true, bound)) return e;
        }
        return std::nullopt;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        if (mode == LogicMode::Pl) return "quantifier in propositional mode";
        if (in_matrix) return "quantifier below a connective (not prenex)";
        bool inserted = bound.insert(f.name).second;
        auto e = validate_rec(*f.children[0], mode, false, bound);
        if (inserted) bound.erase(f.name);
        return e;
    }
    }
    return "unknown node kind";
}

} // namespace

std::optional<std::string> validate_formula(const Formula& f, LogicMode mode) {
    std::set<std::string> bound;
    return validate_rec(f, mode, false, bound);
}

namespace {

void count_rec(const Formula& f, ComplexityProfile& p) {
    switch (f.kind) {
    case FormulaKind::Prop:
    case FormulaKind::Pred:
        break;
    case FormulaKind::Not:
        p.per_operator["not"] += 1;
        break;
    case FormulaKind::And:
        p.per_operator["and"] += static_cast<int>(f.children.size()) - 1;
        break;
    case FormulaKind::Or:
        p.per_operator["or"] += static_cast<int>(f.children.size()) - 1;
        break;
    case FormulaKind::Forall:
        p.per_operator["forall"] += 1;
        break;
    case FormulaKind::Exists:
        p.per_operator["exists"] += 1;
        break;
    }
    for (const auto& c : f.children) count_rec(*c, p);
}

} // namespace

ComplexityProfile complexity_of(const Formula& f, int cfg_depth) {
    ComplexityProfile p;
    p.cfg_depth = cfg_depth;
    count_rec(f, p);
    for (const auto& [op, n] : p.per_operator) p.operator_count += n;
    return p;
}

namespace {

void push_unique(std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

void names_rec(const Formula& f, OccurringNames& out) {
    switch (f.kind) {
    case FormulaKind::Prop:
        push_unique(out.propositions, f.name);
        break;
    case FormulaKind::Pred:
        push_unique(out.predicates, f.name);
        for (const Term& a : f.args) {
            if (a.kind == Term::Kind::Variable)
                push_unique(out.variables, a.name);
            else
                push_unique(out.objects, a.name);
        }
        break;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
        push_unique(out.variables, f.name);
        break;
    default:
        break;
    }
    for (const auto& c : f.children) names_rec(*c, out);
}

} // namespace

OccurringNames occurring_names(const Formula& f) {
    OccurringNames out;
    names_rec(f, out);
    return out;
}

} // namespace fstm
