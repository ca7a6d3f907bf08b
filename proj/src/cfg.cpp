#include "fstm/cfg.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace fstm {

namespace {

const char* kAnd = "∧";
const char* kOr = "∨";
const char* kNot = "¬";
const char* kForall = "∀";
const char* kExists = "∃";

CfgSymbol t(std::string s) { return {std::move(s), true}; }
CfgSymbol nt(std::string s) { return {std::move(s), false}; }

} // namespace

std::vector<const CfgRule*> Cfg::rules_for(const std::string& ntname) const {
    std::vector<const CfgRule*> out;
    for (const auto& r : rules)
        if (r.lhs == ntname) out.push_back(&r);
    return out;
}

bool Cfg::has_epsilon_rule(const std::string& ntname) const {
    for (const auto& r : rules)
        if (r.lhs == ntname && r.rhs.empty()) return true;
    return false;
}

std::string Cfg::validate() const {
    if (!nonterminals.count(start)) return "start symbol '" + start + "' has no rules";
    for (const auto& r : rules) {
        if (!nonterminals.count(r.lhs)) return "rule left side '" + r.lhs + "' is not a nonterminal";
        for (const auto& s : r.rhs)
            if (!s.terminal && !nonterminals.count(s.text))
                return "undeclared symbol '" + s.text + "' in a rule for '" + r.lhs + "'";
    }
    return "";
}

std::string to_string(GrammarKind kind) {
    switch (kind) {
    case GrammarKind::Ksat: return "ksat";
    case GrammarKind::Pl: return "pl";
    case GrammarKind::FolSynthetic: return "fol_synthetic";
    case GrammarKind::FolEnglish: return "fol_english";
    case GrammarKind::Regex: return "regex";
    }
    return "?";
}

GrammarKind grammar_kind_from_string(const std::string& s) {
    if (s == "ksat") return GrammarKind::Ksat;
    if (s == "pl") return GrammarKind::Pl;
    if (s == "fol_synthetic" || s == "fol") return GrammarKind::FolSynthetic;
    if (s == "fol_english") return GrammarKind::FolEnglish;
    if (s == "regex") return GrammarKind::Regex;
    throw std::runtime_error("unknown grammar kind '" + s + "'");
}

bool is_logic_kind(GrammarKind kind) { return kind != GrammarKind::Regex; }

bool is_fol_kind(GrammarKind kind) {
    return kind == GrammarKind::FolSynthetic || kind == GrammarKind::FolEnglish;
}

Cfg builtin_grammar(GrammarKind kind, int k) {
    Cfg g;
    switch (kind) {
    case GrammarKind::Ksat: {
        if (k < 1) throw std::runtime_error("k-SAT clause width must be >= 1");
        g.start = "S";
        g.nonterminals = {"S", "P"};
        g.rules.push_back({"S", {nt("S"), t(kAnd), nt("S")}});
        CfgRule clause{"S", {t("(")}};
        for (int i = 0; i < k; ++i) {
            if (i) clause.rhs.push_back(t(kOr));
            clause.rhs.push_back(nt("P"));
        }
        clause.rhs.push_back(t(")"));
        g.rules.push_back(std::move(clause));
        g.rules.push_back({"P", {t(kNot), t("v")}});
        g.rules.push_back({"P", {t("v")}});
        break;
    }
    case GrammarKind::Pl:
        g.start = "S";
        g.nonterminals = {"S"};
        g.rules.push_back({"S", {t("("), nt("S"), t(kAnd), nt("S"), t(")")}});
        g.rules.push_back({"S", {t("("), nt("S"), t(kOr), nt("S"), t(")")}});
        g.rules.push_back({"S", {t("("), t(kNot), nt("S"), t(")")}});
        g.rules.push_back({"S", {t(kNot), t("v")}});
        g.rules.push_back({"S", {t("v")}});
        break;
    case GrammarKind::FolSynthetic:
    case GrammarKind::FolEnglish:
        g.start = "S";
        g.nonterminals = {"S", "Q", "F"};
        g.rules.push_back({"S", {nt("Q")}});
        g.rules.push_back({"Q", {nt("F")}});
        g.rules.push_back({"Q", {t("("), t(kForall), t("f"), t("."), nt("Q"), t(")")}});
        g.rules.push_back({"Q", {t("("), t(kExists), t("f"), t("."), nt("Q"), t(")")}});
        g.rules.push_back({"F", {t("("), nt("F"), t(kAnd), nt("F"), t(")")}});
        g.rules.push_back({"F", {t("("), nt("F"), t(kOr), nt("F"), t(")")}});
        g.rules.push_back({"F", {t("("), t(kNot), nt("F"), t(")")}});
        g.rules.push_back({"F", {t(kNot), t("p")}});
        g.rules.push_back({"F", {t("p")}});
        break;
    case GrammarKind::Regex:
        g.start = "S";
        g.nonterminals = {"S", "K"};
        g.rules.push_back({"S", {t("("), nt("S"), t(")"), nt("K")}});
        g.rules.push_back({"S", {nt("S"), t("sigma"), nt("K")}});
        g.rules.push_back({"S", {t("sigma"), nt("K")}});
        g.rules.push_back({"K", {t("*")}});
        g.rules.push_back({"K", {}});
        break;
    }
    return g;
}

Cfg parse_cfg_file(const std::string& text) {
    // Uppercase-initial symbols are nonterminals and must appear as a rule
    // left side somewhere; everything else is a terminal.
    Cfg g;
    std::vector<std::pair<std::string, std::vector<std::string>>> raw;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string lhs, arrow;
        if (!(ls >> lhs)) continue;
        if (!(ls >> arrow) || arrow != "->")
            throw std::runtime_error("grammar line must read 'Lhs -> ...': " + line);
        if (!std::isupper(static_cast<unsigned char>(lhs[0])))
            throw std::runtime_error("rule left side '" + lhs + "' must start uppercase");
        g.nonterminals.insert(lhs);
        if (g.start.empty()) g.start = lhs;
        std::vector<std::string> rhs;
        std::string tok;
        while (ls >> tok) {
            if (tok == "|") {
                raw.emplace_back(lhs, rhs);
                rhs.clear();
            } else {
                rhs.push_back(tok);
            }
        }
        raw.emplace_back(lhs, rhs);
    }
    if (g.start.empty()) throw std::runtime_error("grammar file contains no rules");
    for (auto& [lhs, rhs] : raw) {
        CfgRule rule{lhs, {}};
        for (auto& s : rhs) {
            if (s == "eps") continue;
            bool is_nt = std::isupper(static_cast<unsigned char>(s[0]));
            if (is_nt && !g.nonterminals.count(s))
                throw std::runtime_error("undeclared symbol '" + s + "' in a rule for '" + lhs + "'");
            rule.rhs.push_back({s, !is_nt});
        }
        g.rules.push_back(std::move(rule));
    }
    if (auto err = g.validate(); !err.empty()) throw std::runtime_error(err);
    return g;
}

std::string CfgExpression::text() const {
    std::string out;
    for (const auto& s : tokens) out += s.text;
    return out;
}

int CfgExpression::operator_tokens() const {
    int n = 0;
    for (const auto& s : tokens)
        if (s.text == kAnd || s.text == kOr || s.text == kNot || s.text == kForall ||
            s.text == kExists)
            ++n;
    return n;
}

std::map<std::string, int> CfgExpression::per_operator() const {
    std::map<std::string, int> m;
    for (const auto& s : tokens) {
        if (s.text == kAnd) ++m["and"];
        else if (s.text == kOr) ++m["or"];
        else if (s.text == kNot) ++m["not"];
        else if (s.text == kForall) ++m["forall"];
        else if (s.text == kExists) ++m["exists"];
    }
    return m;
}

} // namespace fstm
