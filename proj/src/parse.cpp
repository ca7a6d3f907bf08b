#include "fstm/parse.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <vector>

namespace fstm {

std::string to_string(ParseErrorReason reason) {
    switch (reason) {
    case ParseErrorReason::LexError: return "lex error";
    case ParseErrorReason::GrammarError: return "grammar error";
    case ParseErrorReason::UnknownSymbol: return "unknown symbol";
    case ParseErrorReason::ArityMismatch: return "arity mismatch";
    case ParseErrorReason::UnboundVariable: return "unbound variable";
    case ParseErrorReason::EmptyOutput: return "empty output";
    }
    return "?";
}

namespace {

constexpr int kMaxDepth = 10000;

enum class Tok { LParen, RParen, And, Or, Not, Forall, Exists, Dot, Comma, Ident, Unknown, End };

struct Token {
    Tok kind;
    std::string text;  // original spelling
    bool glyph = false; // spelled with a formal glyph rather than a word
};

// Strips markdown fences, backticks and TeX math wrappers that models
// like to put around formulas.
std::string normalize(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (size_t i = 0; i < text.size();) {
        if (text.compare(i, 3, "```") == 0) {
            i += 3;
            while (i < text.size() && text[i] != '\n') ++i; // language tag
            continue;
        }
        if (text[i] == '`' || text[i] == '$') {
            ++i;
            continue;
        }
        if (text.compare(i, 2, "\\(") == 0 || text.compare(i, 2, "\\)") == 0 ||
            text.compare(i, 2, "\\[") == 0 || text.compare(i, 2, "\\]") == 0) {
            i += 2;
            continue;
        }
        s += text[i++];
    }
    return s;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<Token> lex_logic(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    auto push = [&](Tok k, std::string text, bool glyph) { out.push_back({k, std::move(text), glyph}); };
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        // multi-byte operators
        struct Glyph {
            const char* utf8;
            Tok kind;
        };
        static const Glyph glyphs[] = {
            {"∧", Tok::And},    {"∨", Tok::Or},      {"¬", Tok::Not},
            {"∀", Tok::Forall}, {"∃", Tok::Exists},  {"→", Tok::Unknown},
            {"↔", Tok::Unknown}, {"⊻", Tok::Unknown}, {"⊕", Tok::Unknown},
            {"≠", Tok::Unknown},
        };
        bool matched = false;
        for (const auto& g : glyphs) {
            size_t len = std::char_traits<char>::length(g.utf8);
            if (s.compare(i, len, g.utf8) == 0) {
                push(g.kind, g.utf8, true);
                i += len;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        switch (c) {
        case '(': push(Tok::LParen, "(", false); ++i; continue;
        case ')': push(Tok::RParen, ")", false); ++i; continue;
        case '&': push(Tok::And, "&", true); ++i; continue;
        case '|': push(Tok::Or, "|", true); ++i; continue;
        case '~': push(Tok::Not, "~", true); ++i; continue;
        case '!': push(Tok::Not, "!", true); ++i; continue;
        case '.': push(Tok::Dot, ".", false); ++i; continue;
        case ',': push(Tok::Comma, ",", false); ++i; continue;
        default: break;
        }
        if (s.compare(i, 2, "->") == 0 || s.compare(i, 2, "=>") == 0) {
            push(Tok::Unknown, s.substr(i, 2), true);
            i += 2;
            continue;
        }
        if (is_ident_start(s[i])) {
            size_t j = i + 1;
            while (j < s.size() && is_ident_char(s[j])) ++j;
            std::string word = s.substr(i, j - i);
            std::string lw = lower(word);
            if (lw == "all" || lw == "forall")
                push(Tok::Forall, word, false);
            else if (lw == "exists")
                push(Tok::Exists, word, false);
            else
                push(Tok::Ident, word, false);
            i = j;
            continue;
        }
        // anything else, including '=', '+', '*', digits and stray UTF-8
        size_t j = i + 1;
        while (j < s.size() && (static_cast<unsigned char>(s[j]) & 0xc0) == 0x80) ++j;
        push(Tok::Unknown, s.substr(i, j - i), true);
        i = j;
    }
    return out;
}

struct LogicParser {
    const std::vector<Token>& toks;
    size_t pos = 0;
    size_t end;
    LogicMode mode;
    const Vocabulary* vocab;
    std::set<std::string> bound;
    std::optional<ParseError> err;
    int depth = 0;

    LogicParser(const std::vector<Token>& t, size_t begin, size_t end_, LogicMode m,
                const Vocabulary* v)
        : toks(t), pos(begin), end(end_), mode(m), vocab(v) {}

    const Token& cur() const {
        static const Token kEnd{Tok::End, "", false};
        return pos < end ? toks[pos] : kEnd;
    }

    bool fail(ParseErrorReason r, std::string detail, std::string span = "") {
        if (!err) err = ParseError{r, std::move(detail), span.empty() ? cur().text : std::move(span)};
        return false;
    }

    bool guard() {
        if (++depth > kMaxDepth) return fail(ParseErrorReason::GrammarError, "recursion depth cap exceeded");
        return true;
    }

    FormulaPtr parse_sentence() {
        if (!guard()) return nullptr;
        struct DepthGuard {
            int& d;
            ~DepthGuard() { --d; }
        } dg{depth};
        if (cur().kind == Tok::Forall || cur().kind == Tok::Exists) {
            bool universal = cur().kind == Tok::Forall;
            ++pos;
            std::vector<std::string> vars;
            while (cur().kind == Tok::Ident) {
                // an identifier followed by '(' is the start of the matrix
                if (pos + 1 < end && toks[pos + 1].kind == Tok::LParen) break;
                if (cur().text[0] != 'x') {
                    fail(ParseErrorReason::UnboundVariable,
                         "quantifier binds an object name '" + cur().text + "'", cur().text);
                    return nullptr;
                }
                vars.push_back(cur().text);
                ++pos;
            }
            if (vars.empty()) {
                fail(ParseErrorReason::GrammarError, "quantifier without a bound variable");
                return nullptr;
            }
            if (cur().kind == Tok::Dot) ++pos;
            if (mode == LogicMode::Pl) {
                fail(ParseErrorReason::GrammarError, "quantifier in propositional mode");
                return nullptr;
            }
            std::vector<std::string> fresh;
            for (const auto& v : vars)
                if (bound.insert(v).second) fresh.push_back(v);
            FormulaPtr body = parse_sentence();
            for (const auto& v : fresh) bound.erase(v);
            if (!body) return nullptr;
            for (auto it = vars.rbegin(); it != vars.rend(); ++it)
                body = universal ? Formula::forall(*it, body) : Formula::exists(*it, body);
            return body;
        }
        // parentheses that merely wrap a quantified sentence are transparent
        size_t j = pos;
        while (j < end && toks[j].kind == Tok::LParen) ++j;
        if (j > pos && j < end && (toks[j].kind == Tok::Forall || toks[j].kind == Tok::Exists)) {
            ++pos;
            FormulaPtr inner = parse_sentence();
            if (!inner) return nullptr;
            if (cur().kind != Tok::RParen) {
                fail(ParseErrorReason::GrammarError, "expected ')'");
                return nullptr;
            }
            ++pos;
            return inner;
        }
        return parse_or();
    }

    FormulaPtr parse_or() {
        if (!guard()) return nullptr;
        struct DepthGuard {
            int& d;
            ~DepthGuard() { --d; }
        } dg{depth};
        std::vector<FormulaPtr> parts;
        FormulaPtr first = parse_and();
        if (!first) return nullptr;
        parts.push_back(std::move(first));
        while (cur().kind == Tok::Or) {
            ++pos;
            FormulaPtr next = parse_and();
            if (!next) return nullptr;
            parts.push_back(std::move(next));
        }
        return parts.size() == 1 ? parts[0] : Formula::disjunction(std::move(parts));
    }

    FormulaPtr parse_and() {
        std::vector<FormulaPtr> parts;
        FormulaPtr first = parse_unary();
        if (!first) return nullptr;
        parts.push_back(std::move(first));
        while (cur().kind == Tok::And) {
            ++pos;
            FormulaPtr next = parse_unary();
            if (!next) return nullptr;
            parts.push_back(std::move(next));
        }
        return parts.size() == 1 ? parts[0] : Formula::conjunction(std::move(parts));
    }

    FormulaPtr parse_unary() {
        if (!guard()) return nullptr;
        struct DepthGuard {
            int& d;
            ~DepthGuard() { --d; }
        } dg{depth};
        if (cur().kind == Tok::Not) {
            ++pos;
            FormulaPtr child = parse_unary();
            return child ? Formula::negation(std::move(child)) : nullptr;
        }
        return parse_primary();
    }

    FormulaPtr parse_primary() {
        if (!guard()) return nullptr;
        struct DepthGuard {
            int& d;
            ~DepthGuard() { --d; }
        } dg{depth};
        switch (cur().kind) {
        case Tok::LParen: {
            ++pos;
            FormulaPtr inner = parse_or();
            if (!inner) return nullptr;
            if (cur().kind != Tok::RParen) {
                fail(ParseErrorReason::GrammarError, "expected ')'");
                return nullptr;
            }
            ++pos;
            return inner;
        }
        case Tok::Forall:
        case Tok::Exists:
            fail(ParseErrorReason::GrammarError, "quantifier below a connective (not prenex)");
            return nullptr;
        case Tok::Ident:
            return parse_atom();
        case Tok::Unknown:
            fail(ParseErrorReason::UnknownSymbol, "unknown symbol '" + cur().text + "'", cur().text);
            return nullptr;
        default:
            fail(ParseErrorReason::GrammarError, "expected a formula");
            return nullptr;
        }
    }

    FormulaPtr parse_atom() {
        std::string name = cur().text;
        ++pos;
        if (cur().kind != Tok::LParen) {
            if (mode == LogicMode::Fol && name[0] == 'x' && !bound.count(name)) {
                fail(ParseErrorReason::UnboundVariable, "unbound variable '" + name + "'", name);
                return nullptr;
            }
            return Formula::prop(std::move(name));
        }
        if (mode == LogicMode::Pl) {
            fail(ParseErrorReason::GrammarError, "predicate application in propositional mode", name);
            return nullptr;
        }
        ++pos;
        std::vector<Term> args;
        while (true) {
            if (cur().kind != Tok::Ident) {
                fail(ParseErrorReason::GrammarError, "expected a term in '" + name + "(...)'");
                return nullptr;
            }
            std::string arg = cur().text;
            ++pos;
            if (arg[0] == 'x') {
                if (!bound.count(arg)) {
                    fail(ParseErrorReason::UnboundVariable, "unbound variable '" + arg + "'", arg);
                    return nullptr;
                }
                args.push_back(Term::variable(arg));
            } else {
                args.push_back(Term::object(arg));
            }
            if (cur().kind == Tok::Comma) {
                ++pos;
                continue;
            }
            break;
        }
        if (cur().kind != Tok::RParen) {
            fail(ParseErrorReason::GrammarError, "expected ')' after predicate arguments");
            return nullptr;
        }
        ++pos;
        if (vocab) {
            const PredicateEntry* entry = vocab->find_predicate(name);
            if (!entry) {
                fail(ParseErrorReason::UnknownSymbol, "unknown predicate '" + name + "'", name);
                return nullptr;
            }
            if (entry->arity != static_cast<int>(args.size())) {
                fail(ParseErrorReason::ArityMismatch,
                     "predicate '" + name + "' expects " + std::to_string(entry->arity) +
                         " arguments, got " + std::to_string(args.size()),
                     name);
                return nullptr;
            }
        }
        return Formula::pred(std::move(name), std::move(args));
    }
};

struct SpanParse {
    size_t begin = 0;
    size_t length = 0;
    FormulaPtr formula;
    bool structural = false; // contains an operator, quantifier or parens
    bool has_operator = false;
    bool vocab_atom = false;
};

bool span_has_structure(const std::vector<Token>& toks, size_t b, size_t e) {
    for (size_t i = b; i < e; ++i) {
        Tok k = toks[i].kind;
        if (k == Tok::And || k == Tok::Or || k == Tok::Not || k == Tok::Forall ||
            k == Tok::Exists || k == Tok::LParen)
            return true;
    }
    return false;
}

bool span_has_operator(const std::vector<Token>& toks, size_t b, size_t e) {
    for (size_t i = b; i < e; ++i) {
        Tok k = toks[i].kind;
        if (k == Tok::And || k == Tok::Or || k == Tok::Not || k == Tok::Forall ||
            k == Tok::Exists)
            return true;
    }
    return false;
}

// Longest parse starting at `begin`, or nullopt.  The recursive-descent
// parse consumes a maximal prefix greedily; when even that fails, fall
// back to a lone atom so "p1 ∧ <garbage>" still yields the p1 span.
std::optional<SpanParse> parse_span(const std::vector<Token>& toks, size_t begin, LogicMode mode,
                                    const Vocabulary* vocab) {
    LogicParser p(toks, begin, toks.size(), mode, vocab);
    FormulaPtr f = p.parse_sentence();
    size_t span_end = p.pos;
    if (!f) {
        if (toks[begin].kind != Tok::Ident) return std::nullopt;
        LogicParser one(toks, begin, begin + 1, mode, vocab);
        f = one.parse_sentence();
        if (!f) return std::nullopt;
        span_end = begin + 1;
    }
    SpanParse sp;
    sp.begin = begin;
    sp.length = span_end - begin;
    sp.formula = f;
    sp.structural = span_has_structure(toks, begin, span_end);
    sp.has_operator = span_has_operator(toks, begin, span_end);
    if (!sp.structural && vocab && f->kind == FormulaKind::Prop)
        sp.vocab_atom = vocab->has_proposition(f->name);
    if (!sp.structural && f->kind == FormulaKind::Pred) sp.vocab_atom = true;
    return sp;
}

} // namespace

ParseOutcome parse_logic(const std::string& text, LogicMode mode, const Vocabulary* vocab) {
    ParseOutcome out;
    std::string s = normalize(text);
    std::vector<Token> toks = lex_logic(s);
    if (toks.empty()) {
        out.error = ParseError{ParseErrorReason::EmptyOutput, "no tokens in output", ""};
        return out;
    }

    LogicParser whole(toks, 0, toks.size(), mode, vocab);
    FormulaPtr f = whole.parse_sentence();
    if (f && whole.pos == toks.size()) {
        out.formula = f;
        return out;
    }
    ParseError whole_error = whole.err.value_or(
        ParseError{ParseErrorReason::GrammarError, "trailing tokens after formula",
                   whole.pos < toks.size() ? toks[whole.pos].text : ""});
    // tokens outside the dialect (implication arrows, '=', stray digits)
    // make for a more actionable reason than the downstream grammar error
    if (whole_error.reason == ParseErrorReason::GrammarError) {
        for (const Token& t : toks) {
            if (t.kind == Tok::Unknown) {
                whole_error = ParseError{ParseErrorReason::UnknownSymbol,
                                         "unknown symbol '" + t.text + "'", t.text};
                break;
            }
        }
    }

    // Prose-stripping: look for the best embedded span, but refuse when
    // formal glyphs remain outside it (then the output is a malformed
    // formula rather than prose around a formula).
    std::optional<SpanParse> best;
    for (size_t b = 0; b < toks.size(); ++b) {
        // a span opening inside a bracketed or comma-separated context is
        // a fragment of a malformed formula, not prose-wrapped output
        if (b > 0 && (toks[b - 1].kind == Tok::LParen || toks[b - 1].kind == Tok::Comma))
            continue;
        auto sp = parse_span(toks, b, mode, vocab);
        if (!sp) continue;
        // "name(...)" with an unknown name reaches here as a parenthesized
        // span after the identifier; only genuine formulas qualify
        if (b > 0 && toks[b].kind == Tok::LParen && toks[b - 1].kind == Tok::Ident &&
            !sp->has_operator)
            continue;
        auto better = [](const SpanParse& a, const SpanParse& x) {
            if (a.structural != x.structural) return a.structural;
            if (a.length != x.length) return a.length > x.length;
            if (a.vocab_atom != x.vocab_atom) return a.vocab_atom;
            return a.begin < x.begin;
        };
        if (!best || better(*sp, *best)) best = sp;
    }
    if (best && (best->structural || best->vocab_atom)) {
        for (size_t i = 0; i < toks.size(); ++i) {
            if (i >= best->begin && i < best->begin + best->length) continue;
            if (toks[i].glyph) {
                out.error = whole_error;
                return out;
            }
        }
        out.formula = best->formula;
        return out;
    }
    out.error = whole_error;
    return out;
}

namespace {

struct RegexParser {
    const std::string& s;
    size_t pos = 0;
    size_t end;
    int alphabet_size;
    std::optional<ParseError> err;
    int depth = 0;

    RegexParser(const std::string& str, size_t b, size_t e, int n)
        : s(str), pos(b), end(e), alphabet_size(n) {}

    bool fail(ParseErrorReason r, std::string detail, std::string span = "") {
        if (!err) err = ParseError{r, std::move(detail), std::move(span)};
        return false;
    }

    RegexPtr parse_sequence() {
        if (++depth > kMaxDepth) {
            fail(ParseErrorReason::GrammarError, "recursion depth cap exceeded");
            return nullptr;
        }
        struct DepthGuard {
            int& d;
            ~DepthGuard() { --d; }
        } dg{depth};
        std::vector<RegexPtr> parts;
        while (pos < end && s[pos] != ')') {
            RegexPtr piece = parse_piece();
            if (!piece) return nullptr;
            parts.push_back(std::move(piece));
        }
        if (parts.empty()) {
            fail(ParseErrorReason::GrammarError, "empty expression");
            return nullptr;
        }
        return RegexAst::concat(std::move(parts));
    }

    RegexPtr parse_piece() {
        RegexPtr base;
        char c = s[pos];
        if (c == '(') {
            ++pos;
            RegexPtr inner = parse_sequence();
            if (!inner) return nullptr;
            if (pos >= end || s[pos] != ')') {
                fail(ParseErrorReason::GrammarError, "expected ')'");
                return nullptr;
            }
            ++pos;
            base = RegexAst::group(std::move(inner));
        } else if (c >= '0' && c <= '9') {
            if (c >= '0' + alphabet_size) {
                fail(ParseErrorReason::UnknownSymbol,
                     std::string("symbol '") + c + "' outside the alphabet", std::string(1, c));
                return nullptr;
            }
            ++pos;
            base = RegexAst::sym(c);
        } else if (c == '*') {
            fail(ParseErrorReason::GrammarError, "star with nothing to repeat", "*");
            return nullptr;
        } else {
            fail(ParseErrorReason::UnknownSymbol, std::string("unknown symbol '") + c + "'",
                 std::string(1, c));
            return nullptr;
        }
        if (pos < end && s[pos] == '*') {
            ++pos;
            if (pos < end && s[pos] == '*') {
                fail(ParseErrorReason::GrammarError, "star applied to a star", "**");
                return nullptr;
            }
            base = RegexAst::star(std::move(base));
        }
        return base;
    }
};

bool regex_char(char c) { return (c >= '0' && c <= '9') || c == '(' || c == ')' || c == '*'; }

std::optional<RegexPtr> try_parse_regex_run(const std::string& s, size_t b, size_t e, int n) {
    RegexParser p(s, b, e, n);
    RegexPtr r = p.parse_sequence();
    if (r && p.pos == e) return r;
    return std::nullopt;
}

} // namespace

ParseOutcome parse_regex(const std::string& text, int alphabet_size) {
    ParseOutcome out;
    std::string s = normalize(text);
    // trim
    size_t b = s.find_first_not_of(" \t\r\n");
    size_t e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) {
        out.error = ParseError{ParseErrorReason::EmptyOutput, "no tokens in output", ""};
        return out;
    }
    s = s.substr(b, e - b + 1);

    bool formal_looking = true;
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) ||
            std::isalpha(static_cast<unsigned char>(c))) {
            formal_looking = false;
            break;
        }

    if (formal_looking) {
        RegexParser p(s, 0, s.size(), alphabet_size);
        RegexPtr r = p.parse_sequence();
        if (r && p.pos == s.size()) {
            out.regex = r;
            return out;
        }
        out.error = p.err.value_or(ParseError{ParseErrorReason::GrammarError,
                                              "trailing characters after expression", ""});
        return out;
    }

    // prose around a regex: pick the longest parsable run of regex characters
    std::optional<std::pair<size_t, size_t>> best;
    RegexPtr best_ast;
    for (size_t i = 0; i < s.size();) {
        if (!regex_char(s[i])) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < s.size() && regex_char(s[j])) ++j;
        for (size_t sub_end = j; sub_end > i; --sub_end) {
            if (auto r = try_parse_regex_run(s, i, sub_end, alphabet_size)) {
                if (!best || sub_end - i > best->second - best->first) {
                    best = {i, sub_end};
                    best_ast = *r;
                }
                break;
            }
        }
        i = j;
    }
    if (best_ast) {
        out.regex = best_ast;
        return out;
    }
    out.error = ParseError{ParseErrorReason::GrammarError, "no parsable expression found", ""};
    return out;
}

namespace {

int atom_count(const Formula& f) {
    if (f.kind == FormulaKind::Prop || f.kind == FormulaKind::Pred) return 1;
    int n = 0;
    for (const auto& c : f.children) n += atom_count(*c);
    return n;
}

int symbol_count(const RegexAst& r) {
    if (r.kind == RegexKind::Symbol) return 1;
    int n = 0;
    for (const auto& c : r.children) n += symbol_count(*c);
    return n;
}

// Balanced parenthesized substrings, innermost first.
std::vector<std::string> paren_substrings(const std::string& s) {
    std::vector<std::string> out;
    std::vector<size_t> stack;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') stack.push_back(i);
        else if (s[i] == ')' && !stack.empty()) {
            size_t b = stack.back();
            stack.pop_back();
            out.push_back(s.substr(b, i - b + 1));
        }
    }
    return out;
}

} // namespace

LeakageResult leakage_check(const std::string& nl, GrammarKind kind, const Vocabulary* vocab) {
    LeakageResult res;
    if (kind == GrammarKind::Regex) {
        if (auto pos = nl.find('*'); pos != std::string::npos) {
            res.violation = true;
            res.span = "*";
            res.what = "operator glyph";
            return res;
        }
        // any maximal run of regex characters that parses with >= 2 symbols
        // is a copied fragment of the expression
        for (size_t i = 0; i < nl.size();) {
            if (!regex_char(nl[i])) {
                ++i;
                continue;
            }
            size_t j = i;
            while (j < nl.size() && regex_char(nl[j])) ++j;
            for (size_t sub_end = j; sub_end > i; --sub_end) {
                if (auto r = try_parse_regex_run(nl, i, sub_end, 10)) {
                    if (symbol_count(**r) >= 2) {
                        res.violation = true;
                        res.span = nl.substr(i, sub_end - i);
                        res.what = "formal subexpression";
                        return res;
                    }
                    break;
                }
            }
            i = j;
        }
        return res;
    }

    static const char* const kGlyphs[] = {"∧", "∨", "¬", "∀",
                                          "∃", "&",      "|",      "~"};
    for (const char* g : kGlyphs) {
        if (nl.find(g) != std::string::npos) {
            res.violation = true;
            res.span = g;
            res.what = "operator glyph";
            return res;
        }
    }
    LogicMode mode = kind == GrammarKind::Ksat || kind == GrammarKind::Pl ? LogicMode::Pl
                                                                          : LogicMode::Fol;
    for (const std::string& sub : paren_substrings(nl)) {
        ParseOutcome p = parse_logic(sub, mode, vocab);
        if (p.ok() && atom_count(*p.formula) >= 2) {
            res.violation = true;
            res.span = sub;
            res.what = "formal subexpression";
            return res;
        }
    }
    return res;
}

} // namespace fstm
