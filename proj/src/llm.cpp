#include "fstm/llm.hpp"

#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "fstm/logic_verifier.hpp"
#include "fstm/parse.hpp"

namespace fstm {

using nlohmann::json;

std::string ModelConfig::validate() const {
    if (temperature < 0.0) return "temperature must be >= 0";
    if (retry.max_attempts < 1) return "retry attempts must be >= 1";
    if (max_tokens < 1) return "max_tokens must be >= 1";
    if (max_concurrent < 1) return "max_concurrent must be >= 1";
    return "";
}

// =====================================================================
// Prompt templates

namespace {

std::string kind_phrase(GrammarKind kind, bool title_case) {
    if (kind == GrammarKind::Regex) return title_case ? "Regular Expression" : "regular expression";
    if (is_fol_kind(kind)) return title_case ? "First-Order Logic" : "first-order logic";
    return title_case ? "Propositional Logic" : "propositional logic";
}

const char* kLogicInformalizeExamples =
    "\n[EXAMPLE 1]\n"
    "(¬p2 ∨ p1 ∨ ¬p2)\n"
    "Disjunctive predicate logic expression consisting of three components: the negation of a "
    "proposition labeled p2, the proposition p1, and again the negation of p2.\n"
    "\n[EXAMPLE 2]\n"
    "(¬¬p2 ∧ ¬(p3 ∨ p1))\n"
    "The expression asserts that p2 is not false while both p3 and p1 are not true.\n";

const char* kLogicAutoformalizeExamples =
    "\n[EXAMPLE 1]\n"
    "Disjunctive predicate logic expression consisting of three components: the negation of a "
    "proposition labeled p2, the proposition p1, and again the negation of p2.\n"
    "(¬p2 ∨ p1 ∨ ¬p2)\n"
    "\n[EXAMPLE 2]\n"
    "The expression asserts that p2 is not false while both p3 and p1 are not true.\n"
    "(¬¬p2 ∧ ¬(p3 ∨ p1))\n";

const char* kRegexInformalizeExamples =
    "\n[EXAMPLE 1]\n"
    "(1*)0*\n"
    "The regex matches strings that starts with any number (including none) of the digit '1', "
    "followed by any number (including none) of the digit '0'.\n"
    "\n[EXAMPLE 2]\n"
    "(01*)\n"
    "The regex matches strings that begin with a '0' followed directly by any number (including "
    "none) of '1's.\n";

const char* kRegexAutoformalizeExamples =
    "\n[EXAMPLE 1]\n"
    "The regex matches strings that starts with any number (including none) of the digit '1', "
    "followed by any number (including none) of the digit '0'.\n"
    "(1*)0*\n"
    "\n[EXAMPLE 2]\n"
    "The regex matches strings that begin with a '0' followed directly by any number (including "
    "none) of '1's.\n"
    "(01*)\n";

} // namespace

PromptTemplate PromptTemplate::builtin(PromptTask task, GrammarKind kind, int shots) {
    PromptTemplate t;
    t.task = task;
    t.kind = kind;
    t.shots = shots;
    switch (task) {
    case PromptTask::Informalize:
        if (kind == GrammarKind::Regex) {
            t.text =
                "[TASK]\n"
                "Your task is to convert the regular expression appearing after [FORMULA], to a "
                "natural description that represents the regular expression. Only natural "
                "language terms are allowed to be used and do not copy the regular expression in "
                "your description. Your description should allow one to reconstruct the regular "
                "expression without having access to it, so make sure to correctly account for "
                "scoping. You may use terms verbatim as specified in the vocabulary below.\n"
                "\n[VOCABULARY]\n{{VOCABULARY}}\n"
                "{{EXAMPLES}}"
                "\n[FORMULA]\n{{PAYLOAD}}";
        } else {
            t.text =
                "[TASK]\n"
                "Your task is to convert a " + kind_phrase(kind, false) +
                " formula, appearing after [FORMULA], to a natural description that represents "
                "the formula. Only natural language terms are allowed to be used and do not copy "
                "the formula in your description. Your description should allow one to "
                "reconstruct the formula without having access to it, so make sure to use the "
                "correct names in your description. Explicitly describe the predicates. You may "
                "use terms verbatim as specified in the vocabulary below.\n"
                "{{EXAMPLES}}"
                "\n[VOCABULARY]\n{{VOCABULARY}}\n"
                "\n[FORMULA]\n{{PAYLOAD}}";
        }
        break;
    case PromptTask::Autoformalize:
        if (kind == GrammarKind::Regex) {
            t.text =
                "[VOCABULARY]\n{{VOCABULARY}}\n"
                "\n[TASK]\n"
                "Your task is to interpret the natural language (NL) description of a regular "
                "expression and represent it as formal syntax using the vocabulary specified in "
                "the [VOCABULARY] block above. Only output the regular expression and no other "
                "text. The NL description appears immediately following the [NL DESCRIPTION] "
                "tag.\n"
                "{{EXAMPLES}}"
                "\n[NL DESCRIPTION]\n{{PAYLOAD}}";
        } else if (is_fol_kind(kind)) {
            t.text =
                "[VOCABULARY]\n{{VOCABULARY}}\n"
                "\n[TASK]\n"
                "Your task is to interpret the natural language (NL) description of a "
                "first-order logic formula and represent it as formal syntax using the "
                "vocabulary specified in the [VOCABULARY] block above. Only output the formula "
                "and no other text. The NL description appears immediately following the [NL "
                "DESCRIPTION] tag.\n"
                "{{EXAMPLES}}"
                "\n[NL DESCRIPTION]\n{{PAYLOAD}}";
        } else {
            t.text =
                "[TASK]\n"
                "Your task is to interpret the natural language (NL) description of a "
                "propositional logic formula and represent it as formal syntax using the "
                "vocabulary specified in the [VOCABULARY] block below. Only output the formula "
                "and no other text. The NL description appears immediately following the [NL "
                "DESCRIPTION] tag.\n"
                "\n[VOCABULARY]\n{{VOCABULARY}}\n"
                "{{EXAMPLES}}"
                "\n[NL DESCRIPTION]\n{{PAYLOAD}}";
        }
        break;
    case PromptTask::Judge:
        t.text =
            "Your task is to say whether two " + kind_phrase(kind, true) +
            " formulae are equivalent. The first formula will appear right after [FORMULA 1] and "
            "the second after [FORMULA 2].\n"
            "Give an explanation followed by a yes or no answer. The answer must show up at the "
            "end with the format \"[Answer]\" followed by either a yes or no.\n"
            "\n[FORMULA 1]\n{{PAYLOAD}}\n"
            "\n[FORMULA 2]\n{{PAYLOAD2}}";
        break;
    }
    return t;
}

namespace {

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out;
}

std::string predicate_signature(const PredicateEntry& e) {
    std::string s = e.name + "(";
    for (int i = 0; i < e.arity; ++i) {
        if (i) s += ",";
        s += "?p" + std::to_string(i);
    }
    s += ")";
    if (!e.gloss.empty()) s += " : " + e.gloss;
    return s;
}

std::string vocabulary_block(const PromptTemplate& t, const Sample& sample) {
    std::ostringstream v;
    bool fol = is_fol_kind(sample.kind);
    if (t.task == PromptTask::Informalize) {
        if (sample.kind == GrammarKind::Regex) {
            v << "you may use symbols from the vocabulary\n";
            v << "you can use *";
            return v.str();
        }
        v << "∨ represents disjunction\n";
        v << "∧ represents conjunction\n";
        v << "¬ represents negation\n";
        v << "( and ) represent parentheses\n";
        v << "propositions can be used verbatim\n";
        if (fol) {
            v << "predicates can be used verbatim\n";
            v << "∀ <x1> <x2> ... <xn>. represents universal quantification with x1... "
                 "representing free variables\n";
            v << "∃ <x1> <x2> ... <xn>. represents existential quantification with x1... "
                 "representing free variables\n";
        }
        if (!sample.names.propositions.empty()) {
            v << "The propositions are: " << join_names(sample.names.propositions) << "\n";
            for (const auto& [name, gloss] : sample.proposition_glosses)
                v << "  " << name << " : " << gloss << "\n";
        }
        if (fol) {
            if (!sample.names.objects.empty())
                v << "The objects are: " << join_names(sample.names.objects) << "\n";
            if (!sample.predicate_entries.empty()) {
                v << "The parameterized predicates are: ";
                for (size_t i = 0; i < sample.predicate_entries.size(); ++i) {
                    if (i) v << ", ";
                    v << predicate_signature(sample.predicate_entries[i]);
                }
                v << "\n";
            }
            if (!sample.names.variables.empty())
                v << "The free variables are: " << join_names(sample.names.variables) << "\n";
        }
        std::string s = v.str();
        if (!s.empty() && s.back() == '\n') s.pop_back();
        return s;
    }
    if (t.task == PromptTask::Autoformalize) {
        if (sample.kind == GrammarKind::Regex) {
            v << "Use * to represent zero or more duplications of the same expression\n";
            v << "Use ( and ) to represent parentheses";
            return v.str();
        }
        v << "Use ∨ to represent disjunction\n";
        v << "Use ∧ to represent conjunction\n";
        v << "Use ¬ to represent negation\n";
        v << "Use ( and ) to represent parentheses";
        if (fol) {
            v << "\nUse ∀ <free_variable_list> to represent universal quantification\n";
            v << "Use ∃ <free_variable_list> to represent existential quantification\n";
            v << "The <free_variable_list> consists of a sequence of space separated free "
                 "variables with the last variable immediately followed by a period. Examples: "
                 "(1) all x1 x2. (2) exists x4.\n";
            v << "Use <predicate>(<parameter_list>) to represent predicates (Names and "
                 "parameters are provided in the description)";
            if (sample.kind == GrammarKind::FolEnglish) {
                if (!sample.names.objects.empty())
                    v << "\nThe objects are: " << join_names(sample.names.objects);
                if (!sample.predicate_entries.empty()) {
                    v << "\nThe parameterized predicates are: ";
                    for (size_t i = 0; i < sample.predicate_entries.size(); ++i) {
                        if (i) v << ", ";
                        v << predicate_signature(sample.predicate_entries[i]);
                    }
                }
            }
        }
        return v.str();
    }
    return "";
}

void replace_once(std::string& text, const std::string& slot, const std::string& value,
                  bool required) {
    size_t pos = text.find(slot);
    if (pos == std::string::npos) {
        if (required) throw std::runtime_error("template is missing slot " + slot);
        return;
    }
    if (text.find(slot, pos + 1) != std::string::npos)
        throw std::runtime_error("template contains slot " + slot + " more than once");
    text.replace(pos, slot.size(), value);
}

} // namespace

std::string render_prompt(const PromptTemplate& t, const Sample& sample,
                          const std::string& payload, const std::string& payload2,
                          size_t max_chars) {
    if (payload.empty()) throw std::runtime_error("prompt payload is empty");
    std::string text = t.text.empty() ? PromptTemplate::builtin(t.task, t.kind, t.shots).text
                                      : t.text;

    std::string examples;
    if (t.shots == 2) {
        if (t.task == PromptTask::Informalize)
            examples = t.kind == GrammarKind::Regex ? kRegexInformalizeExamples
                                                    : kLogicInformalizeExamples;
        else if (t.task == PromptTask::Autoformalize)
            examples = t.kind == GrammarKind::Regex ? kRegexAutoformalizeExamples
                                                    : kLogicAutoformalizeExamples;
    } else if (t.shots != 0) {
        throw std::runtime_error("shot count must be 0 or 2");
    }

    replace_once(text, "{{VOCABULARY}}", vocabulary_block(t, sample),
                 t.task != PromptTask::Judge);
    replace_once(text, "{{EXAMPLES}}", examples, false);
    replace_once(text, "{{PAYLOAD}}", payload, true);
    replace_once(text, "{{PAYLOAD2}}", payload2, t.task == PromptTask::Judge);

    if (max_chars > 0 && text.size() > max_chars)
        throw std::length_error("rendered prompt exceeds the configured budget");
    return text;
}

// =====================================================================
// Judge answer extraction

JudgeAnswer parse_judge_answer(const std::string& text) {
    std::string lower;
    lower.reserve(text.size());
    for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    size_t pos = lower.rfind("[answer]");
    if (pos == std::string::npos) return JudgeAnswer::Unparseable;
    size_t i = pos + 8;
    while (i < lower.size() &&
           !std::isalpha(static_cast<unsigned char>(lower[i])))
        ++i;
    size_t j = i;
    while (j < lower.size() && std::isalpha(static_cast<unsigned char>(lower[j]))) ++j;
    std::string word = lower.substr(i, j - i);
    if (word == "yes") return JudgeAnswer::Yes;
    if (word == "no") return JudgeAnswer::No;
    return JudgeAnswer::Unparseable;
}

std::string to_string(JudgeAnswer a) {
    switch (a) {
    case JudgeAnswer::Yes: return "yes";
    case JudgeAnswer::No: return "no";
    case JudgeAnswer::Unparseable: return "unparseable";
    }
    return "?";
}

// =====================================================================
// Oracle text encoding

std::string oracle_describe(const Formula& f) {
    switch (f.kind) {
    case FormulaKind::Prop:
        return "the proposition " + f.name;
    case FormulaKind::Pred: {
        std::string s = "the predicate " + f.name + " of ( ";
        for (size_t i = 0; i < f.args.size(); ++i) {
            if (i) s += " , ";
            s += f.args[i].name;
        }
        return s + " )";
    }
    case FormulaKind::Not:
        return "the negation of [ " + oracle_describe(*f.children[0]) + " ]";
    case FormulaKind::And:
    case FormulaKind::Or: {
        std::string s = f.kind == FormulaKind::And ? "the conjunction of [ " : "the disjunction of [ ";
        for (size_t i = 0; i < f.children.size(); ++i) {
            if (i) s += " ; ";
            s += oracle_describe(*f.children[i]);
        }
        return s + " ]";
    }
    case FormulaKind::Forall:
        return "for every " + f.name + " [ " + oracle_describe(*f.children[0]) + " ]";
    case FormulaKind::Exists:
        return "there exists " + f.name + " such that [ " + oracle_describe(*f.children[0]) + " ]";
    }
    throw std::logic_error("unreachable formula kind");
}

std::string oracle_describe(const RegexAst& r) {
    switch (r.kind) {
    case RegexKind::Symbol:
        return std::string("the symbol ") + r.symbol;
    case RegexKind::Epsilon:
        return "the empty string";
    case RegexKind::Group:
        return "the grouping of [ " + oracle_describe(*r.children[0]) + " ]";
    case RegexKind::Star:
        return "the repetition of [ " + oracle_describe(*r.children[0]) + " ]";
    case RegexKind::Concat: {
        std::string s = "the sequence of [ ";
        for (size_t i = 0; i < r.children.size(); ++i) {
            if (i) s += " ; ";
            s += oracle_describe(*r.children[i]);
        }
        return s + " ]";
    }
    }
    throw std::logic_error("unreachable regex kind");
}

namespace {

struct OracleDecoder {
    std::vector<std::string> words;
    size_t pos = 0;

    explicit OracleDecoder(const std::string& text) {
        std::string w;
        for (char c : text) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!w.empty()) words.push_back(std::exchange(w, ""));
            } else if (c == '[' || c == ']' || c == '(' || c == ')' || c == ',' || c == ';') {
                if (!w.empty()) words.push_back(std::exchange(w, ""));
                words.push_back(std::string(1, c));
            } else {
                w += c;
            }
        }
        if (!w.empty()) words.push_back(w);
    }

    const std::string& peek(size_t ahead = 0) const {
        static const std::string kEmpty;
        return pos + ahead < words.size() ? words[pos + ahead] : kEmpty;
    }
    std::string take() { return pos < words.size() ? words[pos++] : std::string(); }
    void expect(const std::string& w) {
        if (take() != w) throw std::runtime_error("oracle text malformed near '" + w + "'");
    }

    FormulaPtr formula() {
        if (peek() == "for") {
            expect("for");
            expect("every");
            std::string var = take();
            expect("[");
            FormulaPtr body = formula();
            expect("]");
            return Formula::forall(var, body);
        }
        if (peek() == "there") {
            expect("there");
            expect("exists");
            std::string var = take();
            expect("such");
            expect("that");
            expect("[");
            FormulaPtr body = formula();
            expect("]");
            return Formula::exists(var, body);
        }
        expect("the");
        std::string head = take();
        if (head == "proposition") return Formula::prop(take());
        if (head == "predicate") {
            std::string name = take();
            expect("of");
            expect("(");
            std::vector<Term> args;
            while (peek() != ")") {
                std::string arg = take();
                if (arg == ",") continue;
                args.push_back(arg.starts_with("x") ? Term::variable(arg) : Term::object(arg));
            }
            expect(")");
            return Formula::pred(name, std::move(args));
        }
        if (head == "negation") {
            expect("of");
            expect("[");
            FormulaPtr child = formula();
            expect("]");
            return Formula::negation(child);
        }
        if (head == "conjunction" || head == "disjunction") {
            expect("of");
            expect("[");
            std::vector<FormulaPtr> parts;
            parts.push_back(formula());
            while (peek() == ";") {
                expect(";");
                parts.push_back(formula());
            }
            expect("]");
            return head == "conjunction" ? Formula::conjunction(std::move(parts))
                                         : Formula::disjunction(std::move(parts));
        }
        throw std::runtime_error("oracle text malformed at '" + head + "'");
    }

    RegexPtr regex() {
        expect("the");
        std::string head = take();
        if (head == "symbol") {
            std::string d = take();
            if (d.size() != 1) throw std::runtime_error("oracle symbol malformed");
            return RegexAst::sym(d[0]);
        }
        if (head == "empty") {
            expect("string");
            return RegexAst::epsilon();
        }
        if (head == "grouping") {
            expect("of");
            expect("[");
            RegexPtr inner = regex();
            expect("]");
            return RegexAst::group(inner);
        }
        if (head == "repetition") {
            expect("of");
            expect("[");
            RegexPtr inner = regex();
            expect("]");
            return RegexAst::star(inner);
        }
        if (head == "sequence") {
            expect("of");
            expect("[");
            std::vector<RegexPtr> parts;
            parts.push_back(regex());
            while (peek() == ";") {
                expect(";");
                parts.push_back(regex());
            }
            expect("]");
            return RegexAst::concat(std::move(parts));
        }
        throw std::runtime_error("oracle regex text malformed at '" + head + "'");
    }
};

struct PromptView {
    enum class Task { Informalize, Autoformalize, Judge, Other } task = Task::Other;
    bool regex = false;
    bool fol = false;
    std::string payload;
    std::string payload2;
};

std::string text_after_tag(const std::string& prompt, const std::string& tag) {
    size_t pos = prompt.rfind(tag);
    if (pos == std::string::npos) return "";
    std::string out = prompt.substr(pos + tag.size());
    size_t b = out.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = out.find_last_not_of(" \t\r\n");
    return out.substr(b, e - b + 1);
}

PromptView dissect_prompt(const std::string& prompt) {
    PromptView v;
    v.regex = prompt.find("regular expression") != std::string::npos ||
              prompt.find("Regular Expression") != std::string::npos;
    v.fol = prompt.find("first-order logic") != std::string::npos ||
            prompt.find("First-Order Logic") != std::string::npos;
    if (prompt.find("[FORMULA 1]") != std::string::npos) {
        v.task = PromptView::Task::Judge;
        std::string rest = prompt.substr(prompt.rfind("[FORMULA 1]"));
        size_t second = rest.find("[FORMULA 2]");
        v.payload = rest.substr(11, second == std::string::npos ? std::string::npos : second - 11);
        if (second != std::string::npos) v.payload2 = rest.substr(second + 11);
        auto trim = [](std::string& s) {
            size_t b = s.find_first_not_of(" \t\r\n");
            size_t e = s.find_last_not_of(" \t\r\n");
            s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        trim(v.payload);
        trim(v.payload2);
    } else if (prompt.find("[NL DESCRIPTION]") != std::string::npos) {
        v.task = PromptView::Task::Autoformalize;
        v.payload = text_after_tag(prompt, "[NL DESCRIPTION]");
    } else if (prompt.find("[FORMULA]") != std::string::npos) {
        v.task = PromptView::Task::Informalize;
        v.payload = text_after_tag(prompt, "[FORMULA]");
    }
    return v;
}

// removes the Not node with preorder index `target`, counting down
FormulaPtr drop_negation_at(const FormulaPtr& f, int& target) {
    if (f->kind == FormulaKind::Not && target-- == 0) return f->children[0];
    if (f->children.empty()) return f;
    std::vector<FormulaPtr> children;
    children.reserve(f->children.size());
    for (const auto& c : f->children) children.push_back(drop_negation_at(c, target));
    switch (f->kind) {
    case FormulaKind::Not: return Formula::negation(children[0]);
    case FormulaKind::And: return Formula::conjunction(std::move(children));
    case FormulaKind::Or: return Formula::disjunction(std::move(children));
    case FormulaKind::Forall: return Formula::forall(f->name, children[0]);
    case FormulaKind::Exists: return Formula::exists(f->name, children[0]);
    default: return f;
    }
}

int count_negations(const Formula& f) {
    int n = f.kind == FormulaKind::Not ? 1 : 0;
    for (const auto& c : f.children) n += count_negations(*c);
    return n;
}

bool is_propositional(const Formula& f) {
    if (f.kind == FormulaKind::Pred || f.kind == FormulaKind::Forall ||
        f.kind == FormulaKind::Exists)
        return false;
    for (const auto& c : f.children)
        if (!is_propositional(*c)) return false;
    return true;
}

// Deletes one negation so that the result is no longer equivalent: the
// first candidate that changes the truth function, falling back to the
// first negation outright.  Deterministic.
FormulaPtr drop_one_negation(const FormulaPtr& f) {
    int total = count_negations(*f);
    if (total == 0) return f;
    if (is_propositional(*f)) {
        for (int i = 0; i < total; ++i) {
            int target = i;
            FormulaPtr candidate = drop_negation_at(f, target);
            if (pl_equivalent(*f, *candidate).not_equivalent()) return candidate;
        }
    }
    int target = 0;
    return drop_negation_at(f, target);
}

std::string oracle_reply(const std::string& prompt, bool drop_negation) {
    PromptView v = dissect_prompt(prompt);
    switch (v.task) {
    case PromptView::Task::Informalize: {
        if (v.regex) {
            ParseOutcome p = parse_regex(v.payload, 10);
            if (!p.ok()) return "unparseable input: " + p.error->detail;
            return oracle_describe(*p.regex);
        }
        ParseOutcome p = parse_logic(v.payload, v.fol ? LogicMode::Fol : LogicMode::Pl);
        if (!p.ok()) return "unparseable input: " + p.error->detail;
        FormulaPtr f = p.formula;
        if (drop_negation) f = drop_one_negation(f);
        return oracle_describe(*f);
    }
    case PromptView::Task::Autoformalize: {
        OracleDecoder dec(v.payload);
        try {
            if (v.regex) return print_regex(*dec.regex());
            return print_formula(*dec.formula());
        } catch (const std::exception& e) {
            return std::string("cannot reconstruct: ") + e.what();
        }
    }
    case PromptView::Task::Judge: {
        bool same;
        if (v.regex) {
            ParseOutcome a = parse_regex(v.payload, 10), b = parse_regex(v.payload2, 10);
            same = a.ok() && b.ok() && structurally_equal(*a.regex, *b.regex);
        } else {
            LogicMode m = v.fol ? LogicMode::Fol : LogicMode::Pl;
            ParseOutcome a = parse_logic(v.payload, m), b = parse_logic(v.payload2, m);
            same = a.ok() && b.ok() && structurally_equal(*a.formula, *b.formula);
        }
        return std::string("The two expressions were compared structurally. [Answer] ") +
               (same ? "yes" : "no");
    }
    default:
        return "nothing to do";
    }
}

} // namespace

std::optional<MockKind> mock_kind_from_model_name(const std::string& model) {
    if (!model.starts_with("mock:")) return std::nullopt;
    std::string name = model.substr(5);
    if (name == "echo") return MockKind::Echo;
    if (name == "perfect-oracle") return MockKind::PerfectOracle;
    if (name == "negation-dropper") return MockKind::NegationDropper;
    if (name == "noncompliant") return MockKind::Noncompliant;
    if (name == "judge-always-yes") return MockKind::JudgeAlwaysYes;
    throw std::runtime_error("unknown mock model '" + model + "'");
}

ModelFn make_mock_model(MockKind kind) {
    switch (kind) {
    case MockKind::Echo:
        return [](const std::string& prompt) {
            PromptView v = dissect_prompt(prompt);
            return v.payload.empty() ? prompt : v.payload;
        };
    case MockKind::PerfectOracle:
        return [](const std::string& prompt) { return oracle_reply(prompt, false); };
    case MockKind::NegationDropper:
        return [](const std::string& prompt) { return oracle_reply(prompt, true); };
    case MockKind::Noncompliant:
        return [](const std::string&) {
            return std::string("I am sorry, I cannot help with that request.");
        };
    case MockKind::JudgeAlwaysYes:
        return [](const std::string&) {
            return std::string("Both expressions describe the same thing. [Answer] yes");
        };
    }
    throw std::logic_error("unreachable mock kind");
}

// =====================================================================
// Client

struct LlmClient::Limiter {
    std::mutex mu;
    std::condition_variable cv;
    int in_flight = 0;
    int max_concurrent = 4;
    std::chrono::steady_clock::time_point next_allowed = std::chrono::steady_clock::now();
    std::chrono::milliseconds interval{0};

    void acquire() {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return in_flight < max_concurrent; });
        ++in_flight;
        auto now = std::chrono::steady_clock::now();
        if (interval.count() > 0) {
            if (next_allowed > now) {
                auto wait_until = next_allowed;
                next_allowed += interval;
                lock.unlock();
                std::this_thread::sleep_until(wait_until);
                return;
            }
            next_allowed = now + interval;
        }
    }

    void release() {
        {
            std::lock_guard lock(mu);
            --in_flight;
        }
        cv.notify_one();
    }
};

namespace {

// per-model limiters, shared across clients
std::mutex g_limiters_mu;
std::map<std::string, std::shared_ptr<LlmClient::Limiter>>& limiter_registry() {
    static std::map<std::string, std::shared_ptr<LlmClient::Limiter>> registry;
    return registry;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

LlmClient::LlmClient(ModelConfig config, std::string audit_log_path)
    : config_(std::move(config)), audit_path_(std::move(audit_log_path)) {
    if (auto err = config_.validate(); !err.empty()) throw std::runtime_error(err);
    if (auto kind = mock_kind_from_model_name(config_.model)) mock_ = make_mock_model(*kind);
    std::lock_guard lock(g_limiters_mu);
    auto& slot = limiter_registry()[config_.model];
    if (!slot) slot = std::make_shared<Limiter>();
    slot->max_concurrent = config_.max_concurrent;
    slot->interval = std::chrono::milliseconds(
        config_.requests_per_second > 0.0
            ? static_cast<long>(1000.0 / config_.requests_per_second)
            : 0);
    limiter_ = slot;
}

LlmClient::~LlmClient() = default;

void LlmClient::set_transport_for_testing(ModelFn fn) { transport_override_ = std::move(fn); }

std::string LlmClient::http_complete(const std::string& prompt, int& attempts_out) {
    std::string base = config_.endpoint;
    std::string prefix;
    if (auto scheme = base.find("://"); scheme != std::string::npos) {
        auto slash = base.find('/', scheme + 3);
        if (slash != std::string::npos) {
            prefix = base.substr(slash);
            base = base.substr(0, slash);
        }
    }
    std::string path = prefix + "/chat/completions";

    json body{{"model", config_.model},
              {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
              {"temperature", config_.temperature},
              {"max_tokens", config_.max_tokens}};
    std::string payload = body.dump();

    const char* key = nullptr;
    if (!config_.api_key_env.empty()) key = std::getenv(config_.api_key_env.c_str());

    std::string last_error = "no attempt made";
    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
        attempts_out = attempt;
        if (attempt > 1) {
            long delay = config_.retry.backoff_base_ms * (1L << (attempt - 2));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        if (transport_override_) {
            try {
                return (*transport_override_)(prompt);
            } catch (const std::exception& e) {
                last_error = e.what();
                continue;
            }
        }
        httplib::Client cli(base);
        cli.set_connection_timeout(config_.request_timeout_s, 0);
        cli.set_read_timeout(config_.request_timeout_s, 0);
        httplib::Headers headers;
        if (key) headers.emplace("Authorization", std::string("Bearer ") + key);
        auto res = cli.Post(path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403)
            throw TransportError("authentication failed (" + std::to_string(res->status) + ")",
                                 attempt);
        if (res->status == 429 || res->status >= 500) {
            last_error = "server returned " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw TransportError("request failed with status " + std::to_string(res->status),
                                 attempt);
        try {
            json parsed = json::parse(res->body);
            return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const std::exception& e) {
            throw TransportError(std::string("malformed completion response: ") + e.what(),
                                 attempt);
        }
    }
    throw TransportError("retries exhausted: " + last_error, config_.retry.max_attempts);
}

void LlmClient::audit(const std::string& prompt, const std::string& status, long latency_ms,
                      size_t response_chars, int attempts) {
    if (audit_path_.empty()) return;
    static std::mutex audit_mu;
    std::lock_guard lock(audit_mu);
    std::ofstream out(audit_path_, std::ios::app);
    json line{{"ts_ms", std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count()},
              {"model", config_.model},
              {"prompt_hash", fnv1a(prompt)},
              {"prompt_chars", prompt.size()},
              {"response_chars", response_chars},
              {"latency_ms", latency_ms},
              {"attempts", attempts},
              {"status", status}};
    out << line.dump() << "\n";
}

std::string LlmClient::complete(const std::string& prompt) {
    calls_.fetch_add(1);
    auto started = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - started)
            .count();
    };

    if (mock_) {
        std::string reply = (*mock_)(prompt);
        audit(prompt, "ok", elapsed_ms(), reply.size(), 1);
        return reply;
    }

    limiter_->acquire();
    struct Release {
        Limiter* l;
        ~Release() { l->release(); }
    } release{limiter_.get()};

    int attempts = 0;
    try {
        std::string reply = http_complete(prompt, attempts);
        audit(prompt, "ok", elapsed_ms(), reply.size(), attempts);
        return reply;
    } catch (const TransportError& e) {
        audit(prompt, std::string("error: ") + e.what(), elapsed_ms(), 0, e.attempts);
        throw;
    }
}

} // namespace fstm
