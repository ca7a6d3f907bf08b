#include "fstm/regex_ast.hpp"

#include <stdexcept>

namespace fstm {

namespace {

RegexPtr make_node(RegexKind kind, char symbol, std::vector<RegexPtr> children) {
    auto node = std::make_shared<RegexAst>();
    node->kind = kind;
    node->symbol = symbol;
    node->children = std::move(children);
    return node;
}

} // namespace

RegexPtr RegexAst::sym(char c) { return make_node(RegexKind::Symbol, c, {}); }

RegexPtr RegexAst::concat(std::vector<RegexPtr> parts) {
    if (parts.empty()) throw std::invalid_argument("empty concatenation");
    if (parts.size() == 1) return parts.front();
    return make_node(RegexKind::Concat, 0, std::move(parts));
}

RegexPtr RegexAst::group(RegexPtr child) {
    if (!child) throw std::invalid_argument("group of null regex");
    return make_node(RegexKind::Group, 0, {std::move(child)});
}

RegexPtr RegexAst::star(RegexPtr child) {
    if (!child) throw std::invalid_argument("star of null regex");
    if (child->kind != RegexKind::Symbol && child->kind != RegexKind::Group)
        throw std::invalid_argument("star must apply to a symbol or a group");
    return make_node(RegexKind::Star, 0, {std::move(child)});
}

RegexPtr RegexAst::epsilon() { return make_node(RegexKind::Epsilon, 0, {}); }

bool structurally_equal(const RegexAst& a, const RegexAst& b) {
    if (a.kind != b.kind || a.symbol != b.symbol || a.children.size() != b.children.size())
        return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(*a.children[i], *b.children[i])) return false;
    return true;
}

namespace {

void print_rec(const RegexAst& r, std::string& out) {
    switch (r.kind) {
    case RegexKind::Symbol:
        out += r.symbol;
        break;
    case RegexKind::Concat:
        for (const auto& c : r.children) print_rec(*c, out);
        break;
    case RegexKind::Group:
        out += '(';
        print_rec(*r.children[0], out);
        out += ')';
        break;
    case RegexKind::Star:
        print_rec(*r.children[0], out);
        out += '*';
        break;
    case RegexKind::Epsilon:
        break;
    }
}

} // namespace

std::string print_regex(const RegexAst& r) {
    std::string out;
    print_rec(r, out);
    return out;
}

int star_count(const RegexAst& r) {
    int n = r.kind == RegexKind::Star ? 1 : 0;
    for (const auto& c : r.children) n += star_count(*c);
    return n;
}

std::optional<std::string> validate_regex(const RegexAst& r, int alphabet_size) {
    switch (r.kind) {
    case RegexKind::Symbol:
        if (r.symbol < '0' || r.symbol >= '0' + alphabet_size)
            return std::string("symbol '") + r.symbol + "' outside the alphabet";
        return std::nullopt;
    case RegexKind::Star:
        if (r.children[0]->kind != RegexKind::Symbol && r.children[0]->kind != RegexKind::Group)
            return "star applied to something other than a symbol or group";
        break;
    case RegexKind::Concat:
        if (r.children.size() < 2) return "degenerate concatenation";
        break;
    default:
        break;
    }
    for (const auto& c : r.children)
        if (auto e = validate_regex(*c, alphabet_size)) return e;
    return std::nullopt;
}

} // namespace fstm
