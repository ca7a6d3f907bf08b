#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fstm {

// Regex dialect: symbols over a digit alphabet, concatenation, grouping
// parentheses and Kleene star.  Star applies to a single symbol or a
// parenthesized group only.

enum class RegexKind { Symbol, Concat, Group, Star, Epsilon };

class RegexAst;
using RegexPtr = std::shared_ptr<const RegexAst>;

class RegexAst {
public:
    RegexKind kind;
    char symbol = 0;                // Symbol only
    std::vector<RegexPtr> children; // Concat: >=2, Group/Star: 1

    static RegexPtr sym(char c);
    static RegexPtr concat(std::vector<RegexPtr> parts); // collapses a single part
    static RegexPtr group(RegexPtr child);
    static RegexPtr star(RegexPtr child); // child must be Symbol or Group
    static RegexPtr epsilon();
};

bool structurally_equal(const RegexAst& a, const RegexAst& b);

// Epsilon prints as the empty string.
std::string print_regex(const RegexAst& r);

int star_count(const RegexAst& r);

std::optional<std::string> validate_regex(const RegexAst& r, int alphabet_size);

} // namespace fstm
