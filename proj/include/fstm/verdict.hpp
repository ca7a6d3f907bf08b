#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fstm {

// A finite interpretation: universe {0..size-1}, object constants mapped
// to elements, one truth table per predicate over all argument tuples
// (mixed-radix row order, first argument most significant).
struct FiniteModel {
    int universe_size = 1;
    std::map<std::string, int> objects;
    std::map<std::string, int> predicate_arity;
    std::map<std::string, std::vector<bool>> predicate_tables;
};

// Three-valued equivalence outcome shared by all verifiers.
struct Verdict {
    enum class Value { Equivalent, NotEquivalent, Unknown };
    Value value = Value::Unknown;
    std::string reason; // Unknown: "timeout" or "budget"

    std::optional<std::map<std::string, bool>> falsifying_assignment; // PL witness
    std::optional<FiniteModel> countermodel;                          // FOL witness
    std::optional<std::string> distinguishing_string;                 // regex witness
    std::optional<long> proof_steps;                                  // FOL equivalence

    bool equivalent() const { return value == Value::Equivalent; }
    bool not_equivalent() const { return value == Value::NotEquivalent; }
    bool unknown() const { return value == Value::Unknown; }

    static Verdict make_equivalent() { return {Value::Equivalent, "", {}, {}, {}, {}}; }
    static Verdict make_unknown(std::string why) {
        return {Value::Unknown, std::move(why), {}, {}, {}, {}};
    }
};

std::string to_string(Verdict::Value v);
Verdict::Value verdict_value_from_string(const std::string& s);

} // namespace fstm
