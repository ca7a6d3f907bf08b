#include "test_helpers.hpp"

#include <stdexcept>

#include "fstm/parse.hpp"

namespace fstm::testing {

std::set<std::string> enumerate_pl_groundings(const std::set<std::string>& shapes, int num_props) {
    std::set<std::string> out;
    for (const std::string& shape : shapes) {
        std::vector<size_t> slots;
        for (size_t i = 0; i < shape.size(); ++i)
            if (shape[i] == 'v') slots.push_back(i);
        size_t combos = 1;
        for (size_t i = 0; i < slots.size(); ++i) combos *= static_cast<size_t>(num_props);
        for (size_t c = 0; c < combos; ++c) {
            std::string grounded;
            size_t code = c, slot = 0;
            for (size_t i = 0; i < shape.size(); ++i) {
                if (slot < slots.size() && i == slots[slot]) {
                    grounded += "p" + std::to_string(1 + code % num_props);
                    code /= num_props;
                    ++slot;
                } else {
                    grounded += shape[i];
                }
            }
            ParseOutcome p = parse_logic(grounded, LogicMode::Pl);
            if (!p.ok()) throw std::logic_error("enumerated grounding failed to parse: " + grounded);
            out.insert(print_formula(*p.formula));
        }
    }
    return out;
}

} // namespace fstm::testing
