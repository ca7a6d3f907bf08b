#include "fstm/regex_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fstm {

std::string to_string(Verdict::Value v) {
    switch (v) {
    case Verdict::Value::Equivalent: return "equivalent";
    case Verdict::Value::NotEquivalent: return "not_equivalent";
    case Verdict::Value::Unknown: return "unknown";
    }
    return "?";
}

Verdict::Value verdict_value_from_string(const std::string& s) {
    if (s == "equivalent") return Verdict::Value::Equivalent;
    if (s == "not_equivalent") return Verdict::Value::NotEquivalent;
    if (s == "unknown") return Verdict::Value::Unknown;
    throw std::runtime_error("unknown verdict value '" + s + "'");
}

bool Dfa::accepts(const std::string& s) const {
    int state = start;
    for (char c : s) {
        int sym = c - '0';
        if (sym < 0 || sym >= alphabet_size) return false;
        state = next[state][sym];
    }
    return accepting[state];
}

namespace {

// Thompson construction: one start, one accept, epsilon edges.
struct Nfa {
    struct State {
        std::vector<std::pair<int, int>> edges; // (symbol, target); -1 = epsilon
    };
    std::vector<State> states;
    int start = 0;
    int accept = 0;

    int add() {
        states.emplace_back();
        return static_cast<int>(states.size()) - 1;
    }
};

std::pair<int, int> build_nfa(const RegexAst& r, Nfa& nfa) {
    switch (r.kind) {
    case RegexKind::Symbol: {
        int s = nfa.add(), t = nfa.add();
        nfa.states[s].edges.emplace_back(r.symbol - '0', t);
        return {s, t};
    }
    case RegexKind::Epsilon: {
        int s = nfa.add(), t = nfa.add();
        nfa.states[s].edges.emplace_back(-1, t);
        return {s, t};
    }
    case RegexKind::Group:
        return build_nfa(*r.children[0], nfa);
    case RegexKind::Concat: {
        std::pair<int, int> first = build_nfa(*r.children[0], nfa);
        for (size_t i = 1; i < r.children.size(); ++i) {
            std::pair<int, int> next = build_nfa(*r.children[i], nfa);
            nfa.states[first.second].edges.emplace_back(-1, next.first);
            first.second = next.second;
        }
        return first;
    }
    case RegexKind::Star: {
        std::pair<int, int> inner = build_nfa(*r.children[0], nfa);
        int s = nfa.add(), t = nfa.add();
        nfa.states[s].edges.emplace_back(-1, inner.first);
        nfa.states[s].edges.emplace_back(-1, t);
        nfa.states[inner.second].edges.emplace_back(-1, inner.first);
        nfa.states[inner.second].edges.emplace_back(-1, t);
        return {s, t};
    }
    }
    throw std::logic_error("unreachable regex kind");
}

std::set<int> epsilon_closure(const Nfa& nfa, std::set<int> states) {
    std::deque<int> work(states.begin(), states.end());
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (auto [sym, to] : nfa.states[q].edges)
            if (sym == -1 && states.insert(to).second) work.push_back(to);
    }
    return states;
}

Dfa subset_construction(const Nfa& nfa, int alphabet_size) {
    Dfa dfa;
    dfa.alphabet_size = alphabet_size;
    std::map<std::set<int>, int> ids;
    std::deque<std::set<int>> work;

    auto state_id = [&](const std::set<int>& s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(ids.size());
        ids.emplace(s, id);
        dfa.next.emplace_back(alphabet_size, -1);
        dfa.accepting.push_back(s.count(nfa.accept) > 0);
        work.push_back(s);
        return id;
    };

    dfa.start = state_id(epsilon_closure(nfa, {nfa.start}));
    while (!work.empty()) {
        std::set<int> s = work.front();
        work.pop_front();
        int from = ids[s];
        for (int c = 0; c < alphabet_size; ++c) {
            std::set<int> to;
            for (int q : s)
                for (auto [sym, target] : nfa.states[q].edges)
                    if (sym == c) to.insert(target);
            dfa.next[from][c] = state_id(epsilon_closure(nfa, std::move(to)));
        }
    }
    dfa.num_states = static_cast<int>(dfa.next.size());
    return dfa;
}

// Hopcroft partition refinement over a complete DFA.
Dfa hopcroft_minimize(const Dfa& d) {
    int n = d.num_states;
    std::vector<int> block_of(n, 0);
    std::vector<std::vector<int>> blocks;
    {
        std::vector<int> acc, rej;
        for (int q = 0; q < n; ++q) (d.accepting[q] ? acc : rej).push_back(q);
        if (!acc.empty()) blocks.push_back(acc);
        if (!rej.empty()) blocks.push_back(rej);
        for (size_t b = 0; b < blocks.size(); ++b)
            for (int q : blocks[b]) block_of[q] = static_cast<int>(b);
    }

    // reverse transitions
    std::vector<std::vector<std::vector<int>>> rev(
        n, std::vector<std::vector<int>>(d.alphabet_size));
    for (int q = 0; q < n; ++q)
        for (int c = 0; c < d.alphabet_size; ++c) rev[d.next[q][c]][c].push_back(q);

    std::set<std::pair<int, int>> worklist; // (block, symbol)
    for (int c = 0; c < d.alphabet_size; ++c)
        for (size_t b = 0; b < blocks.size(); ++b) worklist.insert({static_cast<int>(b), c});

    while (!worklist.empty()) {
        auto [a, c] = *worklist.begin();
        worklist.erase(worklist.begin());

        // X = states with a c-transition into block a
        std::set<int> x;
        for (int q : blocks[a])
            for (int p : rev[q][c]) x.insert(p);
        if (x.empty()) continue;

        std::set<int> touched;
        for (int p : x) touched.insert(block_of[p]);
        for (int b : touched) {
            std::vector<int> in, out;
            for (int q : blocks[b]) (x.count(q) ? in : out).push_back(q);
            if (in.empty() || out.empty()) continue;
            int nb = static_cast<int>(blocks.size());
            blocks[b] = in;
            blocks.push_back(out);
            for (int q : out) block_of[q] = nb;
            for (int cc = 0; cc < d.alphabet_size; ++cc) {
                if (worklist.count({b, cc})) {
                    worklist.insert({nb, cc});
                } else {
                    worklist.insert({blocks[b].size() <= blocks[nb].size() ? b : nb, cc});
                }
            }
        }
    }

    Dfa m;
    m.alphabet_size = d.alphabet_size;
    m.num_states = static_cast<int>(blocks.size());
    m.next.assign(m.num_states, std::vector<int>(d.alphabet_size, 0));
    m.accepting.assign(m.num_states, false);
    m.start = block_of[d.start];
    for (size_t b = 0; b < blocks.size(); ++b) {
        int repr = blocks[b].front();
        m.accepting[b] = d.accepting[repr];
        for (int c = 0; c < d.alphabet_size; ++c) m.next[b][c] = block_of[d.next[repr][c]];
    }
    return m;
}

Dfa canonical_renumber(const Dfa& d) {
    std::vector<int> order(d.num_states, -1);
    int counter = 0;
    std::queue<int> bfs;
    bfs.push(d.start);
    order[d.start] = counter++;
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        for (int c = 0; c < d.alphabet_size; ++c) {
            int to = d.next[q][c];
            if (order[to] == -1) {
                order[to] = counter++;
                bfs.push(to);
            }
        }
    }
    // all states of a minimized automaton are reachable
    Dfa out;
    out.alphabet_size = d.alphabet_size;
    out.num_states = counter;
    out.start = 0;
    out.next.assign(counter, std::vector<int>(d.alphabet_size, 0));
    out.accepting.assign(counter, false);
    for (int q = 0; q < d.num_states; ++q) {
        if (order[q] == -1) continue;
        out.accepting[order[q]] = d.accepting[q];
        for (int c = 0; c < d.alphabet_size; ++c) out.next[order[q]][c] = order[d.next[q][c]];
    }
    return out;
}

} // namespace

Dfa minimal_dfa(const RegexAst& r, int alphabet_size) {
    if (alphabet_size < 1) throw std::invalid_argument("alphabet_size must be >= 1");
    Nfa nfa;
    auto [s, t] = build_nfa(r, nfa);
    nfa.start = s;
    nfa.accept = t;
    Dfa dfa = subset_construction(nfa, alphabet_size);
    return canonical_renumber(hopcroft_minimize(dfa));
}

DfaStats dfa_stats(const Dfa& d) {
    DfaStats st;
    st.nodes = d.num_states;
    st.edges = d.num_states * d.alphabet_size;
    if (st.nodes <= 1) {
        st.density = 0.0;
    } else {
        double raw = static_cast<double>(st.edges) / (static_cast<double>(st.nodes) * (st.nodes - 1));
        st.density = std::round(raw * 10.0) / 10.0;
    }
    return st;
}

Verdict regex_equivalent(const RegexAst& a, const RegexAst& b, int alphabet_size) {
    Dfa da = minimal_dfa(a, alphabet_size);
    Dfa db = minimal_dfa(b, alphabet_size);
    if (da == db) return Verdict::make_equivalent();

    // shortest distinguishing string via BFS over the product automaton
    Verdict v;
    v.value = Verdict::Value::NotEquivalent;
    std::set<std::pair<int, int>> seen;
    std::queue<std::pair<std::pair<int, int>, std::string>> bfs;
    bfs.push({{da.start, db.start}, ""});
    seen.insert({da.start, db.start});
    while (!bfs.empty()) {
        auto [states, prefix] = bfs.front();
        bfs.pop();
        if (da.accepting[states.first] != db.accepting[states.second]) {
            v.distinguishing_string = prefix;
            return v;
        }
        for (int c = 0; c < alphabet_size; ++c) {
            std::pair<int, int> to{da.next[states.first][c], db.next[states.second][c]};
            if (seen.insert(to).second) bfs.push({to, prefix + static_cast<char>('0' + c)});
        }
    }
    // distinct minimal DFAs always disagree on some string
    throw std::logic_error("minimal DFAs differ but no distinguishing string found");
}

std::string to_dot(const Dfa& d) {
    std::ostringstream out;
    out << "digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  start [shape=point];\n  start -> s" << d.start << ";\n";
    for (int q = 0; q < d.num_states; ++q)
        if (d.accepting[q]) out << "  s" << q << " [shape=doublecircle];\n";
    for (int q = 0; q < d.num_states; ++q)
        for (int c = 0; c < d.alphabet_size; ++c)
            out << "  s" << q << " -> s" << d.next[q][c] << " [label=\"" << c << "\"];\n";
    out << "}\n";
    return out.str();
}

} // namespace fstm
