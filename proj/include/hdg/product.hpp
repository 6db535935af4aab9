// Synchronous product of two automata over the same alphabet, keeping the two
// factors' marks separate. Used for exact language-intersection emptiness
// certificates (a reachable cycle live in both factors).

#ifndef HDG_PRODUCT_HPP
#define HDG_PRODUCT_HPP

#include <unordered_map>
#include <vector>

#include "hdg/analysis.hpp"
#include "hdg/automaton.hpp"
#include "hdg/lasso.hpp"

namespace hdg {

struct ProductTransition {
    State src;
    Letter letter;
    State dst;
    bool mark_a = false;
    bool mark_b = false;
};

/// Reachable part of the synchronous product. state_pairs[i] gives the
/// (a-state, b-state) behind product state i; state 0 is the initial pair.
struct ProductAutomaton {
    Alphabet alphabet;
    int num_states = 0;
    State initial = 0;
    std::vector<ProductTransition> transitions;
    std::vector<std::pair<State, State>> state_pairs;
};

inline ProductAutomaton product(const Automaton& a, const Automaton& b) {
    if (!(a.alphabet() == b.alphabet()))
        throw input_error("product: alphabets differ");
    ProductAutomaton p;
    p.alphabet = a.alphabet();
    std::unordered_map<long long, int> index;
    auto key = [&](State qa, State qb) {
        return static_cast<long long>(qa) * b.num_states() + qb;
    };
    auto intern = [&](State qa, State qb) {
        auto [it, fresh] = index.try_emplace(key(qa, qb), static_cast<int>(p.state_pairs.size()));
        if (fresh) p.state_pairs.emplace_back(qa, qb);
        return it->second;
    };
    intern(a.initial(), b.initial());
    for (size_t i = 0; i < p.state_pairs.size(); ++i) {
        auto [qa, qb] = p.state_pairs[i];
        for (int ta : a.out(qa)) {
            const auto& xa = a.transitions()[static_cast<size_t>(ta)];
            for (int tb : b.out_on(qb, xa.letter)) {
                const auto& xb = b.transitions()[static_cast<size_t>(tb)];
                int j = intern(xa.dst, xb.dst);
                p.transitions.push_back({static_cast<State>(i), xa.letter,
                                         static_cast<State>(j), xa.mark, xb.mark});
            }
        }
    }
    p.num_states = static_cast<int>(p.state_pairs.size());
    return p;
}

/// True iff some reachable strongly connected component carries an internal
/// transition marked in factor a and an internal transition marked in factor
/// b. For two Buchi factors, this is exactly nonemptiness of the language
/// intersection; its absence certifies disjointness.
inline bool has_doubly_live_cycle(const ProductAutomaton& p) {
    std::vector<std::vector<State>> adj(static_cast<size_t>(p.num_states));
    for (const auto& t : p.transitions) adj[static_cast<size_t>(t.src)].push_back(t.dst);
    auto comps = detail::sccs_of(p.num_states, adj);
    std::vector<int> comp_of(static_cast<size_t>(p.num_states), -1);
    for (size_t c = 0; c < comps.size(); ++c)
        for (State q : comps[c]) comp_of[static_cast<size_t>(q)] = static_cast<int>(c);
    std::vector<bool> live_a(comps.size(), false), live_b(comps.size(), false),
        nontrivial(comps.size(), false);
    for (const auto& t : p.transitions) {
        int c = comp_of[static_cast<size_t>(t.src)];
        if (c != comp_of[static_cast<size_t>(t.dst)]) continue;
        nontrivial[static_cast<size_t>(c)] = true;
        if (t.mark_a) live_a[static_cast<size_t>(c)] = true;
        if (t.mark_b) live_b[static_cast<size_t>(c)] = true;
    }
    // all product states are reachable by construction
    for (size_t c = 0; c < comps.size(); ++c)
        if (nontrivial[c] && live_a[c] && live_b[c]) return true;
    return false;
}

/// Joint lasso acceptance through the product: the lasso is accepted by both
/// Buchi factors iff the product of (product, lasso loop) has a reachable
/// cycle carrying both mark kinds.
inline bool lasso_joint_buchi_accept(const Automaton& a, const Automaton& b, const Lasso& l) {
    if (a.acceptance() != Acceptance::Buchi || b.acceptance() != Acceptance::Buchi)
        throw unsupported_error("lasso_joint_buchi_accept: both factors must be Buchi");
    ProductAutomaton p = product(a, b);
    validate_lasso(a.alphabet(), l);
    const int len = static_cast<int>(l.prefix.size() + l.cycle.size());
    auto letter_at = [&](int i) -> Letter {
        return i < static_cast<int>(l.prefix.size())
                   ? l.prefix[static_cast<size_t>(i)]
                   : l.cycle[static_cast<size_t>(i) - l.prefix.size()];
    };
    auto next_pos = [&](int i) { return i + 1 < len ? i + 1 : static_cast<int>(l.prefix.size()); };

    // adjacency of product states by letter
    std::vector<std::vector<int>> out(static_cast<size_t>(p.num_states));
    for (size_t i = 0; i < p.transitions.size(); ++i)
        out[static_cast<size_t>(p.transitions[i].src)].push_back(static_cast<int>(i));

    ProductAutomaton unrolled;
    unrolled.alphabet = p.alphabet;
    std::unordered_map<long long, int> index;
    std::vector<std::pair<State, int>> nodes;
    auto intern = [&](State q, int pos) {
        auto [it, fresh] = index.try_emplace(static_cast<long long>(q) * len + pos,
                                             static_cast<int>(nodes.size()));
        if (fresh) nodes.emplace_back(q, pos);
        return it->second;
    };
    intern(p.initial, 0);
    for (size_t i = 0; i < nodes.size(); ++i) {
        auto [q, pos] = nodes[i];
        Letter x = letter_at(pos);
        for (int ti : out[static_cast<size_t>(q)]) {
            const auto& t = p.transitions[static_cast<size_t>(ti)];
            if (t.letter != x) continue;
            int j = intern(t.dst, next_pos(pos));
            unrolled.transitions.push_back({static_cast<State>(i), x, static_cast<State>(j),
                                            t.mark_a, t.mark_b});
        }
    }
    unrolled.num_states = static_cast<int>(nodes.size());
    unrolled.state_pairs.assign(nodes.size(), {0, 0});
    return has_doubly_live_cycle(unrolled);
}

} // namespace hdg

#endif // HDG_PRODUCT_HPP
