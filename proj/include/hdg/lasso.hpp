// Ultimately periodic words (lassos) and exact membership checking.
//
// Membership of u.v^w in L(a) reduces to acceptance-nonemptiness of the
// finite product of a with the lasso's loop automaton, so the verdict cannot
// depend on how the cycle is unrolled.

#ifndef HDG_LASSO_HPP
#define HDG_LASSO_HPP

#include <random>
#include <string>
#include <vector>

#include "hdg/analysis.hpp"
#include "hdg/automaton.hpp"

namespace hdg {

/// The infinite word prefix.cycle^w; the cycle must be nonempty.
struct Lasso {
    std::vector<Letter> prefix;
    std::vector<Letter> cycle;
};

inline void validate_lasso(const Alphabet& alphabet, const Lasso& l) {
    if (l.cycle.empty()) throw input_error("lasso: cycle must be nonempty");
    for (Letter x : l.prefix)
        if (x < 0 || x >= alphabet.size()) throw input_error("lasso: prefix letter out of range");
    for (Letter x : l.cycle)
        if (x < 0 || x >= alphabet.size()) throw input_error("lasso: cycle letter out of range");
}

/// Builds a lasso from letter names.
inline Lasso make_lasso(const Alphabet& alphabet, const std::string& prefix,
                        const std::string& cycle) {
    auto conv = [&](const std::string& s) {
        std::vector<Letter> out;
        for (char c : s) {
            auto i = alphabet.index_of(std::string(1, c));
            if (!i) throw input_error(std::string("lasso: unknown letter '") + c + "'");
            out.push_back(*i);
        }
        return out;
    };
    Lasso l{conv(prefix), conv(cycle)};
    validate_lasso(alphabet, l);
    return l;
}

/// Product of a with the deterministic loop automaton of the lasso: states are
/// (state of a, word position), acceptance and marks are inherited from a.
/// The result is only used for emptiness-style analyses, so unreachable pairs
/// are kept out.
inline Automaton lasso_product(const Automaton& a, const Lasso& l) {
    validate_lasso(a.alphabet(), l);
    const int len = static_cast<int>(l.prefix.size() + l.cycle.size());
    auto letter_at = [&](int i) -> Letter {
        return i < static_cast<int>(l.prefix.size())
                   ? l.prefix[static_cast<size_t>(i)]
                   : l.cycle[static_cast<size_t>(i) - l.prefix.size()];
    };
    auto next_pos = [&](int i) { return i + 1 < len ? i + 1 : static_cast<int>(l.prefix.size()); };

    std::vector<std::pair<State, int>> nodes;
    std::vector<int> id(static_cast<size_t>(a.num_states()) * static_cast<size_t>(len), -1);
    auto intern = [&](State q, int pos) {
        int& slot = id[static_cast<size_t>(q) * static_cast<size_t>(len) + static_cast<size_t>(pos)];
        if (slot == -1) {
            slot = static_cast<int>(nodes.size());
            nodes.emplace_back(q, pos);
        }
        return slot;
    };
    std::vector<Transition> ts;
    intern(a.initial(), 0);
    for (size_t i = 0; i < nodes.size(); ++i) {
        auto [q, pos] = nodes[i];
        Letter x = letter_at(pos);
        for (int ti : a.out_on(q, x)) {
            const auto& t = a.transitions()[static_cast<size_t>(ti)];
            int j = intern(t.dst, next_pos(pos));
            ts.push_back({static_cast<State>(i), x, static_cast<State>(j), t.mark});
        }
    }
    return Automaton(a.alphabet(), static_cast<int>(nodes.size()), 0, std::move(ts),
                     a.acceptance());
}

/// Exact membership: is prefix.cycle^w in L(a)?
inline bool lasso_membership(const Automaton& a, const Lasso& l) {
    Automaton prod = lasso_product(a, l);
    return accepting_continuation_states(prod, false)[static_cast<size_t>(prod.initial())];
}

/// Per-position reachable state sets of a along a lasso, for `steps` letters.
/// A plain unfolding used by tests and diagnostics.
struct RunDag {
    std::vector<std::vector<State>> levels; ///< levels[i] = states reachable after i letters
};

inline RunDag run_dag(const Automaton& a, const Lasso& l, int steps) {
    validate_lasso(a.alphabet(), l);
    RunDag dag;
    std::vector<bool> cur(static_cast<size_t>(a.num_states()), false);
    cur[static_cast<size_t>(a.initial())] = true;
    auto snapshot = [&]() {
        std::vector<State> lv;
        for (State q = 0; q < a.num_states(); ++q)
            if (cur[static_cast<size_t>(q)]) lv.push_back(q);
        dag.levels.push_back(std::move(lv));
    };
    snapshot();
    const int len = static_cast<int>(l.prefix.size() + l.cycle.size());
    for (int i = 0; i < steps; ++i) {
        int pos = i < static_cast<int>(l.prefix.size())
                      ? i
                      : static_cast<int>(l.prefix.size()) +
                            (i - static_cast<int>(l.prefix.size())) %
                                static_cast<int>(l.cycle.size());
        (void)len;
        Letter x = pos < static_cast<int>(l.prefix.size())
                       ? l.prefix[static_cast<size_t>(pos)]
                       : l.cycle[static_cast<size_t>(pos) - l.prefix.size()];
        std::vector<bool> nxt(static_cast<size_t>(a.num_states()), false);
        for (State q = 0; q < a.num_states(); ++q)
            if (cur[static_cast<size_t>(q)])
                for (int ti : a.out_on(q, x)) nxt[static_cast<size_t>(a.transitions()[static_cast<size_t>(ti)].dst)] = true;
        cur = std::move(nxt);
        snapshot();
    }
    return dag;
}

/// Deterministic pseudo-random draw in [0, n). Plain modulo keeps the stream
/// identical across standard library implementations.
inline std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) {
    return n == 0 ? 0 : rng() % n;
}

/// Reproducible lasso sampling: prefix length uniform in [0, max_prefix],
/// cycle length uniform in [1, max_cycle], letters uniform.
inline std::vector<Lasso> sample_lassos(const Alphabet& alphabet, int count, int max_prefix,
                                        int max_cycle, std::uint64_t seed) {
    if (count < 0 || max_prefix < 0 || max_cycle < 1)
        throw input_error("sample_lassos: count >= 0, max_prefix >= 0, max_cycle >= 1 required");
    std::mt19937_64 rng(seed);
    std::vector<Lasso> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        Lasso l;
        int np = static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(max_prefix) + 1));
        int nc = 1 + static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(max_cycle)));
        for (int j = 0; j < np; ++j)
            l.prefix.push_back(static_cast<Letter>(rand_below(rng, static_cast<std::uint64_t>(alphabet.size()))));
        for (int j = 0; j < nc; ++j)
            l.cycle.push_back(static_cast<Letter>(rand_below(rng, static_cast<std::uint64_t>(alphabet.size()))));
        out.push_back(std::move(l));
    }
    return out;
}

} // namespace hdg

#endif // HDG_LASSO_HPP
