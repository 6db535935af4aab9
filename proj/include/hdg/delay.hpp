// The one-letter delay of an automaton: the ghost that shadows any run of
// the source with a lag of one letter. Its states are (source state, stored
// letter) pairs plus a fresh start; reading a letter makes the underlying
// automaton consume the stored one. This keeps the language and turns every
// nondeterministic choice into one that happens a letter later, which is
// what lets the delayed automaton be guided by the source's own moves.

#ifndef HDG_DELAY_HPP
#define HDG_DELAY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "errors.hpp"
#include "games.hpp"
#include "lasso.hpp"

namespace hdg {

/// Delayed automaton with the bookkeeping of where each state came from.
/// All (state, letter) pairs are kept, reachable or not, so the state count
/// is exactly |Q|*|Sigma| + 1.
struct DelayAutomaton {
    Automaton automaton;
    std::vector<State> provenance; ///< delayed state -> source state

    State entry_state() const { return 0; }
    State pair_state(State q, Letter stored) const {
        return 1 + q * automaton.alphabet().size() + stored;
    }
};

inline DelayAutomaton delay_finite(const Automaton& a) {
    const int k = a.alphabet().size();
    const int n = a.num_states() * k + 1;
    std::vector<std::string> names(static_cast<size_t>(n));
    std::vector<State> prov(static_cast<size_t>(n));
    names[0] = "start";
    prov[0] = a.initial();
    for (State q = 0; q < a.num_states(); ++q)
        for (Letter x = 0; x < k; ++x) {
            State s = 1 + q * k + x;
            names[static_cast<size_t>(s)] = a.state_name(q) + ";" + a.alphabet().name(x);
            prov[static_cast<size_t>(s)] = q;
        }
    std::vector<Transition> ts;
    for (Letter x = 0; x < k; ++x)
        ts.push_back({0, x, 1 + a.initial() * k + x, false});
    // reading x2 in (src, x): the underlying run takes its x-transition now
    for (const Transition& t : a.transitions())
        for (Letter x2 = 0; x2 < k; ++x2)
            ts.push_back({1 + t.src * k + t.letter, x2, 1 + t.dst * k + x2, t.mark});
    return {Automaton(a.alphabet(), n, 0, std::move(ts), a.acceptance(),
                      a.name().empty() ? "delay" : a.name() + "-delay", std::move(names)),
            std::move(prov)};
}

/// Eve's shadowing strategy for the one-token game on (d.automaton, a): on
/// each declared letter she moves to the pair (Adam's current state, letter),
/// which exists because Adam's previous move put it there. Among a marked and
/// an unmarked copy of that move she takes whichever her acceptance prefers.
/// The strategy indexes the nodes of build_g1_two(d.automaton, a); the build
/// is deterministic, so a caller-side rebuild sees the same node ids.
inline Strategy copy_strategy(const DelayAutomaton& d, const Automaton& a) {
    DelayAutomaton expect = delay_finite(a);
    if (!(expect.automaton == d.automaton) || expect.provenance != d.provenance)
        throw input_error("copy_strategy: delay automaton was not built from this source");
    BuiltGame game = build_g1_two(d.automaton, a);
    const int k = a.alphabet().size();
    const bool prefer_marked =
        a.acceptance() == Acceptance::Buchi || a.acceptance() == Acceptance::Reachability;
    Strategy s;
    s.owner = Player::Eve;
    s.edge_of.assign(static_cast<size_t>(game.arena.num_nodes()), -1);
    for (int v = 0; v < game.arena.num_nodes(); ++v) {
        const ArenaNode& an = game.arena.node(v);
        if (an.terminal || an.owner != Player::Eve) continue;
        const GameNode& n = game.nodes[static_cast<size_t>(v)];
        State want = 1 + n.qA * k + n.letter;
        int best = -1;
        for (int e : game.arena.out(v)) {
            if (game.nodes[static_cast<size_t>(game.arena.edge(e).dst)].qE != want) continue;
            if (best < 0) best = e;
            if (game.marks[static_cast<size_t>(e)].g == prefer_marked) {
                best = e;
                break;
            }
        }
        // off the shadowing path (unreachable under this strategy) any move does
        s.edge_of[static_cast<size_t>(v)] = best >= 0 ? best : game.arena.out(v).at(0);
    }
    return s;
}

struct GhostReport {
    bool game_won = false;
    int lassos = 0;
    int agreements = 0;
    bool pass = false;
};

/// Checks a claimed ghost aPrime for a: Eve must win the one-token game on
/// (aPrime, a) outright, and the two automata must agree on `budget` sampled
/// lassos (the delay preserves the language exactly, so any disagreement
/// falsifies the claim).
inline GhostReport verify_ghost(const Automaton& aPrime, const Automaton& a, int budget,
                                std::uint64_t seed = 20260816) {
    GhostReport r;
    r.game_won = eve_wins(build_g1_two(aPrime, a));
    r.lassos = budget;
    for (const Lasso& l : sample_lassos(a.alphabet(), budget, 6, 4, seed))
        if (lasso_membership(aPrime, l) == lasso_membership(a, l)) r.agreements++;
    r.pass = r.game_won && r.agreements == r.lassos;
    return r;
}

} // namespace hdg

#endif // HDG_DELAY_HPP
