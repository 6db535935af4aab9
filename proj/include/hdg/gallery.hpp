// Pinned example automata with hand-built monitors, plus the seeded random
// instance generator behind the test sweeps.

#ifndef HDG_GALLERY_HPP
#define HDG_GALLERY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "automaton.hpp"
#include "errors.hpp"
#include "games.hpp"
#include "lasso.hpp"
#include "product.hpp"

namespace hdg {

/// Four-state Buchi automaton over {a,b,c,d} for (a+b)*(ac+bd)(a+b)^w: the
/// run must commit to the pending ac/bd handshake one letter before it
/// resolves, which costs history-determinism even though the automaton is
/// linear.
inline Automaton fig2() {
    Alphabet sigma({"a", "b", "c", "d"});
    std::vector<Transition> ts = {
        {0, 0, 0, false}, {0, 1, 0, false}, // wait in q0
        {0, 0, 1, false},                   // guess: an 'a' that 'c' will seal
        {0, 1, 2, false},                   // guess: a 'b' that 'd' will seal
        {1, 2, 3, false},
        {2, 3, 3, false},
        {3, 0, 3, true},  {3, 1, 3, true},
    };
    return Automaton(sigma, 4, 0, ts, Acceptance::Buchi, "fig2");
}

/// Deterministic Buchi monitor for the fig2 language, tracking the last
/// letter until the handshake resolves: m0 start, m1 after a, m2 after b,
/// m3 sealed, m4 rejecting sink.
inline Automaton fig2_monitor() {
    Alphabet sigma({"a", "b", "c", "d"});
    std::vector<Transition> ts = {
        {0, 0, 1, false}, {0, 1, 2, false}, {0, 2, 4, false}, {0, 3, 4, false},
        {1, 0, 1, false}, {1, 1, 2, false}, {1, 2, 3, false}, {1, 3, 4, false},
        {2, 0, 1, false}, {2, 1, 2, false}, {2, 2, 4, false}, {2, 3, 3, false},
        {3, 0, 3, true},  {3, 1, 3, true},  {3, 2, 4, false}, {3, 3, 4, false},
        {4, 0, 4, false}, {4, 1, 4, false}, {4, 2, 4, false}, {4, 3, 4, false},
    };
    return Automaton(sigma, 5, 0, ts, Acceptance::Buchi, "fig2-monitor");
}

/// Chain of 2n states over {a,b} accepting the words with finitely many a's:
/// odd states wait (a,b loops), even states are the accepting ones (all
/// outgoing marked, b loop), and every state can advance except the last.
/// Not history-deterministic, yet it simulates every included Buchi
/// automaton with up to 2n states.
inline Automaton fig3(int n) {
    if (n < 1 || n > 8) throw input_error("fig3: n out of range");
    Alphabet sigma({"a", "b"});
    std::vector<Transition> ts;
    for (int i = 0; i < 2 * n; ++i) {
        bool even = i % 2 == 1; // 1-based even states sit at odd indices
        if (even) {
            ts.push_back({i, 1, i, true});
            if (i + 1 < 2 * n) {
                ts.push_back({i, 0, i + 1, true});
                ts.push_back({i, 1, i + 1, true});
            }
        } else {
            ts.push_back({i, 0, i, false});
            ts.push_back({i, 1, i, false});
            ts.push_back({i, 0, i + 1, false});
            ts.push_back({i, 1, i + 1, false});
        }
    }
    return Automaton(sigma, 2 * n, 0, ts, Acceptance::Buchi, "fig3-" + std::to_string(n));
}

/// One-state deterministic coBuchi monitor for "finitely many a's".
inline Automaton fin_a_monitor() {
    Alphabet sigma({"a", "b"});
    return Automaton(sigma, 1, 0, {{0, 0, 0, true}, {0, 1, 0, false}},
                     Acceptance::CoBuchi, "fin-a");
}

/// One-state deterministic Buchi automaton for "infinitely many a's", the
/// complement used to filter candidate automata exactly.
inline Automaton inf_a() {
    Alphabet sigma({"a", "b"});
    return Automaton(sigma, 1, 0, {{0, 0, 0, true}, {0, 1, 0, false}},
                     Acceptance::Buchi, "inf-a");
}

/// Exact check that the Buchi automaton b over {a,b} accepts only words with
/// finitely many a's: its product with inf_a() must have no reachable cycle
/// that is live on both sides.
inline bool included_in_fin_a(const Automaton& b) {
    return !has_doubly_live_cycle(product(b, inf_a()));
}

/// Eve's scripted strategy for Sim(fig3(n), b) with an included b: advance to
/// the next even state whenever Adam sits in an accepting component and she
/// is in an odd one, otherwise stay put (or advance when staying is
/// impossible, i.e. on 'a' in an even state).
inline Strategy fig3_scripted_strategy(const BuiltGame& sim, const Automaton& b) {
    if (sim.kind != GameKind::Simulation)
        throw input_error("fig3_scripted_strategy: not a simulation game");
    std::vector<bool> in_accepting(static_cast<size_t>(b.num_states()), false);
    for (const Mscc& c : msccs(b))
        if (c.accepting)
            for (State q : c.states) in_accepting[static_cast<size_t>(q)] = true;
    Strategy s;
    s.owner = Player::Eve;
    s.edge_of.assign(static_cast<size_t>(sim.arena.num_nodes()), -1);
    for (int v = 0; v < sim.arena.num_nodes(); ++v) {
        const ArenaNode& an = sim.arena.node(v);
        if (an.terminal || an.owner != Player::Eve) continue;
        const GameNode& n = sim.nodes[static_cast<size_t>(v)];
        bool odd = n.qE % 2 == 0; // 1-based odd states sit at even indices
        State target = (odd && in_accepting[static_cast<size_t>(n.qA)]) ? n.qE + 1 : n.qE;
        int fallback = -1;
        for (int e : sim.arena.out(v)) {
            int d = sim.arena.edge(e).dst;
            if (fallback < 0) fallback = e;
            if (sim.nodes[static_cast<size_t>(d)].qE == target) {
                fallback = e;
                break;
            }
        }
        s.edge_of[static_cast<size_t>(v)] = fallback;
    }
    return s;
}

struct RandomAutomatonParams {
    int max_states = 4;
    int max_letters = 2;
    Acceptance acceptance = Acceptance::Buchi;
};

/// Seeded random automaton: per state and letter, no / one / two successors
/// with probabilities 1/4, 1/2, 1/4, each transition marked with probability
/// 1/4. Dead ends are intentional; they exercise the stuck rules.
inline Automaton random_automaton(const RandomAutomatonParams& p, std::uint64_t seed) {
    if (p.max_states < 1 || p.max_states > 8)
        throw input_error("random_automaton: max_states out of range");
    if (p.max_letters < 1 || p.max_letters > 4)
        throw input_error("random_automaton: max_letters out of range");
    static const std::vector<std::string> names = {"a", "b", "c", "d"};
    std::mt19937_64 rng(seed);
    int n = 1 + static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(p.max_states)));
    int k = 1 + static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(p.max_letters)));
    Alphabet sigma(std::vector<std::string>(names.begin(), names.begin() + k));
    std::vector<Transition> ts;
    for (int q = 0; q < n; ++q)
        for (Letter x = 0; x < k; ++x) {
            std::uint64_t pattern = rand_below(rng, 4);
            int fan = pattern == 0 ? 0 : (pattern == 3 ? 2 : 1);
            for (int i = 0; i < fan; ++i)
                ts.push_back({q, x, static_cast<State>(rand_below(rng, static_cast<std::uint64_t>(n))),
                              rand_below(rng, 4) == 0});
        }
    return Automaton(sigma, n, 0, ts, p.acceptance, "rnd-" + std::to_string(seed));
}

/// A named instance with its machine-checkable expectations.
struct GalleryEntry {
    std::string name;
    int parameter = 0;
    Automaton automaton;
    std::optional<Automaton> monitor;
    bool expect_hd = false;
    bool expect_linear = false;
    std::string notes;
};

inline std::vector<GalleryEntry> gallery() {
    std::vector<GalleryEntry> es;
    es.push_back({"fig2", 0, fig2(), fig2_monitor(), false, true,
                  "linear, not history-deterministic; its language has no linear "
                  "history-deterministic automaton"});
    for (int n = 1; n <= 3; ++n)
        es.push_back({"fig3-" + std::to_string(n), n, fig3(n), fin_a_monitor(), false, true,
                      "finitely many a's; simulates every included Buchi automaton "
                      "with up to " + std::to_string(2 * n) + " states"});
    return es;
}

inline GalleryEntry gallery_entry(const std::string& name) {
    for (GalleryEntry& e : gallery())
        if (e.name == name) return e;
    throw input_error("gallery_entry: unknown name " + name);
}

/// Re-derives an entry's expected facts: the HD verdict (cross-checked
/// against the monitor's letter game when a monitor is present), linearity,
/// and monitor agreement with the automaton on sampled lassos.
inline bool verify_gallery_entry(const GalleryEntry& e) {
    try {
        bool hd = e.monitor ? is_history_deterministic(e.automaton, *e.monitor)
                            : is_history_deterministic(e.automaton);
        if (hd != e.expect_hd) return false;
    } catch (const inconsistency_error&) {
        return false;
    }
    if (is_linear(e.automaton) != e.expect_linear) return false;
    if (e.monitor) {
        for (const Lasso& l : sample_lassos(e.automaton.alphabet(), 1000, 6, 4, 20260816))
            if (lasso_membership(e.automaton, l) != lasso_membership(*e.monitor, l))
                return false;
    }
    return true;
}

} // namespace hdg

#endif // HDG_GALLERY_HPP
