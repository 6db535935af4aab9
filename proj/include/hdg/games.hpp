// Token and letter games between automata, encoded as 3-priority max-even
// parity arenas.
//
// All games are round based. A round makes one letter happen on every side:
//   simulation:  Adam takes (letter, transition) in A, Eve answers in B;
//   letter game: Adam declares a letter (the monitor steps), Eve answers;
//   one-token:   Adam declares, Eve moves in A', Adam moves in A;
//   two-token:   Adam declares, Eve moves, then both Adam tokens move.
// Eve wins an infinite play iff her run is accepting or the opposing run(s)
// are rejecting. The encoding puts a priority on every round-start node
// summarizing the marks of the round just finished; mid-round nodes carry 0,
// which never dominates because round starts recur in every infinite play.
//
// Safety and Reachability runs are tracked by one monotone flag per side (a
// mark was taken); after the flags stabilize, a side is a constant, so the
// priority table below only has to be right on play suffixes. Buchi/coBuchi
// sides are judged by the recurrence of their marks directly. The one Rabin-
// style cell (coBuchi vs Buchi) and the coBuchi two-token conjunction are
// degeneralized with a round-robin bit carried in the node key.
//
// Finite plays end in explicit terminals. A maximal finite run is rejecting
// in every mode except Reachability-after-mark, so a stuck player does not
// simply lose: the terminal winner is computed from the flags and from
// whether the surviving side can still produce an accepting run.

#ifndef HDG_GAMES_HPP
#define HDG_GAMES_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "arena.hpp"
#include "automaton.hpp"
#include "errors.hpp"
#include "solver.hpp"

namespace hdg {

enum class GameKind { Simulation, LetterGame, OneToken, TwoToken };

/// Structured payload behind an arena node; what the label prints, machine
/// readable. qA holds the opposing state (monitor state, first token); q2 is
/// the second token (-1 = retired, -2 = absent). round_g / round_b are the
/// mark events already seen in the current, unfinished round.
struct GameNode {
    int phase = 0;
    State qE = -1;
    State qA = -1;
    State q2 = -2;
    Letter letter = -1;
    bool flagE = false;
    bool flagA = false;
    int rr = 0;
    int prio = 0;
    bool round_g = false;
    bool round_b = false;
};

/// Mark events on an arena edge: g = the Eve-side run took a marked
/// transition with this move, b = an opposing run did.
struct EdgeMarks {
    bool g = false;
    bool b = false;
};

struct BuiltGame {
    GameKind kind = GameKind::Simulation;
    Acceptance mode_e = Acceptance::Buchi;
    Acceptance mode_a = Acceptance::Buchi;
    Arena arena;
    std::vector<GameNode> nodes; ///< parallel to arena nodes
    std::vector<EdgeMarks> marks; ///< parallel to arena edges
};

/// Letter-game input: a deterministic monitor believed language-equal to the
/// subject. The monitor is totalized internally; determinism is checked.
struct MonitorPair {
    Automaton subject;
    Automaton monitor;
};

namespace detail {

/// What a side contributes to the winning condition once its flag is fixed.
enum class Eff { ConstTrue, ConstFalse, Buchi, CoBuchi };

inline Eff eff(Acceptance m, bool flag) {
    switch (m) {
        case Acceptance::Safety: return flag ? Eff::ConstFalse : Eff::ConstTrue;
        case Acceptance::Reachability: return flag ? Eff::ConstTrue : Eff::ConstFalse;
        case Acceptance::Buchi: return Eff::Buchi;
        case Acceptance::CoBuchi: return Eff::CoBuchi;
    }
    return Eff::ConstFalse;
}

inline bool tracks_flag(Acceptance m) {
    return m == Acceptance::Safety || m == Acceptance::Reachability;
}

/// Whether a finite maximal run with this flag is accepting.
inline bool accepts_finite(Acceptance m, bool flag) {
    return m == Acceptance::Reachability && flag;
}

/// Priority for "Eve-side accepts or opposing side rejects", given the
/// effective sides and the mark events (g Eve, b opponent) of the finished
/// round. `emit` is the degeneralization pulse for the coBuchi/Buchi cell.
/// Max-even semantics; only the suffix after flag stabilization matters.
inline int round_priority(Eff e, Eff a, bool g, bool b, bool emit) {
    if (e == Eff::ConstTrue || a == Eff::ConstFalse) return 0;
    if (e == Eff::ConstFalse) {
        if (a == Eff::ConstTrue) return 1;
        if (a == Eff::Buchi) return b ? 1 : 0;   // Eve needs: finitely many b
        return b ? 2 : 1;                        // coBuchi: Eve needs b i.o.
    }
    if (e == Eff::Buchi) {
        if (a == Eff::ConstTrue) return g ? 2 : 1;
        if (a == Eff::Buchi) return g ? 2 : (b ? 1 : 0); // b i.o. implies g i.o.
        return (g || b) ? 2 : 1;                 // Eve needs: g i.o. or b i.o.
    }
    // e == CoBuchi
    if (a == Eff::ConstTrue) return g ? 1 : 0;   // Eve needs: finitely many g
    if (a == Eff::Buchi) return emit ? 1 : 0;    // Adam needs g i.o. AND b i.o.
    return b ? 2 : (g ? 1 : 0);                  // g i.o. implies b i.o.
}

struct RoundSummary {
    bool flagE = false;
    bool flagA = false;
    int rr = 0;
    int prio = 0;
};

/// Folds one finished round into the side flags, the round-robin bit and the
/// priority of the next round start. g_first says whether Eve's move came
/// before the opposing move inside th e round; the coBuchi/Buchi cycle
/// detector (await g, then await b, pulse on completion) consumes the two
/// events in their temporal order.
inline RoundSummary close_round(Acceptance mE, Acceptance mA, bool fE, bool fA, int rr,
                                bool g, bool b, bool g_first) {
    RoundSummary s;
    s.flagE = fE || (g && tracks_flag(mE));
    s.flagA = fA || (b && tracks_flag(mA));
    s.rr = rr;
    bool emit = false;
    if (mE == Acceptance::CoBuchi && mA == Acceptance::Buchi) {
        auto on_g = [&] { if (s.rr == 0 && g) s.rr = 1; };
        auto on_b = [&] {
            if (s.rr == 1 && b) {
                emit = true;
                s.rr = 0;
            }
        };
        if (g_first) {
            on_g();
            on_b();
        } else {
            on_b();
            on_g();
        }
    }
    s.prio = round_priority(eff(mE, s.flagE), eff(mA, s.flagA), g, b, emit);
    return s;
}

/// Node interning shared by the builders: a node is identified by a packed
/// 6-int key, created on first sight.
struct GameFactory {
    BuiltGame g;
    std::map<std::array<int32_t, 6>, int> index;
    std::vector<int> worklist;

    /// Returns the node id for key, creating it via make() (which must add
    /// exactly one arena node and its GameNode payload) on first sight.
    template <class Make>
    int intern(const std::array<int32_t, 6>& key, Make&& make) {
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = make();
        index.emplace(key, id);
        if (!g.arena.node(id).terminal) worklist.push_back(id);
        return id;
    }

    int add_node(Player owner, int priority, GameNode info, std::string label) {
        int id = g.arena.add_node(owner, priority, std::move(label));
        g.nodes.push_back(info);
        return id;
    }

    int add_terminal(Player owner, Player winner, GameNode info, std::string label) {
        int id = g.arena.add_terminal(owner, winner, std::move(label));
        g.nodes.push_back(info);
        return id;
    }

    void add_edge(int src, int dst, EdgeMarks m) {
        g.arena.add_edge(src, dst);
        g.marks.push_back(m);
    }
};

inline int pack_aux(bool fE, bool fA, int rr, int prio) {
    return (fE ? 1 : 0) | (fA ? 2 : 0) | (rr << 2) | (prio << 4);
}

inline std::string flag_text(const GameNode& n) {
    std::string s;
    if (n.flagE) s += " fE";
    if (n.flagA) s += " fA";
    if (n.rr) s += " rr" + std::to_string(n.rr);
    s += " p" + std::to_string(n.prio);
    return s;
}

} // namespace detail

/// Simulation game Sim(b, a): Adam builds a run of a (letter and transition
/// in one move), Eve answers with a b-transition on the same letter. Eve wins
/// iff her run accepts or Adam's rejects.
inline BuiltGame build_sim_game(const Automaton& b, const Automaton& a) {
    if (!(b.alphabet() == a.alphabet()))
        throw input_error("build_sim_game: alphabets differ");
    detail::GameFactory f;
    f.g.kind = GameKind::Simulation;
    f.g.mode_e = b.acceptance();
    f.g.mode_a = a.acceptance();
    const auto contA0 = accepting_continuation_states(a, false);
    const auto contA1 = accepting_continuation_states(a, true);

    // round start, Adam to pick (letter, transition) of a
    auto intern_s0 = [&](State qE, State qA, bool fE, bool fA, int rr, int prio) {
        std::array<int32_t, 6> key{0, qE, qA, 0, 0, detail::pack_aux(fE, fA, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 0;
            n.qE = qE;
            n.qA = qA;
            n.flagE = fE;
            n.flagA = fA;
            n.rr = rr;
            n.prio = prio;
            std::string label =
                b.state_name(qE) + " | " + a.state_name(qA) + detail::flag_text(n);
            if (a.out(qA).empty()) {
                // Adam cannot extend his run: both runs end here.
                bool eve = detail::accepts_finite(f.g.mode_e, fE) ||
                           !detail::accepts_finite(f.g.mode_a, fA);
                return f.add_terminal(Player::Adam, eve ? Player::Eve : Player::Adam, n,
                                      label + " (adam stuck)");
            }
            return f.add_node(Player::Adam, prio, n, label);
        });
    };
    // Adam has moved; Eve to answer the letter
    auto intern_s1 = [&](State qE, State qA2, Letter x, bool markB, bool fE, bool fA, int rr,
                         int prio) {
        std::array<int32_t, 6> key{1, qE, qA2, x, markB,
                                   detail::pack_aux(fE, fA, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 1;
            n.qE = qE;
            n.qA = qA2;
            n.letter = x;
            n.flagE = fE;
            n.flagA = fA;
            n.rr = rr;
            n.prio = prio;
            n.round_b = markB;
            std::string label = b.state_name(qE) + " | " + a.state_name(qA2) + " ?" +
                                b.alphabet().name(x) + detail::flag_text(n);
            if (b.out_on(qE, x).empty()) {
                // Adam's run already went through his move, so he wins iff it
                // can still be completed to an accepting one.
                bool fA2 = fA || (markB && detail::tracks_flag(f.g.mode_a));
                bool adam = !detail::accepts_finite(f.g.mode_e, fE) &&
                            (fA2 ? contA1 : contA0)[static_cast<size_t>(qA2)];
                return f.add_terminal(Player::Eve, adam ? Player::Adam : Player::Eve, n,
                                      label + " (eve stuck)");
            }
            return f.add_node(Player::Eve, 0, n, label);
        });
    };

    int init = intern_s0(b.initial(), a.initial(), false, false, 0, 0);
    f.g.arena.set_initial(init);
    while (!f.worklist.empty()) {
        int v = f.worklist.back();
        f.worklist.pop_back();
        GameNode n = f.g.nodes[static_cast<size_t>(v)];
        if (n.phase == 0) {
            for (int ti : a.out(n.qA)) {
                const Transition& t = a.transitions()[static_cast<size_t>(ti)];
                int d = intern_s1(n.qE, t.dst, t.letter, t.mark, n.flagE, n.flagA, n.rr,
                                  n.prio);
                f.add_edge(v, d, {false, t.mark});
            }
        } else {
            for (int ti : b.out_on(n.qE, n.letter)) {
                const Transition& t = b.transitions()[static_cast<size_t>(ti)];
                detail::RoundSummary s =
                    detail::close_round(f.g.mode_e, f.g.mode_a, n.flagE, n.flagA, n.rr,
                                        t.mark, n.round_b, /*g_first=*/false);
                int d = intern_s0(t.dst, n.qA, s.flagE, s.flagA, s.rr, s.prio);
                f.add_edge(v, d, {t.mark, false});
            }
        }
    }
    f.g.arena.validate();
    return std::move(f.g);
}

/// One-token game G1(aPrime, a): Adam declares a letter, Eve moves in aPrime,
/// Adam moves in a. Eve wins iff her run accepts or Adam's rejects.
inline BuiltGame build_g1_two(const Automaton& aPrime, const Automaton& a) {
    if (!(aPrime.alphabet() == a.alphabet()))
        throw input_error("build_g1_two: alphabets differ");
    detail::GameFactory f;
    f.g.kind = GameKind::OneToken;
    f.g.mode_e = aPrime.acceptance();
    f.g.mode_a = a.acceptance();
    const auto contA0 = accepting_continuation_states(a, false);
    const auto contA1 = accepting_continuation_states(a, true);
    const int sigma = a.alphabet().size();

    // round start: Adam declares any letter, so he is never stuck here
    auto intern_t0 = [&](State qE, State qA, bool fE, bool fA, int rr, int prio) {
        std::array<int32_t, 6> key{0, qE, qA, 0, 0, detail::pack_aux(fE, fA, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 0;
            n.qE = qE;
            n.qA = qA;
            n.flagE = fE;
            n.flagA = fA;
            n.rr = rr;
            n.prio = prio;
            return f.add_node(Player::Adam, prio,  n,
                              aPrime.state_name(qE) + " | " + a.state_name(qA) +
                                  detail::flag_text(n));
        });
    };
    // letter declared; Eve to move in aPrime
    auto intern_t1 = [&](State qE, State qA, Letter x, bool fE, bool fA, int rr, int prio) {
        std::array<int32_t, 6> key{1, qE, qA, x, 0, detail::pack_aux(fE, fA, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 1;
            n.qE = qE;
            n.qA = qA;
            n.letter = x;
            n.flagE = fE;
            n.flagA = fA;
            n.rr = rr;
            n.prio = prio;
            std::string label = aPrime.state_name(qE) + " | " + a.state_name(qA) + " ?" +
                                a.alphabet().name(x) + detail::flag_text(n);
            if (aPrime.out_on(qE, x).empty()) {
                // Adam keeps the declared letter: he wins iff his own token
                // can still realize an accepting run through it.
                bool adam = !detail::accepts_finite(f.g.mode_e, fE) &&
                            can_accept_committed(a, qA, fA, x, contA0, contA1);
                return f.add_terminal(Player::Eve, adam ? Player::Adam : Player::Eve, n,
                                      label + " (eve stuck)");
            }
            return f.add_node(Player::Eve, 0, n, label);
        });
    };
    // Eve has moved; Adam owes a transition on the letter
    auto intern_t2 = [&](State qE2, State qA, Letter x, bool markG, bool fE, bool fA,
                         int rr, int prio) {
        std::array<int32_t, 6> key{2, qE2, qA, x, markG,
                                   detail::pack_aux(fE, fA, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 2;
            n.qE = qE2;
            n.qA = qA;
            n.letter = x;
            n.flagE = fE;
            n.flagA = fA;
            n.rr = rr;
            n.prio = prio;
            n.round_g = markG;
            std::string label = aPrime.state_name(qE2) + " | " + a.state_name(qA) + " !" +
                                a.alphabet().name(x) + detail::flag_text(n);
            if (a.out_on(qA, x).empty()) {
                bool fE2 = fE || (markG && detail::tracks_flag(f.g.mode_e));
                bool eve = detail::accepts_finite(f.g.mode_e, fE2) ||
                           !detail::accepts_finite(f.g.mode_a, fA);
                return f.add_terminal(Player::Adam, eve ? Player::Eve : Player::Adam, n,
                                      label + " (adam stuck)");
            }
            return f.add_node(Player::Adam, 0, n, label);
        });
    };

    int init = intern_t0(aPrime.initial(), a.initial(), false, false, 0, 0);
    f.g.arena.set_initial(init);
    while (!f.worklist.empty()) {
        int v = f.worklist.back();
        f.worklist.pop_back();
        GameNode n = f.g.nodes[static_cast<size_t>(v)];
        if (n.phase == 0) {
            for (Letter x = 0; x < sigma; ++x) {
                int d = intern_t1(n.qE, n.qA, x, n.flagE, n.flagA, n.rr, n.prio);
                f.add_edge(v, d, {});
            }
        } else if (n.phase == 1) {
            for (int ti : aPrime.out_on(n.qE, n.letter)) {
                const Transition& t = aPrime.transitions()[static_cast<size_t>(ti)];
                int d = intern_t2(t.dst, n.qA, n.letter, t.mark, n.flagE, n.flagA, n.rr,
                                  n.prio);
                f.add_edge(v, d, {t.mark, false});
            }
        } else {
            for (int ti : a.out_on(n.qA, n.letter)) {
                const Transition& t = a.transitions()[static_cast<size_t>(ti)];
                detail::RoundSummary s =
                    detail::close_round(f.g.mode_e, f.g.mode_a, n.flagE, n.flagA, n.rr,
                                        n.round_g, t.mark, /*g_first=*/true);
                int d = intern_t0(n.qE, t.dst, s.flagE, s.flagA, s.rr, s.prio);
                f.add_edge(v, d, {false, t.mark});
            }
        }
    }
    f.g.arena.validate();
    return std::move(f.g);
}

/// Letter game on mp.subject with mp.monitor deciding language membership:
/// Adam declares letters (the monitor tracks them deterministically), Eve
/// builds a run of the subject. Eve wins iff her run accepts or the word is
/// not in the language (the monitor run rejects).
inline BuiltGame build_letter_game(const MonitorPair& mp) {
    const Automaton& b = mp.subject;
    if (!(b.alphabet() == mp.monitor.alphabet()))
        throw input_error("build_letter_game: alphabets differ");
    if (!mp.monitor.is_deterministic())
        throw input_error("build_letter_game: monitor must be deterministic");
    const Automaton m = totalize(mp.monitor);
    detail::GameFactory f;
    f.g.kind = GameKind::LetterGame;
    f.g.mode_e = b.acceptance();
    f.g.mode_a = m.acceptance();
    const auto contM0 = accepting_continuation_states(m, false);
    const auto contM1 = accepting_continuation_states(m, true);
    const int sigma = b.alphabet().size();

    auto intern_l0 = [&](State qE, State qM, bool fE, bool fM, int rr, int prio) {
        std::array<int32_t, 6> key{0, qE, qM, 0, 0, detail::pack_aux(fE, fM, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 0;
            n.qE = qE;
            n.qA = qM;
            n.flagE = fE;
            n.flagA = fM;
            n.rr = rr;
            n.prio = prio;
            return f.add_node(Player::Adam, prio, n,
                              b.state_name(qE) + " | " + m.state_name(qM) +
                                  detail::flag_text(n));
        });
    };
    auto intern_l1 = [&](State qE, State qM2, Letter x, bool markB, bool fE, bool fM,
                         int rr, int prio) {
        std::array<int32_t, 6> key{1, qE, qM2, x, markB,
                                   detail::pack_aux(fE, fM, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 1;
            n.qE = qE;
            n.qA = qM2;
            n.letter = x;
            n.flagE = fE;
            n.flagA = fM;
            n.rr = rr;
            n.prio = prio;
            n.round_b = markB;
            std::string label = b.state_name(qE) + " | " + m.state_name(qM2) + " ?" +
                                b.alphabet().name(x) + detail::flag_text(n);
            if (b.out_on(qE, x).empty()) {
                // Eve is only obliged while the word can still be in the
                // language; the monitor answers that exactly.
                bool fM2 = fM || (markB && detail::tracks_flag(f.g.mode_a));
                bool adam = !detail::accepts_finite(f.g.mode_e, fE) &&
                            (fM2 ? contM1 : contM0)[static_cast<size_t>(qM2)];
                return f.add_terminal(Player::Eve, adam ? Player::Adam : Player::Eve, n,
                                      label + " (eve stuck)");
            }
            return f.add_node(Player::Eve, 0, n, label);
        });
    };

    int init = intern_l0(b.initial(), m.initial(), false, false, 0, 0);
    f.g.arena.set_initial(init);
    while (!f.worklist.empty()) {
        int v = f.worklist.back();
        f.worklist.pop_back();
        GameNode n = f.g.nodes[static_cast<size_t>(v)];
        if (n.phase == 0) {
            for (Letter x = 0; x < sigma; ++x) {
                int ti = m.out_on(n.qA, x).at(0); // deterministic and complete
                const Transition& t = m.transitions()[static_cast<size_t>(ti)];
                int d = intern_l1(n.qE, t.dst, x, t.mark, n.flagE, n.flagA, n.rr, n.prio);
                f.add_edge(v, d, {false, t.mark});
            }
        } else {
            for (int ti : b.out_on(n.qE, n.letter)) {
                const Transition& t = b.transitions()[static_cast<size_t>(ti)];
                detail::RoundSummary s =
                    detail::close_round(f.g.mode_e, f.g.mode_a, n.flagE, n.flagA, n.rr,
                                        t.mark, n.round_b, /*g_first=*/false);
                int d = intern_l0(t.dst, n.qA, s.flagE, s.flagA, s.rr, s.prio);
                f.add_edge(v, d, {t.mark, false});
            }
        }
    }
    f.g.arena.validate();
    return std::move(f.g);
}

/// Two-token game on a Buchi or coBuchi automaton: Adam declares a letter,
/// Eve moves her token, then Adam moves both of his. A token with no
/// transition on the letter retires (its run is over, hence rejecting); if
/// both retire the play ends and Eve wins. Eve wins an infinite play iff her
/// run accepts or both token runs reject.
///
/// For coBuchi the conjunction "both tokens mark infinitely often" is
/// degeneralized with an await-set over the alive tokens: priority 2 fires
/// each time every awaited token has marked; a retired token leaves the set.
inline BuiltGame build_g2(const Automaton& a) {
    if (a.acceptance() != Acceptance::Buchi && a.acceptance() != Acceptance::CoBuchi)
        throw unsupported_error(
            "build_g2: two-token play only decides Buchi/coBuchi here; for safety or "
            "reachability use build_g1_two(a, a)");
    const bool cobuchi = a.acceptance() == Acceptance::CoBuchi;
    detail::GameFactory f;
    f.g.kind = GameKind::TwoToken;
    f.g.mode_e = a.acceptance();
    f.g.mode_a = a.acceptance();
    const auto cont = accepting_continuation_states(a, false);
    const int sigma = a.alphabet().size();

    auto token_name = [&](State q) { return q < 0 ? std::string("-") : a.state_name(q); };
    auto label_of = [&](const GameNode& n, const std::string& extra) {
        return a.state_name(n.qE) + " | " + token_name(n.qA) + "," + token_name(n.q2) +
               extra + detail::flag_text(n);
    };

    // round start (Adam declares); both tokens gone = no opposing run left
    auto intern_w0 = [&](State qE, State q1, State q2, int rr, int prio) {
        std::array<int32_t, 6> key{0, qE, q1, q2, 0, detail::pack_aux(false, false, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 0;
            n.qE = qE;
            n.qA = q1;
            n.q2 = q2;
            n.rr = rr;
            n.prio = prio;
            if (q1 < 0 && q2 < 0)
                return f.add_terminal(Player::Adam, Player::Eve, n,
                                      label_of(n, " (tokens dead)"));
            return f.add_node(Player::Adam, prio, n, label_of(n, ""));
        });
    };
    auto intern_w1 = [&](State qE, State q1, State q2, Letter x, int rr, int prio) {
        std::array<int32_t, 6> key{1, qE, q1, q2, x, detail::pack_aux(false, false, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 1;
            n.qE = qE;
            n.qA = q1;
            n.q2 = q2;
            n.letter = x;
            n.rr = rr;
            n.prio = prio;
            std::string label = label_of(n, " ?" + a.alphabet().name(x));
            if (a.out_on(qE, x).empty()) {
                bool adam = (q1 >= 0 && can_accept_committed(a, q1, false, x, cont, cont)) ||
                            (q2 >= 0 && can_accept_committed(a, q2, false, x, cont, cont));
                return f.add_terminal(Player::Eve, adam ? Player::Adam : Player::Eve, n,
                                      label + " (eve stuck)");
            }
            return f.add_node(Player::Eve, 0, n, label);
        });
    };
    // Eve moved (round_g pending); first token to move
    auto intern_w2 = [&](State qE2, State q1, State q2, Letter x, bool g, int rr, int prio) {
        std::array<int32_t, 6> key{2, qE2, q1, q2, x,
                                   detail::pack_aux(g, false, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 2;
            n.qE = qE2;
            n.qA = q1;
            n.q2 = q2;
            n.letter = x;
            n.rr = rr;
            n.prio = prio;
            n.round_g = g;
            return f.add_node(Player::Adam, 0, n, label_of(n, " !" + a.alphabet().name(x)));
        });
    };
    // first token done (round_b pending = its mark); second token to move
    auto intern_w3 = [&](State qE2, State q1n, State q2, Letter x, bool g, bool b1, int rr,
                         int prio) {
        std::array<int32_t, 6> key{3, qE2, q1n, q2, x,
                                   detail::pack_aux(g, b1, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 3;
            n.qE = qE2;
            n.qA = q1n;
            n.q2 = q2;
            n.letter = x;
            n.rr = rr;
            n.prio = prio;
            n.round_g = g;
            n.round_b = b1;
            return f.add_node(Player::Adam, 0, n, label_of(n, " !!" + a.alphabet().name(x)));
        });
    };

    // await-set bookkeeping for one token event (move with mark, move without,
    // or retirement). Returns the updated mask; `emit` pulses on a drained
    // await-set caused by a mark.
    auto token_event = [&](int mask, int bit, bool marked, bool retired, int alive_mask,
                           bool& emit) {
        if (!cobuchi) return 0;
        if (marked || retired) mask &= ~bit;
        if (mask == 0) {
            if (marked) emit = true;
            mask = alive_mask;
        }
        return mask;
    };

    int rr0 = cobuchi ? 3 : 0;
    int init = intern_w0(a.initial(), a.initial(), a.initial(), rr0, 0);
    f.g.arena.set_initial(init);
    while (!f.worklist.empty()) {
        int v = f.worklist.back();
        f.worklist.pop_back();
        GameNode n = f.g.nodes[static_cast<size_t>(v)];
        if (n.phase == 0) {
            for (Letter x = 0; x < sigma; ++x)
                f.add_edge(v, intern_w1(n.qE, n.qA, n.q2, x, n.rr, n.prio), {});
        } else if (n.phase == 1) {
            for (int ti : a.out_on(n.qE, n.letter)) {
                const Transition& t = a.transitions()[static_cast<size_t>(ti)];
                int d = intern_w2(t.dst, n.qA, n.q2, n.letter, t.mark, n.rr, n.prio);
                f.add_edge(v, d, {t.mark, false});
            }
        } else if (n.phase == 2) {
            if (n.qA < 0 || a.out_on(n.qA, n.letter).empty()) {
                // retired already, or retires now: one silent step
                int d = intern_w3(n.qE, -1, n.q2, n.letter, n.round_g, false, n.rr, n.prio);
                f.add_edge(v, d, {});
            } else {
                for (int ti : a.out_on(n.qA, n.letter)) {
                    const Transition& t = a.transitions()[static_cast<size_t>(ti)];
                    int d = intern_w3(n.qE, t.dst, n.q2, n.letter, n.round_g, t.mark, n.rr,
                                      n.prio);
                    f.add_edge(v, d, {false, t.mark});
                }
            }
        } else {
            // resolve token 2, then close the round: events in order are
            // Eve's mark, token 1, token 2
            auto close = [&](State q2n, bool b2) {
                bool emit = false;
                State q1n = n.qA;
                int alive_after_1 = (q1n >= 0 ? 1 : 0) | (n.q2 >= 0 ? 2 : 0);
                int mask = token_event(n.rr, 1, n.round_b, q1n < 0, alive_after_1, emit);
                int alive_after_2 = (q1n >= 0 ? 1 : 0) | (q2n >= 0 ? 2 : 0);
                mask = token_event(mask, 2, b2, q2n < 0, alive_after_2, emit);
                int prio;
                if (cobuchi)
                    prio = emit ? 2 : (n.round_g ? 1 : 0);
                else
                    prio = n.round_g ? 2 : ((n.round_b || b2) ? 1 : 0);
                return intern_w0(n.qE, q1n, q2n, mask, prio);
            };
            if (n.q2 < 0 || a.out_on(n.q2, n.letter).empty()) {
                f.add_edge(v, close(-1, false), {});
            } else {
                for (int ti : a.out_on(n.q2, n.letter)) {
                    const Transition& t = a.transitions()[static_cast<size_t>(ti)];
                    f.add_edge(v, close(t.dst, t.mark), {false, t.mark});
                }
            }
        }
    }
    f.g.arena.validate();
    return std::move(f.g);
}

/// Solves the built game and reports whether Eve wins from the initial node.
inline bool eve_wins(const BuiltGame& g) {
    return solve_parity3(g.arena).winner_of(g.arena.initial()) == Player::Eve;
}

/// History-determinism decision. Safety/Reachability reduce exactly to the
/// one-token game on (a, a); Buchi/coBuchi use the two-token game (the
/// two-token characterization is an external theorem this library relies on).
inline bool is_history_deterministic(const Automaton& a) {
    switch (a.acceptance()) {
        case Acceptance::Safety:
        case Acceptance::Reachability: return eve_wins(build_g1_two(a, a));
        case Acceptance::Buchi:
        case Acceptance::CoBuchi: return eve_wins(build_g2(a));
    }
    throw unsupported_error("is_history_deterministic: unknown acceptance");
}

/// Same, but additionally decides the letter game against the supplied
/// monitor and cross-checks the two verdicts; a mismatch falsifies either the
/// monitor or this library and is surfaced as inconsistency_error.
inline bool is_history_deterministic(const Automaton& a, const Automaton& monitor) {
    bool token = is_history_deterministic(a);
    bool letter = eve_wins(build_letter_game({a, monitor}));
    if (token != letter)
        throw inconsistency_error(
            std::string("is_history_deterministic: token game says ") +
            (token ? "yes" : "no") + " but the letter game says " +
            (letter ? "yes" : "no"));
    return token;
}

/// Result of composing a simulation strategy with a one-token ("ghost")
/// strategy. `product` is the one-token game on (a, a) with Eve's moves
/// forced by the composed strategy (the two input strategies run in lockstep
/// as her memory); certified means Adam wins nowhere reachable in it, which
/// is the actual proof that the composition wins. g1_strategy is an
/// equivalent positional strategy read off a direct solve of the game, for
/// callers that want one without the memory.
struct CompositionCertificate {
    Arena product;
    std::vector<int> product_adam;
    bool certified = false;
    Strategy g1_strategy;
};

/// Builds an Eve strategy for the one-token game on (a, a) out of a winning
/// Eve strategy for Sim(a, aPrime) and a winning Eve strategy for the
/// one-token game on (aPrime, a): each round, the ghost strategy answers
/// Adam's letter inside aPrime, the simulation strategy translates that move
/// back into a, and Adam's real reply is fed to both memories. Inputs that do
/// not actually win their games are rejected (invalid_witness_error).
inline CompositionCertificate compose_sim_and_ghost(const BuiltGame& sim,
                                                    const Strategy& sim_strategy,
                                                    const BuiltGame& ghost,
                                                    const Strategy& ghost_strategy,
                                                    const BuiltGame& g1aa) {
    if (sim.kind != GameKind::Simulation || ghost.kind != GameKind::OneToken ||
        g1aa.kind != GameKind::OneToken)
        throw input_error("compose_sim_and_ghost: wrong game kinds");
    if (sim_strategy.owner != Player::Eve || ghost_strategy.owner != Player::Eve)
        throw input_error("compose_sim_and_ghost: strategies must belong to Eve");
    if (!residual_opponent_wins(sim.arena, sim_strategy).empty())
        throw invalid_witness_error(
            "compose_sim_and_ghost: simulation strategy does not win its game");
    if (!residual_opponent_wins(ghost.arena, ghost_strategy).empty())
        throw invalid_witness_error(
            "compose_sim_and_ghost: ghost strategy does not win its game");

    // memory = a node of the ghost game plus a node of the simulation game;
    // (-1, -1) marks memory that ran out (only on branches the condition
    // already decides for Eve — the residual solve below keeps this honest).
    struct Key {
        int t, bt, st;
        bool operator<(const Key& o) const {
            return std::tie(t, bt, st) < std::tie(o.t, o.bt, o.st);
        }
    };
    CompositionCertificate cert;
    std::map<Key, int> index;
    std::vector<Key> of;
    std::vector<int> work;
    auto intern = [&](Key k) {
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        const ArenaNode& n = g1aa.arena.node(k.t);
        int id = n.terminal ? cert.product.add_terminal(n.owner, n.winner, n.label)
                            : cert.product.add_node(n.owner, n.priority, n.label);
        index.emplace(k, id);
        of.push_back(k);
        if (!n.terminal) work.push_back(id);
        return id;
    };
    // the move behind an arena edge, as (destination state, mark) of the
    // moving side
    auto eve_move_of = [](const BuiltGame& g, int edge) {
        int d = g.arena.edge(edge).dst;
        return std::pair<State, bool>{g.nodes[static_cast<size_t>(d)].qE,
                                      g.marks[static_cast<size_t>(edge)].g};
    };
    auto match_edge = [](const BuiltGame& g, int src, auto&& pred) {
        for (int e : g.arena.out(src))
            if (pred(e, g.arena.edge(e).dst)) return e;
        return -1;
    };

    int init = intern({g1aa.arena.initial(), ghost.arena.initial(), sim.arena.initial()});
    cert.product.set_initial(init);
    while (!work.empty()) {
        int v = work.back();
        work.pop_back();
        Key k = of[static_cast<size_t>(v)];
        const GameNode& tn = g1aa.nodes[static_cast<size_t>(k.t)];
        bool dead = k.bt < 0;
        if (tn.phase == 0) {
            // Adam declares: the ghost game sees the same letter
            for (int e : g1aa.arena.out(k.t)) {
                int t1 = g1aa.arena.edge(e).dst;
                Letter x = g1aa.nodes[static_cast<size_t>(t1)].letter;
                int bt1 = -1;
                if (!dead) {
                    bt1 = match_edge(ghost, k.bt, [&](int, int d) {
                        return ghost.nodes[static_cast<size_t>(d)].letter == x;
                    });
                    if (bt1 < 0)
                        throw input_error("compose_sim_and_ghost: arenas do not fit");
                    bt1 = ghost.arena.edge(bt1).dst;
                }
                cert.product.add_edge(v, intern({t1, bt1, dead ? -1 : k.st}));
            }
        } else if (tn.phase == 1) {
            // Eve's turn: ghost answers in aPrime, the simulation strategy
            // translates; if either memory is out, fall back to the first
            // available move
            int chosen = g1aa.arena.out(k.t).at(0);
            int bt2 = -1, st2 = -1;
            int be = (!dead && !ghost.arena.node(k.bt).terminal) ? ghost_strategy.at(k.bt)
                                                                 : -1;
            if (be >= 0) {
                bt2 = ghost.arena.edge(be).dst;
                auto [qB2, markB] = eve_move_of(ghost, be);
                int se = match_edge(sim, k.st, [&](int e2, int d) {
                    const GameNode& sn = sim.nodes[static_cast<size_t>(d)];
                    return sn.letter == tn.letter && sn.qA == qB2 &&
                           sim.marks[static_cast<size_t>(e2)].b == markB;
                });
                if (se < 0)
                    throw input_error("compose_sim_and_ghost: arenas do not fit");
                int s1 = sim.arena.edge(se).dst;
                int see = !sim.arena.node(s1).terminal ? sim_strategy.at(s1) : -1;
                if (see >= 0) {
                    st2 = sim.arena.edge(see).dst;
                    auto [qE2, markG] = eve_move_of(sim, see);
                    int te = match_edge(g1aa, k.t, [&](int e2, int d) {
                        return g1aa.nodes[static_cast<size_t>(d)].qE == qE2 &&
                               g1aa.marks[static_cast<size_t>(e2)].g == markG;
                    });
                    if (te < 0)
                        throw input_error("compose_sim_and_ghost: arenas do not fit");
                    chosen = te;
                }
            }
            // a -1 anywhere above means the memory ran out (a side play
            // ended); from here Eve just keeps the token alive
            bool still = bt2 >= 0 && st2 >= 0;
            cert.product.add_edge(
                v, intern({g1aa.arena.edge(chosen).dst, still ? bt2 : -1, still ? st2 : -1}));
        } else {
            // Adam's real move feeds the ghost game; the simulation side
            // already finished its round
            for (int e : g1aa.arena.out(k.t)) {
                int t0 = g1aa.arena.edge(e).dst;
                State qA2 = g1aa.nodes[static_cast<size_t>(t0)].qA;
                bool markA = g1aa.marks[static_cast<size_t>(e)].b;
                int bt0 = -1;
                if (!dead) {
                    int be = match_edge(ghost, k.bt, [&](int e2, int d) {
                        return ghost.nodes[static_cast<size_t>(d)].qA == qA2 &&
                               ghost.marks[static_cast<size_t>(e2)].b == markA;
                    });
                    if (be < 0)
                        throw input_error("compose_sim_and_ghost: arenas do not fit");
                    bt0 = ghost.arena.edge(be).dst;
                }
                cert.product.add_edge(v, intern({t0, bt0, dead ? -1 : k.st}));
            }
        }
    }
    cert.product.validate();
    GameResult pr = solve_parity3(cert.product);
    for (int i = 0; i < cert.product.num_nodes(); ++i)
        if (pr.winner_of(i) == Player::Adam) cert.product_adam.push_back(i);
    cert.certified = cert.product_adam.empty();
    cert.g1_strategy = solve_parity3(g1aa.arena).strategy(Player::Eve);
    return cert;
}

} // namespace hdg

#endif // HDG_GAMES_HPP
