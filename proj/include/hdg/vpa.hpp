// Visibly pushdown automata over infinite words: the alphabet is partitioned
// into push, pop and noop letters, and each transition's stack effect is
// forced by its letter's class. The ghost construction shadows the simulated
// automaton one letter behind while operating on the stack at full rhythm;
// the gap is bridged by a "semantic stack" = the actual stack plus one letter
// stored in the state, with two bottom symbols so a pop letter can still be
// read when the semantic stack holds a single symbol. Pop letters cannot stay
// behind (the forced pop would eat a symbol the shadow still needs), so a pop
// move folds the owed transition and the pop transition into one step and the
// next move re-materializes the stored letter without consuming anything.

#ifndef HDG_VPA_HPP
#define HDG_VPA_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "automaton.hpp"
#include "errors.hpp"
#include "games.hpp"

namespace hdg {

enum class LetterClass { Push, Pop, Noop };

/// top is the observed top of stack (-1 = the empty-stack bottom); push_sym
/// is the pushed symbol for push letters and -1 otherwise.
struct VpaTransition {
    State src = -1;
    int top = -1;
    Letter letter = -1;
    int push_sym = -1;
    State dst = -1;
    bool mark = false;
};

struct Vpa {
    Alphabet alphabet;
    std::vector<LetterClass> letter_class;
    int num_states = 0;
    State initial = 0;
    std::vector<std::string> stack_names;
    std::vector<VpaTransition> transitions;
    Acceptance acceptance = Acceptance::Buchi;
    std::string name;
    std::vector<std::string> state_names;
};

inline std::string vpa_state_name(const Vpa& v, State q) {
    return v.state_names.empty() ? "q" + std::to_string(q)
                                 : v.state_names[static_cast<size_t>(q)];
}

inline void validate_vpa(const Vpa& v) {
    if (v.num_states <= 0) throw input_error("vpa: needs at least one state");
    if (v.initial < 0 || v.initial >= v.num_states)
        throw input_error("vpa: initial state out of range");
    if (static_cast<int>(v.letter_class.size()) != v.alphabet.size())
        throw input_error("vpa: letter classes must cover the alphabet");
    if (v.stack_names.empty()) throw input_error("vpa: empty stack alphabet");
    for (size_t i = 0; i < v.stack_names.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (v.stack_names[i] == v.stack_names[j])
                throw input_error("vpa: duplicate stack symbol '" + v.stack_names[i] + "'");
    if (!v.state_names.empty() &&
        v.state_names.size() != static_cast<size_t>(v.num_states))
        throw input_error("vpa: state name list size mismatch");
    const int m = static_cast<int>(v.stack_names.size());
    for (const VpaTransition& t : v.transitions) {
        if (t.src < 0 || t.src >= v.num_states || t.dst < 0 || t.dst >= v.num_states)
            throw input_error("vpa: transition endpoint out of range");
        if (t.letter < 0 || t.letter >= v.alphabet.size())
            throw input_error("vpa: transition letter out of range");
        if (t.top < -1 || t.top >= m) throw input_error("vpa: transition top out of range");
        switch (v.letter_class[static_cast<size_t>(t.letter)]) {
            case LetterClass::Push:
                if (t.push_sym < 0 || t.push_sym >= m)
                    throw input_error("vpa: push transition needs a pushed symbol");
                break;
            case LetterClass::Pop:
                if (t.top < 0)
                    throw input_error("vpa: no pop from an empty stack");
                if (t.push_sym != -1)
                    throw input_error("vpa: pop transition must not push");
                break;
            case LetterClass::Noop:
                if (t.push_sym != -1)
                    throw input_error("vpa: noop transition must not push");
                break;
        }
    }
}

/// A configuration: control state plus the stack above the implicit bottom.
struct VpaConfig {
    State q = 0;
    std::vector<int> stack;

    bool operator==(const VpaConfig& o) const { return q == o.q && stack == o.stack; }
    bool operator<(const VpaConfig& o) const {
        return q != o.q ? q < o.q : stack < o.stack;
    }
};

/// All moves from a configuration on one letter, as (transition index, next
/// configuration). Pop letters at an empty stack have no moves: the
/// automaton, not the input format, rejects such words.
inline std::vector<std::pair<int, VpaConfig>> vpa_moves(const Vpa& v, const VpaConfig& c,
                                                        Letter x) {
    const int top = c.stack.empty() ? -1 : c.stack.back();
    std::vector<std::pair<int, VpaConfig>> out;
    for (size_t i = 0; i < v.transitions.size(); ++i) {
        const VpaTransition& t = v.transitions[i];
        if (t.src != c.q || t.letter != x || t.top != top) continue;
        VpaConfig n{t.dst, c.stack};
        switch (v.letter_class[static_cast<size_t>(x)]) {
            case LetterClass::Push: n.stack.push_back(t.push_sym); break;
            case LetterClass::Pop: n.stack.pop_back(); break;
            case LetterClass::Noop: break;
        }
        out.emplace_back(static_cast<int>(i), std::move(n));
    }
    return out;
}

/// The ghost: states (q, last letter or none, stored top-of-semantic-stack).
/// The x component ranges over the stack symbols plus two specials, "none"
/// (the semantic stack equals the actual one) and the second bottom.
/// source_of maps each ghost transition to the owed source transition it
/// discharges and source2_of to the pop transition folded into the same move;
/// either is -1 when that half is absent (dummy start moves, re-materializing
/// moves after a pop).
struct GhostVpa {
    Vpa vpa;
    std::vector<State> state_q;
    std::vector<Letter> state_sigma; // -1 before the first letter
    std::vector<int> state_x;        // 0..m-1 symbols, m = none, m+1 = second bottom
    std::vector<int> source_of;
    std::vector<int> source2_of;

    State state_id(State q, int sigma_code, int x_code) const {
        const int sig = vpa.alphabet.size() + 1;
        const int xs = static_cast<int>(vpa.stack_names.size()) + 1; // symbols + 2 specials
        return (q * sig + sigma_code) * xs + x_code;
    }
};

/// Shadows the source one letter behind while keeping stack rhythm. After a
/// push or noop letter the ghost still owes that letter's transition and the
/// stored letter is the semantic top; a pop letter discharges the owed
/// transition and the pop transition together (the forced pop leaves no room
/// to stay behind), after which the ghost owes nothing and the next move only
/// re-materializes the stored letter. Ghost moves inherit the marks of every
/// source transition they discharge; start and re-materializing moves are
/// unmarked.
inline GhostVpa vpa_ghost(const Vpa& v) {
    validate_vpa(v);
    const int k = v.alphabet.size();
    const int m = static_cast<int>(v.stack_names.size());
    const int sig = k + 1;  // last letter, or none (code k)
    const int xs = m + 2;   // stored symbol, none (code m), second bottom (code m+1)
    const int bot2 = m;     // the second bottom as a pushed stack symbol

    GhostVpa g;
    g.vpa.alphabet = v.alphabet;
    g.vpa.letter_class = v.letter_class;
    g.vpa.num_states = v.num_states * sig * xs;
    g.vpa.stack_names = v.stack_names;
    g.vpa.stack_names.push_back("bot'");
    g.vpa.acceptance = v.acceptance;
    g.vpa.name = v.name.empty() ? "ghost" : v.name + "-ghost";
    auto id = [&](State q, int sc, int xc) { return (q * sig + sc) * xs + xc; };
    g.vpa.initial = id(v.initial, k, m + 1);
    for (State q = 0; q < v.num_states; ++q)
        for (int sc = 0; sc < sig; ++sc)
            for (int xc = 0; xc < xs; ++xc) {
                g.state_q.push_back(q);
                g.state_sigma.push_back(sc == k ? -1 : sc);
                g.state_x.push_back(xc);
                std::string x_name = xc < m ? v.stack_names[static_cast<size_t>(xc)]
                                            : (xc == m ? "~" : "bot'");
                g.vpa.state_names.push_back(vpa_state_name(v, q) + ";" +
                                            (sc == k ? "~" : v.alphabet.name(sc)) + ";" +
                                            x_name);
            }

    std::vector<Letter> pushes, pops, noops;
    for (Letter x = 0; x < k; ++x) switch (v.letter_class[static_cast<size_t>(x)]) {
            case LetterClass::Push: pushes.push_back(x); break;
            case LetterClass::Pop: pops.push_back(x); break;
            case LetterClass::Noop: noops.push_back(x); break;
        }
    auto emit = [&](State src, int top, Letter x, int push_sym, State dst, bool mark,
                    int source, int source2) {
        g.vpa.transitions.push_back({src, top, x, push_sym, dst, mark});
        g.source_of.push_back(source);
        g.source2_of.push_back(source2);
    };
    // the source pop transitions on letter x that apply at state q, top y
    auto pops_at = [&](State q, Letter x, int y) {
        std::vector<int> out;
        for (size_t i = 0; i < v.transitions.size(); ++i) {
            const VpaTransition& u = v.transitions[i];
            if (u.src == q && u.letter == x && u.top == y) out.push_back(static_cast<int>(i));
        }
        return out;
    };

    // start moves: push the second bottom or stay; no pop from an empty stack
    for (Letter x : pushes)
        emit(g.vpa.initial, -1, x, bot2, id(v.initial, x, m), false, -1, -1);
    for (Letter x : noops)
        emit(g.vpa.initial, -1, x, -1, id(v.initial, x, m + 1), false, -1, -1);

    for (size_t ti = 0; ti < v.transitions.size(); ++ti) {
        const VpaTransition& t = v.transitions[ti];
        const int source = static_cast<int>(ti);
        switch (v.letter_class[static_cast<size_t>(t.letter)]) {
            case LetterClass::Push: {
                // after a push letter the actual stack is the semantic one and
                // its top is the guard the owed transition reads
                State s = id(t.src, t.letter, m);
                const int seen = t.top < 0 ? bot2 : t.top;
                for (Letter x : pushes)
                    emit(s, seen, x, t.push_sym, id(t.dst, x, m), t.mark, source, -1);
                for (Letter x : noops)
                    emit(s, seen, x, -1, id(t.dst, x, t.push_sym), t.mark, source, -1);
                for (Letter x : pops)
                    for (int ui : pops_at(t.dst, x, t.push_sym)) {
                        const VpaTransition& u = v.transitions[static_cast<size_t>(ui)];
                        emit(s, seen, x, -1, id(u.dst, x, t.top < 0 ? m + 1 : t.top),
                             t.mark || u.mark, source, ui);
                    }
                break;
            }
            case LetterClass::Pop:
                // pop transitions are discharged together with the owed one;
                // no ghost state owes a pop on its own
                break;
            case LetterClass::Noop: {
                if (t.top >= 0) {
                    State s = id(t.src, t.letter, t.top);
                    for (int y = 0; y <= m; ++y) { // any actual top under the stored letter
                        for (Letter x : pushes)
                            emit(s, y, x, t.top, id(t.dst, x, m), t.mark, source, -1);
                        for (Letter x : noops)
                            emit(s, y, x, -1, id(t.dst, x, t.top), t.mark, source, -1);
                        for (Letter x : pops)
                            for (int ui : pops_at(t.dst, x, t.top)) {
                                const VpaTransition& u =
                                    v.transitions[static_cast<size_t>(ui)];
                                emit(s, y, x, -1, id(u.dst, x, y == bot2 ? m + 1 : y),
                                     t.mark || u.mark, source, ui);
                            }
                    }
                } else {
                    // noop on the source bottom: the semantic stack is both bottoms
                    State s = id(t.src, t.letter, m + 1);
                    for (Letter x : pushes)
                        emit(s, -1, x, bot2, id(t.dst, x, m), t.mark, source, -1);
                    for (Letter x : noops)
                        emit(s, -1, x, -1, id(t.dst, x, m + 1), t.mark, source, -1);
                }
                break;
            }
        }
    }

    // after a pop letter nothing is owed: the next move re-materializes the
    // stored letter (push it back, or keep carrying it) or folds in another pop
    for (State q = 0; q < v.num_states; ++q)
        for (Letter p : pops) {
            for (int xc = 0; xc < m; ++xc) {
                State s = id(q, p, xc);
                for (int y = 0; y <= m; ++y) {
                    for (Letter x : pushes) emit(s, y, x, xc, id(q, x, m), false, -1, -1);
                    for (Letter x : noops) emit(s, y, x, -1, id(q, x, xc), false, -1, -1);
                    for (Letter x : pops)
                        for (int ui : pops_at(q, x, xc)) {
                            const VpaTransition& u = v.transitions[static_cast<size_t>(ui)];
                            emit(s, y, x, -1, id(u.dst, x, y == bot2 ? m + 1 : y), u.mark,
                                 -1, ui);
                        }
                }
            }
            State s = id(q, p, m + 1); // the source stack is empty, actual is bare
            for (Letter x : pushes) emit(s, -1, x, bot2, id(q, x, m), false, -1, -1);
            for (Letter x : noops) emit(s, -1, x, -1, id(q, x, m + 1), false, -1, -1);
        }
    return g;
}

/// Expansion into core form over reachable configurations with stacks up to
/// the depth bound. Overflowing moves land in a rejecting sink (created only
/// when referenced), so a verdict at bound d is exact for plays confined to
/// depth d; a reachability run that took its mark before overflowing stays
/// accepted.
struct BoundedVpa {
    Automaton automaton;
    std::vector<State> state_of; // -1 at the sink
    std::vector<std::vector<int>> stack_of;
    int sink = -1;
};

inline BoundedVpa vpa_bounded(const Vpa& v, int depth_bound) {
    validate_vpa(v);
    if (depth_bound < 0) throw input_error("vpa_bounded: depth bound must be >= 0");
    const bool sink_marked =
        v.acceptance == Acceptance::Safety || v.acceptance == Acceptance::CoBuchi;
    BoundedVpa b;
    std::map<VpaConfig, int> id_of;
    std::vector<VpaConfig> configs;
    auto intern = [&](const VpaConfig& c) {
        auto [it, fresh] = id_of.try_emplace(c, static_cast<int>(configs.size()));
        if (fresh) configs.push_back(c);
        return it->second;
    };
    intern({v.initial, {}});
    std::vector<Transition> ts;
    int sink = -1;
    auto sink_id = [&]() {
        if (sink < 0) {
            sink = static_cast<int>(configs.size());
            configs.push_back({-1, {}});
        }
        return sink;
    };
    for (int i = 0; i < static_cast<int>(configs.size()); ++i) {
        VpaConfig c = configs[static_cast<size_t>(i)]; // copy: configs grows below
        if (c.q < 0) {
            for (Letter x = 0; x < v.alphabet.size(); ++x)
                ts.push_back({i, x, i, sink_marked});
            continue;
        }
        for (Letter x = 0; x < v.alphabet.size(); ++x)
            for (const auto& [tidx, next] : vpa_moves(v, c, x)) {
                bool over = static_cast<int>(next.stack.size()) > depth_bound;
                ts.push_back({i, x, over ? sink_id() : intern(next),
                              v.transitions[static_cast<size_t>(tidx)].mark});
            }
    }
    std::vector<std::string> names;
    for (const VpaConfig& c : configs) {
        if (c.q < 0) {
            names.push_back("sink");
            continue;
        }
        std::string s = vpa_state_name(v, c.q) + "|";
        for (int y : c.stack) s += v.stack_names[static_cast<size_t>(y)];
        names.push_back(std::move(s));
    }
    b.automaton = Automaton(v.alphabet, static_cast<int>(configs.size()), 0, std::move(ts),
                            v.acceptance,
                            (v.name.empty() ? "bounded" : v.name) + "-d" +
                                std::to_string(depth_bound),
                            std::move(names));
    for (const VpaConfig& c : configs) {
        b.state_of.push_back(c.q);
        b.stack_of.push_back(c.stack);
    }
    b.sink = sink;
    return b;
}

/// Walks every source run on the prefix in lockstep with its ghost shadow and
/// checks after each letter that the ghost's moves correspond one to one with
/// the source continuations they discharge (the owed transition, joined with
/// a pop transition when the letter is a pop), carry exactly the marks of
/// those transitions, and keep the semantic stack — the actual stack plus the
/// stored letter — equal to the second bottom followed by the source stack
/// after the executed prefix. Throws when the prefix drives a stack beyond
/// depth_bound.
inline bool semantic_stack_check(const Vpa& v, const GhostVpa& g,
                                 const std::vector<Letter>& prefix, int depth_bound = 8) {
    validate_vpa(v);
    const int k = v.alphabet.size();
    const int m = static_cast<int>(v.stack_names.size());
    for (Letter x : prefix)
        if (x < 0 || x >= k) throw input_error("semantic_stack_check: letter out of range");
    auto is_pop = [&](Letter x) {
        return v.letter_class[static_cast<size_t>(x)] == LetterClass::Pop;
    };

    // item: ghost config after j letters, source config after the executed
    // prefix (one letter shorter unless the last letter was a pop)
    struct Item {
        int j;
        VpaConfig src;
        VpaConfig ghost;
    };
    std::vector<Item> work{{0, {v.initial, {}}, {g.vpa.initial, {}}}};
    auto holds = [&](const Item& it) {
        const State gq = it.ghost.q;
        if (g.state_q[static_cast<size_t>(gq)] != it.src.q) return false;
        int want_sigma = it.j == 0 ? -1 : prefix[static_cast<size_t>(it.j - 1)];
        if (g.state_sigma[static_cast<size_t>(gq)] != want_sigma) return false;
        std::vector<int> sem = it.ghost.stack;
        const int xc = g.state_x[static_cast<size_t>(gq)];
        if (xc != m) sem.push_back(xc == m + 1 ? m : xc); // second bottom as a symbol
        std::vector<int> expect{m};
        expect.insert(expect.end(), it.src.stack.begin(), it.src.stack.end());
        return sem == expect;
    };
    bool ok = true;
    while (!work.empty() && ok) {
        Item it = std::move(work.back());
        work.pop_back();
        if (!holds(it)) {
            ok = false;
            break;
        }
        if (static_cast<int>(it.src.stack.size()) > depth_bound ||
            static_cast<int>(it.ghost.stack.size()) > depth_bound + 1)
            throw input_error("semantic_stack_check: prefix exceeds the stack bound");
        if (it.j == static_cast<int>(prefix.size())) continue;
        const Letter x = prefix[static_cast<size_t>(it.j)];
        const bool owing = it.j > 0 && !is_pop(prefix[static_cast<size_t>(it.j - 1)]);

        // the source continuations this letter must discharge
        struct Cont {
            VpaConfig cfg;
            bool mark;
            int t, u;
        };
        std::vector<Cont> conts;
        if (owing) {
            const Letter prev = prefix[static_cast<size_t>(it.j - 1)];
            for (const auto& [ti, mid] : vpa_moves(v, it.src, prev)) {
                bool tm = v.transitions[static_cast<size_t>(ti)].mark;
                if (!is_pop(x))
                    conts.push_back({mid, tm, ti, -1});
                else
                    for (const auto& [ui, nxt] : vpa_moves(v, mid, x))
                        conts.push_back(
                            {nxt, tm || v.transitions[static_cast<size_t>(ui)].mark, ti, ui});
            }
        } else if (!is_pop(x)) {
            conts.push_back({it.src, false, -1, -1}); // nothing to execute yet
        } else {
            for (const auto& [ui, nxt] : vpa_moves(v, it.src, x))
                conts.push_back({nxt, v.transitions[static_cast<size_t>(ui)].mark, -1, ui});
        }

        auto moves = vpa_moves(g.vpa, it.ghost, x);
        if (moves.size() != conts.size()) {
            ok = false;
            break;
        }
        std::set<std::pair<int, int>> claimed;
        for (const auto& [ei, gnext] : moves) {
            const int t = g.source_of[static_cast<size_t>(ei)];
            const int u = g.source2_of[static_cast<size_t>(ei)];
            const Cont* match = nullptr;
            for (const Cont& c : conts)
                if (c.t == t && c.u == u) match = &c;
            if (!match || !claimed.emplace(t, u).second ||
                g.vpa.transitions[static_cast<size_t>(ei)].mark != match->mark) {
                ok = false;
                break;
            }
            work.push_back({it.j + 1, match->cfg, gnext});
        }
    }
    return ok;
}

/// The one-token game on depth-bounded configurations: the opponent reveals a
/// letter and a source transition in one move, and the ghost answers with its
/// own transition on the same letter — in time to fold a just-revealed pop
/// into the answering move. Runs are infinite by definition here, so a token
/// that cannot keep its run going loses the play; that covers both a missing
/// transition and a forced overflow, scoring truncation against the owner of
/// the overflowing token. The ghost side gets one extra depth level of slack.
/// A verdict without bound_limited is exact; with it, it certifies the plays
/// confined to the bound.
struct VpaG1Report {
    GameResult result;
    bool eve_wins = false;
    bool bound_limited = false;
    int depth_bound = 0;
};

inline VpaG1Report vpa_bounded_g1(const GhostVpa& g, const Vpa& v, int depth_bound) {
    if (depth_bound < 1) throw input_error("vpa_bounded_g1: depth bound must be >= 1");
    validate_vpa(v);
    validate_vpa(g.vpa);
    detail::GameFactory f;
    f.g.kind = GameKind::OneToken;
    f.g.mode_e = g.vpa.acceptance;
    f.g.mode_a = v.acceptance;

    // configurations interned per side; the dense ids go into the node keys
    std::map<VpaConfig, int> idsE, idsA;
    std::vector<VpaConfig> cfgsE{{g.vpa.initial, {}}}, cfgsA{{v.initial, {}}};
    idsE.emplace(cfgsE[0], 0);
    idsA.emplace(cfgsA[0], 0);
    auto intern_cfg = [](std::map<VpaConfig, int>& ids, std::vector<VpaConfig>& cfgs,
                         const VpaConfig& c) {
        auto [it, fresh] = ids.try_emplace(c, static_cast<int>(cfgs.size()));
        if (fresh) cfgs.push_back(c);
        return it->second;
    };

    bool truncated = false;
    // keeps the moves whose stack stays within the side's allowance; anything
    // dropped here makes the verdict bound-limited
    auto within = [&truncated](std::vector<std::pair<int, VpaConfig>> moves, int allow) {
        std::vector<std::pair<int, VpaConfig>> kept;
        for (auto& mv : moves) {
            if (static_cast<int>(mv.second.stack.size()) > allow)
                truncated = true;
            else
                kept.push_back(std::move(mv));
        }
        return kept;
    };
    auto label_of = [](const Vpa& w, const VpaConfig& c) {
        std::string s = vpa_state_name(w, c.q) + "|";
        for (int y : c.stack) s += w.stack_names[static_cast<size_t>(y)];
        return s;
    };

    // round start, the opponent to pick (letter, transition) of v
    auto intern_p0 = [&](int iE, int iA, bool fE, bool fA, int rr, int prio) {
        std::array<int32_t, 6> key{0, iE, iA, 0, 0, detail::pack_aux(fE, fA, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 0;
            n.qE = iE;
            n.qA = iA;
            n.flagE = fE;
            n.flagA = fA;
            n.rr = rr;
            n.prio = prio;
            const VpaConfig& cA = cfgsA[static_cast<size_t>(iA)];
            std::string label = label_of(g.vpa, cfgsE[static_cast<size_t>(iE)]) + " | " +
                                label_of(v, cA) + detail::flag_text(n);
            bool can_move = false;
            for (Letter x = 0; x < v.alphabet.size(); ++x)
                if (!within(vpa_moves(v, cA, x), depth_bound).empty()) can_move = true;
            if (!can_move) // his run cannot go on: scored against his token
                return f.add_terminal(Player::Adam, Player::Eve, n,
                                      label + " (adam halted)");
            return f.add_node(Player::Adam, prio, n, label);
        });
    };
    // the opponent has moved; the ghost to answer the letter
    auto intern_p1 = [&](int iE, int iA2, Letter x, bool markB, bool fE, bool fA, int rr,
                         int prio) {
        std::array<int32_t, 6> key{1, iE, iA2, x, markB,
                                   detail::pack_aux(fE, fA, rr, prio)};
        return f.intern(key, [&] {
            GameNode n;
            n.phase = 1;
            n.qE = iE;
            n.qA = iA2;
            n.letter = x;
            n.flagE = fE;
            n.flagA = fA;
            n.rr = rr;
            n.prio = prio;
            n.round_b = markB;
            std::string label = label_of(g.vpa, cfgsE[static_cast<size_t>(iE)]) + " | " +
                                label_of(v, cfgsA[static_cast<size_t>(iA2)]) + " ?" +
                                v.alphabet.name(x) + detail::flag_text(n);
            if (within(vpa_moves(g.vpa, cfgsE[static_cast<size_t>(iE)], x), depth_bound + 1)
                    .empty()) // her run cannot go on: scored against her token
                return f.add_terminal(Player::Eve, Player::Adam, n,
                                      label + " (eve halted)");
            return f.add_node(Player::Eve, 0, n, label);
        });
    };

    f.g.arena.set_initial(intern_p0(0, 0, false, false, 0, 0));
    while (!f.worklist.empty()) {
        int node = f.worklist.back();
        f.worklist.pop_back();
        GameNode n = f.g.nodes[static_cast<size_t>(node)];
        if (n.phase == 0) {
            const VpaConfig cA = cfgsA[static_cast<size_t>(n.qA)]; // copy: cfgsA grows
            for (Letter x = 0; x < v.alphabet.size(); ++x)
                for (const auto& [ti, next] : within(vpa_moves(v, cA, x), depth_bound)) {
                    const bool mk = v.transitions[static_cast<size_t>(ti)].mark;
                    int iA2 = intern_cfg(idsA, cfgsA, next);
                    int d = intern_p1(n.qE, iA2, x, mk, n.flagE, n.flagA, n.rr, n.prio);
                    f.add_edge(node, d, {false, mk});
                }
        } else {
            const VpaConfig cE = cfgsE[static_cast<size_t>(n.qE)];
            for (const auto& [ti, next] :
                 within(vpa_moves(g.vpa, cE, n.letter), depth_bound + 1)) {
                const bool mk = g.vpa.transitions[static_cast<size_t>(ti)].mark;
                detail::RoundSummary s =
                    detail::close_round(f.g.mode_e, f.g.mode_a, n.flagE, n.flagA, n.rr, mk,
                                        n.round_b, /*g_first=*/false);
                int iE2 = intern_cfg(idsE, cfgsE, next);
                int d = intern_p0(iE2, n.qA, s.flagE, s.flagA, s.rr, s.prio);
                f.add_edge(node, d, {mk, false});
            }
        }
    }
    f.g.arena.validate();

    VpaG1Report rep;
    rep.result = solve_parity3(f.g.arena);
    rep.eve_wins = rep.result.winner_of(f.g.arena.initial()) == Player::Eve;
    rep.bound_limited = truncated;
    rep.depth_bound = depth_bound;
    return rep;
}

} // namespace hdg

#endif // HDG_VPA_HPP
