// From a lost letter game to a concrete counterexample automaton.
//
// When Adam wins the letter game on (subject, monitor), his positional
// strategy is a finite recipe for dictating words the subject keeps fumbling.
// Read as a transducer and composed with the subject, the strategy becomes a
// small safety automaton N over the subject's transitions: its states are the
// memories of the strategy and its infinite words are exactly the runs Eve
// can offer against it, all of them rejecting on words the monitor accepts.
// Projecting N to the subject's alphabet, padding the branches where Eve was
// left stuck, optionally unrolling cycles to restore linearity, and delaying
// the result by one letter yields B': an automaton whose language the subject
// contains but which the subject cannot simulate.

#ifndef HDG_SPOILER_HPP
#define HDG_SPOILER_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "automaton.hpp"
#include "delay.hpp"
#include "errors.hpp"
#include "games.hpp"
#include "lasso.hpp"
#include "solver.hpp"

namespace hdg {

/// A solved letter game, still carrying the pair it was built from so the
/// strategy machinery can refer back to the subject's transitions.
struct LetterGameResult {
    MonitorPair pair;
    BuiltGame game;
    GameResult result;
};

inline LetterGameResult solve_letter_game(MonitorPair mp) {
    BuiltGame g = build_letter_game(mp);
    GameResult r = solve_parity3(g.arena);
    return {std::move(mp), std::move(g), std::move(r)};
}

/// Names for an automaton's transitions when they act as an input alphabet.
/// The index prefix keeps the names unique even for duplicate-looking edges.
inline Alphabet transition_alphabet(const Automaton& a) {
    std::vector<std::string> names;
    for (size_t i = 0; i < a.transitions().size(); ++i) {
        const Transition& t = a.transitions()[i];
        names.push_back("d" + std::to_string(i) + ":" + a.state_name(t.src) + "." +
                        a.alphabet().name(t.letter) + "." + a.state_name(t.dst));
    }
    return Alphabet(std::move(names));
}

/// Adam's positional letter-game strategy, re-read as a transducer: memory
/// states are the round-start nodes his strategy can reach, gamma is the
/// letter he declares there, and the memory advances on whichever subject
/// transition Eve answers with. A memory with no successors marks a round
/// where Eve could not answer at all.
struct StrategyTransducer {
    Alphabet sigma;                       ///< output: the subject's letters
    Alphabet delta;                       ///< input: the subject's transitions
    int initial = 0;
    std::vector<Letter> gamma;            ///< declared letter, per memory
    std::vector<State> q_of;              ///< Eve's subject state, per memory
    std::vector<int> node_of;             ///< backing arena node, per memory
    std::vector<std::map<int, int>> next; ///< memory x transition -> memory
};

inline StrategyTransducer extract_adam_strategy(const LetterGameResult& lg) {
    if (lg.game.kind != GameKind::LetterGame)
        throw input_error("extract_adam_strategy: not a letter game");
    const Arena& ar = lg.game.arena;
    if (lg.result.winner_of(ar.initial()) == Player::Eve)
        throw no_strategy_error("extract_adam_strategy: Eve wins this letter game");
    const Automaton& a = lg.pair.subject;
    const Strategy& adam = lg.result.strategy(Player::Adam);

    StrategyTransducer tr;
    tr.sigma = a.alphabet();
    tr.delta = transition_alphabet(a);
    std::map<int, int> mem_of; // arena node -> memory state
    std::vector<int> work;
    auto intern = [&](int v) {
        auto [it, fresh] = mem_of.try_emplace(v, static_cast<int>(tr.gamma.size()));
        if (fresh) {
            tr.gamma.push_back(-1);
            tr.q_of.push_back(lg.game.nodes[static_cast<size_t>(v)].qE);
            tr.node_of.push_back(v);
            tr.next.emplace_back();
            work.push_back(v);
        }
        return it->second;
    };
    tr.initial = intern(ar.initial());
    while (!work.empty()) {
        int v = work.back();
        work.pop_back();
        int s = mem_of.at(v);
        int u = ar.edge(adam.at(v)).dst;
        const GameNode& round = lg.game.nodes[static_cast<size_t>(u)];
        tr.gamma[static_cast<size_t>(s)] = round.letter;
        if (ar.node(u).terminal) continue; // Eve is stuck here: dead memory
        // Eve's answers at u were inserted in out_on(qE, letter) order.
        const auto& moves = a.out_on(round.qE, round.letter);
        const auto& out = ar.out(u);
        for (size_t j = 0; j < out.size(); ++j) {
            int d = intern(ar.edge(out[j]).dst);
            tr.next[static_cast<size_t>(s)][moves[j]] = d;
        }
    }
    return tr;
}

/// The transducer composed with the subject: a deterministic safety automaton
/// over the subject's transitions whose infinite words are exactly the plays
/// Adam's strategy wins against.
struct PlaysAutomaton {
    Automaton automaton;
    Alphabet sigma;                ///< the subject's own alphabet
    std::vector<Letter> letter_of; ///< per input symbol, the letter it reads
    std::vector<State> q_of;       ///< per state, the subject state of the play
};

inline PlaysAutomaton strategy_monitor_product(const StrategyTransducer& tr,
                                               const Automaton& a) {
    if (!(tr.sigma == a.alphabet()))
        throw input_error("strategy_monitor_product: alphabets differ");
    if (tr.delta.size() != static_cast<int>(a.transitions().size()))
        throw input_error("strategy_monitor_product: transducer built from a different subject");
    std::vector<Transition> ts;
    std::vector<std::string> names;
    for (size_t s = 0; s < tr.gamma.size(); ++s) {
        names.push_back("m" + std::to_string(s) + ":" + a.state_name(tr.q_of[s]));
        for (auto [ti, s2] : tr.next[s])
            ts.push_back({static_cast<State>(s), ti, s2, false});
    }
    std::vector<Letter> letter_of;
    for (const Transition& t : a.transitions()) letter_of.push_back(t.letter);
    return {Automaton(tr.delta, static_cast<int>(tr.gamma.size()), tr.initial, std::move(ts),
                      Acceptance::Safety, a.name().empty() ? "plays" : a.name() + "-plays",
                      std::move(names)),
            a.alphabet(), std::move(letter_of), tr.q_of};
}

/// The plays automaton re-read over the subject's letters: the same graph
/// with every transition labeled by the letter its play symbol reads. The
/// result is typically nondeterministic.
inline Automaton project_to_sigma(const PlaysAutomaton& p) {
    std::vector<Transition> ts;
    for (const Transition& t : p.automaton.transitions())
        ts.push_back({t.src, p.letter_of[static_cast<size_t>(t.letter)], t.dst, false});
    return Automaton(p.sigma, p.automaton.num_states(), p.automaton.initial(), std::move(ts),
                     Acceptance::Safety, p.automaton.name(), p.automaton.state_names());
}

namespace detail {

/// BFS over the subgraph of allowed transitions (nullptr = all), recording a
/// shortest in-transition per reached state.
struct BfsTree {
    std::vector<int> via; ///< transition entering each state, -1 at root/unreached
    std::vector<bool> seen;
    std::vector<State> order;
};

inline BfsTree bfs_tree(const Automaton& a, State from, const std::vector<bool>* edge_ok) {
    BfsTree t;
    t.via.assign(static_cast<size_t>(a.num_states()), -1);
    t.seen.assign(static_cast<size_t>(a.num_states()), false);
    t.seen[static_cast<size_t>(from)] = true;
    t.order.push_back(from);
    for (size_t i = 0; i < t.order.size(); ++i) {
        State q = t.order[i];
        for (int ti : a.out(q)) {
            if (edge_ok && !(*edge_ok)[static_cast<size_t>(ti)]) continue;
            State d = a.transitions()[static_cast<size_t>(ti)].dst;
            if (t.seen[static_cast<size_t>(d)]) continue;
            t.seen[static_cast<size_t>(d)] = true;
            t.via[static_cast<size_t>(d)] = ti;
            t.order.push_back(d);
        }
    }
    return t;
}

inline std::vector<Letter> letters_to(const Automaton& a, const BfsTree& t, State to) {
    std::vector<Letter> w;
    for (State q = to; t.via[static_cast<size_t>(q)] >= 0;
         q = a.transitions()[static_cast<size_t>(t.via[static_cast<size_t>(q)])].src)
        w.push_back(a.transitions()[static_cast<size_t>(t.via[static_cast<size_t>(q)])].letter);
    std::reverse(w.begin(), w.end());
    return w;
}

/// A nonempty allowed cycle through s, preferring a self-loop.
inline std::optional<std::vector<Letter>> cycle_at(const Automaton& a, State s,
                                                   const std::vector<bool>* edge_ok) {
    const auto& ts = a.transitions();
    for (int ti : a.out(s)) {
        if (edge_ok && !(*edge_ok)[static_cast<size_t>(ti)]) continue;
        if (ts[static_cast<size_t>(ti)].dst == s)
            return std::vector<Letter>{ts[static_cast<size_t>(ti)].letter};
    }
    for (int ti : a.out(s)) {
        if (edge_ok && !(*edge_ok)[static_cast<size_t>(ti)]) continue;
        const Transition& t = ts[static_cast<size_t>(ti)];
        BfsTree back = bfs_tree(a, t.dst, edge_ok);
        if (!back.seen[static_cast<size_t>(s)]) continue;
        std::vector<Letter> v{t.letter};
        auto rest = letters_to(a, back, s);
        v.insert(v.end(), rest.begin(), rest.end());
        return v;
    }
    return std::nullopt;
}

} // namespace detail

/// An accepting continuation u.v^w of m from state `from`, where `flag` says
/// a mark was already taken on the way there; nullopt when every continuation
/// rejects. Self-loop cycles are preferred so padded spoilers stay linear.
inline std::optional<Lasso> witness_lasso(const Automaton& m, State from, bool flag) {
    const auto& ts = m.transitions();
    std::vector<bool> unmarked(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) unmarked[i] = !ts[i].mark;

    auto lasso_from = [&](State q, const std::vector<bool>* path_ok,
                          const std::vector<bool>* cycle_ok) -> std::optional<Lasso> {
        detail::BfsTree t = detail::bfs_tree(m, q, path_ok);
        for (State s : t.order) // self-loops first, anywhere reachable
            for (int ti : m.out(s)) {
                if (cycle_ok && !(*cycle_ok)[static_cast<size_t>(ti)]) continue;
                if (ts[static_cast<size_t>(ti)].dst == s)
                    return Lasso{detail::letters_to(m, t, s),
                                 {ts[static_cast<size_t>(ti)].letter}};
            }
        for (State s : t.order)
            if (auto v = detail::cycle_at(m, s, cycle_ok))
                return Lasso{detail::letters_to(m, t, s), *v};
        return std::nullopt;
    };

    switch (m.acceptance()) {
        case Acceptance::Safety:
            if (flag) return std::nullopt;
            return lasso_from(from, &unmarked, &unmarked);
        case Acceptance::CoBuchi:
            return lasso_from(from, nullptr, &unmarked);
        case Acceptance::Reachability: {
            if (flag) return lasso_from(from, nullptr, nullptr);
            detail::BfsTree t = detail::bfs_tree(m, from, nullptr);
            for (State s : t.order)
                for (int ti : m.out(s)) {
                    if (!ts[static_cast<size_t>(ti)].mark) continue;
                    auto tail = lasso_from(ts[static_cast<size_t>(ti)].dst, nullptr, nullptr);
                    if (!tail) continue;
                    Lasso l;
                    l.prefix = detail::letters_to(m, t, s);
                    l.prefix.push_back(ts[static_cast<size_t>(ti)].letter);
                    l.prefix.insert(l.prefix.end(), tail->prefix.begin(), tail->prefix.end());
                    l.cycle = tail->cycle;
                    return l;
                }
            return std::nullopt;
        }
        case Acceptance::Buchi: {
            detail::BfsTree t = detail::bfs_tree(m, from, nullptr);
            for (State s : t.order) // marked self-loops first
                for (int ti : m.out(s))
                    if (ts[static_cast<size_t>(ti)].mark && ts[static_cast<size_t>(ti)].dst == s)
                        return Lasso{detail::letters_to(m, t, s),
                                     {ts[static_cast<size_t>(ti)].letter}};
            for (State s : t.order)
                for (int ti : m.out(s)) {
                    if (!ts[static_cast<size_t>(ti)].mark) continue;
                    detail::BfsTree back =
                        detail::bfs_tree(m, ts[static_cast<size_t>(ti)].dst, nullptr);
                    if (!back.seen[static_cast<size_t>(s)]) continue;
                    std::vector<Letter> v{ts[static_cast<size_t>(ti)].letter};
                    auto rest = detail::letters_to(m, back, s);
                    v.insert(v.end(), rest.begin(), rest.end());
                    return Lasso{detail::letters_to(m, t, s), v};
                }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

/// Unrolls every cyclic state class of n into K+1 layered copies, with
/// K = |class| * 2^{|subject states|}, so the only cycles left are self-loops
/// on the last layer: inside a class a step advances the layer, edges in from
/// outside enter at layer zero, and edges out exist at every layer. The runs
/// trapped on a last layer repeat one letter forever; the layer count is
/// large enough that such a tail is already forced by the time it starts.
///
/// `class_of` assigns each state of n to a subject state (-1 for states that
/// belong to no class, e.g. padding). The subject itself must be linear and a
/// cycle of n that is not confined to a single class cannot be unrolled.
inline Automaton linearize(const Automaton& n, const Automaton& subject,
                           const std::vector<State>& class_of) {
    if (!is_linear(subject))
        throw input_error("linearize: subject automaton is not linear");
    if (class_of.size() != static_cast<size_t>(n.num_states()))
        throw input_error("linearize: class map does not fit the automaton");
    for (State c : class_of)
        if (c >= subject.num_states())
            throw input_error("linearize: class map names a state the subject lacks");
    if (subject.num_states() > 20)
        throw unsupported_error("linearize: unrolling bound too large");

    std::vector<std::vector<State>> adj(static_cast<size_t>(n.num_states()));
    for (const Transition& t : n.transitions()) adj[static_cast<size_t>(t.src)].push_back(t.dst);
    std::vector<bool> cyclic(static_cast<size_t>(subject.num_states()), false);
    for (const auto& comp : detail::sccs_of(n.num_states(), adj)) {
        if (comp.size() < 2) continue;
        State c = class_of[static_cast<size_t>(comp[0])];
        for (State s : comp)
            if (class_of[static_cast<size_t>(s)] != c || c < 0)
                throw input_error("linearize: a cycle is not confined to one class");
        cyclic[static_cast<size_t>(c)] = true;
    }
    for (const Transition& t : n.transitions())
        if (t.src == t.dst && class_of[static_cast<size_t>(t.src)] >= 0)
            cyclic[static_cast<size_t>(class_of[static_cast<size_t>(t.src)])] = true;

    std::vector<long long> class_size(static_cast<size_t>(subject.num_states()), 0);
    for (State c : class_of)
        if (c >= 0) class_size[static_cast<size_t>(c)]++;
    const long long blowup = 1LL << subject.num_states();

    std::vector<int> base(static_cast<size_t>(n.num_states()), 0);
    std::vector<int> copies(static_cast<size_t>(n.num_states()), 1);
    long long total = 0;
    for (State s = 0; s < n.num_states(); ++s) {
        State c = class_of[static_cast<size_t>(s)];
        if (c >= 0 && cyclic[static_cast<size_t>(c)])
            copies[static_cast<size_t>(s)] =
                static_cast<int>(class_size[static_cast<size_t>(c)] * blowup) + 1;
        base[static_cast<size_t>(s)] = static_cast<int>(total);
        total += copies[static_cast<size_t>(s)];
        if (total > 200000) throw unsupported_error("linearize: unrolled automaton too large");
    }

    std::vector<std::string> names;
    for (State s = 0; s < n.num_states(); ++s)
        for (int i = 0; i < copies[static_cast<size_t>(s)]; ++i)
            names.push_back(copies[static_cast<size_t>(s)] == 1
                                ? n.state_name(s)
                                : n.state_name(s) + "#" + std::to_string(i));

    std::vector<Transition> ts;
    std::set<std::pair<State, Letter>> looped; // last-layer self-loops already added
    for (const Transition& t : n.transitions()) {
        const bool su = copies[static_cast<size_t>(t.src)] > 1;
        const bool du = copies[static_cast<size_t>(t.dst)] > 1;
        if (su && du &&
            class_of[static_cast<size_t>(t.src)] == class_of[static_cast<size_t>(t.dst)]) {
            const int k = copies[static_cast<size_t>(t.src)] - 1;
            for (int i = 0; i < k; ++i)
                ts.push_back({base[static_cast<size_t>(t.src)] + i, t.letter,
                              base[static_cast<size_t>(t.dst)] + i + 1, t.mark});
            if (looped.insert({t.src, t.letter}).second)
                ts.push_back({base[static_cast<size_t>(t.src)] + k, t.letter,
                              base[static_cast<size_t>(t.src)] + k, t.mark});
        } else {
            for (int i = 0; i < copies[static_cast<size_t>(t.src)]; ++i)
                ts.push_back({base[static_cast<size_t>(t.src)] + i, t.letter,
                              base[static_cast<size_t>(t.dst)], t.mark});
        }
    }
    return Automaton(n.alphabet(), static_cast<int>(total), base[static_cast<size_t>(n.initial())],
                     std::move(ts), n.acceptance(),
                     n.name().empty() ? "linear" : n.name() + "-linear", std::move(names));
}

struct SpoilerOptions {
    bool linearize = false;
    int lassos = 500;              ///< sampled inclusion checks on the result
    std::uint64_t seed = 20260816;
};

struct SpoilerCertificate {
    bool adam_wins_sim = false;    ///< the subject fails to simulate the spoiler
    int lassos_tested = 0;
    int inclusion_violations = 0;  ///< sampled words in L(spoiler) \ L(subject)
    std::optional<Lasso> first_violation;
    bool linear = false;
};

struct SpoilerResult {
    Automaton spoiler;
    SpoilerCertificate certificate;
};

/// The whole pipeline: Adam's letter-game strategy, composed with the
/// subject, projected to its alphabet, padded where Eve was left stuck,
/// optionally linearized, and delayed one letter into the automaton B' that
/// the subject contains but cannot simulate. Throws no_strategy_error when
/// Eve wins the letter game (nothing to spoil). The certificate reports the
/// exact simulation verdict and a sampled language-inclusion check.
inline SpoilerResult build_spoiler(const Automaton& a, const Automaton& monitor,
                                   SpoilerOptions opt = {}) {
    LetterGameResult lg = solve_letter_game({a, monitor});
    if (lg.result.winner_of(lg.game.arena.initial()) == Player::Eve)
        throw no_strategy_error("build_spoiler: Eve wins the letter game, there is nothing to spoil");
    StrategyTransducer tr = extract_adam_strategy(lg);
    PlaysAutomaton plays = strategy_monitor_product(tr, a);
    Automaton core = project_to_sigma(plays);

    // Where the strategy wins by leaving Eve stuck, the play stops; the
    // spoiler still needs the branch to stay alive, so it continues with a
    // word the monitor accepts from there. Eve's run is already dead, the
    // spoiler's is accepting, and the word stays in the language.
    std::vector<Transition> ts = core.transitions();
    std::vector<std::string> names = core.state_names();
    std::vector<State> class_of = plays.q_of;
    const Automaton mtot = totalize(monitor);
    const Strategy& adam = lg.result.strategy(Player::Adam);
    int total = core.num_states();
    for (State s = 0; s < core.num_states(); ++s) {
        if (!core.out(s).empty()) continue;
        int u = lg.game.arena.edge(adam.at(tr.node_of[static_cast<size_t>(s)])).dst;
        const GameNode& round = lg.game.nodes[static_cast<size_t>(u)];
        bool flag = round.flagA || (round.round_b && detail::tracks_flag(lg.game.mode_a));
        auto w = witness_lasso(mtot, round.qA, flag);
        if (!w)
            throw inconsistency_error("build_spoiler: a stuck branch has no accepting continuation");
        std::vector<Letter> pre{tr.gamma[static_cast<size_t>(s)]};
        pre.insert(pre.end(), w->prefix.begin(), w->prefix.end());
        State prev = s;
        for (Letter x : pre) {
            State nxt = total++;
            names.push_back("pad" + std::to_string(nxt));
            class_of.push_back(-1);
            ts.push_back({prev, x, nxt, false});
            prev = nxt;
        }
        const State entry = prev;
        for (size_t i = 0; i + 1 < w->cycle.size(); ++i) {
            State nxt = total++;
            names.push_back("pad" + std::to_string(nxt));
            class_of.push_back(-1);
            ts.push_back({prev, w->cycle[i], nxt, false});
            prev = nxt;
        }
        ts.push_back({prev, w->cycle.back(), entry, false});
    }
    Automaton padded(core.alphabet(), total, core.initial(), std::move(ts), Acceptance::Safety,
                     core.name(), std::move(names));
    Automaton shaped = opt.linearize ? linearize(padded, a, class_of) : padded;

    Automaton ghost = delay_finite(shaped).automaton;
    Automaton bprime(ghost.alphabet(), ghost.num_states(), ghost.initial(), ghost.transitions(),
                     ghost.acceptance(), a.name().empty() ? "spoiler" : a.name() + "-spoiler",
                     ghost.state_names());

    SpoilerCertificate cert;
    cert.adam_wins_sim = !eve_wins(build_sim_game(a, bprime));
    cert.lassos_tested = opt.lassos;
    for (const Lasso& l : sample_lassos(a.alphabet(), opt.lassos, 6, 4, opt.seed))
        if (lasso_membership(bprime, l) && !lasso_membership(a, l)) {
            if (cert.inclusion_violations == 0) cert.first_violation = l;
            cert.inclusion_violations++;
        }
    cert.linear = is_linear(bprime);
    return {std::move(bprime), std::move(cert)};
}

} // namespace hdg

#endif // HDG_SPOILER_HPP
