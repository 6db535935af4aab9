// Exact solvers for the game graphs: attractor computation, reachability
// games, and max-even parity over priorities {0,1,2} (Zielonka's recursion
// with an explicit work stack).
//
// Terminal handling: a terminal with winner P behaves exactly like a node with
// a self-loop of P's parity (0 for Eve, 1 for Adam). The solvers normalize
// terminals that way internally; the arena itself keeps the explicit winner.

#ifndef HDG_SOLVER_HPP
#define HDG_SOLVER_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "arena.hpp"
#include "errors.hpp"

namespace hdg {
namespace detail {

/// Normalized view of an arena used by the solvers. Edge ids below num_edges()
/// are the arena's own; virtual terminal self-loops get orig id -1 and are
/// never reported in strategies.
struct SolverGraph {
    int n = 0;
    std::vector<Player> owner;
    std::vector<int> pri;
    std::vector<int> esrc, edst, eorig;
    std::vector<std::vector<int>> out, in; // edge indices, insertion order

    explicit SolverGraph(const Arena& ar) {
        n = ar.num_nodes();
        owner.resize(static_cast<size_t>(n));
        pri.resize(static_cast<size_t>(n));
        out.resize(static_cast<size_t>(n));
        in.resize(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) {
            const ArenaNode& nd = ar.node(v);
            owner[static_cast<size_t>(v)] = nd.owner;
            pri[static_cast<size_t>(v)] =
                nd.terminal ? (nd.winner == Player::Eve ? 0 : 1) : nd.priority;
        }
        for (int e = 0; e < ar.num_edges(); ++e) add(ar.edge(e).src, ar.edge(e).dst, e);
        for (int v = 0; v < n; ++v)
            if (ar.node(v).terminal) add(v, v, -1);
    }

    void add(int s, int d, int orig) {
        int id = static_cast<int>(esrc.size());
        esrc.push_back(s);
        edst.push_back(d);
        eorig.push_back(orig);
        out[static_cast<size_t>(s)].push_back(id);
        in[static_cast<size_t>(d)].push_back(id);
    }
};

/// Attractor of `player` to `seeds` within `alive`. Returns the attracted
/// nodes (seeds included). For player-owned nodes attracted beyond the seeds,
/// appends (node, original edge id) picks: the lowest-index edge that makes
/// strict progress toward the seeds. Layer-0 nodes are the seeds themselves.
inline std::vector<int> attract(const SolverGraph& g, const std::vector<char>& alive,
                                Player player, const std::vector<int>& seeds,
                                std::vector<std::pair<int, int>>* strat_out) {
    std::vector<int> layer(static_cast<size_t>(g.n), -1);
    std::vector<int> cnt(static_cast<size_t>(g.n), 0);
    for (int v = 0; v < g.n; ++v) {
        if (!alive[static_cast<size_t>(v)] || g.owner[static_cast<size_t>(v)] == player) continue;
        int c = 0;
        for (int e : g.out[static_cast<size_t>(v)])
            if (alive[static_cast<size_t>(g.edst[static_cast<size_t>(e)])]) ++c;
        cnt[static_cast<size_t>(v)] = c;
    }
    std::vector<int> queue;
    queue.reserve(seeds.size());
    for (int v : seeds) {
        if (layer[static_cast<size_t>(v)] == 0) continue;
        layer[static_cast<size_t>(v)] = 0;
        queue.push_back(v);
    }
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int e : g.in[static_cast<size_t>(u)]) {
            int v = g.esrc[static_cast<size_t>(e)];
            if (!alive[static_cast<size_t>(v)] || layer[static_cast<size_t>(v)] >= 0) continue;
            if (g.owner[static_cast<size_t>(v)] == player) {
                layer[static_cast<size_t>(v)] = layer[static_cast<size_t>(u)] + 1;
                queue.push_back(v);
            } else if (--cnt[static_cast<size_t>(v)] == 0) {
                layer[static_cast<size_t>(v)] = layer[static_cast<size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    if (strat_out) {
        for (int v : queue) {
            if (layer[static_cast<size_t>(v)] == 0 || g.owner[static_cast<size_t>(v)] != player)
                continue;
            for (int e : g.out[static_cast<size_t>(v)]) {
                int d = g.edst[static_cast<size_t>(e)];
                if (alive[static_cast<size_t>(d)] && layer[static_cast<size_t>(d)] >= 0 &&
                    layer[static_cast<size_t>(d)] < layer[static_cast<size_t>(v)]) {
                    strat_out->emplace_back(v, g.eorig[static_cast<size_t>(e)]);
                    break;
                }
            }
        }
    }
    return queue;
}

/// Lowest-index real edge of v staying inside `alive`, or -1 (terminals).
inline int any_alive_edge(const SolverGraph& g, const std::vector<char>& alive, int v) {
    for (int e : g.out[static_cast<size_t>(v)])
        if (g.eorig[static_cast<size_t>(e)] >= 0 &&
            alive[static_cast<size_t>(g.edst[static_cast<size_t>(e)])])
            return g.eorig[static_cast<size_t>(e)];
    return -1;
}

} // namespace detail

/// Classical attractor game: Eve wins iff she can force a visit to `targets`.
/// A play that ends in a terminal without having visited a target is lost for
/// Eve regardless of the terminal's declared winner; declared winners only
/// matter to the parity solver.
inline GameResult solve_reachability(const Arena& ar, const std::vector<int>& targets) {
    ar.validate();
    for (int v : targets)
        if (v < 0 || v >= ar.num_nodes()) throw input_error("solve_reachability: bad target");
    detail::SolverGraph g(ar);
    std::vector<char> alive(static_cast<size_t>(g.n), 1);

    GameResult res;
    res.winner.assign(static_cast<size_t>(g.n), Player::Adam);
    res.eve = {Player::Eve, std::vector<int>(static_cast<size_t>(g.n), -1)};
    res.adam = {Player::Adam, std::vector<int>(static_cast<size_t>(g.n), -1)};

    std::vector<std::pair<int, int>> strat;
    std::vector<int> seeds = targets;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    std::vector<int> attr = detail::attract(g, alive, Player::Eve, seeds, &strat);

    std::vector<char> in_attr(static_cast<size_t>(g.n), 0);
    for (int v : attr) in_attr[static_cast<size_t>(v)] = 1;
    for (int v : attr) res.winner[static_cast<size_t>(v)] = Player::Eve;
    for (auto [v, e] : strat) res.eve.edge_of[static_cast<size_t>(v)] = e;
    for (int v : seeds)
        if (ar.node(v).owner == Player::Eve && !ar.node(v).terminal)
            res.eve.edge_of[static_cast<size_t>(v)] = detail::any_alive_edge(g, alive, v);
    // Outside the attractor Adam just stays outside; such an edge always exists
    // for his nodes there.
    for (int v = 0; v < g.n; ++v) {
        if (in_attr[static_cast<size_t>(v)] || ar.node(v).owner != Player::Adam ||
            ar.node(v).terminal)
            continue;
        for (int e : g.out[static_cast<size_t>(v)]) {
            if (g.eorig[static_cast<size_t>(e)] < 0) continue;
            if (!in_attr[static_cast<size_t>(g.edst[static_cast<size_t>(e)])]) {
                res.adam.edge_of[static_cast<size_t>(v)] = g.eorig[static_cast<size_t>(e)];
                break;
            }
        }
    }
    return res;
}

/// Zielonka's algorithm for max-even parity with priorities {0,1,2}, with
/// positional strategy extraction for both players. Deterministic: all choices
/// fall back to lowest edge index.
inline GameResult solve_parity3(const Arena& ar) {
    ar.validate();
    detail::SolverGraph g(ar);
    const int n = g.n;
    std::vector<char> alive(static_cast<size_t>(n), 1);
    std::vector<Player> winner(static_cast<size_t>(n), Player::Eve);
    std::vector<std::vector<int>> strat(2, std::vector<int>(static_cast<size_t>(n), -1));
    auto strat_of = [&](Player p) -> std::vector<int>& {
        return strat[p == Player::Eve ? 0 : 1];
    };

    struct Frame {
        int phase = 0;
        int p = 0; // top priority of this subgame
        Player P = Player::Eve;
        std::vector<int> removed;
        std::vector<int> seeds;
        std::vector<std::pair<int, int>> attr_strat;
    };
    std::vector<Frame> stack;
    stack.emplace_back();

    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.phase == 0) {
            int p = -1;
            bool uniform = true;
            for (int v = 0; v < n; ++v) {
                if (!alive[static_cast<size_t>(v)]) continue;
                if (p < 0)
                    p = g.pri[static_cast<size_t>(v)];
                else if (g.pri[static_cast<size_t>(v)] != p) {
                    uniform = false;
                    p = std::max(p, g.pri[static_cast<size_t>(v)]);
                }
            }
            if (p < 0) { // empty subgame
                stack.pop_back();
                continue;
            }
            f.p = p;
            f.P = (p % 2 == 0) ? Player::Eve : Player::Adam;
            if (uniform) {
                // Single priority: every infinite play in this trap has
                // maximum p, so its parity player takes everything.
                for (int v = 0; v < n; ++v) {
                    if (!alive[static_cast<size_t>(v)]) continue;
                    winner[static_cast<size_t>(v)] = f.P;
                    if (g.owner[static_cast<size_t>(v)] == f.P)
                        strat_of(f.P)[static_cast<size_t>(v)] = detail::any_alive_edge(g, alive, v);
                }
                stack.pop_back();
                continue;
            }
            f.seeds.clear();
            for (int v = 0; v < n; ++v)
                if (alive[static_cast<size_t>(v)] && g.pri[static_cast<size_t>(v)] == p)
                    f.seeds.push_back(v);
            f.attr_strat.clear();
            f.removed = detail::attract(g, alive, f.P, f.seeds, &f.attr_strat);
            for (int v : f.removed) alive[static_cast<size_t>(v)] = 0;
            f.phase = 1;
            stack.emplace_back();
            continue;
        }
        if (f.phase == 1) {
            const Player O = opponent(f.P);
            std::vector<int> opp_won;
            for (int v = 0; v < n; ++v)
                if (alive[static_cast<size_t>(v)] && winner[static_cast<size_t>(v)] == O)
                    opp_won.push_back(v);
            for (int v : f.removed) alive[static_cast<size_t>(v)] = 1;
            if (opp_won.empty()) {
                // P wins the whole subgame: attractor edges toward the top
                // priority, any inside edge on the top-priority nodes.
                for (int v : f.removed) winner[static_cast<size_t>(v)] = f.P;
                for (auto [v, e] : f.attr_strat) strat_of(f.P)[static_cast<size_t>(v)] = e;
                for (int v : f.seeds)
                    if (g.owner[static_cast<size_t>(v)] == f.P)
                        strat_of(f.P)[static_cast<size_t>(v)] = detail::any_alive_edge(g, alive, v);
                stack.pop_back();
                continue;
            }
            f.attr_strat.clear();
            f.removed = detail::attract(g, alive, O, opp_won, &f.attr_strat);
            for (int v : f.removed) alive[static_cast<size_t>(v)] = 0;
            f.phase = 2;
            stack.emplace_back();
            continue;
        }
        // phase 2: opponent keeps the attractor to their sub-region; the
        // sub-region strategies written by the first recursion still stand.
        const Player O = opponent(f.P);
        for (int v : f.removed) {
            alive[static_cast<size_t>(v)] = 1;
            winner[static_cast<size_t>(v)] = O;
        }
        for (auto [v, e] : f.attr_strat) strat_of(O)[static_cast<size_t>(v)] = e;
        stack.pop_back();
    }

    GameResult res;
    res.winner = std::move(winner);
    res.eve = {Player::Eve, std::vector<int>(static_cast<size_t>(n), -1)};
    res.adam = {Player::Adam, std::vector<int>(static_cast<size_t>(n), -1)};
    for (int v = 0; v < n; ++v) {
        const ArenaNode& nd = ar.node(v);
        if (nd.terminal) continue;
        Player w = res.winner[static_cast<size_t>(v)];
        if (nd.owner == w) {
            int e = strat[w == Player::Eve ? 0 : 1][static_cast<size_t>(v)];
            (w == Player::Eve ? res.eve : res.adam).edge_of[static_cast<size_t>(v)] = e;
        }
    }
    return res;
}

/// Nodes reachable from the initial node once `s` is fixed that the opponent
/// of s.owner wins in the residual game. Empty = the strategy is certified on
/// everything it can actually face.
inline std::vector<int> residual_opponent_wins(const Arena& ar, const Strategy& s) {
    Arena restricted = restrict_to_strategy(ar, s);
    GameResult res = solve_parity3(restricted);
    std::vector<bool> seen(static_cast<size_t>(restricted.num_nodes()), false);
    std::vector<int> stack{restricted.initial()};
    seen[static_cast<size_t>(restricted.initial())] = true;
    std::vector<int> bad;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (res.winner_of(v) == opponent(s.owner)) bad.push_back(v);
        for (int e : restricted.out(v)) {
            int d = restricted.edge(e).dst;
            if (!seen[static_cast<size_t>(d)]) {
                seen[static_cast<size_t>(d)] = true;
                stack.push_back(d);
            }
        }
    }
    std::sort(bad.begin(), bad.end());
    return bad;
}

/// Soundness check for solver output: fixing either player's strategy must
/// not lose any node of their claimed region.
inline bool strategies_certified(const Arena& ar, const GameResult& res) {
    for (Player p : {Player::Eve, Player::Adam}) {
        Arena restricted = restrict_to_strategy(ar, res.strategy(p), /*check_playable=*/false);
        GameResult check = solve_parity3(restricted);
        for (int v = 0; v < ar.num_nodes(); ++v)
            if (res.winner_of(v) == p && check.winner_of(v) != p) return false;
    }
    return true;
}

} // namespace hdg

#endif // HDG_SOLVER_HPP
