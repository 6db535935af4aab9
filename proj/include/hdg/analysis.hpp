// Structural analyses on automata: maximal strongly connected components,
// linearity, and acceptance-nonemptiness from a given state. These back the
// game builders (stuck-terminal winners), the gallery facts, and the spoiler
// pipeline's language filters.

#ifndef HDG_ANALYSIS_HPP
#define HDG_ANALYSIS_HPP

#include <vector>

#include "hdg/automaton.hpp"

namespace hdg {

/// One maximal strongly connected component.
struct Mscc {
    std::vector<State> states;
    bool accepting = false; ///< contains a marked transition with both ends inside
    bool trivial = true;    ///< no internal transition at all (single state, no self-loop)
};

namespace detail {

/// Iterative Tarjan. Components come out in reverse topological order and are
/// reversed before returning, so edges go from earlier to later components.
inline std::vector<std::vector<State>> sccs_of(int n, const std::vector<std::vector<State>>& adj) {
    std::vector<int> index(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<size_t>(n), false);
    std::vector<State> stack;
    std::vector<std::vector<State>> comps;
    int next_index = 0;

    struct Frame { State v; size_t child; };
    for (State root = 0; root < n; ++root) {
        if (index[static_cast<size_t>(root)] != -1) continue;
        std::vector<Frame> call{{root, 0}};
        index[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = next_index++;
        stack.push_back(root);
        on_stack[static_cast<size_t>(root)] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& succ = adj[static_cast<size_t>(f.v)];
            if (f.child < succ.size()) {
                State w = succ[f.child++];
                if (index[static_cast<size_t>(w)] == -1) {
                    index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = next_index++;
                    stack.push_back(w);
                    on_stack[static_cast<size_t>(w)] = true;
                    call.push_back({w, 0});
                } else if (on_stack[static_cast<size_t>(w)]) {
                    low[static_cast<size_t>(f.v)] = std::min(low[static_cast<size_t>(f.v)], index[static_cast<size_t>(w)]);
                }
            } else {
                if (low[static_cast<size_t>(f.v)] == index[static_cast<size_t>(f.v)]) {
                    std::vector<State> comp;
                    State w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<size_t>(w)] = false;
                        comp.push_back(w);
                    } while (w != f.v);
                    std::sort(comp.begin(), comp.end());
                    comps.push_back(std::move(comp));
                }
                State v = f.v;
                call.pop_back();
                if (!call.empty())
                    low[static_cast<size_t>(call.back().v)] =
                        std::min(low[static_cast<size_t>(call.back().v)], low[static_cast<size_t>(v)]);
            }
        }
    }
    std::reverse(comps.begin(), comps.end());
    return comps;
}

} // namespace detail

/// Maximal strongly connected components in topological order (edges go from
/// earlier to later components), with accepting/trivial tags.
inline std::vector<Mscc> msccs(const Automaton& a) {
    std::vector<std::vector<State>> adj(static_cast<size_t>(a.num_states()));
    for (const auto& t : a.transitions()) adj[static_cast<size_t>(t.src)].push_back(t.dst);
    auto comps = detail::sccs_of(a.num_states(), adj);

    std::vector<int> comp_of(static_cast<size_t>(a.num_states()), -1);
    for (size_t c = 0; c < comps.size(); ++c)
        for (State q : comps[c]) comp_of[static_cast<size_t>(q)] = static_cast<int>(c);

    std::vector<Mscc> out(comps.size());
    for (size_t c = 0; c < comps.size(); ++c) out[c].states = comps[c];
    for (const auto& t : a.transitions()) {
        int c = comp_of[static_cast<size_t>(t.src)];
        if (c == comp_of[static_cast<size_t>(t.dst)]) {
            out[static_cast<size_t>(c)].trivial = false;
            if (t.mark) out[static_cast<size_t>(c)].accepting = true;
        }
    }
    return out;
}

/// An automaton is linear when every cycle is a self-loop, i.e. every MSCC is
/// a single state.
inline bool is_linear(const Automaton& a) {
    for (const auto& c : msccs(a))
        if (c.states.size() > 1) return false;
    return true;
}

namespace detail {

/// States lying on a cycle of the subgraph given by `edge_ok`.
inline std::vector<bool> on_cycle(const Automaton& a, const std::vector<bool>& edge_ok) {
    std::vector<std::vector<State>> adj(static_cast<size_t>(a.num_states()));
    const auto& ts = a.transitions();
    for (size_t i = 0; i < ts.size(); ++i)
        if (edge_ok[i]) adj[static_cast<size_t>(ts[i].src)].push_back(ts[i].dst);
    auto comps = sccs_of(a.num_states(), adj);
    std::vector<int> comp_of(static_cast<size_t>(a.num_states()), -1);
    for (size_t c = 0; c < comps.size(); ++c)
        for (State q : comps[c]) comp_of[static_cast<size_t>(q)] = static_cast<int>(c);
    std::vector<bool> live(comps.size(), false);
    for (size_t i = 0; i < ts.size(); ++i)
        if (edge_ok[i] && comp_of[static_cast<size_t>(ts[i].src)] == comp_of[static_cast<size_t>(ts[i].dst)])
            live[static_cast<size_t>(comp_of[static_cast<size_t>(ts[i].src)])] = true;
    std::vector<bool> res(static_cast<size_t>(a.num_states()), false);
    for (State q = 0; q < a.num_states(); ++q)
        if (live[static_cast<size_t>(comp_of[static_cast<size_t>(q)])]) res[static_cast<size_t>(q)] = true;
    return res;
}

/// States that can reach a state of `target` (following any transitions).
inline std::vector<bool> can_reach(const Automaton& a, const std::vector<bool>& target,
                                   const std::vector<bool>* edge_ok = nullptr) {
    std::vector<std::vector<State>> radj(static_cast<size_t>(a.num_states()));
    const auto& ts = a.transitions();
    for (size_t i = 0; i < ts.size(); ++i) {
        if (edge_ok && !(*edge_ok)[i]) continue;
        radj[static_cast<size_t>(ts[i].dst)].push_back(ts[i].src);
    }
    std::vector<bool> seen = target;
    std::vector<State> stack;
    for (State q = 0; q < a.num_states(); ++q)
        if (seen[static_cast<size_t>(q)]) stack.push_back(q);
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (State p : radj[static_cast<size_t>(q)])
            if (!seen[static_cast<size_t>(p)]) {
                seen[static_cast<size_t>(p)] = true;
                stack.push_back(p);
            }
    }
    return seen;
}

} // namespace detail

/// For each state q and flag value, whether some run starting at q can be
/// accepting, where `flag` records the monotone Safety/Reachability status of
/// the run so far: a mark was already taken, which dooms a Safety run and
/// settles a Reachability run. For Buchi/CoBuchi the flag is ignored.
///
/// Used for stuck-terminal winners in the game builders and for the letter
/// game's "monitor can still accept" test.
inline std::vector<bool> accepting_continuation_states(const Automaton& a, bool flag) {
    const auto& ts = a.transitions();
    const int n = a.num_states();
    std::vector<bool> all_edges(ts.size(), true);
    std::vector<bool> unmarked_edges(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) unmarked_edges[i] = !ts[i].mark;

    switch (a.acceptance()) {
        case Acceptance::Safety: {
            if (flag) return std::vector<bool>(static_cast<size_t>(n), false);
            // needs an infinite unmarked path: reach an unmarked cycle via unmarked edges
            auto cyc = detail::on_cycle(a, unmarked_edges);
            return detail::can_reach(a, cyc, &unmarked_edges);
        }
        case Acceptance::Reachability: {
            if (flag) return std::vector<bool>(static_cast<size_t>(n), true);
            std::vector<bool> mark_src(static_cast<size_t>(n), false);
            for (const auto& t : ts)
                if (t.mark) mark_src[static_cast<size_t>(t.src)] = true;
            return detail::can_reach(a, mark_src);
        }
        case Acceptance::Buchi: {
            // reach a cycle through a marked transition
            std::vector<bool> live(static_cast<size_t>(n), false);
            auto comps = detail::sccs_of(n, [&] {
                std::vector<std::vector<State>> adj(static_cast<size_t>(n));
                for (const auto& t : ts) adj[static_cast<size_t>(t.src)].push_back(t.dst);
                return adj;
            }());
            std::vector<int> comp_of(static_cast<size_t>(n), -1);
            for (size_t c = 0; c < comps.size(); ++c)
                for (State q : comps[c]) comp_of[static_cast<size_t>(q)] = static_cast<int>(c);
            for (const auto& t : ts)
                if (t.mark && comp_of[static_cast<size_t>(t.src)] == comp_of[static_cast<size_t>(t.dst)])
                    live[static_cast<size_t>(t.src)] = true;
            // expand to whole components carrying a live mark
            std::vector<bool> comp_live(comps.size(), false);
            for (State q = 0; q < n; ++q)
                if (live[static_cast<size_t>(q)]) comp_live[static_cast<size_t>(comp_of[static_cast<size_t>(q)])] = true;
            std::vector<bool> target(static_cast<size_t>(n), false);
            for (State q = 0; q < n; ++q)
                if (comp_live[static_cast<size_t>(comp_of[static_cast<size_t>(q)])]) target[static_cast<size_t>(q)] = true;
            return detail::can_reach(a, target);
        }
        case Acceptance::CoBuchi: {
            // reach (via anything) a cycle of unmarked transitions
            auto cyc = detail::on_cycle(a, unmarked_edges);
            return detail::can_reach(a, cyc);
        }
    }
    return std::vector<bool>(static_cast<size_t>(n), false);
}

/// Whether a run currently at q with monotone flag `flag` can end up
/// accepting when its next letter is forced to be `committed`. If q has no
/// transition on the letter, the run is maximal as it stands, which accepts
/// exactly in the flagged Reachability case.
inline bool can_accept_committed(const Automaton& a, State q, bool flag, Letter committed,
                                 const std::vector<bool>& cont_flag0,
                                 const std::vector<bool>& cont_flag1) {
    std::vector<int> moves = a.out_on(q, committed);
    if (moves.empty()) return a.acceptance() == Acceptance::Reachability && flag;
    for (int ti : moves) {
        const auto& t = a.transitions()[static_cast<size_t>(ti)];
        bool f2 = flag || t.mark;
        if (a.acceptance() == Acceptance::Reachability && f2) return true;
        if (a.acceptance() == Acceptance::Safety && f2) continue;
        if ((f2 ? cont_flag1 : cont_flag0)[static_cast<size_t>(t.dst)]) return true;
    }
    return false;
}

} // namespace hdg

#endif // HDG_ANALYSIS_HPP
