// Subset determinization for Safety and Reachability automata, used to derive
// letter-game monitors.
//
// Reachability: the subset tracks all states reachable on the prefix; a subset
// transition is marked iff some member transition is marked, which is sound
// because subset members are exactly the reachable states.
//
// Safety: the subset tracks states reachable via unmarked transitions only,
// and a transition exists iff some member has a safe continuation (the
// existential convention). Koenig's lemma turns "every prefix has a safe run"
// into "some infinite safe run", so the languages agree. The output carries no
// marks; empty subsets are dropped, so the result may be partial.

#ifndef HDG_DETERMINIZE_HPP
#define HDG_DETERMINIZE_HPP

#include <map>
#include <vector>

#include "hdg/automaton.hpp"

namespace hdg {

struct DeterminizeResult {
    Automaton aut;
    std::vector<std::vector<State>> subsets; ///< subsets[i] = source states behind state i
};

inline DeterminizeResult subset_determinize(const Automaton& a) {
    if (a.acceptance() != Acceptance::Safety && a.acceptance() != Acceptance::Reachability)
        throw unsupported_error(
            "subset_determinize: only safety and reachability automata are supported");
    const bool safety = a.acceptance() == Acceptance::Safety;

    std::map<std::vector<State>, int> index;
    std::vector<std::vector<State>> subsets;
    auto intern = [&](std::vector<State> s) {
        auto [it, fresh] = index.try_emplace(std::move(s), static_cast<int>(subsets.size()));
        if (fresh) subsets.push_back(it->first);
        return it->second;
    };
    intern({a.initial()});

    std::vector<Transition> ts;
    for (size_t i = 0; i < subsets.size(); ++i) {
        for (Letter x = 0; x < a.alphabet().size(); ++x) {
            std::vector<bool> in_next(static_cast<size_t>(a.num_states()), false);
            bool any_mark = false;
            for (State q : subsets[i]) {
                for (int ti : a.out_on(q, x)) {
                    const auto& t = a.transitions()[static_cast<size_t>(ti)];
                    if (safety && t.mark) continue; // only safe continuations survive
                    in_next[static_cast<size_t>(t.dst)] = true;
                    if (t.mark) any_mark = true;
                }
            }
            std::vector<State> next;
            for (State q = 0; q < a.num_states(); ++q)
                if (in_next[static_cast<size_t>(q)]) next.push_back(q);
            if (next.empty()) continue; // dead end; rejecting in both modes
            int j = intern(std::move(next));
            ts.push_back({static_cast<State>(i), x, static_cast<State>(j),
                          safety ? false : any_mark});
        }
    }
    DeterminizeResult r{Automaton(a.alphabet(), static_cast<int>(subsets.size()), 0,
                                  std::move(ts), a.acceptance(),
                                  a.name().empty() ? "" : a.name() + "-det"),
                        std::move(subsets)};
    return r;
}

/// Deterministic, complete, language-equal monitor for a safety or
/// reachability automaton: subset determinization plus a rejecting sink.
inline Automaton derive_monitor(const Automaton& a) {
    return totalize(subset_determinize(a).aut);
}

} // namespace hdg

#endif // HDG_DETERMINIZE_HPP
