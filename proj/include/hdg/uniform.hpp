// Uniform automata: finite control over an abstract content space (stacks,
// counter vectors, Parikh images) with partial update functions. Semantics
// come in three flavors: safety (control and content stay accepting forever),
// synchronous reachability (both accepting at the same moment) and
// asynchronous reachability (each accepting at some moment, not necessarily
// together). Everything is analyzed through bounded expansion into the core
// automaton form: pairs (state, content) plus a rejecting out-of-bound sink,
// with epsilon steps collapsed into the lettered transitions.

#ifndef HDG_UNIFORM_HPP
#define HDG_UNIFORM_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "automaton.hpp"
#include "errors.hpp"

namespace hdg {

/// Content values are vectors: counter values, Parikh images, or a stack read
/// bottom-up as symbol indices (empty vector = bottom only).
using Content = std::vector<long long>;

/// Canonical serialization, the hashing key for contents.
inline std::string content_key(const Content& c) {
    if (c.empty()) return "_";
    std::string s;
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i]);
    }
    return s;
}

/// Finite union of linear sets base + N-combinations of period vectors.
struct SemilinearSet {
    struct Component {
        Content base;
        std::vector<Content> periods;
    };
    std::vector<Component> components;
};

namespace detail {

inline bool cone_member(const std::vector<Content>& periods, size_t i, Content rest) {
    bool zero = true;
    for (long long x : rest) zero = zero && x == 0;
    if (zero) return true;
    if (i == periods.size()) return false;
    const Content& p = periods[i];
    long long hi = -1; // max multiplier before some coordinate goes negative
    for (size_t j = 0; j < p.size(); ++j)
        if (p[j] > 0) hi = hi < 0 ? rest[j] / p[j] : std::min(hi, rest[j] / p[j]);
    if (hi < 0) return cone_member(periods, i + 1, std::move(rest)); // all-zero period
    for (long long k = 0; k <= hi; ++k) {
        Content r = rest;
        for (size_t j = 0; j < p.size(); ++j) r[j] -= k * p[j];
        if (cone_member(periods, i + 1, std::move(r))) return true;
    }
    return false;
}

} // namespace detail

/// Exact membership; period coefficients are bounded by the target's own
/// coordinates, so the search always terminates.
inline bool semilinear_member(const SemilinearSet& s, const Content& v) {
    for (const auto& comp : s.components) {
        if (comp.base.size() != v.size()) continue;
        Content rest(v.size());
        bool ok = true;
        for (size_t j = 0; j < v.size(); ++j) {
            rest[j] = v[j] - comp.base[j];
            ok = ok && rest[j] >= 0;
        }
        if (ok && detail::cone_member(comp.periods, 0, std::move(rest))) return true;
    }
    return false;
}

using UpdateFn = std::function<std::optional<Content>(const Content&)>;

/// A content space: initial content, a library of named partial updates
/// (always containing the identity "id"), the accepting-content predicate and
/// the per-bound truncation predicate. The descriptive fields carry enough to
/// serialize the space.
struct ContentSpace {
    std::string kind; // "counter" | "pda" | "parikh"
    Content initial;
    std::vector<std::string> update_names;
    std::map<std::string, UpdateFn> updates;
    std::function<bool(const Content&)> accepting;
    std::function<bool(const Content&, int)> within;

    int dimension = 0;                      // counter, parikh
    std::vector<std::string> stack_symbols; // pda
    SemilinearSet accepting_set;            // parikh

    const UpdateFn& update(const std::string& name) const {
        auto it = updates.find(name);
        if (it == updates.end())
            throw input_error("content space: unknown update '" + name + "'");
        return it->second;
    }
};

namespace detail {

inline void add_update(ContentSpace& s, const std::string& name, UpdateFn f) {
    s.update_names.push_back(name);
    s.updates[name] = std::move(f);
}

} // namespace detail

/// Vectors over N^d; update +-e_i per coordinate, decrements undefined where
/// they would leave N^d. Accepting content is the zero vector.
inline ContentSpace counter_space(int d) {
    if (d < 1) throw input_error("counter_space: dimension must be positive");
    ContentSpace s;
    s.kind = "counter";
    s.dimension = d;
    s.initial = Content(static_cast<size_t>(d), 0);
    detail::add_update(s, "id", [](const Content& c) { return c; });
    for (int i = 0; i < d; ++i) {
        detail::add_update(s, "inc" + std::to_string(i), [i](const Content& c) {
            Content r = c;
            r[static_cast<size_t>(i)]++;
            return r;
        });
        detail::add_update(s, "dec" + std::to_string(i),
                           [i](const Content& c) -> std::optional<Content> {
                               if (c[static_cast<size_t>(i)] == 0) return std::nullopt;
                               Content r = c;
                               r[static_cast<size_t>(i)]--;
                               return r;
                           });
    }
    s.accepting = [](const Content& c) {
        return std::all_of(c.begin(), c.end(), [](long long x) { return x == 0; });
    };
    s.within = [](const Content& c, int bound) {
        return std::all_of(c.begin(), c.end(),
                           [bound](long long x) { return x <= bound; });
    };
    return s;
}

/// Stacks over a finite symbol set; push is total, pop is defined only when
/// its symbol is on top (and so undefined on the bare bottom). Accepting
/// content is the empty stack.
inline ContentSpace pda_space(const std::vector<std::string>& gamma) {
    if (gamma.empty()) throw input_error("pda_space: empty stack alphabet");
    ContentSpace s;
    s.kind = "pda";
    s.stack_symbols = gamma;
    detail::add_update(s, "id", [](const Content& c) { return c; });
    for (size_t i = 0; i < gamma.size(); ++i) {
        if (gamma[i].empty()) throw input_error("pda_space: empty stack symbol name");
        for (size_t j = 0; j < i; ++j)
            if (gamma[j] == gamma[i])
                throw input_error("pda_space: duplicate stack symbol '" + gamma[i] + "'");
        long long x = static_cast<long long>(i);
        detail::add_update(s, "push_" + gamma[i], [x](const Content& c) {
            Content r = c;
            r.push_back(x);
            return r;
        });
        detail::add_update(s, "pop_" + gamma[i],
                           [x](const Content& c) -> std::optional<Content> {
                               if (c.empty() || c.back() != x) return std::nullopt;
                               Content r = c;
                               r.pop_back();
                               return r;
                           });
    }
    s.accepting = [](const Content& c) { return c.empty(); };
    s.within = [](const Content& c, int bound) {
        return c.size() <= static_cast<size_t>(bound);
    };
    return s;
}

/// Vectors over N^d with increments only (all updates total); accepting
/// content is membership in the given semilinear set.
inline ContentSpace parikh_space(int d, SemilinearSet acc) {
    if (d < 1) throw input_error("parikh_space: dimension must be positive");
    for (const auto& comp : acc.components) {
        if (comp.base.size() != static_cast<size_t>(d))
            throw input_error("parikh_space: malformed semilinear set");
        for (const Content& p : comp.periods) {
            if (p.size() != static_cast<size_t>(d))
                throw input_error("parikh_space: malformed semilinear set");
            for (long long x : p)
                if (x < 0) throw input_error("parikh_space: malformed semilinear set");
        }
        for (long long x : comp.base)
            if (x < 0) throw input_error("parikh_space: malformed semilinear set");
    }
    ContentSpace s;
    s.kind = "parikh";
    s.dimension = d;
    s.initial = Content(static_cast<size_t>(d), 0);
    s.accepting_set = acc;
    detail::add_update(s, "id", [](const Content& c) { return c; });
    for (int i = 0; i < d; ++i)
        detail::add_update(s, "inc" + std::to_string(i), [i](const Content& c) {
            Content r = c;
            r[static_cast<size_t>(i)]++;
            return r;
        });
    s.accepting = [acc = std::move(acc)](const Content& c) {
        return semilinear_member(acc, c);
    };
    s.within = [](const Content& c, int bound) {
        return std::all_of(c.begin(), c.end(),
                           [bound](long long x) { return x <= bound; });
    };
    return s;
}

/// Letter value standing for an epsilon step in uniform transitions.
inline constexpr Letter epsilon_letter = -1;

struct UniformTransition {
    State src = -1;
    Letter letter = epsilon_letter;
    std::string update;
    State dst = -1;
};

enum class UniformSemantics { Safety, SyncReach, AsyncReach };

struct UniformAutomaton {
    Alphabet alphabet;
    int num_states = 0;
    State initial = 0;
    std::vector<UniformTransition> transitions;
    std::vector<bool> accepting; // F_A, per state
    UniformSemantics semantics = UniformSemantics::Safety;
    ContentSpace space;
    std::string name;
};

inline void validate_uniform(const UniformAutomaton& u) {
    if (u.num_states <= 0) throw input_error("uniform automaton: needs at least one state");
    if (u.initial < 0 || u.initial >= u.num_states)
        throw input_error("uniform automaton: initial state out of range");
    if (u.accepting.size() != static_cast<size_t>(u.num_states))
        throw input_error("uniform automaton: accepting-state vector size mismatch");
    if (u.space.updates.find("id") == u.space.updates.end())
        throw input_error("uniform automaton: content space lacks the identity update");
    for (const auto& t : u.transitions) {
        if (t.src < 0 || t.src >= u.num_states || t.dst < 0 || t.dst >= u.num_states)
            throw input_error("uniform automaton: transition endpoint out of range");
        if (t.letter != epsilon_letter && (t.letter < 0 || t.letter >= u.alphabet.size()))
            throw input_error("uniform automaton: transition letter out of range");
        u.space.update(t.update); // resolves or throws
    }
}

/// A bounded expansion: core-form automaton over reachable (state, content)
/// pairs within the bound, plus a rejecting sink absorbing every step that
/// would leave it. state_of is -1 at the sink.
struct BoundedLts {
    Automaton automaton;
    std::vector<State> state_of;
    std::vector<Content> content_of;
    int sink = -1;
};

namespace detail {

struct UniformEdge {
    int src;
    Letter letter;
    int dst;
    unsigned mask;
};

struct UniformGraph {
    std::vector<State> state_of;
    std::vector<Content> content_of;
    std::vector<UniformEdge> edges;
    int initial = 0;
    int sink = -1;
    unsigned initial_mask = 0;
    /// Bitset over hit masks a run can accumulate by epsilon steps alone,
    /// before its first letter: bit (1 << m) is set iff some closure item of
    /// the initial pair carries exactly mask m.
    unsigned init_stall = 0;
};

struct ClosureItem {
    State q; // -1 once out of bound
    Content c;
    unsigned mask;
};

/// Epsilon closure from one pair, accumulating the hit mask over every pair
/// visited (the start included). Saturation is cycle-free: items are deduped
/// on (state, content, mask), and exploring more distinct pairs than the
/// budget aborts with a diagnostic.
inline std::vector<ClosureItem> eps_closure(
    const UniformAutomaton& u, int bound, State q0, const Content& c0,
    const std::function<unsigned(State, const Content&)>& hit, int budget) {
    std::set<std::tuple<State, std::string, unsigned>> seen;
    std::set<std::pair<State, std::string>> pairs;
    std::vector<ClosureItem> out;
    std::vector<ClosureItem> work{{q0, c0, hit(q0, c0)}};
    seen.insert({q0, content_key(c0), work[0].mask});
    pairs.insert({q0, content_key(c0)});
    while (!work.empty()) {
        ClosureItem it = std::move(work.back());
        work.pop_back();
        out.push_back(it);
        if (it.q < 0) continue; // the sink absorbs
        for (const UniformTransition& t : u.transitions) {
            if (t.src != it.q || t.letter != epsilon_letter) continue;
            auto c2 = u.space.update(t.update)(it.c);
            if (!c2) continue; // undefined update: no step at all
            State q2 = t.dst;
            Content cc = std::move(*c2);
            if (!u.space.within(cc, bound)) {
                q2 = -1;
                cc.clear();
            }
            unsigned m2 = it.mask | hit(q2, cc);
            if (!seen.insert({q2, content_key(cc), m2}).second) continue;
            if (pairs.insert({q2, content_key(cc)}).second &&
                static_cast<int>(pairs.size()) > budget)
                throw unsupported_error(
                    "expand_bounded: epsilon closure exceeded its budget (content-changing "
                    "epsilon cycle?)");
            work.push_back({q2, std::move(cc), m2});
        }
    }
    return out;
}

/// Reachable pairs under the bound with epsilon steps folded into the
/// lettered edges; each edge's mask is the OR of the hit masks of every pair
/// its collapsed path visits, endpoints included.
inline UniformGraph expand_pairs(const UniformAutomaton& u, int bound,
                                 const std::function<unsigned(State, const Content&)>& hit) {
    validate_uniform(u);
    if (bound < 0) throw input_error("expand_bounded: bound must be >= 0");
    const int budget = u.num_states * (bound + 2);

    UniformGraph g;
    std::map<std::pair<State, std::string>, int> id_of;
    auto intern = [&](State q, const Content& c) {
        auto [it, fresh] = id_of.try_emplace({q, content_key(c)},
                                             static_cast<int>(g.state_of.size()));
        if (fresh) {
            g.state_of.push_back(q);
            g.content_of.push_back(c);
        }
        return it->second;
    };
    std::set<std::tuple<int, Letter, int, unsigned>> dedup;
    auto add_edge = [&](int src, Letter x, int dst, unsigned mask) {
        if (dedup.insert({src, x, dst, mask}).second) g.edges.push_back({src, x, dst, mask});
    };

    State q0 = u.initial;
    Content c0 = u.space.initial;
    if (!u.space.within(c0, bound)) {
        q0 = -1;
        c0.clear();
    }
    g.initial = intern(q0, c0);
    g.initial_mask = hit(q0, c0);

    for (int v = 0; v < static_cast<int>(g.state_of.size()); ++v) {
        State q = g.state_of[static_cast<size_t>(v)];
        if (q < 0) {
            g.sink = v;
            if (v == g.initial) g.init_stall |= 1u << hit(-1, {});
            for (Letter x = 0; x < u.alphabet.size(); ++x)
                add_edge(v, x, v, hit(-1, {}));
            continue;
        }
        const std::vector<ClosureItem> c1 =
            eps_closure(u, bound, q, g.content_of[static_cast<size_t>(v)], hit, budget);
        if (v == g.initial)
            for (const ClosureItem& i : c1) g.init_stall |= 1u << i.mask;
        for (const ClosureItem& i1 : c1) {
            if (i1.q < 0) {
                // the run slid out of bound on epsilon steps alone
                int sid = intern(-1, {});
                for (Letter x = 0; x < u.alphabet.size(); ++x) add_edge(v, x, sid, i1.mask);
                continue;
            }
            for (const UniformTransition& t : u.transitions) {
                if (t.src != i1.q || t.letter == epsilon_letter) continue;
                auto c2 = u.space.update(t.update)(i1.c);
                if (!c2) continue;
                if (!u.space.within(*c2, bound)) {
                    int sid = intern(-1, {});
                    add_edge(v, t.letter, sid, i1.mask | hit(-1, {}));
                    continue;
                }
                for (const ClosureItem& i3 : eps_closure(u, bound, t.dst, *c2, hit, budget)) {
                    int did = i3.q < 0 ? intern(-1, {}) : intern(i3.q, i3.c);
                    add_edge(v, t.letter, did, i1.mask | i3.mask);
                }
            }
        }
    }
    if (g.sink < 0) {
        g.sink = intern(-1, {});
        for (Letter x = 0; x < u.alphabet.size(); ++x)
            g.edges.push_back({g.sink, x, g.sink, hit(-1, {})});
    }
    return g;
}

inline std::vector<std::string> pair_names(const UniformGraph& g) {
    std::vector<std::string> names;
    for (size_t i = 0; i < g.state_of.size(); ++i)
        names.push_back(g.state_of[i] < 0
                            ? "sink"
                            : std::to_string(g.state_of[i]) + "@" + content_key(g.content_of[i]));
    return names;
}

} // namespace detail

/// Bounded expansion under safety or synchronous-reachability semantics.
/// Safety marks every edge whose collapsed path visits a pair violating
/// F_A/F_C (the sink included); sync-reach marks every edge whose path visits
/// a pair satisfying both at once.
inline BoundedLts expand_bounded(const UniformAutomaton& u, int bound) {
    if (u.semantics == UniformSemantics::AsyncReach)
        throw input_error("expand_bounded: async-reach semantics expands via flag_product");
    const bool reach = u.semantics == UniformSemantics::SyncReach;
    auto hit = [&](State q, const Content& c) -> unsigned {
        if (q < 0) return reach ? 0u : 1u; // sink: never good, always bad
        bool good = u.accepting[static_cast<size_t>(q)] && u.space.accepting(c);
        return (reach ? good : !good) ? 1u : 0u;
    };
    detail::UniformGraph g = detail::expand_pairs(u, bound, hit);
    std::vector<Transition> ts;
    for (const auto& e : g.edges) ts.push_back({e.src, e.letter, e.dst, (e.mask & 1u) != 0});
    // A sync-reach run may visit an accepting pair by epsilon steps alone and
    // then die on the first letter. Deeper in the graph such runs ride on the
    // marked edge that reached them, but the initial pair has no incoming
    // edge, so it accepts every word outright.
    if (reach && (g.init_stall & (1u << 1)))
        for (Letter x = 0; x < u.alphabet.size(); ++x)
            ts.push_back({g.initial, x, g.sink, true});
    BoundedLts lts;
    lts.automaton = Automaton(u.alphabet, static_cast<int>(g.state_of.size()), g.initial,
                              std::move(ts), reach ? Acceptance::Reachability : Acceptance::Safety,
                              (u.name.empty() ? "bounded" : u.name) + "-b" + std::to_string(bound),
                              detail::pair_names(g));
    lts.state_of = std::move(g.state_of);
    lts.content_of = std::move(g.content_of);
    lts.sink = g.sink;
    return lts;
}

/// Asynchronous reachability via two monotone flags: product states are
/// (state, content, seen-F_A, seen-F_C) and an edge is marked exactly when it
/// enters or stays inside the both-flags-set region. The result behaves like
/// a sync-reach expansion of the flagged product.
inline BoundedLts flag_product(const UniformAutomaton& u, int bound) {
    if (u.semantics != UniformSemantics::AsyncReach)
        throw input_error("flag_product: semantics must be async-reach");
    auto hit = [&](State q, const Content& c) -> unsigned {
        if (q < 0) return 0u;
        return (u.accepting[static_cast<size_t>(q)] ? 1u : 0u) |
               (u.space.accepting(c) ? 2u : 0u);
    };
    detail::UniformGraph g = detail::expand_pairs(u, bound, hit);
    std::vector<std::vector<int>> out(g.state_of.size());
    for (size_t i = 0; i < g.edges.size(); ++i)
        out[static_cast<size_t>(g.edges[i].src)].push_back(static_cast<int>(i));

    std::map<std::pair<int, unsigned>, int> id_of;
    std::vector<std::pair<int, unsigned>> nodes;
    auto intern = [&](int v, unsigned m) {
        auto [it, fresh] = id_of.try_emplace({v, m}, static_cast<int>(nodes.size()));
        if (fresh) nodes.emplace_back(v, m);
        return it->second;
    };
    intern(g.initial, g.initial_mask & 3u);
    std::vector<Transition> ts;
    // both flags attainable before the first letter: accept everything
    if (g.init_stall & (1u << 3))
        for (Letter x = 0; x < u.alphabet.size(); ++x)
            ts.push_back({0, x, intern(g.sink, 3u), true});
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        auto [v, m] = nodes[static_cast<size_t>(i)];
        for (int ei : out[static_cast<size_t>(v)]) {
            const auto& e = g.edges[static_cast<size_t>(ei)];
            unsigned m2 = m | (e.mask & 3u);
            ts.push_back({i, e.letter, intern(e.dst, m2), m2 == 3u});
        }
    }
    BoundedLts lts;
    lts.sink = -1;
    std::vector<std::string> base = detail::pair_names(g);
    std::vector<std::string> names;
    for (auto [v, m] : nodes) {
        names.push_back(base[static_cast<size_t>(v)] + "|" + ((m & 1u) ? "1" : "0") +
                        ((m & 2u) ? "1" : "0"));
        lts.state_of.push_back(g.state_of[static_cast<size_t>(v)]);
        lts.content_of.push_back(g.content_of[static_cast<size_t>(v)]);
        if (g.state_of[static_cast<size_t>(v)] < 0 && lts.sink < 0)
            lts.sink = static_cast<int>(lts.state_of.size()) - 1;
    }
    lts.automaton = Automaton(u.alphabet, static_cast<int>(nodes.size()), 0, std::move(ts),
                              Acceptance::Reachability,
                              (u.name.empty() ? "flags" : u.name) + "-flags-b" +
                                  std::to_string(bound),
                              std::move(names));
    return lts;
}

/// One-letter-lag ghost at the uniform level: states (Q x Sigma) plus a fresh
/// start, the start moves with the identity update, lettered transitions are
/// taken one letter late, and epsilon transitions stay epsilon with the
/// stored letter untouched.
inline UniformAutomaton delay_uniform(const UniformAutomaton& u) {
    validate_uniform(u);
    const int k = u.alphabet.size();
    auto pair_id = [k](State q, Letter x) { return 1 + q * k + x; };
    UniformAutomaton d;
    d.alphabet = u.alphabet;
    d.num_states = u.num_states * k + 1;
    d.initial = 0;
    d.semantics = u.semantics;
    d.space = u.space;
    d.name = u.name.empty() ? "delay" : u.name + "-delay";
    d.accepting.assign(static_cast<size_t>(d.num_states), false);
    d.accepting[0] = u.accepting[static_cast<size_t>(u.initial)];
    for (State q = 0; q < u.num_states; ++q)
        for (Letter x = 0; x < k; ++x)
            d.accepting[static_cast<size_t>(pair_id(q, x))] =
                u.accepting[static_cast<size_t>(q)];
    for (Letter x = 0; x < k; ++x)
        d.transitions.push_back({0, x, "id", pair_id(u.initial, x)});
    for (const UniformTransition& t : u.transitions) {
        if (t.letter == epsilon_letter) {
            for (Letter x = 0; x < k; ++x)
                d.transitions.push_back(
                    {pair_id(t.src, x), epsilon_letter, t.update, pair_id(t.dst, x)});
        } else {
            for (Letter x2 = 0; x2 < k; ++x2)
                d.transitions.push_back(
                    {pair_id(t.src, t.letter), x2, t.update, pair_id(t.dst, x2)});
        }
    }
    return d;
}

} // namespace hdg

#endif // HDG_UNIFORM_HPP
