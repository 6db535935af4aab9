#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "hdg/lasso.hpp"
#include "hdg/vpa.hpp"

using namespace hdg;

namespace {

// letters: 0 = u (push), 1 = o (pop), 2 = n (noop)
Vpa make_v(int n, std::vector<std::string> gamma, std::vector<VpaTransition> ts,
           Acceptance acc, std::string name) {
    Vpa v;
    v.alphabet = Alphabet({"u", "o", "n"});
    v.letter_class = {LetterClass::Push, LetterClass::Pop, LetterClass::Noop};
    v.num_states = n;
    v.stack_names = std::move(gamma);
    v.transitions = std::move(ts);
    v.acceptance = acc;
    v.name = std::move(name);
    return v;
}

// deterministic: climbs on u, marks every pop, recovers from q1 at the bottom
Vpa climb() {
    return make_v(2, {"X"},
                  {{0, -1, 0, 0, 0, false},
                   {0, 0, 0, 0, 0, false},
                   {0, 0, 1, -1, 1, true},
                   {1, 0, 1, -1, 1, true},
                   {1, -1, 0, 0, 0, false},
                   {0, -1, 2, -1, 0, false},
                   {1, -1, 2, -1, 0, false}},
                  Acceptance::Buchi, "climb");
}

// like climb, but a pop in q0 may also stay in q0 without the mark
Vpa climb_nd() {
    Vpa v = climb();
    v.transitions.push_back({0, 0, 1, -1, 0, false});
    v.name = "climb-nd";
    return v;
}

int pick(std::mt19937_64& rng, int n) {
    return static_cast<int>(rng() % static_cast<unsigned long long>(n));
}

Vpa random_vpa(std::mt19937_64& rng) {
    const int n = 1 + pick(rng, 3);
    const int m = 1 + pick(rng, 2);
    std::vector<std::string> gamma;
    for (int i = 0; i < m; ++i) gamma.push_back(std::string(1, static_cast<char>('X' + i)));
    const Acceptance modes[] = {Acceptance::Safety, Acceptance::Reachability,
                                Acceptance::Buchi, Acceptance::CoBuchi};
    std::vector<VpaTransition> ts;
    for (State q = 0; q < n; ++q)
        for (Letter x = 0; x < 3; ++x)
            for (int top = x == 1 ? 0 : -1; top < m; ++top) {
                const int coins = pick(rng, 5);
                for (int c = 0; c < (coins >= 4 ? 2 : coins >= 2 ? 1 : 0); ++c) {
                    VpaTransition t{q, top, x, x == 0 ? pick(rng, m) : -1, pick(rng, n),
                                    pick(rng, 3) == 0};
                    bool dup = false;
                    for (const VpaTransition& o : ts)
                        dup = dup || (o.src == t.src && o.top == t.top &&
                                      o.letter == t.letter && o.push_sym == t.push_sym &&
                                      o.dst == t.dst);
                    if (!dup) ts.push_back(t);
                }
            }
    return make_v(n, std::move(gamma), std::move(ts), modes[pick(rng, 4)],
                  "r" + std::to_string(rng() % 1000));
}

// random word whose depth profile stays in [0, maxd] and ends at end_depth
// (any end when negative); falls back to noops when sampling runs dry
std::vector<Letter> depth_word(std::mt19937_64& rng, int len, int maxd, int start_depth,
                               int end_depth) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<Letter> w;
        int d = start_depth;
        bool ok = true;
        for (int i = 0; i < len; ++i) {
            const Letter x = static_cast<Letter>(pick(rng, 3));
            if ((x == 0 && d == maxd) || (x == 1 && d == 0)) {
                ok = false;
                break;
            }
            w.push_back(x);
            d += x == 0 ? 1 : x == 1 ? -1 : 0;
        }
        if (ok && (end_depth < 0 || d == end_depth)) return w;
    }
    return std::vector<Letter>(static_cast<size_t>(len), 2);
}

Lasso well_nested_lasso(std::mt19937_64& rng) {
    const int pd = pick(rng, 4);
    Lasso l;
    l.prefix = depth_word(rng, pick(rng, 6), 4, 0, pd);
    l.cycle = depth_word(rng, 1 + pick(rng, 5), 4, pd, pd);
    return l;
}

// runs of exactly this length, counted over exact configurations
long long count_runs(const Vpa& v, const std::vector<Letter>& w, int len) {
    std::map<VpaConfig, long long> cur{{{v.initial, {}}, 1}};
    for (int j = 0; j < len; ++j) {
        std::map<VpaConfig, long long> nxt;
        for (const auto& [c, n] : cur)
            for (const auto& [ti, d] : vpa_moves(v, c, w[static_cast<size_t>(j)]))
                nxt[d] += n;
        cur = std::move(nxt);
    }
    long long s = 0;
    for (const auto& [c, n] : cur) s += n;
    return s;
}

// (configuration, lasso position) product; well-nested depth-bounded lassos
// revisit the same configurations at the loop point, so it stays finite
struct LassoProd {
    std::vector<std::pair<VpaConfig, int>> nodes;
    std::vector<std::vector<std::pair<int, bool>>> out; // (successor, marked)
};

LassoProd lasso_prod(const Vpa& v, const Lasso& l) {
    const int plen = static_cast<int>(l.prefix.size());
    const int total = plen + static_cast<int>(l.cycle.size());
    std::map<std::pair<VpaConfig, int>, int> ids;
    LassoProd p;
    auto intern = [&](const VpaConfig& c, int pos) {
        auto [it, fresh] = ids.try_emplace({c, pos}, static_cast<int>(p.nodes.size()));
        if (fresh) {
            p.nodes.emplace_back(c, pos);
            p.out.emplace_back();
        }
        return it->second;
    };
    intern({v.initial, {}}, 0);
    for (int i = 0; i < static_cast<int>(p.nodes.size()); ++i) {
        const auto [c, pos] = p.nodes[static_cast<size_t>(i)];
        const Letter x = pos < plen ? l.prefix[static_cast<size_t>(pos)]
                                    : l.cycle[static_cast<size_t>(pos - plen)];
        const int npos = pos + 1 == total ? plen : pos + 1;
        for (const auto& [ti, d] : vpa_moves(v, c, x)) {
            const int did = intern(d, npos); // may grow p.out: sequence it first
            p.out[static_cast<size_t>(i)].emplace_back(
                did, v.transitions[static_cast<size_t>(ti)].mark);
        }
    }
    return p;
}

// nodes with an infinite path ahead, optionally through unmarked edges only
std::vector<bool> prod_live(const LassoProd& p, bool unmarked_only) {
    std::vector<bool> alive(p.nodes.size(), true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < p.nodes.size(); ++i) {
            if (!alive[i]) continue;
            bool has = false;
            for (const auto& [d, mk] : p.out[i])
                has = has || (alive[static_cast<size_t>(d)] && !(unmarked_only && mk));
            if (!has) {
                alive[i] = false;
                changed = true;
            }
        }
    }
    return alive;
}

std::vector<bool> prod_reach(const LassoProd& p, int from) {
    std::vector<bool> seen(p.nodes.size(), false);
    std::vector<int> st{from};
    seen[static_cast<size_t>(from)] = true;
    while (!st.empty()) {
        const int i = st.back();
        st.pop_back();
        for (const auto& [d, mk] : p.out[static_cast<size_t>(i)])
            if (!seen[static_cast<size_t>(d)]) {
                seen[static_cast<size_t>(d)] = true;
                st.push_back(d);
            }
    }
    return seen;
}

// infinite-run acceptance of the lasso word, decided straight on the product
bool omega_lasso_membership(const Vpa& v, const Lasso& l) {
    const LassoProd p = lasso_prod(v, l);
    const std::vector<bool> r0 = prod_reach(p, 0);
    switch (v.acceptance) {
        case Acceptance::Safety:
            return prod_live(p, true)[0];
        case Acceptance::CoBuchi: {
            const std::vector<bool> calm = prod_live(p, true);
            for (size_t i = 0; i < p.nodes.size(); ++i)
                if (r0[i] && calm[i]) return true;
            return false;
        }
        case Acceptance::Buchi: {
            for (size_t i = 0; i < p.nodes.size(); ++i)
                for (const auto& [d, mk] : p.out[i])
                    if (mk && r0[i] && prod_reach(p, d)[static_cast<size_t>(i)]) return true;
            return false;
        }
        case Acceptance::Reachability: {
            const std::vector<bool> alive = prod_live(p, false);
            for (size_t i = 0; i < p.nodes.size(); ++i)
                for (const auto& [d, mk] : p.out[i])
                    if (mk && r0[i] && alive[static_cast<size_t>(d)]) return true;
            return false;
        }
    }
    return false;
}

} // namespace

TEST_CASE("the ghost lives on the state x letter x stored-symbol grid") {
    const Vpa v = climb();
    const GhostVpa g = vpa_ghost(v);

    REQUIRE(g.vpa.num_states == 24); // 2 states x (3 letters + 1) x (1 symbol + 2)
    REQUIRE(g.vpa.name == "climb-ghost");
    REQUIRE(g.vpa.stack_names == std::vector<std::string>{"X", "bot'"});
    REQUIRE(g.vpa.acceptance == v.acceptance);
    REQUIRE_NOTHROW(validate_vpa(g.vpa));

    REQUIRE(g.vpa.initial == g.state_id(0, 3, 2));
    REQUIRE(g.state_q[static_cast<size_t>(g.vpa.initial)] == 0);
    REQUIRE(g.state_sigma[static_cast<size_t>(g.vpa.initial)] == -1);
    REQUIRE(g.state_x[static_cast<size_t>(g.vpa.initial)] == 2);

    int start_rows = 0;
    for (size_t i = 0; i < g.vpa.transitions.size(); ++i) {
        const VpaTransition& t = g.vpa.transitions[i];
        const LetterClass cls = g.vpa.letter_class[static_cast<size_t>(t.letter)];
        // visibility: the stack effect is the letter's, never the source's
        REQUIRE((t.push_sym >= 0) == (cls == LetterClass::Push));
        // only pop moves fold a second source transition into the step
        REQUIRE((g.source2_of[i] >= 0) == (cls == LetterClass::Pop));
        if (t.src == g.vpa.initial) {
            REQUIRE(cls != LetterClass::Pop); // no pop from an empty stack
            REQUIRE(g.source_of[i] == -1);
            ++start_rows;
        }
        // a move carries a mark exactly when a discharged transition does
        const bool m1 = g.source_of[i] >= 0 &&
                        v.transitions[static_cast<size_t>(g.source_of[i])].mark;
        const bool m2 = g.source2_of[i] >= 0 &&
                        v.transitions[static_cast<size_t>(g.source2_of[i])].mark;
        REQUIRE(t.mark == (m1 || m2));
    }
    REQUIRE(start_rows == 2); // one push letter + one noop letter
}

TEST_CASE("ghost runs are the source runs shifted one letter") {
    std::mt19937_64 rng(72001);
    std::vector<Vpa> pool = {climb(), climb_nd()};
    for (int i = 0; i < 10; ++i) pool.push_back(random_vpa(rng));

    int compared = 0;
    for (const Vpa& v : pool) {
        const GhostVpa g = vpa_ghost(v);
        for (int s = 0; s < 8; ++s) {
            std::vector<Letter> w;
            for (int i = 0; i < 10; ++i) w.push_back(static_cast<Letter>(pick(rng, 3)));
            for (int i = 0; i < static_cast<int>(w.size()); ++i) {
                // a pop letter folds the owed transition and the pop into one
                // move, so at pop positions the shadow has caught all the way
                // up; everywhere else it trails by exactly one letter
                const int src_len = w[static_cast<size_t>(i)] == 1 ? i + 1 : i;
                REQUIRE(count_runs(v, w, src_len) == count_runs(g.vpa, w, i + 1));
                ++compared;
            }
        }
    }
    REQUIRE(compared > 500);
}

TEST_CASE("the semantic stack bridges the one-letter delay") {
    const Vpa v = climb();
    const GhostVpa g = vpa_ghost(v);

    // after a push letter the actual stack is the whole semantic stack
    VpaConfig c{g.vpa.initial, {}};
    auto m1 = vpa_moves(g.vpa, c, 0);
    REQUIRE(m1.size() == 1);
    c = m1[0].second;
    REQUIRE(c.stack == std::vector<int>{1}); // just the second bottom
    REQUIRE(g.state_x[static_cast<size_t>(c.q)] == 1); // nothing stored
    REQUIRE(g.state_sigma[static_cast<size_t>(c.q)] == 0);

    // a noop one letter later parks the would-be top in the state
    auto m2 = vpa_moves(g.vpa, c, 2);
    REQUIRE(m2.size() == 1);
    REQUIRE(m2[0].second.stack == std::vector<int>{1}); // X stays out of the stack
    REQUIRE(g.state_x[static_cast<size_t>(m2[0].second.q)] == 0); // stored X
    REQUIRE(g.state_q[static_cast<size_t>(m2[0].second.q)] == 0);

    // a pop letter instead folds the owed transition and the pop into one
    // marked move, catching the shadow all the way up
    auto m3 = vpa_moves(g.vpa, c, 1);
    REQUIRE(m3.size() == 1);
    REQUIRE(g.vpa.transitions[static_cast<size_t>(m3[0].first)].mark);
    c = m3[0].second;
    REQUIRE(c.stack.empty());
    REQUIRE(g.state_q[static_cast<size_t>(c.q)] == 1);
    REQUIRE(g.state_sigma[static_cast<size_t>(c.q)] == 1);
    REQUIRE(g.state_x[static_cast<size_t>(c.q)] == 2); // holds bot' again

    // the move after a pop only re-materializes the stored letter
    auto m4 = vpa_moves(g.vpa, c, 0);
    REQUIRE(m4.size() == 1);
    REQUIRE(!g.vpa.transitions[static_cast<size_t>(m4[0].first)].mark);
    c = m4[0].second;
    REQUIRE(c.stack == std::vector<int>{1});
    REQUIRE(g.state_q[static_cast<size_t>(c.q)] == 1); // the source hasn't moved
    REQUIRE(g.state_x[static_cast<size_t>(c.q)] == 1);

    SECTION("sweep over sampled prefixes") {
        std::mt19937_64 rng(72002);
        std::vector<Vpa> pool = {climb(), climb_nd()};
        for (int i = 0; i < 10; ++i) pool.push_back(random_vpa(rng));
        int checked = 0;
        for (const Vpa& x : pool) {
            const GhostVpa gx = vpa_ghost(x);
            for (int s = 0; s < 42; ++s) {
                std::vector<Letter> w = depth_word(rng, 1 + pick(rng, 10), 4, 0, -1);
                if (w.empty()) continue;
                REQUIRE(semantic_stack_check(x, gx, w));
                ++checked;
            }
        }
        REQUIRE(checked >= 500);
    }

    SECTION("words popping an empty stack die on both sides") {
        REQUIRE(semantic_stack_check(v, g, {1, 0}));
        REQUIRE(semantic_stack_check(v, g, {0, 1, 1, 0}));
    }

    SECTION("the prefix must respect the stack bound") {
        std::vector<Letter> tall(10, 0);
        REQUIRE_THROWS_AS(semantic_stack_check(v, g, tall, 8), input_error);
    }
}

TEST_CASE("bounded expansion truncates overflow into a rejecting sink") {
    const Vpa v = climb();
    const BoundedVpa b = vpa_bounded(v, 2);

    REQUIRE(b.automaton.initial() == 0);
    REQUIRE(b.state_of[0] == 0);
    REQUIRE(b.stack_of[0].empty());
    REQUIRE(b.sink >= 0);
    REQUIRE(b.automaton.state_name(0) == "q0|");
    REQUIRE(b.automaton.state_name(b.sink) == "sink");

    // u^w climbs past the bound and drowns; (u o)^w stays below and marks
    REQUIRE(!lasso_membership(b.automaton, Lasso{{}, {0}}));
    REQUIRE(lasso_membership(b.automaton, Lasso{{}, {0, 1}}));

    // an automaton that never pushes needs no sink
    const BoundedVpa flat = vpa_bounded(make_v(1, {"X"}, {{0, -1, 2, -1, 0, false}},
                                               Acceptance::Safety, "flat"),
                                        3);
    REQUIRE(flat.sink == -1);

    REQUIRE_THROWS_AS(vpa_bounded(v, -1), input_error);
}

TEST_CASE("ghost and source accept the same bounded lassos") {
    std::mt19937_64 rng(72003);
    std::vector<Vpa> pool = {climb(), climb_nd()};
    for (int i = 0; i < 50; ++i) pool.push_back(random_vpa(rng));

    for (const Vpa& v : pool) {
        const GhostVpa g = vpa_ghost(v);
        REQUIRE(g.vpa.num_states ==
                v.num_states * (v.alphabet.size() + 1) *
                    (static_cast<int>(v.stack_names.size()) + 2));
        for (int s = 0; s < 6; ++s) {
            const Lasso l = well_nested_lasso(rng);
            REQUIRE(omega_lasso_membership(v, l) == omega_lasso_membership(g.vpa, l));
        }
    }
}

TEST_CASE("the ghost wins the bounded one-token game") {
    std::mt19937_64 rng(72004);
    std::vector<Vpa> pool = {climb(), climb_nd()};
    for (int i = 0; i < 50; ++i) pool.push_back(random_vpa(rng));

    for (const Vpa& v : pool) {
        const VpaG1Report rep = vpa_bounded_g1(vpa_ghost(v), v, 4);
        REQUIRE(rep.eve_wins);
        REQUIRE(rep.depth_bound == 4);
    }

    SECTION("a deterministic source is trivially shadowed") {
        const Vpa v = climb();
        REQUIRE(vpa_bounded_g1(vpa_ghost(v), v, 3).eve_wins);
    }

    SECTION("a starved bound is reported, not hidden") {
        const VpaG1Report rep = vpa_bounded_g1(vpa_ghost(climb()), climb(), 1);
        REQUIRE(rep.bound_limited);
        REQUIRE(rep.eve_wins); // truncation scores against whoever overflows

        const Vpa flat = make_v(1, {"X"}, {{0, -1, 2, -1, 0, false}},
                                Acceptance::Safety, "flat");
        REQUIRE(!vpa_bounded_g1(vpa_ghost(flat), flat, 4).bound_limited);

        REQUIRE_THROWS_AS(vpa_bounded_g1(vpa_ghost(flat), flat, 0), input_error);
    }
}

TEST_CASE("ill-formed descriptions are rejected") {
    Vpa v = climb();
    REQUIRE_NOTHROW(validate_vpa(v));

    Vpa pop_bottom = climb();
    pop_bottom.transitions.push_back({0, -1, 1, -1, 0, false});
    REQUIRE_THROWS_AS(validate_vpa(pop_bottom), input_error);

    Vpa pushless = climb();
    pushless.transitions.push_back({0, -1, 0, -1, 0, false});
    REQUIRE_THROWS_AS(validate_vpa(pushless), input_error);

    Vpa pushy_noop = climb();
    pushy_noop.transitions.push_back({0, -1, 2, 0, 0, false});
    REQUIRE_THROWS_AS(validate_vpa(pushy_noop), input_error);

    Vpa classless = climb();
    classless.letter_class.pop_back();
    REQUIRE_THROWS_AS(validate_vpa(classless), input_error);

    Vpa twins = climb();
    twins.stack_names = {"X", "X"};
    REQUIRE_THROWS_AS(validate_vpa(twins), input_error);

    Vpa lost = climb();
    lost.initial = 9;
    REQUIRE_THROWS_AS(validate_vpa(lost), input_error);
}
