#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "hdg/determinize.hpp"
#include "hdg/gallery.hpp"
#include "hdg/spoiler.hpp"

#include "model_fixtures.hpp"

using namespace hdg;

namespace {

const Acceptance all_modes[4] = {Acceptance::Safety, Acceptance::Reachability,
                                 Acceptance::Buchi, Acceptance::CoBuchi};

} // namespace

TEST_CASE("adam's letter-game strategy reads back as a transducer") {
    // fig3(1): Adam can only win by declaring b while Eve waits on the first
    // state (a cycle declaring any a spells infinitely many a's, which Eve
    // wins) and punishing a move to the marked state with an a, where Eve has
    // no transition at all.
    LetterGameResult lg = solve_letter_game({fig3(1), fin_a_monitor()});
    REQUIRE(lg.result.winner_of(lg.game.arena.initial()) == Player::Adam);
    StrategyTransducer tr = extract_adam_strategy(lg);
    const Automaton f = fig3(1);
    REQUIRE(tr.sigma == f.alphabet());
    REQUIRE(tr.delta.size() == static_cast<int>(f.transitions().size()));
    REQUIRE(tr.q_of[static_cast<size_t>(tr.initial)] == 0);

    const Letter b = 1;
    for (size_t s = 0; s < tr.gamma.size(); ++s) {
        // totality: one successor per answer Eve has
        REQUIRE(tr.next[s].size() == f.out_on(tr.q_of[s], tr.gamma[s]).size());
        if (tr.q_of[s] == 1) {
            REQUIRE(tr.gamma[s] == 0);
            REQUIRE(tr.next[s].empty());
        }
    }

    // follow the play where Eve keeps her token on the first state: the
    // memory cycle it runs into must declare b only
    std::vector<int> seen(tr.gamma.size(), -1);
    int m = tr.initial;
    int step = 0;
    while (seen[static_cast<size_t>(m)] < 0) {
        seen[static_cast<size_t>(m)] = step++;
        int self = -1;
        for (int ti : f.out_on(tr.q_of[static_cast<size_t>(m)], tr.gamma[static_cast<size_t>(m)]))
            if (f.transitions()[static_cast<size_t>(ti)].dst == tr.q_of[static_cast<size_t>(m)])
                self = ti;
        REQUIRE(self >= 0);
        m = tr.next[static_cast<size_t>(m)].at(self);
    }
    for (size_t s = 0; s < tr.gamma.size(); ++s)
        if (seen[s] >= seen[static_cast<size_t>(m)]) REQUIRE(tr.gamma[s] == b);

    // a history-deterministic subject leaves nothing to extract
    REQUIRE_THROWS_AS(extract_adam_strategy(solve_letter_game({inf_a(), inf_a()})),
                      no_strategy_error);

    StrategyTransducer t2 = extract_adam_strategy(solve_letter_game({fig2(), fig2_monitor()}));
    REQUIRE(!t2.gamma.empty());
}

namespace {

// Random-walks the plays automaton into lasso-shaped plays and checks the
// promised invariant on each: the play is a run of the subject that rejects,
// on a word the monitor accepts. Returns false when Eve wins the letter game
// and there is no strategy to check.
bool check_plays(const Automaton& a, const Automaton& m, std::mt19937_64& rng) {
    LetterGameResult lg = solve_letter_game({a, m});
    if (lg.result.winner_of(lg.game.arena.initial()) == Player::Eve) return false;
    StrategyTransducer tr = extract_adam_strategy(lg);
    PlaysAutomaton plays = strategy_monitor_product(tr, a);
    const Automaton& n = plays.automaton;
    REQUIRE(n.is_deterministic());
    REQUIRE(n.acceptance() == Acceptance::Safety);
    for (const Transition& t : n.transitions()) REQUIRE(!t.mark);
    REQUIRE(n.num_states() <= lg.game.arena.num_nodes());

    for (int w = 0; w < 25; ++w) {
        std::vector<int> seen(static_cast<size_t>(n.num_states()), -1);
        std::vector<int> word; // transition indices of n
        State at = n.initial();
        while (seen[static_cast<size_t>(at)] < 0) {
            seen[static_cast<size_t>(at)] = static_cast<int>(word.size());
            const auto& out = n.out(at);
            if (out.empty()) break; // Eve was left stuck: the play is over
            int ti = out[rng() % out.size()];
            word.push_back(ti);
            at = n.transitions()[static_cast<size_t>(ti)].dst;
        }
        if (!n.out(at).empty()) {
            int cut = seen[static_cast<size_t>(at)];
            State q = a.initial();
            bool pre_mark = false, cyc_mark = false;
            Lasso sigma_word;
            for (size_t i = 0; i < word.size(); ++i) {
                const Transition& nt = n.transitions()[static_cast<size_t>(word[i])];
                const Transition& st = a.transitions()[static_cast<size_t>(nt.letter)];
                REQUIRE(st.src == q); // the delta-word chains as a subject run
                q = st.dst;
                bool in_cycle = static_cast<int>(i) >= cut;
                (in_cycle ? cyc_mark : pre_mark) = (in_cycle ? cyc_mark : pre_mark) || st.mark;
                (in_cycle ? sigma_word.cycle : sigma_word.prefix)
                    .push_back(plays.letter_of[static_cast<size_t>(nt.letter)]);
            }
            bool accept = false;
            switch (a.acceptance()) {
                case Acceptance::Safety: accept = !pre_mark && !cyc_mark; break;
                case Acceptance::Reachability: accept = pre_mark || cyc_mark; break;
                case Acceptance::Buchi: accept = cyc_mark; break;
                case Acceptance::CoBuchi: accept = !cyc_mark; break;
            }
            REQUIRE(!accept);
            REQUIRE(lasso_membership(m, sigma_word));
        }
    }
    return true;
}

} // namespace

TEST_CASE("the plays automaton collects exactly adam's winning plays") {
    std::mt19937_64 rng(9090);
    REQUIRE(check_plays(fig3(1), fin_a_monitor(), rng));
    REQUIRE(check_plays(fig2(), fig2_monitor(), rng));

    int spoiled = 0;
    for (int i = 0; i < 60 && spoiled < 12; ++i) {
        Automaton a = fixtures::random_automaton(
            rng, 5, 3, i % 2 ? Acceptance::Safety : Acceptance::Reachability);
        if (check_plays(a, derive_monitor(a), rng)) spoiled++;
    }
    REQUIRE(spoiled >= 5);
}

TEST_CASE("projection relabels the plays by their letters") {
    LetterGameResult lg = solve_letter_game({fig3(1), fin_a_monitor()});
    PlaysAutomaton p = strategy_monitor_product(extract_adam_strategy(lg), fig3(1));
    Automaton n = project_to_sigma(p);
    REQUIRE(n.alphabet() == fig3(1).alphabet());
    REQUIRE(n.num_states() == p.automaton.num_states());
    REQUIRE(n.initial() == p.automaton.initial());
    REQUIRE(n.acceptance() == Acceptance::Safety);
    // every waiting memory offers Eve two answers on the same letter
    REQUIRE(!n.is_deterministic());

    std::set<std::tuple<State, Letter, State>> want, got;
    for (const Transition& t : p.automaton.transitions())
        want.insert({t.src, p.letter_of[static_cast<size_t>(t.letter)], t.dst});
    for (const Transition& t : n.transitions()) got.insert({t.src, t.letter, t.dst});
    REQUIRE(want == got);

    // stale transducer against a different subject
    REQUIRE_THROWS_AS(strategy_monitor_product(extract_adam_strategy(lg), fig3(2)),
                      input_error);
}

TEST_CASE("witness lassos are accepting continuations") {
    // buchi: the only marked edges of the fig2 monitor sit on its sealed state
    Automaton m2 = fig2_monitor();
    auto w = witness_lasso(m2, 0, false);
    REQUIRE(w.has_value());
    REQUIRE(w->cycle.size() == 1);
    REQUIRE(lasso_membership(m2, *w));
    REQUIRE(!witness_lasso(m2, 4, false).has_value()); // the sink never accepts

    // cobuchi: the witness stops touching the marked a-loop
    auto wf = witness_lasso(fin_a_monitor(), 0, true);
    REQUIRE(wf.has_value());
    REQUIRE(wf->cycle == std::vector<Letter>{1});

    // safety: a taken mark is fatal, otherwise stay on unmarked edges
    Automaton s(Alphabet({"a", "b"}), 2, 0,
                {{0, 0, 1, true}, {0, 1, 0, false}, {1, 0, 1, false}}, Acceptance::Safety, "s");
    REQUIRE(!witness_lasso(s, 0, true).has_value());
    auto ws = witness_lasso(s, 0, false);
    REQUIRE(ws.has_value());
    REQUIRE(lasso_membership(s, *ws));
    REQUIRE(witness_lasso(s, 1, false).has_value());

    // reachability: the mark must still be taken while the flag is down
    Automaton r(Alphabet({"a", "b"}), 2, 0,
                {{0, 1, 0, false}, {0, 0, 1, true}, {1, 1, 1, false}},
                Acceptance::Reachability, "r");
    auto wr = witness_lasso(r, 0, false);
    REQUIRE(wr.has_value());
    REQUIRE(lasso_membership(r, *wr));
    Automaton r2(Alphabet({"a"}), 1, 0, {{0, 0, 0, false}}, Acceptance::Reachability, "r2");
    REQUIRE(!witness_lasso(r2, 0, false).has_value());
    REQUIRE(witness_lasso(r2, 0, true).has_value());

    // a run stuck right after its mark accepts, but no infinite word does;
    // on complete automata (the only ones the pipeline hands over) the two
    // notions coincide
    Automaton stuck(Alphabet({"a"}), 2, 0, {{0, 0, 1, true}}, Acceptance::Reachability, "stuck");
    REQUIRE(!witness_lasso(stuck, 0, false).has_value());
    REQUIRE(accepting_continuation_states(stuck, false)[0]);

    // existence agrees with the continuation table on complete automata
    std::mt19937_64 rng(777);
    for (int i = 0; i < 200; ++i) {
        Automaton a = totalize(fixtures::random_automaton(rng, 5, 3, all_modes[i % 4]));
        for (bool flag : {false, true}) {
            auto cont = accepting_continuation_states(a, flag);
            for (State q = 0; q < a.num_states(); ++q) {
                auto l = witness_lasso(a, q, flag);
                REQUIRE(l.has_value() == cont[static_cast<size_t>(q)]);
                if (l && !flag) {
                    Automaton from_q(a.alphabet(), a.num_states(), q, a.transitions(),
                                     a.acceptance(), "w");
                    REQUIRE(lasso_membership(from_q, *l));
                }
            }
        }
    }
}

TEST_CASE("linearize unrolls class cycles into layers") {
    Alphabet sigma({"a", "b", "c", "d"});
    Automaton subject(sigma, 2, 0,
                      {{0, 0, 0, false}, {0, 1, 0, false}, {0, 2, 1, false}, {1, 3, 1, false}},
                      Acceptance::Safety, "subject");
    Automaton n(sigma, 3, 0,
                {{0, 0, 1, false}, {1, 1, 0, false}, {0, 2, 2, false}, {2, 3, 2, false}},
                Acceptance::Safety, "n", {"x0", "x1", "y"});
    Automaton lin = linearize(n, subject, {0, 0, 1});

    // class {x0,x1} carries a two-state cycle: K = 2 * 2^2 = 8, nine layers;
    // class {y} self-loops: K = 1 * 2^2 = 4, five layers
    REQUIRE(lin.num_states() == 9 + 9 + 5);
    REQUIRE(is_linear(lin));
    REQUIRE(lin.initial() == 0);
    REQUIRE(lin.state_name(0) == "x0#0");
    REQUIRE(lin.name() == "n-linear");

    auto has = [&](State s, Letter x, State d) {
        for (int ti : lin.out(s)) {
            const Transition& t = lin.transitions()[static_cast<size_t>(ti)];
            if (t.letter == x && t.dst == d) return true;
        }
        return false;
    };
    // x0 occupies 0..8, x1 9..17, y 18..22
    for (int i = 0; i < 8; ++i) REQUIRE(has(i, 0, 9 + i + 1)); // a advances a layer
    REQUIRE(has(8, 0, 8));                                     // ...until it traps
    for (int i = 0; i < 8; ++i) REQUIRE(has(9 + i, 1, i + 1));
    REQUIRE(has(17, 1, 17));
    for (int i = 0; i <= 8; ++i) REQUIRE(has(i, 2, 18)); // c leaves from every layer
    for (int i = 0; i < 4; ++i) REQUIRE(has(18 + i, 3, 18 + i + 1));
    REQUIRE(has(22, 3, 22));

    // a cycle through two classes cannot be unrolled
    Automaton bad(sigma, 2, 0, {{0, 0, 1, false}, {1, 1, 0, false}}, Acceptance::Safety, "bad");
    REQUIRE_THROWS_AS(linearize(bad, subject, {0, 1}), input_error);
    // the subject itself must already be linear
    Automaton loopy(sigma, 2, 0, {{0, 0, 1, false}, {1, 1, 0, false}}, Acceptance::Safety);
    REQUIRE_THROWS_AS(linearize(n, loopy, {0, 0, 1}), input_error);
    REQUIRE_THROWS_AS(linearize(n, subject, {0, 0}), input_error);
}

TEST_CASE("the spoiler is contained in the language yet defeats the subject") {
    SpoilerOptions lin;
    lin.linearize = true;
    SpoilerResult r2 = build_spoiler(fig2(), fig2_monitor(), lin);
    REQUIRE(r2.certificate.adam_wins_sim);
    REQUIRE(r2.certificate.inclusion_violations == 0);
    REQUIRE(!r2.certificate.first_violation.has_value());
    REQUIRE(r2.certificate.linear);
    REQUIRE(is_linear(r2.spoiler));
    REQUIRE(r2.spoiler.acceptance() == Acceptance::Safety);
    REQUIRE(r2.spoiler.name() == "fig2-spoiler");

    SpoilerResult r3 = build_spoiler(fig3(1), fin_a_monitor());
    REQUIRE(r3.certificate.adam_wins_sim);
    REQUIRE(r3.certificate.inclusion_violations == 0);

    REQUIRE_THROWS_AS(build_spoiler(inf_a(), inf_a()), no_strategy_error);

    std::mt19937_64 rng(31337);
    int spoiled = 0;
    for (int i = 0; i < 80 && spoiled < 12; ++i) {
        Automaton a = fixtures::random_automaton(
            rng, 5, 3, i % 2 ? Acceptance::Safety : Acceptance::Reachability);
        Automaton m = derive_monitor(a);
        if (eve_wins(build_letter_game({a, m}))) {
            REQUIRE_THROWS_AS(build_spoiler(a, m), no_strategy_error);
            continue;
        }
        REQUIRE(!is_history_deterministic(a)); // the letter game and the one-token game agree
        SpoilerOptions opt;
        opt.lassos = 200;
        SpoilerResult r = build_spoiler(a, m, opt);
        REQUIRE(r.certificate.adam_wins_sim);
        REQUIRE(r.certificate.inclusion_violations == 0);
        spoiled++;
    }
    REQUIRE(spoiled >= 6);
}
