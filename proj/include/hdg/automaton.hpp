// Core automaton model: finite-state automata over finite alphabets with
// acceptance marks on transitions.
//
// Conventions used throughout the library:
//  - Marks sit on transitions. State-marked inputs are encoded by marking
//    every outgoing transition of the marked states (see mark_states()).
//  - Safety:       a run is accepting iff it is infinite and never takes a
//                  marked transition (marks are the unsafe events).
//  - Reachability: a run is accepting iff it takes a marked transition at
//                  some point; a finite maximal run that already took a mark
//                  is accepting too.
//  - Buchi:        infinite run, marked transitions infinitely often.
//  - CoBuchi:      infinite run, finitely many marked transitions.
//  - Dead-end states are allowed. A finite maximal run is rejecting in every
//    mode except Reachability-after-mark, as above.

#ifndef HDG_AUTOMATON_HPP
#define HDG_AUTOMATON_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"

namespace hdg {

using State = int;
using Letter = int;

/// Finite alphabet; letters are held as strings and addressed by index.
class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
        if (letters_.empty())
            throw input_error("alphabet: must contain at least one letter");
        std::set<std::string> seen;
        for (const auto& l : letters_) {
            if (l.empty())
                throw input_error("alphabet: empty letter name");
            if (!seen.insert(l).second)
                throw input_error("alphabet: duplicate letter '" + l + "'");
        }
    }

    int size() const { return static_cast<int>(letters_.size()); }

    const std::string& name(Letter i) const { return letters_.at(static_cast<size_t>(i)); }

    std::optional<Letter> index_of(const std::string& name) const {
        for (size_t i = 0; i < letters_.size(); ++i)
            if (letters_[i] == name) return static_cast<Letter>(i);
        return std::nullopt;
    }

    const std::vector<std::string>& letters() const { return letters_; }

    bool operator==(const Alphabet& o) const { return letters_ == o.letters_; }

private:
    std::vector<std::string> letters_;
};

enum class Acceptance { Safety, Reachability, Buchi, CoBuchi };

inline const char* to_string(Acceptance a) {
    switch (a) {
        case Acceptance::Safety: return "safety";
        case Acceptance::Reachability: return "reachability";
        case Acceptance::Buchi: return "buchi";
        case Acceptance::CoBuchi: return "cobuchi";
    }
    return "?";
}

inline std::optional<Acceptance> acceptance_from_string(const std::string& s) {
    if (s == "safety") return Acceptance::Safety;
    if (s == "reachability") return Acceptance::Reachability;
    if (s == "buchi") return Acceptance::Buchi;
    if (s == "cobuchi") return Acceptance::CoBuchi;
    return std::nullopt;
}

struct Transition {
    State src;
    Letter letter;
    State dst;
    bool mark = false;

    friend bool operator==(const Transition& a, const Transition& b) {
        return a.src == b.src && a.letter == b.letter && a.dst == b.dst && a.mark == b.mark;
    }
    friend bool operator<(const Transition& a, const Transition& b) {
        return std::tie(a.src, a.letter, a.dst, a.mark) < std::tie(b.src, b.letter, b.dst, b.mark);
    }
};

/// Nondeterministic finite automaton with transition marks.
///
/// Transitions are a set: duplicates (same src/letter/dst/mark) are collapsed
/// at construction so that strategy extraction can identify a transition by
/// its components. State names are optional and only used for printing.
class Automaton {
public:
    Automaton() = default;

    Automaton(Alphabet alphabet, int num_states, State initial,
              std::vector<Transition> transitions, Acceptance acceptance,
              std::string name = {}, std::vector<std::string> state_names = {})
        : alphabet_(std::move(alphabet)),
          num_states_(num_states),
          initial_(initial),
          transitions_(std::move(transitions)),
          acceptance_(acceptance),
          name_(std::move(name)),
          state_names_(std::move(state_names)) {
        if (num_states_ <= 0)
            throw input_error("automaton: needs at least one state");
        if (initial_ < 0 || initial_ >= num_states_)
            throw input_error("automaton: initial state out of range");
        if (!state_names_.empty() && static_cast<int>(state_names_.size()) != num_states_)
            throw input_error("automaton: state name count mismatch");
        for (const auto& t : transitions_) {
            if (t.src < 0 || t.src >= num_states_ || t.dst < 0 || t.dst >= num_states_)
                throw input_error("automaton: transition endpoint out of range");
            if (t.letter < 0 || t.letter >= alphabet_.size())
                throw input_error("automaton: transition letter out of range");
        }
        std::sort(transitions_.begin(), transitions_.end());
        transitions_.erase(std::unique(transitions_.begin(), transitions_.end()),
                           transitions_.end());
        rebuild_index();
    }

    const Alphabet& alphabet() const { return alphabet_; }
    int num_states() const { return num_states_; }
    State initial() const { return initial_; }
    Acceptance acceptance() const { return acceptance_; }
    const std::string& name() const { return name_; }
    const std::vector<Transition>& transitions() const { return transitions_; }

    std::string state_name(State q) const {
        if (!state_names_.empty()) return state_names_.at(static_cast<size_t>(q));
        return "q" + std::to_string(q);
    }
    const std::vector<std::string>& state_names() const { return state_names_; }

    /// Indices into transitions() of all transitions leaving q.
    const std::vector<int>& out(State q) const { return out_.at(static_cast<size_t>(q)); }

    /// Indices of transitions leaving q on the given letter.
    std::vector<int> out_on(State q, Letter a) const {
        std::vector<int> r;
        for (int ti : out(q))
            if (transitions_[static_cast<size_t>(ti)].letter == a) r.push_back(ti);
        return r;
    }

    /// Looks up a transition by its full contents; -1 if absent.
    int find_transition(State src, Letter a, State dst, bool mark) const {
        Transition probe{src, a, dst, mark};
        auto it = std::lower_bound(transitions_.begin(), transitions_.end(), probe);
        if (it != transitions_.end() && *it == probe)
            return static_cast<int>(it - transitions_.begin());
        return -1;
    }

    /// True iff no state has two distinct transitions on the same letter.
    bool is_deterministic() const {
        for (State q = 0; q < num_states_; ++q) {
            std::set<Letter> seen;
            for (int ti : out(q))
                if (!seen.insert(transitions_[static_cast<size_t>(ti)].letter).second)
                    return false;
        }
        return true;
    }

    /// True iff every state has at least one transition on every letter.
    bool is_complete() const {
        for (State q = 0; q < num_states_; ++q) {
            std::vector<bool> has(static_cast<size_t>(alphabet_.size()), false);
            for (int ti : out(q)) has[static_cast<size_t>(transitions_[static_cast<size_t>(ti)].letter)] = true;
            for (bool b : has)
                if (!b) return false;
        }
        return true;
    }

    bool operator==(const Automaton& o) const {
        return alphabet_ == o.alphabet_ && num_states_ == o.num_states_ &&
               initial_ == o.initial_ && transitions_ == o.transitions_ &&
               acceptance_ == o.acceptance_;
    }

private:
    void rebuild_index() {
        out_.assign(static_cast<size_t>(num_states_), {});
        for (size_t i = 0; i < transitions_.size(); ++i)
            out_[static_cast<size_t>(transitions_[i].src)].push_back(static_cast<int>(i));
    }

    Alphabet alphabet_;
    int num_states_ = 0;
    State initial_ = 0;
    std::vector<Transition> transitions_;
    Acceptance acceptance_ = Acceptance::Buchi;
    std::string name_;
    std::vector<std::string> state_names_;
    std::vector<std::vector<int>> out_;
};

/// Encodes a state-marked automaton into the transition-marked model by
/// marking every transition that leaves a marked state.
inline Automaton mark_states(const Automaton& a, const std::vector<bool>& marked_states) {
    if (static_cast<int>(marked_states.size()) != a.num_states())
        throw input_error("mark_states: flag vector size mismatch");
    std::vector<Transition> ts = a.transitions();
    for (auto& t : ts) t.mark = marked_states[static_cast<size_t>(t.src)];
    return Automaton(a.alphabet(), a.num_states(), a.initial(), std::move(ts),
                     a.acceptance(), a.name(), a.state_names());
}

/// Completes an automaton by adding one rejecting sink state; transitions into
/// and out of the sink are marked so that any run entering it is rejecting
/// under the automaton's acceptance mode.
///
/// A mark already taken under Reachability keeps accepting, which is the
/// intended semantics: completion must not change the language.
inline Automaton totalize(const Automaton& a) {
    if (a.is_complete()) return a;
    const State sink = a.num_states();
    // Safety rejects on a mark, CoBuchi on infinitely many marks; Buchi and
    // Reachability reject on the absence of marks.
    const bool sink_marked =
        a.acceptance() == Acceptance::Safety || a.acceptance() == Acceptance::CoBuchi;
    std::vector<Transition> ts = a.transitions();
    for (State q = 0; q < a.num_states(); ++q) {
        std::vector<bool> has(static_cast<size_t>(a.alphabet().size()), false);
        for (int ti : a.out(q)) has[static_cast<size_t>(a.transitions()[static_cast<size_t>(ti)].letter)] = true;
        for (Letter l = 0; l < a.alphabet().size(); ++l)
            if (!has[static_cast<size_t>(l)]) ts.push_back({q, l, sink, sink_marked});
    }
    for (Letter l = 0; l < a.alphabet().size(); ++l)
        ts.push_back({sink, l, sink, sink_marked});
    std::vector<std::string> names = a.state_names();
    if (!names.empty()) names.push_back("sink");
    return Automaton(a.alphabet(), a.num_states() + 1, a.initial(), std::move(ts),
                     a.acceptance(), a.name(), std::move(names));
}

/// States reachable from the initial state along any transitions.
inline std::vector<bool> reachable_states(const Automaton& a) {
    std::vector<bool> seen(static_cast<size_t>(a.num_states()), false);
    std::vector<State> stack{a.initial()};
    seen[static_cast<size_t>(a.initial())] = true;
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (int ti : a.out(q)) {
            State d = a.transitions()[static_cast<size_t>(ti)].dst;
            if (!seen[static_cast<size_t>(d)]) {
                seen[static_cast<size_t>(d)] = true;
                stack.push_back(d);
            }
        }
    }
    return seen;
}

} // namespace hdg

#endif // HDG_AUTOMATON_HPP
