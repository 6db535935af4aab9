// Finite turn-based two-player game graphs with priorities in {0,1,2}.
//
// A node either has at least one outgoing edge or is a terminal that names its
// winner outright. Terminals stand for "dead" moves (a player cannot or may
// not continue) whose outcome is fixed by the game's conventions; they carry
// no synthetic self-loops in the arena itself.

#ifndef HDG_ARENA_HPP
#define HDG_ARENA_HPP

#include <string>
#include <vector>

#include "errors.hpp"

namespace hdg {

enum class Player { Eve, Adam };

inline Player opponent(Player p) { return p == Player::Eve ? Player::Adam : Player::Eve; }

inline const char* to_string(Player p) { return p == Player::Eve ? "eve" : "adam"; }

struct ArenaNode {
    Player owner = Player::Eve;
    int priority = 0;            // max-even parity, only {0,1,2}
    bool terminal = false;
    Player winner = Player::Eve; // meaningful only when terminal
    std::string label;           // human-readable trace-back record
};

struct ArenaEdge {
    int src = -1;
    int dst = -1;
};

/// Game graph. Nodes and edges are append-only; edge order at a node is the
/// insertion order, and all tie-breaking is by lowest edge index, so builders
/// that insert deterministically get reproducible strategies.
class Arena {
public:
    int add_node(Player owner, int priority, std::string label = {}) {
        if (priority < 0 || priority > 2)
            throw input_error("arena: priority out of range");
        nodes_.push_back({owner, priority, false, Player::Eve, std::move(label)});
        out_.emplace_back();
        return static_cast<int>(nodes_.size()) - 1;
    }

    int add_terminal(Player owner, Player winner, std::string label = {}) {
        nodes_.push_back({owner, 0, true, winner, std::move(label)});
        out_.emplace_back();
        return static_cast<int>(nodes_.size()) - 1;
    }

    int add_edge(int src, int dst) {
        if (src < 0 || src >= num_nodes() || dst < 0 || dst >= num_nodes())
            throw input_error("arena: edge endpoint out of range");
        if (nodes_[static_cast<size_t>(src)].terminal)
            throw input_error("arena: terminal node cannot have outgoing edges");
        edges_.push_back({src, dst});
        out_[static_cast<size_t>(src)].push_back(static_cast<int>(edges_.size()) - 1);
        return static_cast<int>(edges_.size()) - 1;
    }

    void set_initial(int v) {
        if (v < 0 || v >= num_nodes())
            throw input_error("arena: initial node out of range");
        initial_ = v;
    }

    int initial() const { return initial_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const ArenaNode& node(int v) const { return nodes_.at(static_cast<size_t>(v)); }
    const ArenaEdge& edge(int e) const { return edges_.at(static_cast<size_t>(e)); }
    const std::vector<ArenaEdge>& edges() const { return edges_; }

    /// Edge indices leaving v, in insertion order.
    const std::vector<int>& out(int v) const { return out_.at(static_cast<size_t>(v)); }

    /// Checks the structural invariant: every node has an edge or is terminal.
    void validate() const {
        if (initial_ < 0 || initial_ >= num_nodes())
            throw input_error("arena: initial node unset or out of range");
        for (int v = 0; v < num_nodes(); ++v)
            if (!nodes_[static_cast<size_t>(v)].terminal && out_[static_cast<size_t>(v)].empty())
                throw input_error("arena: node " + std::to_string(v) +
                                  " has no moves and is not a terminal");
    }

private:
    std::vector<ArenaNode> nodes_;
    std::vector<ArenaEdge> edges_;
    std::vector<std::vector<int>> out_;
    int initial_ = -1;
};

/// Positional strategy: one chosen outgoing edge per (owned) node, -1 elsewhere.
struct Strategy {
    Player owner = Player::Eve;
    std::vector<int> edge_of;

    int at(int v) const { return edge_of.at(static_cast<size_t>(v)); }
};

/// Solver output: a full partition of the nodes plus one positional strategy
/// per player, each total on that player's owned, non-terminal winning nodes.
struct GameResult {
    std::vector<Player> winner;
    Strategy eve;
    Strategy adam;

    Player winner_of(int v) const { return winner.at(static_cast<size_t>(v)); }

    const Strategy& strategy(Player p) const { return p == Player::Eve ? eve : adam; }
};

/// Fixes one player's choices: at every node the strategy defines, all other
/// outgoing edges are dropped. Nodes and their indices are preserved.
///
/// With check_playable (the default), throws invalid_witness_error if a node
/// reachable from the initial node under the restriction is owned by the
/// player, is not a terminal, and has no strategy edge: such a strategy
/// cannot be played out. Certification of a solver result passes false, since
/// a winning strategy is legitimately undefined on the opponent's region.
inline Arena restrict_to_strategy(const Arena& ar, const Strategy& s,
                                  bool check_playable = true) {
    if (static_cast<int>(s.edge_of.size()) != ar.num_nodes())
        throw input_error("restrict_to_strategy: strategy size mismatch");
    Arena r;
    for (int v = 0; v < ar.num_nodes(); ++v) {
        const ArenaNode& n = ar.node(v);
        if (n.terminal)
            r.add_terminal(n.owner, n.winner, n.label);
        else
            r.add_node(n.owner, n.priority, n.label);
    }
    for (int v = 0; v < ar.num_nodes(); ++v) {
        const ArenaNode& n = ar.node(v);
        if (n.terminal) continue;
        const int chosen = s.edge_of[static_cast<size_t>(v)];
        if (n.owner == s.owner && chosen >= 0) {
            if (chosen >= ar.num_edges() || ar.edge(chosen).src != v)
                throw input_error("restrict_to_strategy: strategy edge does not leave its node");
            r.add_edge(v, ar.edge(chosen).dst);
        } else {
            for (int e : ar.out(v)) r.add_edge(v, ar.edge(e).dst);
        }
    }
    r.set_initial(ar.initial());
    if (!check_playable) return r;
    // The restriction must be playable: reachable nodes of the fixed player
    // need their move.
    std::vector<bool> seen(static_cast<size_t>(r.num_nodes()), false);
    std::vector<int> stack{r.initial()};
    seen[static_cast<size_t>(r.initial())] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        const ArenaNode& n = r.node(v);
        if (!n.terminal && n.owner == s.owner && s.edge_of[static_cast<size_t>(v)] < 0)
            throw invalid_witness_error("restrict_to_strategy: reachable node " +
                                        std::to_string(v) + " has no strategy edge");
        for (int e : r.out(v)) {
            int d = r.edge(e).dst;
            if (!seen[static_cast<size_t>(d)]) {
                seen[static_cast<size_t>(d)] = true;
                stack.push_back(d);
            }
        }
    }
    return r;
}

} // namespace hdg

#endif // HDG_ARENA_HPP
