#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bisup/automaton.hpp"

namespace bisup {

/// One node of a distinguishing strategy: at the pair (state_a, state_b) the
/// `side` automaton makes the listed move and for every reply of the other
/// side a child node continues the argument. A marking node needs no move.
struct CounterexampleNode {
    enum class Kind { marking, move };
    Kind kind = Kind::marking;
    int side = 0;  // 0: first automaton moves (or is marked), 1: second
    std::string state_a, state_b;
    EventId event = 0;
    std::string moved_to;
    std::vector<CounterexampleNode> responses;  // one per opponent successor
};

struct BisimWitness {
    bool verdict = false;
    // Cross pairs (first-automaton state, second-automaton state) of the
    // relation when the verdict is true; symmetric closure implied.
    std::vector<std::pair<std::string, std::string>> relation;
    std::optional<CounterexampleNode> counterexample;
};

struct BisimOptions {
    bool full_relation = false;  // also include same-automaton pairs
};

namespace detail {

/// Disjoint union of two automata sharing an alphabet.
struct UnionView {
    const Automaton& a;
    const Automaton& b;
    std::size_t na;
    std::size_t total;

    UnionView(const Automaton& a_, const Automaton& b_)
        : a(a_), b(b_), na(a_.state_count()), total(a_.state_count() + b_.state_count()) {}

    bool marked(std::size_t s) const { return s < na ? a.marked(StateId(s)) : b.marked(StateId(s - na)); }
    const std::vector<StateId>& succ(std::size_t s, EventId e) const {
        return s < na ? a.successors(StateId(s), e) : b.successors(StateId(s - na), e);
    }
    std::string name(std::size_t s) const { return s < na ? a.state_name(StateId(s)) : b.state_name(StateId(s - na)); }
};

/// Marked/unmarked initial partition refined by (event, block) signatures
/// until stable. Returns the per-round block assignment (round 0 first).
inline std::vector<std::vector<int>> refine_partition(const UnionView& u) {
    std::vector<std::vector<int>> rounds;
    std::vector<int> block(u.total);
    for (std::size_t s = 0; s < u.total; ++s) block[s] = u.marked(s) ? 1 : 0;
    auto renumber = [&](std::vector<int>& blk) {
        std::map<int, int> remap;
        for (std::size_t s = 0; s < u.total; ++s) {
            auto it = remap.emplace(blk[s], static_cast<int>(remap.size())).first;
            blk[s] = it->second;
        }
        return remap.size();
    };
    std::size_t nblocks = renumber(block);
    rounds.push_back(block);
    for (;;) {
        std::map<std::vector<int>, int> sig_index;
        std::vector<int> next(u.total);
        for (std::size_t s = 0; s < u.total; ++s) {
            // Signature: own block plus, per event, the sorted set of blocks
            // reachable in one step.
            std::vector<int> sig{block[s]};
            for (EventId e = 0; e < u.a.event_count(); ++e) {
                std::vector<int> targets;
                for (StateId t : u.succ(s, e)) targets.push_back(block[s < u.na ? t : t + u.na]);
                std::sort(targets.begin(), targets.end());
                targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
                sig.push_back(-1 - static_cast<int>(e));  // event separator
                sig.insert(sig.end(), targets.begin(), targets.end());
            }
            auto it = sig_index.emplace(std::move(sig), static_cast<int>(sig_index.size())).first;
            next[s] = it->second;
        }
        block = std::move(next);
        std::size_t n = renumber(block);
        if (n == nblocks) break;
        nblocks = n;
        rounds.push_back(block);
    }
    return rounds;
}

inline int separation_round(const std::vector<std::vector<int>>& rounds, std::size_t x, std::size_t y) {
    for (std::size_t r = 0; r < rounds.size(); ++r)
        if (rounds[r][x] != rounds[r][y]) return static_cast<int>(r);
    return -1;  // never separated: equivalent
}

inline CounterexampleNode distinguish(const UnionView& u, const std::vector<std::vector<int>>& rounds,
                                      std::size_t x, std::size_t y) {
    CounterexampleNode node;
    node.state_a = u.name(x);
    node.state_b = u.name(y);
    if (u.marked(x) != u.marked(y)) {
        node.kind = CounterexampleNode::Kind::marking;
        node.side = u.marked(x) ? 0 : 1;
        return node;
    }
    int r = separation_round(rounds, x, y);
    // r >= 1 here: round 0 separates exactly by marking.
    const auto& prev = rounds[static_cast<std::size_t>(r - 1)];
    auto block_of = [&](std::size_t owner, StateId t) { return prev[owner < u.na ? t : t + u.na]; };
    for (EventId e = 0; e < u.a.event_count(); ++e) {
        for (int side = 0; side < 2; ++side) {
            std::size_t mover = side == 0 ? x : y;
            std::size_t other = side == 0 ? y : x;
            for (StateId t : u.succ(mover, e)) {
                int target_block = block_of(mover, t);
                bool matched = false;
                for (StateId o : u.succ(other, e))
                    if (block_of(other, o) == target_block) matched = true;
                if (matched) continue;
                node.kind = CounterexampleNode::Kind::move;
                node.side = side;
                node.event = e;
                node.moved_to = u.name(mover < u.na ? t : t + u.na);
                std::size_t t_global = mover < u.na ? t : t + u.na;
                for (StateId o : u.succ(other, e)) {
                    std::size_t o_global = other < u.na ? o : o + u.na;
                    std::size_t cx = side == 0 ? t_global : o_global;
                    std::size_t cy = side == 0 ? o_global : t_global;
                    node.responses.push_back(distinguish(u, rounds, cx, cy));
                }
                return node;
            }
        }
    }
    // Unreachable when x, y are genuinely separated.
    throw std::logic_error("distinguish: no splitting move found");
}

}  // namespace detail

/// Decides marking-respecting strong bisimilarity by partition refinement on
/// the disjoint union of the two state spaces. On success the witness holds
/// the same-block cross pairs; on failure a distinguishing move tree.
inline BisimWitness bisimilar(const Automaton& a, const Automaton& b, BisimOptions opts = {}) {
    if (!a.same_alphabet(b)) throw std::invalid_argument("bisimilar: alphabet mismatch");
    detail::UnionView u(a, b);
    auto rounds = detail::refine_partition(u);
    const auto& final_block = rounds.back();

    BisimWitness w;
    std::size_t ia = a.initial();
    std::size_t ib = u.na + b.initial();
    w.verdict = final_block[ia] == final_block[ib];
    if (w.verdict) {
        for (std::size_t x = 0; x < u.na; ++x)
            for (std::size_t y = u.na; y < u.total; ++y)
                if (final_block[x] == final_block[y]) w.relation.emplace_back(u.name(x), u.name(y));
        if (opts.full_relation) {
            for (std::size_t x = 0; x < u.total; ++x)
                for (std::size_t y = x + 1; y < u.total; ++y)
                    if ((y < u.na || x >= u.na) && final_block[x] == final_block[y])
                        w.relation.emplace_back(u.name(x), u.name(y));
        }
    } else {
        w.counterexample = detail::distinguish(u, rounds, ia, ib);
    }
    return w;
}

/// Greatest simulation of `a` by `b` via iterated pair elimination.
inline BisimWitness simulates(const Automaton& a, const Automaton& b, BisimOptions opts = {}) {
    if (!a.same_alphabet(b)) throw std::invalid_argument("simulates: alphabet mismatch");
    const std::size_t na = a.state_count(), nb = b.state_count();
    std::vector<std::vector<bool>> rel(na, std::vector<bool>(nb, false));
    std::vector<std::vector<int>> eliminated(na, std::vector<int>(nb, 0));
    for (std::size_t x = 0; x < na; ++x)
        for (std::size_t y = 0; y < nb; ++y)
            rel[x][y] = !a.marked(StateId(x)) || b.marked(StateId(y));

    auto violates = [&](std::size_t x, std::size_t y, EventId* ev = nullptr, StateId* to = nullptr) {
        for (EventId e = 0; e < a.event_count(); ++e)
            for (StateId xs : a.successors(StateId(x), e)) {
                bool matched = false;
                for (StateId ys : b.successors(StateId(y), e))
                    if (rel[xs][ys]) matched = true;
                if (!matched) {
                    if (ev != nullptr) *ev = e;
                    if (to != nullptr) *to = xs;
                    return true;
                }
            }
        return false;
    };

    int round = 0;
    for (bool changed = true; changed;) {
        changed = false;
        ++round;
        for (std::size_t x = 0; x < na; ++x)
            for (std::size_t y = 0; y < nb; ++y)
                if (rel[x][y] && violates(x, y)) {
                    rel[x][y] = false;
                    eliminated[x][y] = round;
                    changed = true;
                }
    }

    (void)opts;
    BisimWitness w;
    w.verdict = rel[a.initial()][b.initial()];
    if (w.verdict) {
        for (std::size_t x = 0; x < na; ++x)
            for (std::size_t y = 0; y < nb; ++y)
                if (rel[x][y]) w.relation.emplace_back(a.state_name(StateId(x)), b.state_name(StateId(y)));
        return w;
    }

    // Counterexample: replay eliminations. A pair eliminated at round k has a
    // move whose replies were all gone strictly earlier (or failed marking).
    struct Builder {
        const Automaton& a;
        const Automaton& b;
        const std::vector<std::vector<int>>& eliminated;

        CounterexampleNode build(std::size_t x, std::size_t y) const {
            CounterexampleNode node;
            node.state_a = a.state_name(StateId(x));
            node.state_b = b.state_name(StateId(y));
            if (a.marked(StateId(x)) && !b.marked(StateId(y))) {
                node.kind = CounterexampleNode::Kind::marking;
                node.side = 0;
                return node;
            }
            int k = eliminated[x][y];
            for (EventId e = 0; e < a.event_count(); ++e)
                for (StateId xs : a.successors(StateId(x), e)) {
                    bool splitting = true;
                    for (StateId ys : b.successors(StateId(y), e)) {
                        int ke = eliminated[xs][ys];
                        bool dead_marking = a.marked(xs) && !b.marked(ys);
                        if (!dead_marking && (ke == 0 || ke >= k)) splitting = false;
                    }
                    if (!splitting) continue;
                    node.kind = CounterexampleNode::Kind::move;
                    node.side = 0;
                    node.event = e;
                    node.moved_to = a.state_name(xs);
                    for (StateId ys : b.successors(StateId(y), e)) node.responses.push_back(build(xs, ys));
                    return node;
                }
            throw std::logic_error("simulation counterexample: no splitting move found");
        }
    };
    w.counterexample = Builder{a, b, eliminated}.build(a.initial(), b.initial());
    return w;
}

/// Serializes a witness relation as `pair <stateA> <stateB>` lines.
inline std::string format_relation(const BisimWitness& w) {
    std::string out;
    for (const auto& [x, y] : w.relation) {
        out += "pair " + x + " " + y + "\n";
    }
    return out;
}

}  // namespace bisup
