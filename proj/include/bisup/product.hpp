#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "bisup/automaton.hpp"

namespace bisup {

/// Synchronous product over a shared alphabet, restricted to the reachable
/// pairs. Keeps the pair provenance and BFS parent edges so callers can
/// recover shortest access strings.
struct ProductResult {
    Automaton automaton;
    std::vector<std::pair<StateId, StateId>> pairs;                 // per product state
    std::vector<std::optional<std::pair<StateId, EventId>>> parent; // BFS tree
};

/// L(a||b) = L(a) ∩ L(b) and L_m(a||b) = L_m(a) ∩ L_m(b); a transition on
/// an event exists iff both components move on it.
inline ProductResult product(const Automaton& a, const Automaton& b) {
    if (!a.same_alphabet(b)) throw std::invalid_argument("product: alphabet mismatch");

    ProductResult out;
    for (const auto& e : a.event_names()) out.automaton.add_event(e);

    std::map<std::pair<StateId, StateId>, StateId> index;
    auto intern = [&](StateId x, StateId y) {
        auto it = index.find({x, y});
        if (it != index.end()) return it->second;
        std::string name = "(" + a.state_name(x) + "," + b.state_name(y) + ")";
        StateId id = out.automaton.add_state(std::move(name), a.marked(x) && b.marked(y));
        index.emplace(std::make_pair(x, y), id);
        out.pairs.emplace_back(x, y);
        out.parent.emplace_back(std::nullopt);
        return id;
    };

    StateId init = intern(a.initial(), b.initial());
    out.automaton.set_initial(init);
    for (StateId cur = 0; cur < out.automaton.state_count(); ++cur) {
        auto [x, y] = out.pairs[cur];
        for (EventId e = 0; e < a.event_count(); ++e) {
            const auto& xs = a.successors(x, e);
            const auto& ys = b.successors(y, e);
            if (xs.empty() || ys.empty()) continue;
            for (StateId xn : xs)
                for (StateId yn : ys) {
                    std::size_t before = out.automaton.state_count();
                    StateId next = intern(xn, yn);
                    if (out.automaton.state_count() > before) out.parent[next] = {{cur, e}};
                    out.automaton.add_transition(cur, e, next);
                }
        }
    }
    return out;
}

/// Shortest access string of a product state along the BFS tree.
inline EventString access_string(const ProductResult& p, StateId s) {
    EventString rev;
    StateId cur = s;
    while (p.parent[cur]) {
        auto [pred, ev] = *p.parent[cur];
        rev.push_back(ev);
        cur = pred;
    }
    return EventString(rev.rbegin(), rev.rend());
}

}  // namespace bisup
