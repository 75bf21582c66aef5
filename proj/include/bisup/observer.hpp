#pragma once

#include <map>
#include <set>
#include <vector>

#include "bisup/automaton.hpp"
#include "bisup/determinize.hpp"

namespace bisup {

/// State-estimate automaton of `d` under partial observation: states are
/// subsets of d-states closed under unobservable reach; a transition on an
/// observable event is the unobservable closure of the event's successors.
/// The state reached by the projection of s denotes exactly the d-states
/// reachable by strings observation-equivalent to s.
inline DeterministicView observer(const DeterministicView& d, const EventSet& observable) {
    const Automaton& base = d.automaton;
    for (EventId e : observable)
        if (e >= base.event_count()) throw std::invalid_argument("observer: event not in alphabet");

    EventSet unobservable;
    for (EventId e = 0; e < base.event_count(); ++e)
        if (observable.count(e) == 0) unobservable.insert(e);

    auto closure = [&](std::set<StateId> set) {
        std::vector<StateId> stack(set.begin(), set.end());
        while (!stack.empty()) {
            StateId x = stack.back();
            stack.pop_back();
            for (EventId e : unobservable)
                for (StateId y : base.successors(x, e))
                    if (set.insert(y).second) stack.push_back(y);
        }
        return std::vector<StateId>(set.begin(), set.end());
    };

    DeterministicView out;
    for (const auto& e : base.event_names()) out.automaton.add_event(e);

    std::map<std::vector<StateId>, StateId> index;
    auto intern = [&](std::vector<StateId> subset) {
        auto it = index.find(subset);
        if (it != index.end()) return it->second;
        bool marked = false;
        for (StateId x : subset) marked |= base.marked(x);
        StateId id = out.automaton.add_state(detail::subset_name(base, subset), marked);
        index.emplace(subset, id);
        out.denotes.push_back(std::move(subset));
        return id;
    };

    StateId init = intern(closure({base.initial()}));
    out.automaton.set_initial(init);
    for (StateId cur = 0; cur < out.automaton.state_count(); ++cur) {
        for (EventId e : observable) {
            std::set<StateId> next;
            for (StateId x : out.denotes[cur])
                for (StateId y : base.successors(x, e)) next.insert(y);
            if (next.empty()) continue;
            StateId id = intern(closure(std::move(next)));
            out.automaton.add_transition(cur, e, id);
        }
    }
    return out;
}

}  // namespace bisup
