#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bisup/automaton.hpp"

namespace bisup {

/// A deterministic automaton together with the subset of source states each
/// of its states denotes. A state is marked iff its denoted subset meets the
/// source's marked set.
struct DeterministicView {
    Automaton automaton;
    std::vector<std::vector<StateId>> denotes;  // sorted source-state ids per state
};

namespace detail {

inline std::string subset_name(const Automaton& source, const std::vector<StateId>& members) {
    std::string name = "{";
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i > 0) name += ',';
        name += source.state_name(members[i]);
    }
    return name + "}";
}

}  // namespace detail

/// Subset construction over reachable subsets, then merging of
/// (language, marked-language)-equivalent states by partition refinement
/// with {marked, unmarked} as the initial partition. Preserves L and L_m.
inline DeterministicView determinize(const Automaton& a) {
    // Subset construction.
    std::vector<std::vector<StateId>> subsets;
    std::map<std::vector<StateId>, StateId> index;
    auto intern = [&](std::vector<StateId> subset) {
        auto it = index.find(subset);
        if (it != index.end()) return it->second;
        StateId id = static_cast<StateId>(subsets.size());
        index.emplace(subset, id);
        subsets.push_back(std::move(subset));
        return id;
    };
    // transitions[s] maps event -> subset-state
    std::vector<std::map<EventId, StateId>> transitions;
    intern({a.initial()});
    for (StateId cur = 0; cur < subsets.size(); ++cur) {
        transitions.emplace_back();
        for (EventId e = 0; e < a.event_count(); ++e) {
            std::set<StateId> next;
            for (StateId x : subsets[cur])
                for (StateId y : a.successors(x, e)) next.insert(y);
            if (next.empty()) continue;
            StateId id = intern(std::vector<StateId>(next.begin(), next.end()));
            transitions[cur][e] = id;
        }
    }
    auto subset_marked = [&](StateId s) {
        for (StateId x : subsets[s])
            if (a.marked(x)) return true;
        return false;
    };

    // Partition refinement; block successor "undefined" is a distinct value.
    const StateId kUndef = static_cast<StateId>(subsets.size());
    std::vector<StateId> block(subsets.size(), 0);
    for (StateId s = 0; s < subsets.size(); ++s) block[s] = subset_marked(s) ? 1 : 0;
    // Renumber blocks by first occurrence to keep numbering stable.
    auto renumber = [&]() {
        std::map<StateId, StateId> remap;
        for (StateId s = 0; s < subsets.size(); ++s) {
            auto [it, inserted] = remap.emplace(block[s], static_cast<StateId>(remap.size()));
            block[s] = it->second;
        }
        return remap.size();
    };
    std::size_t nblocks = renumber();
    for (;;) {
        std::map<std::vector<StateId>, StateId> sig_index;
        std::vector<StateId> next_block(subsets.size());
        for (StateId s = 0; s < subsets.size(); ++s) {
            std::vector<StateId> sig{block[s]};
            for (EventId e = 0; e < a.event_count(); ++e) {
                auto it = transitions[s].find(e);
                sig.push_back(it == transitions[s].end() ? kUndef : block[it->second]);
            }
            auto [it, inserted] = sig_index.emplace(std::move(sig), static_cast<StateId>(sig_index.size()));
            next_block[s] = it->second;
        }
        block = std::move(next_block);
        std::size_t n = renumber();
        if (n == nblocks) break;
        nblocks = n;
    }

    // Build the merged automaton; block representative = lowest member id.
    std::vector<StateId> rep(nblocks, kUndef);
    std::vector<std::vector<StateId>> merged_denote(nblocks);
    for (StateId s = 0; s < subsets.size(); ++s) {
        if (rep[block[s]] == kUndef) rep[block[s]] = s;
        for (StateId x : subsets[s]) merged_denote[block[s]].push_back(x);
    }
    for (auto& d : merged_denote) {
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
    }

    DeterministicView out;
    for (const auto& e : a.event_names()) out.automaton.add_event(e);
    for (StateId b = 0; b < nblocks; ++b)
        out.automaton.add_state(detail::subset_name(a, merged_denote[b]), subset_marked(rep[b]));
    out.automaton.set_initial(block[0]);
    for (StateId b = 0; b < nblocks; ++b)
        for (const auto& [e, target] : transitions[rep[b]])
            out.automaton.add_transition(b, e, block[target]);
    out.denotes = std::move(merged_denote);
    return out;
}

}  // namespace bisup
