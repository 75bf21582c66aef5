#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bisup/automaton.hpp"
#include "bisup/determinize.hpp"
#include "bisup/diagnostics.hpp"
#include "bisup/product.hpp"

namespace bisup {

enum class Architecture { conjunctive, disjunctive, general };

inline std::string to_string(Architecture a) {
    switch (a) {
        case Architecture::conjunctive: return "conjunctive";
        case Architecture::disjunctive: return "disjunctive";
        case Architecture::general: return "general";
    }
    return "?";
}

inline std::optional<Architecture> architecture_from(std::string_view s) {
    if (s == "conjunctive") return Architecture::conjunctive;
    if (s == "disjunctive") return Architecture::disjunctive;
    if (s == "general") return Architecture::general;
    return std::nullopt;
}

/// Per-supervisor capabilities. The complements (locally uncontrollable and
/// unobservable sets) are always derived, never stored.
struct AgentProfile {
    int index = 0;  // display index, 1-based
    EventSet controllable;
    EventSet observable;
};

/// Split of the controllable alphabet for the general architecture into
/// enabled-by-default and disabled-by-default events.
struct DefaultSplit {
    EventSet enabled;   // Σ_ce
    EventSet disabled;  // Σ_cd
};

struct ControlProblem {
    Automaton plant;
    Automaton spec;
    std::vector<AgentProfile> agents;
    Architecture architecture = Architecture::conjunctive;
    std::optional<DefaultSplit> split;  // required iff architecture == general

    EventSet sigma_c() const {
        EventSet out;
        for (const auto& ag : agents) out.insert(ag.controllable.begin(), ag.controllable.end());
        return out;
    }
    EventSet sigma_uc() const { return set_difference(plant.full_alphabet(), sigma_c()); }
    EventSet sigma_o() const {
        EventSet out;
        for (const auto& ag : agents) out.insert(ag.observable.begin(), ag.observable.end());
        return out;
    }
    EventSet sigma_uo() const { return set_difference(plant.full_alphabet(), sigma_o()); }

    EventSet sigma_uci(std::size_t agent) const {
        return set_difference(plant.full_alphabet(), agents.at(agent).controllable);
    }
    EventSet sigma_uoi(std::size_t agent) const {
        return set_difference(plant.full_alphabet(), agents.at(agent).observable);
    }
    EventSet sigma_cei(std::size_t agent) const {
        return set_intersection(agents.at(agent).controllable, split.value().enabled);
    }
    EventSet sigma_cdi(std::size_t agent) const {
        return set_intersection(agents.at(agent).controllable, split.value().disabled);
    }
};

/// Checks every structural precondition shared by the three theorems,
/// including the standing hypothesis L(R) ⊆ L(G).
inline std::vector<Diagnostic> validate(const ControlProblem& p) {
    std::vector<Diagnostic> diags;
    if (!p.plant.same_alphabet(p.spec))
        diags.push_back({0, 0, "alphabet-mismatch", "plant and specification alphabets differ"});
    if (p.agents.empty()) diags.push_back({0, 0, "missing-agent", "at least one agent is required"});
    const std::size_t nevents = p.plant.event_count();
    for (const auto& ag : p.agents) {
        for (EventId e : ag.controllable)
            if (e >= nevents)
                diags.push_back({0, 0, "unknown-event", "agent " + std::to_string(ag.index) +
                                                            ": controllable event outside alphabet"});
        for (EventId e : ag.observable)
            if (e >= nevents)
                diags.push_back({0, 0, "unknown-event", "agent " + std::to_string(ag.index) +
                                                            ": observable event outside alphabet"});
    }
    if (p.architecture == Architecture::general) {
        if (!p.split) {
            diags.push_back({0, 0, "missing-defaults",
                             "general architecture requires enable-default/disable-default sets"});
        } else {
            EventSet overlap = set_intersection(p.split->enabled, p.split->disabled);
            if (!overlap.empty())
                diags.push_back({0, 0, "overlapping-defaults",
                                 "enable-default and disable-default overlap: " +
                                     format_event_set(p.plant, overlap)});
            EventSet covered = set_union(p.split->enabled, p.split->disabled);
            if (covered != p.sigma_c())
                diags.push_back({0, 0, "defaults-incomplete",
                                 "enable/disable defaults must partition the controllable alphabet " +
                                     format_event_set(p.plant, p.sigma_c())});
        }
    } else if (p.split) {
        diags.push_back({0, 0, "unexpected-defaults",
                         "enable/disable defaults are only meaningful for the general architecture"});
    }
    if (!diags.empty()) return diags;

    // L(R) ⊆ L(G): drive det(plant) along det(spec); any spec move the plant
    // cannot match is a witness.
    DeterministicView dspec = determinize(p.spec);
    DeterministicView dplant = determinize(p.plant);
    struct Node {
        StateId r, g;
    };
    std::vector<Node> nodes{{dspec.automaton.initial(), dplant.automaton.initial()}};
    std::vector<std::optional<std::pair<std::size_t, EventId>>> parent{std::nullopt};
    std::map<std::pair<StateId, StateId>, std::size_t> seen{{{nodes[0].r, nodes[0].g}, 0}};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (EventId e = 0; e < p.spec.event_count(); ++e) {
            const auto& rs = dspec.automaton.successors(nodes[i].r, e);
            if (rs.empty()) continue;
            const auto& gs = dplant.automaton.successors(nodes[i].g, e);
            if (gs.empty()) {
                EventString s;
                std::size_t cur = i;
                while (parent[cur]) {
                    s.push_back(parent[cur]->second);
                    cur = parent[cur]->first;
                }
                std::reverse(s.begin(), s.end());
                s.push_back(e);
                diags.push_back({0, 0, "spec-not-sublanguage",
                                 "specification string not generated by the plant: \"" +
                                     format_event_string(p.plant, s) + "\""});
                return diags;
            }
            auto key = std::make_pair(rs[0], gs[0]);
            if (seen.emplace(key, nodes.size()).second) {
                nodes.push_back({rs[0], gs[0]});
                parent.push_back({{i, e}});
            }
        }
    }
    return diags;
}

/// Validated problem plus the determinizations and the deterministic product
/// det(G)||det(R) that every check and synthesis step walks.
struct ProblemContext {
    ControlProblem problem;
    DeterministicView det_plant;
    DeterministicView det_spec;
    ProductResult gr;  // product(det(G), det(R)): reachable exactly by L(R)-strings
};

inline ProblemContext prepare(ControlProblem p) {
    auto diags = validate(p);
    if (!diags.empty()) throw ValidationError(std::move(diags));
    ProblemContext ctx{std::move(p), {}, {}, {}};
    ctx.det_plant = determinize(ctx.problem.plant);
    ctx.det_spec = determinize(ctx.problem.spec);
    ctx.gr = product(ctx.det_plant.automaton, ctx.det_spec.automaton);
    return ctx;
}

}  // namespace bisup
