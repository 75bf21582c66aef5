#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bisup/bisimulation.hpp"
#include "bisup/problem.hpp"

namespace bisup {

struct ControllabilityWitness {
    EventString s;
    EventId sigma = 0;
};

struct AgentConfusion {
    int agent_index = 0;       // display index
    EventString confusing;     // s_i' with P_i(s_i') = P_i(s)
};

struct CoobservabilityWitness {
    EventString s;
    EventId sigma = 0;
    std::vector<AgentConfusion> per_agent;  // one entry per agent that controls sigma
};

struct MarkedClosureWitness {
    EventString s;
};

using ConditionWitness = std::variant<std::monostate, ControllabilityWitness, CoobservabilityWitness,
                                      MarkedClosureWitness, BisimWitness>;

struct ConditionEntry {
    std::string id;
    bool holds = false;
    ConditionWitness witness;          // populated when the condition fails (bisim: always)
    std::vector<ConditionEntry> sub;   // general co-observability embeds its two clauses
};

struct Verdict {
    Architecture architecture = Architecture::conjunctive;
    std::vector<ConditionEntry> entries;
    bool overall = false;
};

namespace detail {

inline bool defined(const Automaton& a, StateId s, EventId e) { return a.has_transition(s, e); }

/// Composite verifier shared by the two co-observability variants. One track
/// follows the true string through det(G)||det(R); per agent one track
/// follows an observation-equivalent string (through det(R) for the
/// conjunctive-and-permissive variant, through det(G)||det(R) for the
/// disjunctive-and-anti-permissive one). Pad moves advance a single agent
/// track by an event it cannot observe; step moves advance the true string
/// and all agents observing it. Layered breadth-first search yields a
/// shortest violating s.
struct CoobsVerifier {
    const ProblemContext& ctx;
    const std::vector<EventSet>& sets;
    bool cp_style;

    std::vector<EventSet> unobs;  // per agent
    EventSet range;               // union of the per-agent controllable sets

    explicit CoobsVerifier(const ProblemContext& c, const std::vector<EventSet>& s, bool cp)
        : ctx(c), sets(s), cp_style(cp) {
        for (std::size_t i = 0; i < ctx.problem.agents.size(); ++i)
            unobs.push_back(ctx.problem.sigma_uoi(i));
        for (const auto& set : sets) range = set_union(range, set);
    }

    const Automaton& track_automaton() const {
        return cp_style ? ctx.det_spec.automaton : ctx.gr.automaton;
    }
    bool spec_defined(StateId track, EventId e) const {
        if (cp_style) return defined(ctx.det_spec.automaton, track, e);
        return defined(ctx.det_spec.automaton, ctx.gr.pairs[track].second, e);
    }
    bool plant_defined(StateId track, EventId e) const {
        if (cp_style) return true;  // unused for the C&P variant
        return defined(ctx.det_plant.automaton, ctx.gr.pairs[track].first, e);
    }

    bool violation_at(const std::vector<StateId>& comp, EventId e) const {
        StateId pq = comp[0];
        auto [g, r] = ctx.gr.pairs[pq];
        if (cp_style) {
            // sσ ∈ L(G) \ L(R) while every agent controlling σ can extend an
            // indistinguishable string by σ inside L(R).
            if (!defined(ctx.det_plant.automaton, g, e) || defined(ctx.det_spec.automaton, r, e))
                return false;
        } else {
            // sσ ∈ L(R) while every agent controlling σ has an
            // indistinguishable string whose σ-extension leaves L(R).
            if (!defined(ctx.det_spec.automaton, r, e)) return false;
        }
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (sets[i].count(e) == 0) continue;
            StateId t = comp[i + 1];
            bool confused = cp_style ? spec_defined(t, e) : (plant_defined(t, e) && !spec_defined(t, e));
            if (!confused) return false;
        }
        return true;
    }

    struct Violation {
        EventString s;
        EventId sigma;
        std::vector<AgentConfusion> per_agent;
    };

    std::optional<Violation> run() {
        const std::size_t n = ctx.problem.agents.size();
        const Automaton& track = track_automaton();
        std::map<std::vector<StateId>, int> index;
        std::vector<std::vector<StateId>> comp;
        struct Edge {
            int pred;
            bool pad;
            EventId ev;
            std::size_t agent;
        };
        std::vector<Edge> parent;

        auto add = [&](std::vector<StateId> c, Edge e) -> int {
            auto it = index.find(c);
            if (it != index.end()) return -1;
            int id = static_cast<int>(comp.size());
            index.emplace(c, id);
            comp.push_back(std::move(c));
            parent.push_back(e);
            return id;
        };

        std::vector<StateId> init(n + 1, 0);
        init[0] = ctx.gr.automaton.initial();
        for (std::size_t i = 0; i < n; ++i) init[i + 1] = track.initial();
        add(init, Edge{-1, false, 0, 0});

        std::vector<int> layer{0};
        while (!layer.empty()) {
            // Close the layer under pad moves (agent-private unobservable steps).
            for (std::size_t qi = 0; qi < layer.size(); ++qi) {
                const auto c = comp[static_cast<std::size_t>(layer[qi])];
                for (std::size_t i = 0; i < n; ++i) {
                    for (EventId e : unobs[i]) {
                        const auto& succ = track.successors(c[i + 1], e);
                        if (succ.empty()) continue;
                        auto next = c;
                        next[i + 1] = succ[0];
                        int id = add(std::move(next), Edge{layer[qi], true, e, i});
                        if (id >= 0) layer.push_back(id);
                    }
                }
            }
            // Scan for a violation, shortest |s| first.
            for (int idx : layer) {
                for (EventId e : range) {
                    if (!violation_at(comp[static_cast<std::size_t>(idx)], e)) continue;
                    return reconstruct(comp, parent, idx, e);
                }
            }
            // Step moves extend the true string by one event.
            std::vector<int> next_layer;
            for (int idx : layer) {
                const auto c = comp[static_cast<std::size_t>(idx)];
                for (EventId e = 0; e < ctx.problem.plant.event_count(); ++e) {
                    const auto& pq_succ = ctx.gr.automaton.successors(c[0], e);
                    if (pq_succ.empty()) continue;
                    auto next = c;
                    next[0] = pq_succ[0];
                    bool feasible = true;
                    for (std::size_t i = 0; i < n && feasible; ++i) {
                        if (unobs[i].count(e) != 0) continue;  // agent does not see e
                        const auto& ts = track.successors(c[i + 1], e);
                        if (ts.empty())
                            feasible = false;
                        else
                            next[i + 1] = ts[0];
                    }
                    if (!feasible) continue;
                    int id = add(std::move(next), Edge{idx, false, e, 0});
                    if (id >= 0) next_layer.push_back(id);
                }
            }
            layer = std::move(next_layer);
        }
        return std::nullopt;
    }

  private:
    template <typename EdgeVec>
    Violation reconstruct(const std::vector<std::vector<StateId>>& comp, const EdgeVec& parent, int idx,
                          EventId sigma) const {
        struct Rec {
            bool pad;
            EventId ev;
            std::size_t agent;
        };
        std::vector<Rec> path;
        int cur = idx;
        while (parent[static_cast<std::size_t>(cur)].pred >= 0) {
            const auto& e = parent[static_cast<std::size_t>(cur)];
            path.push_back({e.pad, e.ev, e.agent});
            cur = e.pred;
        }
        std::reverse(path.begin(), path.end());
        Violation v;
        v.sigma = sigma;
        const std::size_t n = ctx.problem.agents.size();
        std::vector<EventString> agent_strings(n);
        for (const auto& r : path) {
            if (r.pad) {
                agent_strings[r.agent].push_back(r.ev);
            } else {
                v.s.push_back(r.ev);
                for (std::size_t i = 0; i < n; ++i)
                    if (unobs[i].count(r.ev) == 0) agent_strings[i].push_back(r.ev);
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (sets[i].count(sigma) != 0)
                v.per_agent.push_back({ctx.problem.agents[i].index, agent_strings[i]});
        (void)comp;
        return v;
    }
};

}  // namespace detail

/// Language controllability of L(R) w.r.t. L(G) and the globally
/// uncontrollable events: no uncontrollable plant continuation may leave the
/// specification language.
inline ConditionEntry check_lang_controllable(const ProblemContext& ctx) {
    ConditionEntry entry{"lang-controllable", true, std::monostate{}, {}};
    EventSet uc = ctx.problem.sigma_uc();
    for (StateId s = 0; s < ctx.gr.automaton.state_count(); ++s) {
        auto [g, r] = ctx.gr.pairs[s];
        for (EventId e : uc) {
            if (detail::defined(ctx.det_plant.automaton, g, e) &&
                !detail::defined(ctx.det_spec.automaton, r, e)) {
                entry.holds = false;
                entry.witness = ControllabilityWitness{access_string(ctx.gr, s), e};
                return entry;
            }
        }
    }
    return entry;
}

/// C&P co-observability: every illegal controllable continuation has an
/// agent that controls the event and is never confused into permitting it.
/// `sets` defaults to each agent's controllable set; the general
/// architecture passes the enabled-by-default slices instead.
inline ConditionEntry check_cp_coobservable(const ProblemContext& ctx,
                                            const std::vector<EventSet>* sets = nullptr) {
    std::vector<EventSet> defaults;
    if (sets == nullptr) {
        for (const auto& ag : ctx.problem.agents) defaults.push_back(ag.controllable);
        sets = &defaults;
    }
    detail::CoobsVerifier verifier(ctx, *sets, /*cp=*/true);
    ConditionEntry entry{"coobservability-cp", true, std::monostate{}, {}};
    if (auto v = verifier.run()) {
        entry.holds = false;
        entry.witness = CoobservabilityWitness{v->s, v->sigma, v->per_agent};
    }
    return entry;
}

/// D&A co-observability: every legal controllable continuation has an agent
/// that controls the event and can safely enable it under any confusion.
inline ConditionEntry check_da_coobservable(const ProblemContext& ctx,
                                            const std::vector<EventSet>* sets = nullptr) {
    std::vector<EventSet> defaults;
    if (sets == nullptr) {
        for (const auto& ag : ctx.problem.agents) defaults.push_back(ag.controllable);
        sets = &defaults;
    }
    detail::CoobsVerifier verifier(ctx, *sets, /*cp=*/false);
    ConditionEntry entry{"coobservability-da", true, std::monostate{}, {}};
    if (auto v = verifier.run()) {
        entry.holds = false;
        entry.witness = CoobservabilityWitness{v->s, v->sigma, v->per_agent};
    }
    return entry;
}

/// General co-observability: C&P over the enabled-by-default slices plus
/// D&A over the disabled-by-default slices. Embeds both clause verdicts.
inline ConditionEntry check_gen_coobservable(const ProblemContext& ctx) {
    if (!ctx.problem.split)
        throw std::invalid_argument("general co-observability requires the Σ_ce/Σ_cd split");
    std::vector<EventSet> cei, cdi;
    for (std::size_t i = 0; i < ctx.problem.agents.size(); ++i) {
        cei.push_back(ctx.problem.sigma_cei(i));
        cdi.push_back(ctx.problem.sigma_cdi(i));
    }
    ConditionEntry cp = check_cp_coobservable(ctx, &cei);
    ConditionEntry da = check_da_coobservable(ctx, &cdi);
    ConditionEntry entry{"coobservability-general", cp.holds && da.holds, std::monostate{}, {}};
    entry.sub.push_back(std::move(cp));
    entry.sub.push_back(std::move(da));
    return entry;
}

/// Marked-language closure: a specification string marked by the plant must
/// be marked by the specification (marking in the closed loop comes from the
/// plant alone).
inline ConditionEntry check_marked_closed(const ProblemContext& ctx) {
    ConditionEntry entry{"marked-lang-closed", true, std::monostate{}, {}};
    for (StateId s = 0; s < ctx.gr.automaton.state_count(); ++s) {
        auto [g, r] = ctx.gr.pairs[s];
        if (ctx.det_plant.automaton.marked(g) && !ctx.det_spec.automaton.marked(r)) {
            entry.holds = false;
            entry.witness = MarkedClosureWitness{access_string(ctx.gr, s)};
            return entry;
        }
    }
    return entry;
}

/// Existence condition (1): G || det(R) must be bisimilar to R.
inline ConditionEntry check_plant_detspec_bisim(const ProblemContext& ctx) {
    ProductResult pr = product(ctx.problem.plant, ctx.det_spec.automaton);
    BisimWitness w = bisimilar(pr.automaton, ctx.problem.spec);
    ConditionEntry entry{"bisim-plant-detspec", w.verdict, std::monostate{}, {}};
    entry.witness = std::move(w);
    return entry;
}

/// Evaluates the four existence conditions of the architecture selected by
/// the problem; the co-observability variant follows the architecture.
inline Verdict decide_existence(const ProblemContext& ctx) {
    Verdict v;
    v.architecture = ctx.problem.architecture;
    v.entries.push_back(check_plant_detspec_bisim(ctx));
    v.entries.push_back(check_lang_controllable(ctx));
    switch (ctx.problem.architecture) {
        case Architecture::conjunctive: v.entries.push_back(check_cp_coobservable(ctx)); break;
        case Architecture::disjunctive: v.entries.push_back(check_da_coobservable(ctx)); break;
        case Architecture::general: v.entries.push_back(check_gen_coobservable(ctx)); break;
    }
    v.entries.push_back(check_marked_closed(ctx));
    v.overall = true;
    for (const auto& e : v.entries) v.overall &= e.holds;
    return v;
}

inline Verdict decide_existence(const ControlProblem& p) { return decide_existence(prepare(p)); }

}  // namespace bisup
