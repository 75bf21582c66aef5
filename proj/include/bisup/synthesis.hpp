#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bisup/checks.hpp"
#include "bisup/observer.hpp"
#include "bisup/problem.hpp"

namespace bisup {

/// Supervisor automaton S_i: the observable part follows the agent's state
/// estimate, unobservable events self-loop, and locally uncontrollable
/// observable events with an empty estimate extension fall through to the
/// dump state. All states are marked. `estimates` holds, per non-dump state,
/// the estimate members: det(R) states when unpaired, det(G)||det(R) states
/// when paired (the pairing is needed to evaluate safe-enabling decisions).
struct SupervisorAutomaton {
    Automaton automaton;
    std::optional<StateId> dump;
    bool paired = false;
    std::vector<std::vector<StateId>> estimates;
};

struct LocalSupervisor {
    int agent_index = 0;  // display index
    Automaton automaton;
    std::optional<StateId> dump;
    bool paired = false;
    std::vector<EventSet> decisions;  // per state
};

struct FusionRule {
    Architecture tag = Architecture::conjunctive;
    EventSet uncontrollable;     // Σ_uc
    EventSet enabled_default;    // Σ_ce (general only)
    EventSet disabled_default;   // Σ_cd (general only)
};

/// Closed loop of Def.-11 shape: composite states carry the plant state and
/// the vector of supervisor states; marking comes from the plant alone.
struct ClosedLoop {
    Automaton automaton;
    std::vector<StateId> plant_state;                  // per composite state
    std::vector<std::vector<StateId>> supervisor_states;
};

inline SupervisorAutomaton synth_supervisor_automaton(const ProblemContext& ctx, std::size_t agent,
                                                      bool paired) {
    const ControlProblem& p = ctx.problem;
    const EventSet observable = p.agents.at(agent).observable;
    const EventSet uoi = p.sigma_uoi(agent);
    const EventSet uci = p.sigma_uci(agent);

    DeterministicView base;
    if (paired) {
        base.automaton = ctx.gr.automaton;
        for (StateId s = 0; s < ctx.gr.automaton.state_count(); ++s) base.denotes.push_back({s});
    } else {
        base = ctx.det_spec;
        for (StateId s = 0; s < base.automaton.state_count(); ++s) base.denotes[s] = {s};
    }
    DeterministicView obs = observer(base, observable);

    SupervisorAutomaton out;
    out.paired = paired;
    for (const auto& e : p.plant.event_names()) out.automaton.add_event(e);
    for (StateId s = 0; s < obs.automaton.state_count(); ++s) {
        out.automaton.add_state(obs.automaton.state_name(s), /*marked=*/true);
        out.estimates.push_back(obs.denotes[s]);
    }
    out.automaton.set_initial(obs.automaton.initial());

    auto dump_state = [&]() {
        if (!out.dump) {
            std::string name = "zd" + std::to_string(p.agents.at(agent).index);
            out.dump = out.automaton.add_state(name, /*marked=*/true);
            out.estimates.emplace_back();
            for (EventId e : set_union(uoi, uci)) out.automaton.add_transition(*out.dump, e, *out.dump);
        }
        return *out.dump;
    };

    for (StateId s = 0; s < obs.automaton.state_count(); ++s) {
        for (EventId e = 0; e < out.automaton.event_count(); ++e) {
            if (observable.count(e) != 0) {
                const auto& succ = obs.automaton.successors(s, e);
                if (!succ.empty()) {
                    out.automaton.add_transition(s, e, succ[0]);
                } else if (uci.count(e) != 0) {
                    out.automaton.add_transition(s, e, dump_state());
                }
                // Observable, locally controllable, no estimate extension:
                // undefined; disabling is effected by the decision map.
            } else {
                out.automaton.add_transition(s, e, s);
            }
        }
    }
    return out;
}

inline SupervisorAutomaton synth_supervisor_automaton(const ProblemContext& ctx, std::size_t agent) {
    return synth_supervisor_automaton(ctx, agent, ctx.problem.architecture != Architecture::conjunctive);
}

namespace detail {

/// Is some estimate member's specification component able to extend by e?
inline bool estimate_extends(const ProblemContext& ctx, const SupervisorAutomaton& sup,
                             const std::vector<StateId>& estimate, EventId e) {
    for (StateId m : estimate) {
        StateId r = sup.paired ? ctx.gr.pairs[m].second : m;
        if (ctx.det_spec.automaton.has_transition(r, e)) return true;
    }
    return false;
}

/// Does every estimate member whose plant component extends by e stay inside
/// the specification? (Requires the paired estimate.)
inline bool estimate_safe(const ProblemContext& ctx, const SupervisorAutomaton& sup,
                          const std::vector<StateId>& estimate, EventId e) {
    for (StateId m : estimate) {
        auto [g, r] = ctx.gr.pairs[m];
        if (ctx.det_plant.automaton.has_transition(g, e) && !ctx.det_spec.automaton.has_transition(r, e))
            return false;
    }
    return true;
}

}  // namespace detail

/// Local decision map ψ_i per architecture. Conjunctive decisions enable
/// everything outside the agent's control plus the estimate-extending
/// controllable events; disjunctive decisions enable only the provably safe
/// controllable events on top of Σ_uc; the general map mixes both clauses
/// over the Σ_ce / Σ_cd slices.
inline std::vector<EventSet> synth_decisions(const ProblemContext& ctx, std::size_t agent,
                                             Architecture arch, const SupervisorAutomaton& sup) {
    if (arch != Architecture::conjunctive && !sup.paired)
        throw std::invalid_argument("synth_decisions: architecture requires the paired supervisor basis");
    const ControlProblem& p = ctx.problem;
    const EventSet sigma_c = p.sigma_c();
    const EventSet sigma_uc = p.sigma_uc();
    const EventSet ci = p.agents.at(agent).controllable;
    const EventSet others_c = set_difference(sigma_c, ci);

    EventSet cei, cdi, ce_default;
    if (arch == Architecture::general) {
        cei = p.sigma_cei(agent);
        cdi = p.sigma_cdi(agent);
        ce_default = set_difference(p.split->enabled, cei);
    }

    std::vector<EventSet> decisions(sup.automaton.state_count());
    for (StateId s = 0; s < sup.automaton.state_count(); ++s) {
        bool is_dump = sup.dump && *sup.dump == s;
        EventSet d;
        switch (arch) {
            case Architecture::conjunctive:
                d = set_union(others_c, sigma_uc);
                if (!is_dump)
                    for (EventId e : ci)
                        if (detail::estimate_extends(ctx, sup, sup.estimates[s], e)) d.insert(e);
                break;
            case Architecture::disjunctive:
                d = sigma_uc;
                if (!is_dump)
                    for (EventId e : ci)
                        if (detail::estimate_safe(ctx, sup, sup.estimates[s], e)) d.insert(e);
                break;
            case Architecture::general:
                d = set_union(sigma_uc, ce_default);
                if (!is_dump) {
                    for (EventId e : cei)
                        if (detail::estimate_extends(ctx, sup, sup.estimates[s], e)) d.insert(e);
                    for (EventId e : cdi)
                        if (detail::estimate_safe(ctx, sup, sup.estimates[s], e)) d.insert(e);
                }
                break;
        }
        decisions[s] = std::move(d);
    }
    return decisions;
}

inline LocalSupervisor synth_local_supervisor(const ProblemContext& ctx, std::size_t agent,
                                              Architecture arch) {
    SupervisorAutomaton sup = synth_supervisor_automaton(ctx, agent, arch != Architecture::conjunctive);
    std::vector<EventSet> decisions = synth_decisions(ctx, agent, arch, sup);
    return LocalSupervisor{ctx.problem.agents.at(agent).index, std::move(sup.automaton), sup.dump,
                           sup.paired, std::move(decisions)};
}

/// Structural scan of the compatibility invariants and the architecture's
/// default-decision requirements.
inline std::vector<Diagnostic> check_compatibility(const LocalSupervisor& sup, const ControlProblem& p,
                                                   std::size_t agent) {
    std::vector<Diagnostic> diags;
    const EventSet uoi = p.sigma_uoi(agent);
    const EventSet uci = p.sigma_uci(agent);
    const Automaton& a = sup.automaton;
    if (!a.deterministic())
        diags.push_back({0, 0, "nondeterministic-supervisor",
                         "supervisor " + std::to_string(sup.agent_index) + " is nondeterministic"});
    for (StateId s = 0; s < a.state_count(); ++s) {
        for (EventId e : uoi) {
            const auto& succ = a.successors(s, e);
            if (succ.size() != 1 || succ[0] != s)
                diags.push_back({0, 0, "not-uo-compatible",
                                 "state " + a.state_name(s) + " lacks a self-loop on unobservable " +
                                     a.event_name(e)});
        }
        for (EventId e : uci) {
            if (!a.has_transition(s, e))
                diags.push_back({0, 0, "not-uc-compatible",
                                 "state " + a.state_name(s) + " undefined on uncontrollable " +
                                     a.event_name(e)});
        }
        if (!a.marked(s))
            diags.push_back({0, 0, "unmarked-supervisor-state", "state " + a.state_name(s) + " unmarked"});
        const EventSet& d = sup.decisions[s];
        const EventSet others_c = set_difference(p.sigma_c(), p.agents.at(agent).controllable);
        switch (p.architecture) {
            case Architecture::conjunctive:
                if (!is_subset(others_c, d))
                    diags.push_back({0, 0, "default-violation",
                                     "conjunctive decision must enable events of other agents"});
                break;
            case Architecture::disjunctive:
                if (!set_intersection(others_c, d).empty())
                    diags.push_back({0, 0, "default-violation",
                                     "disjunctive decision must disable events of other agents"});
                break;
            case Architecture::general: {
                EventSet ce_others = set_difference(p.split->enabled, p.sigma_cei(agent));
                EventSet cd_others = set_difference(p.split->disabled, p.sigma_cdi(agent));
                if (!is_subset(ce_others, d) || !set_intersection(cd_others, d).empty())
                    diags.push_back({0, 0, "default-violation",
                                     "general decision violates the enable/disable defaults"});
                break;
            }
        }
    }
    return diags;
}

inline FusionRule fusion_rule_for(const ControlProblem& p) {
    FusionRule rule;
    rule.tag = p.architecture;
    rule.uncontrollable = p.sigma_uc();
    if (p.architecture == Architecture::general) {
        rule.enabled_default = p.split->enabled;
        rule.disabled_default = p.split->disabled;
    }
    return rule;
}

/// Decision fusion: intersection (conjunctive), union (disjunctive), or the
/// Σ_ce/Σ_cd mix (general). The result always contains Σ_uc.
inline EventSet fuse(const FusionRule& rule, const std::vector<EventSet>& decisions) {
    if (decisions.empty()) throw std::invalid_argument("fuse: one decision per agent required");
    EventSet inter = decisions[0];
    EventSet uni = decisions[0];
    for (std::size_t i = 1; i < decisions.size(); ++i) {
        inter = set_intersection(inter, decisions[i]);
        uni = set_union(uni, decisions[i]);
    }
    switch (rule.tag) {
        case Architecture::conjunctive: return set_union(inter, rule.uncontrollable);
        case Architecture::disjunctive: return set_union(uni, rule.uncontrollable);
        case Architecture::general:
            return set_union(set_union(set_intersection(inter, rule.enabled_default),
                                       set_intersection(uni, rule.disabled_default)),
                             rule.uncontrollable);
    }
    throw std::logic_error("fuse: unknown rule");
}

/// Breadth-first composite construction: a transition on σ exists iff the
/// plant moves, every supervisor moves, and σ is in the fused decision at
/// the current supervisor states. Composite marking follows the plant.
inline ClosedLoop build_closed_loop(const ProblemContext& ctx, const std::vector<LocalSupervisor>& sups,
                                    const FusionRule& rule) {
    const ControlProblem& p = ctx.problem;
    if (sups.size() != p.agents.size())
        throw std::invalid_argument("build_closed_loop: one supervisor per agent required");
    for (std::size_t i = 0; i < sups.size(); ++i) {
        auto diags = check_compatibility(sups[i], p, i);
        if (!diags.empty()) throw ValidationError(std::move(diags));
    }

    ClosedLoop out;
    for (const auto& e : p.plant.event_names()) out.automaton.add_event(e);

    std::map<std::vector<StateId>, StateId> index;  // [plant, y1..yn] -> composite
    auto intern = [&](StateId plant, const std::vector<StateId>& ys) {
        std::vector<StateId> key{plant};
        key.insert(key.end(), ys.begin(), ys.end());
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        std::string name = p.plant.state_name(plant);
        for (std::size_t i = 0; i < ys.size(); ++i) name += "/" + sups[i].automaton.state_name(ys[i]);
        StateId id = out.automaton.add_state(std::move(name), p.plant.marked(plant));
        index.emplace(std::move(key), id);
        out.plant_state.push_back(plant);
        out.supervisor_states.push_back(ys);
        return id;
    };

    std::vector<StateId> y0;
    for (const auto& s : sups) y0.push_back(s.automaton.initial());
    out.automaton.set_initial(intern(p.plant.initial(), y0));

    for (StateId cur = 0; cur < out.automaton.state_count(); ++cur) {
        StateId x = out.plant_state[cur];
        std::vector<StateId> ys = out.supervisor_states[cur];
        std::vector<EventSet> local;
        for (std::size_t i = 0; i < sups.size(); ++i) local.push_back(sups[i].decisions[ys[i]]);
        EventSet fused = fuse(rule, local);
        for (EventId e = 0; e < out.automaton.event_count(); ++e) {
            if (fused.count(e) == 0) continue;
            const auto& plant_succ = p.plant.successors(x, e);
            if (plant_succ.empty()) continue;
            std::vector<StateId> ys_next(ys.size());
            bool all_move = true;
            for (std::size_t i = 0; i < sups.size() && all_move; ++i) {
                const auto& s = sups[i].automaton.successors(ys[i], e);
                if (s.empty())
                    all_move = false;
                else
                    ys_next[i] = s[0];
            }
            if (!all_move) continue;
            for (StateId xn : plant_succ) out.automaton.add_transition(cur, e, intern(xn, ys_next));
        }
    }
    return out;
}

struct SynthesisResult {
    bool success = false;
    Verdict verdict;
    std::vector<LocalSupervisor> supervisors;
    FusionRule rule;
    ClosedLoop closed_loop;
    BisimWitness certificate;  // closed loop vs specification
};

/// Decides existence and, when all conditions hold, constructs the local
/// supervisors, fuses them, builds the closed loop, and proves it bisimilar
/// to the specification before returning. A failed internal proof is a
/// defect, not a result.
inline SynthesisResult synthesize(const ProblemContext& ctx) {
    SynthesisResult result;
    result.verdict = decide_existence(ctx);
    if (!result.verdict.overall) return result;

    for (std::size_t i = 0; i < ctx.problem.agents.size(); ++i)
        result.supervisors.push_back(synth_local_supervisor(ctx, i, ctx.problem.architecture));
    result.rule = fusion_rule_for(ctx.problem);
    result.closed_loop = build_closed_loop(ctx, result.supervisors, result.rule);
    result.certificate = bisimilar(result.closed_loop.automaton, ctx.problem.spec);
    if (!result.certificate.verdict)
        throw std::logic_error("synthesize: conditions hold but the closed loop is not bisimilar "
                               "to the specification");
    result.success = true;
    return result;
}

inline SynthesisResult synthesize(const ControlProblem& p) { return synthesize(prepare(p)); }

}  // namespace bisup
