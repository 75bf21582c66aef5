#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bisup/checks.hpp"
#include "bisup/oracle.hpp"
#include "bisup/synthesis.hpp"

namespace bisup {

using nlohmann::json;

inline json event_string_json(const Automaton& a, const EventString& s) {
    json arr = json::array();
    for (EventId e : s) arr.push_back(a.event_name(e));
    return arr;
}

inline json event_set_json(const Automaton& a, const EventSet& s) {
    json arr = json::array();
    for (EventId e : s) arr.push_back(a.event_name(e));
    return arr;
}

inline json counterexample_json(const Automaton& alphabet_holder, const CounterexampleNode& node) {
    json j;
    j["pair"] = {node.state_a, node.state_b};
    j["side"] = node.side == 0 ? "left" : "right";
    if (node.kind == CounterexampleNode::Kind::marking) {
        j["kind"] = "marking";
    } else {
        j["kind"] = "move";
        j["event"] = alphabet_holder.event_name(node.event);
        j["to"] = node.moved_to;
        json responses = json::array();
        for (const auto& r : node.responses) responses.push_back(counterexample_json(alphabet_holder, r));
        j["responses"] = std::move(responses);
    }
    return j;
}

inline json bisim_witness_json(const Automaton& alphabet_holder, const BisimWitness& w) {
    json j;
    j["bisimilar"] = w.verdict;
    if (w.verdict) {
        json rel = json::array();
        for (const auto& [a, b] : w.relation) rel.push_back({a, b});
        j["relation"] = std::move(rel);
    } else if (w.counterexample) {
        j["counterexample"] = counterexample_json(alphabet_holder, *w.counterexample);
    }
    return j;
}

inline json condition_witness_json(const Automaton& a, const ConditionWitness& w) {
    if (std::holds_alternative<std::monostate>(w)) return nullptr;
    if (const auto* c = std::get_if<ControllabilityWitness>(&w)) {
        return {{"s", event_string_json(a, c->s)}, {"sigma", a.event_name(c->sigma)}};
    }
    if (const auto* c = std::get_if<CoobservabilityWitness>(&w)) {
        json per_agent = json::array();
        for (const auto& conf : c->per_agent)
            per_agent.push_back({{"i", conf.agent_index}, {"confusing", event_string_json(a, conf.confusing)}});
        return {{"s", event_string_json(a, c->s)},
                {"sigma", a.event_name(c->sigma)},
                {"per_agent", std::move(per_agent)}};
    }
    if (const auto* c = std::get_if<MarkedClosureWitness>(&w)) {
        return {{"s", event_string_json(a, c->s)}};
    }
    if (const auto* c = std::get_if<BisimWitness>(&w)) {
        return bisim_witness_json(a, *c);
    }
    return nullptr;
}

inline json condition_entry_json(const Automaton& a, const ConditionEntry& e) {
    json j;
    j["condition"] = e.id;
    j["holds"] = e.holds;
    j["witness"] = e.holds && !std::holds_alternative<BisimWitness>(e.witness)
                       ? json(nullptr)
                       : condition_witness_json(a, e.witness);
    if (!e.sub.empty()) {
        json sub = json::array();
        for (const auto& s : e.sub) sub.push_back(condition_entry_json(a, s));
        j["sub"] = std::move(sub);
    }
    return j;
}

inline json verdict_json(const Automaton& a, const Verdict& v) {
    json conditions = json::array();
    for (const auto& e : v.entries) conditions.push_back(condition_entry_json(a, e));
    return {{"schema", 1},
            {"architecture", to_string(v.architecture)},
            {"overall", v.overall},
            {"conditions", std::move(conditions)}};
}

inline json automaton_json(const Automaton& a) {
    json states = json::array();
    for (StateId s = 0; s < a.state_count(); ++s)
        states.push_back({{"name", a.state_name(s)}, {"marked", a.marked(s)}});
    json trans = json::array();
    a.for_each_transition([&](StateId s, EventId e, StateId t) {
        trans.push_back({a.state_name(s), a.event_name(e), a.state_name(t)});
    });
    json alphabet = json::array();
    for (const auto& e : a.event_names()) alphabet.push_back(e);
    return {{"alphabet", std::move(alphabet)},
            {"states", std::move(states)},
            {"initial", a.state_name(a.initial())},
            {"transitions", std::move(trans)}};
}

inline json supervisor_json(const LocalSupervisor& s) {
    json decisions = json::object();
    for (StateId y = 0; y < s.automaton.state_count(); ++y)
        decisions[s.automaton.state_name(y)] = event_set_json(s.automaton, s.decisions[y]);
    return {{"agent", s.agent_index},
            {"automaton", automaton_json(s.automaton)},
            {"decisions", std::move(decisions)},
            {"dump", s.dump ? json(s.automaton.state_name(*s.dump)) : json(nullptr)}};
}

/// Full machine-readable synthesis bundle.
inline json synthesis_json(const ProblemContext& ctx, const SynthesisResult& r) {
    json j;
    j["schema"] = 1;
    j["architecture"] = to_string(ctx.problem.architecture);
    j["success"] = r.success;
    j["verdict"] = verdict_json(ctx.problem.plant, r.verdict);
    if (!r.success) return j;
    json sups = json::array();
    for (const auto& s : r.supervisors) sups.push_back(supervisor_json(s));
    j["supervisors"] = std::move(sups);
    json provenance = json::object();
    for (StateId s = 0; s < r.closed_loop.automaton.state_count(); ++s) {
        json sup_states = json::array();
        for (std::size_t i = 0; i < r.closed_loop.supervisor_states[s].size(); ++i)
            sup_states.push_back(
                r.supervisors[i].automaton.state_name(r.closed_loop.supervisor_states[s][i]));
        provenance[r.closed_loop.automaton.state_name(s)] = {
            {"plant", ctx.problem.plant.state_name(r.closed_loop.plant_state[s])},
            {"supervisors", std::move(sup_states)}};
    }
    j["closed_loop"] = {{"automaton", automaton_json(r.closed_loop.automaton)},
                        {"provenance", std::move(provenance)}};
    j["relation"] = bisim_witness_json(r.closed_loop.automaton, r.certificate);
    return j;
}

inline json oracle_outcome_json(const Automaton& a, const oracle::OracleOutcome& o) {
    json j;
    j["property"] = o.property;
    j["holds"] = o.holds;
    j["exact"] = o.exact;
    j["depth"] = o.depth;
    if (o.witness) {
        json per_agent = json::array();
        for (const auto& conf : o.witness->per_agent)
            per_agent.push_back({{"i", conf.agent_index}, {"confusing", event_string_json(a, conf.confusing)}});
        j["witness"] = {{"s", event_string_json(a, o.witness->s)}, {"per_agent", std::move(per_agent)}};
        if (o.property != "marked-closed") j["witness"]["sigma"] = a.event_name(o.witness->sigma);
    }
    return j;
}

}  // namespace bisup
