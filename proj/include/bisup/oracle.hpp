#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bisup/checks.hpp"
#include "bisup/problem.hpp"

namespace bisup::oracle {

/// The strings of length ≤ depth in L, each tagged with membership in L_m.
/// `saturated` records that no string of the maximal length exists, i.e. the
/// language was enumerated completely and the result is exact at any depth.
struct BoundedLanguage {
    int depth = 0;
    bool saturated = false;
    struct Entry {
        EventString s;
        bool marked = false;
    };
    std::vector<Entry> entries;
};

inline constexpr std::size_t kNoBudget = std::numeric_limits<std::size_t>::max();

/// Exact L and L_m up to the depth bound by breadth-first expansion over
/// strings. Returns nullopt when the entry budget is exceeded.
inline std::optional<BoundedLanguage> enumerate(const Automaton& a, int depth,
                                                std::size_t budget = kNoBudget) {
    BoundedLanguage out;
    out.depth = depth;
    struct Node {
        EventString s;
        std::set<StateId> states;
    };
    std::vector<Node> frontier{{EventString{}, {a.initial()}}};
    auto emit = [&](const Node& n) {
        bool marked = false;
        for (StateId x : n.states) marked |= a.marked(x);
        out.entries.push_back({n.s, marked});
        return out.entries.size() <= budget;
    };
    if (!emit(frontier[0])) return std::nullopt;
    for (int len = 0; len < depth && !frontier.empty(); ++len) {
        std::vector<Node> next;
        for (const auto& node : frontier) {
            for (EventId e = 0; e < a.event_count(); ++e) {
                std::set<StateId> succ;
                for (StateId x : node.states)
                    for (StateId y : a.successors(x, e)) succ.insert(y);
                if (succ.empty()) continue;
                Node n{node.s, std::move(succ)};
                n.s.push_back(e);
                if (!emit(n)) return std::nullopt;
                next.push_back(std::move(n));
            }
        }
        frontier = std::move(next);
    }
    out.saturated = frontier.empty();
    return out;
}

/// Published exactness bound for the bounded-language evaluation of each
/// property: one more than the state count of the corresponding verifier
/// composition (reachable det(G)||det(R) for the string track, det(R) or
/// det(G)||det(R) per agent track for the co-observability variants).
inline int sound_depth(std::string_view property, const ProblemContext& ctx) {
    const long gr = static_cast<long>(ctx.gr.automaton.state_count());
    const long dr = static_cast<long>(ctx.det_spec.automaton.state_count());
    const long n = static_cast<long>(ctx.problem.agents.size());
    const long cap = 1'000'000'000;
    auto powl_capped = [&](long base, long exp) {
        long r = 1;
        for (long i = 0; i < exp; ++i) {
            if (r > cap / std::max(base, 1L)) return cap;
            r *= base;
        }
        return r;
    };
    long bound;
    if (property == "lang-controllable" || property == "marked-closed") {
        bound = gr + 1;
    } else if (property == "cp-coobservable") {
        long t = powl_capped(dr, n);
        bound = (gr > cap / std::max(t, 1L)) ? cap : gr * t + 1;
    } else if (property == "da-coobservable" || property == "gen-coobservable") {
        bound = powl_capped(gr, n + 1);
        if (bound < cap) bound += 1;
    } else {
        throw std::invalid_argument("unknown property id: " + std::string(property));
    }
    return static_cast<int>(std::min(bound, cap));
}

/// Sound bound for bounded language-equality testing between two automata:
/// the product of their determinized state counts plus one.
inline int language_equality_depth(const Automaton& a, const Automaton& b) {
    return static_cast<int>(determinize(a).automaton.state_count() *
                                determinize(b).automaton.state_count() +
                            1);
}

struct OracleOutcome {
    std::string property;
    bool holds = true;
    bool exact = false;  // enumeration saturated or depth reached the sound bound
    int depth = 0;
    std::optional<CoobservabilityWitness> witness;  // σ plus per-agent confusions where applicable
};

namespace detail {

inline std::vector<EventSet> default_sets(const ControlProblem& p, std::string_view property) {
    std::vector<EventSet> sets;
    for (std::size_t i = 0; i < p.agents.size(); ++i) {
        if (property == "gen-coobservable-cp")
            sets.push_back(p.sigma_cei(i));
        else if (property == "gen-coobservable-da")
            sets.push_back(p.sigma_cdi(i));
        else
            sets.push_back(p.agents[i].controllable);
    }
    return sets;
}

/// Literal evaluation of a co-observability definition over the enumerated
/// language: quantifiers range over enumerated strings only.
inline std::optional<CoobservabilityWitness> coobs_violation(const ControlProblem& p,
                                                             const BoundedLanguage& lr,
                                                             const std::vector<EventSet>& sets,
                                                             bool cp_style) {
    EventSet range;
    for (const auto& s : sets) range = set_union(range, s);
    // Group enumerated strings by each agent's observation.
    std::vector<std::map<EventString, std::vector<std::size_t>>> by_projection(p.agents.size());
    for (std::size_t idx = 0; idx < lr.entries.size(); ++idx)
        for (std::size_t i = 0; i < p.agents.size(); ++i)
            by_projection[i][project(lr.entries[idx].s, p.agents[i].observable)].push_back(idx);

    for (const auto& entry : lr.entries) {
        for (EventId e : range) {
            EventString se = entry.s;
            se.push_back(e);
            if (cp_style) {
                if (!(in_language(p.plant, se) && !in_language(p.spec, se))) continue;
            } else {
                if (!in_language(p.spec, se)) continue;
            }
            bool all_confused = true;
            std::vector<AgentConfusion> confusions;
            for (std::size_t i = 0; i < p.agents.size() && all_confused; ++i) {
                if (sets[i].count(e) == 0) continue;
                EventString obs = project(entry.s, p.agents[i].observable);
                bool confused = false;
                auto it = by_projection[i].find(obs);
                if (it != by_projection[i].end()) {
                    for (std::size_t idx : it->second) {
                        EventString alt = lr.entries[idx].s;
                        alt.push_back(e);
                        bool bad = cp_style ? in_language(p.spec, alt)
                                            : (in_language(p.plant, alt) && !in_language(p.spec, alt));
                        if (bad) {
                            confused = true;
                            confusions.push_back({p.agents[i].index, lr.entries[idx].s});
                            break;
                        }
                    }
                }
                all_confused &= confused;
            }
            if (all_confused)
                return CoobservabilityWitness{entry.s, e, std::move(confusions)};
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Literal bounded-depth evaluation of one property definition. `depth < 0`
/// requests the sound bound; smaller values give a smoke result flagged as
/// not exact. Returns nullopt when enumeration exceeds the budget.
inline std::optional<OracleOutcome> oracle_check(std::string_view property, const ProblemContext& ctx,
                                                 int depth = -1, std::size_t budget = kNoBudget) {
    const ControlProblem& p = ctx.problem;
    int bound = sound_depth(property == "gen-coobservable" ? "da-coobservable" : property, ctx);
    if (property == "gen-coobservable")
        bound = std::max(bound, sound_depth("cp-coobservable", ctx));
    int k = depth < 0 ? bound : depth;

    auto lr = enumerate(p.spec, k, budget);
    if (!lr) return std::nullopt;

    OracleOutcome out;
    out.property = std::string(property);
    out.depth = k;
    out.exact = lr->saturated || k >= bound;

    if (property == "lang-controllable") {
        EventSet uc = p.sigma_uc();
        for (const auto& entry : lr->entries) {
            for (EventId e : uc) {
                EventString se = entry.s;
                se.push_back(e);
                if (in_language(p.plant, se) && !in_language(p.spec, se)) {
                    out.holds = false;
                    out.witness = CoobservabilityWitness{entry.s, e, {}};
                    return out;
                }
            }
        }
    } else if (property == "marked-closed") {
        for (const auto& entry : lr->entries) {
            if (in_marked_language(p.plant, entry.s) && !entry.marked) {
                out.holds = false;
                out.witness = CoobservabilityWitness{entry.s, 0, {}};
                return out;
            }
        }
    } else if (property == "cp-coobservable" || property == "da-coobservable") {
        auto sets = detail::default_sets(p, property);
        auto v = detail::coobs_violation(p, *lr, sets, property == "cp-coobservable");
        if (v) {
            out.holds = false;
            out.witness = std::move(v);
        }
    } else if (property == "gen-coobservable") {
        if (!p.split) throw std::invalid_argument("gen-coobservable requires the Σ_ce/Σ_cd split");
        auto cei = detail::default_sets(p, "gen-coobservable-cp");
        auto cdi = detail::default_sets(p, "gen-coobservable-da");
        auto v1 = detail::coobs_violation(p, *lr, cei, true);
        auto v2 = detail::coobs_violation(p, *lr, cdi, false);
        if (v1 || v2) {
            out.holds = false;
            out.witness = v1 ? std::move(v1) : std::move(v2);
        }
    } else {
        throw std::invalid_argument("unknown property id: " + std::string(property));
    }
    return out;
}

/// Def.-3 bisimilarity as a greatest-fixpoint pair elimination; independent
/// of the partition-refinement implementation it cross-checks.
inline bool naive_bisim(const Automaton& a, const Automaton& b) {
    if (!a.same_alphabet(b)) throw std::invalid_argument("naive_bisim: alphabet mismatch");
    const std::size_t na = a.state_count(), nb = b.state_count();
    std::vector<std::vector<bool>> rel(na, std::vector<bool>(nb));
    for (std::size_t x = 0; x < na; ++x)
        for (std::size_t y = 0; y < nb; ++y)
            rel[x][y] = a.marked(StateId(x)) == b.marked(StateId(y));
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t x = 0; x < na; ++x)
            for (std::size_t y = 0; y < nb; ++y) {
                if (!rel[x][y]) continue;
                bool ok = true;
                for (EventId e = 0; e < a.event_count() && ok; ++e) {
                    for (StateId xs : a.successors(StateId(x), e)) {
                        bool matched = false;
                        for (StateId ys : b.successors(StateId(y), e)) matched |= rel[xs][ys];
                        if (!matched) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) break;
                    for (StateId ys : b.successors(StateId(y), e)) {
                        bool matched = false;
                        for (StateId xs : a.successors(StateId(x), e)) matched |= rel[xs][ys];
                        if (!matched) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (!ok) {
                    rel[x][y] = false;
                    changed = true;
                }
            }
    }
    return rel[a.initial()][b.initial()];
}

struct RandomLimits {
    int max_plant_states = 6;
    int max_spec_states = 5;
    int max_agents = 3;
    int max_events = 5;
};

/// Reproducible random problem: a thin-language plant (tree plus a few extra
/// edges and at most one back edge), a specification pruned from it so that
/// L(R) ⊆ L(G) holds by construction, and random agent profiles.
inline ControlProblem random_problem(std::uint64_t seed, const RandomLimits& limits = {}) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(n, 1))); };
    auto chance = [&](double prob) { return (rng() % 1000) < static_cast<std::uint64_t>(prob * 1000); };

    const int nevents = 1 + pick(limits.max_events);
    const int nstates = 1 + pick(limits.max_plant_states);

    ControlProblem p;
    for (int e = 0; e < nevents; ++e) p.plant.add_event(std::string(1, static_cast<char>('a' + e)));
    for (int s = 0; s < nstates; ++s) p.plant.add_state("s" + std::to_string(s), chance(0.3));
    p.plant.set_initial(0);
    struct Edge {
        int src, ev, dst;
    };
    std::vector<Edge> edges;
    for (int s = 1; s < nstates; ++s) edges.push_back({pick(s), pick(nevents), s});
    const int extra = pick(3);
    for (int i = 0; i < extra && nstates > 1; ++i) {
        int src = pick(nstates - 1);
        int dst = src + 1 + pick(nstates - 1 - src);
        edges.push_back({src, pick(nevents), dst});
    }
    if (chance(0.5)) {
        int src = pick(nstates);
        edges.push_back({src, pick(nevents), pick(src + 1)});
    }
    for (const auto& e : edges)
        p.plant.add_transition(StateId(e.src), EventId(e.ev), StateId(e.dst));

    // Specification: pruned copy of the plant (sublanguage by construction).
    auto build_spec = [&](const std::vector<bool>& keep) {
        Automaton spec;
        for (int e = 0; e < nevents; ++e) spec.add_event(p.plant.event_name(EventId(e)));
        for (int s = 0; s < nstates; ++s)
            spec.add_state("r" + std::to_string(s), p.plant.marked(StateId(s)));
        spec.set_initial(0);
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (keep[i]) spec.add_transition(StateId(edges[i].src), EventId(edges[i].ev), StateId(edges[i].dst));
        return reachable(spec);
    };
    std::vector<bool> keep(edges.size(), true);
    for (std::size_t i = 0; i < edges.size(); ++i) keep[i] = !chance(0.3);
    Automaton spec = build_spec(keep);
    while (static_cast<int>(spec.state_count()) > limits.max_spec_states) {
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (keep[i]) kept.push_back(i);
        if (kept.empty()) break;
        keep[kept[static_cast<std::size_t>(pick(static_cast<int>(kept.size())))]] = false;
        spec = build_spec(keep);
    }
    // Unmark some spec states independently of the plant copy.
    for (StateId s = 0; s < spec.state_count(); ++s)
        if (spec.marked(s) && chance(0.3)) spec.set_marked(s, false);
    p.spec = std::move(spec);

    const int nagents = 1 + pick(limits.max_agents);
    for (int i = 0; i < nagents; ++i) {
        AgentProfile ag;
        ag.index = i + 1;
        bool full_obs = chance(0.3);
        for (int e = 0; e < nevents; ++e) {
            if (full_obs || chance(0.6)) ag.observable.insert(EventId(e));
            if (chance(0.5)) ag.controllable.insert(EventId(e));
        }
        p.agents.push_back(std::move(ag));
    }
    switch (pick(3)) {
        case 0: p.architecture = Architecture::conjunctive; break;
        case 1: p.architecture = Architecture::disjunctive; break;
        default: p.architecture = Architecture::general; break;
    }
    if (p.architecture == Architecture::general) {
        DefaultSplit split;
        for (EventId e : p.sigma_c())
            (chance(0.5) ? split.enabled : split.disabled).insert(e);
        p.split = std::move(split);
    }
    return p;
}

}  // namespace bisup::oracle
