#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bisup {

using StateId = std::uint32_t;
using EventId = std::uint32_t;

/// A word over the alphabet; empty vector is the empty string.
using EventString = std::vector<EventId>;
using EventSet = std::set<EventId>;

/// Finite-state nondeterministic transition system with marking.
///
/// States and events carry a stable total order (declaration order), which
/// every algorithm and serializer in this library iterates in. That makes
/// all derived constructions and outputs byte-reproducible.
class Automaton {
  public:
    struct State {
        std::string name;
        bool marked = false;
        std::map<EventId, std::vector<StateId>> succ;  // successor lists kept sorted
    };

    EventId add_event(std::string name) {
        if (event_index_.count(name) != 0)
            throw std::invalid_argument("duplicate event: " + name);
        events_.push_back(name);
        EventId id = static_cast<EventId>(events_.size() - 1);
        event_index_.emplace(std::move(name), id);
        return id;
    }

    StateId add_state(std::string name, bool marked = false) {
        if (state_index_.count(name) != 0)
            throw std::invalid_argument("duplicate state: " + name);
        states_.push_back(State{name, marked, {}});
        StateId id = static_cast<StateId>(states_.size() - 1);
        state_index_.emplace(std::move(name), id);
        return id;
    }

    void set_initial(StateId s) {
        check_state(s);
        initial_ = s;
    }

    void set_marked(StateId s, bool marked = true) {
        check_state(s);
        states_[s].marked = marked;
    }

    void add_transition(StateId from, EventId event, StateId to) {
        check_state(from);
        check_state(to);
        check_event(event);
        auto& v = states_[from].succ[event];
        auto it = std::lower_bound(v.begin(), v.end(), to);
        if (it == v.end() || *it != to) v.insert(it, to);
    }

    std::size_t state_count() const { return states_.size(); }
    std::size_t event_count() const { return events_.size(); }

    std::size_t transition_count() const {
        std::size_t n = 0;
        for (const auto& st : states_)
            for (const auto& [ev, succs] : st.succ) n += succs.size();
        return n;
    }

    const State& state(StateId s) const {
        check_state(s);
        return states_[s];
    }

    const std::string& state_name(StateId s) const { return state(s).name; }
    const std::string& event_name(EventId e) const {
        check_event(e);
        return events_[e];
    }

    const std::vector<std::string>& event_names() const { return events_; }

    std::optional<StateId> find_state(std::string_view name) const {
        auto it = state_index_.find(name);
        if (it == state_index_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<EventId> find_event(std::string_view name) const {
        auto it = event_index_.find(name);
        if (it == event_index_.end()) return std::nullopt;
        return it->second;
    }

    StateId initial() const { return initial_; }
    bool marked(StateId s) const { return state(s).marked; }

    const std::vector<StateId>& successors(StateId s, EventId e) const {
        check_state(s);
        check_event(e);
        auto it = states_[s].succ.find(e);
        if (it == states_[s].succ.end()) return empty_;
        return it->second;
    }

    bool has_transition(StateId s, EventId e) const { return !successors(s, e).empty(); }

    bool same_alphabet(const Automaton& other) const { return events_ == other.events_; }

    bool deterministic() const {
        for (const auto& st : states_)
            for (const auto& [ev, succs] : st.succ)
                if (succs.size() > 1) return false;
        return true;
    }

    /// Visits transitions in canonical (source, event, target) order.
    template <typename Fn>
    void for_each_transition(Fn&& fn) const {
        for (StateId s = 0; s < states_.size(); ++s)
            for (const auto& [ev, succs] : states_[s].succ)
                for (StateId t : succs) fn(s, ev, t);
    }

    EventSet full_alphabet() const {
        EventSet all;
        for (EventId e = 0; e < events_.size(); ++e) all.insert(e);
        return all;
    }

  private:
    void check_state(StateId s) const {
        if (s >= states_.size()) throw std::invalid_argument("unknown state id");
    }
    void check_event(EventId e) const {
        if (e >= events_.size()) throw std::invalid_argument("unknown event id");
    }

    std::vector<State> states_;
    std::vector<std::string> events_;
    std::map<std::string, StateId, std::less<>> state_index_;
    std::map<std::string, EventId, std::less<>> event_index_;
    StateId initial_ = 0;
    inline static const std::vector<StateId> empty_{};
};

enum class Accept { neither, in_language, marked };

/// E(x): events with at least one outgoing transition at x.
inline EventSet active_events(const Automaton& a, StateId x) {
    EventSet out;
    for (const auto& [ev, succs] : a.state(x).succ)
        if (!succs.empty()) out.insert(ev);
    return out;
}

/// Membership of s in L (some run exists) and L_m (some run ends marked).
inline Accept accepts(const Automaton& a, const EventString& s) {
    std::set<StateId> current{a.initial()};
    for (EventId e : s) {
        if (e >= a.event_count()) throw std::invalid_argument("event not in alphabet");
        std::set<StateId> next;
        for (StateId x : current)
            for (StateId y : a.successors(x, e)) next.insert(y);
        if (next.empty()) return Accept::neither;
        current = std::move(next);
    }
    for (StateId x : current)
        if (a.marked(x)) return Accept::marked;
    return Accept::in_language;
}

inline bool in_language(const Automaton& a, const EventString& s) {
    return accepts(a, s) != Accept::neither;
}

inline bool in_marked_language(const Automaton& a, const EventString& s) {
    return accepts(a, s) == Accept::marked;
}

/// Natural projection: erases events outside `observable`, preserving order.
inline EventString project(const EventString& s, const EventSet& observable) {
    EventString out;
    for (EventId e : s)
        if (observable.count(e) != 0) out.push_back(e);
    return out;
}

/// Prunes states unreachable from the initial state; languages unchanged.
inline Automaton reachable(const Automaton& a) {
    std::vector<bool> seen(a.state_count(), false);
    std::vector<StateId> order;
    seen[a.initial()] = true;
    order.push_back(a.initial());
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& [ev, succs] : a.state(order[i]).succ)
            for (StateId t : succs)
                if (!seen[t]) {
                    seen[t] = true;
                    order.push_back(t);
                }
    }
    // Keep declaration order of the surviving states.
    Automaton out;
    for (const auto& name : a.event_names()) out.add_event(name);
    std::vector<StateId> remap(a.state_count(), 0);
    for (StateId s = 0; s < a.state_count(); ++s)
        if (seen[s]) remap[s] = out.add_state(a.state_name(s), a.marked(s));
    out.set_initial(remap[a.initial()]);
    a.for_each_transition([&](StateId s, EventId e, StateId t) {
        if (seen[s] && seen[t]) out.add_transition(remap[s], e, remap[t]);
    });
    return out;
}

inline EventString to_event_string(const Automaton& a, const std::vector<std::string>& names) {
    EventString s;
    s.reserve(names.size());
    for (const auto& n : names) {
        auto id = a.find_event(n);
        if (!id) throw std::invalid_argument("event not in alphabet: " + n);
        s.push_back(*id);
    }
    return s;
}

inline std::string format_event_string(const Automaton& a, const EventString& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0) out += ' ';
        out += a.event_name(s[i]);
    }
    return out;
}

inline std::string format_event_set(const Automaton& a, const EventSet& set) {
    std::string out = "{";
    bool first = true;
    for (EventId e : set) {
        if (!first) out += ',';
        out += a.event_name(e);
        first = false;
    }
    return out + "}";
}

inline EventSet set_union(const EventSet& a, const EventSet& b) {
    EventSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

inline EventSet set_intersection(const EventSet& a, const EventSet& b) {
    EventSet out;
    for (EventId e : a)
        if (b.count(e) != 0) out.insert(e);
    return out;
}

inline EventSet set_difference(const EventSet& a, const EventSet& b) {
    EventSet out;
    for (EventId e : a)
        if (b.count(e) == 0) out.insert(e);
    return out;
}

inline bool is_subset(const EventSet& a, const EventSet& b) {
    return std::all_of(a.begin(), a.end(), [&](EventId e) { return b.count(e) != 0; });
}

}  // namespace bisup
