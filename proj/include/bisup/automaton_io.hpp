#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bisup/automaton.hpp"
#include "bisup/diagnostics.hpp"

namespace bisup {

/// Result of parsing the automaton text format. `decisions` is only present
/// for supervisor files that carry `decision <state>: <events>` lines.
struct ParsedAutomaton {
    std::optional<Automaton> automaton;
    std::map<StateId, EventSet> decisions;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return automaton.has_value() && diagnostics.empty(); }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace detail

/// Parses the line-oriented automaton format:
///
///   alphabet a b c
///   states x0 x1
///   initial x0
///   marked x0
///   trans x0 a x1
///
/// `#` starts a comment. Ids must be declared before use; violations are
/// reported with line numbers. Supervisor files may additionally carry
/// `decision x0: a b c` lines.
inline ParsedAutomaton parse_automaton(const std::string& text) {
    ParsedAutomaton result;
    Automaton a;
    bool has_initial = false;
    std::vector<Diagnostic>& diags = result.diagnostics;

    // Deferred sections: marked/trans/decision lines may precede declarations
    // only textually within the same pass, so we parse in two sweeps.
    struct Pending {
        std::size_t line;
        std::vector<std::string> tokens;
    };
    std::vector<Pending> marked_lines, trans_lines, decision_lines, initial_lines;

    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        auto tokens = detail::split_ws(detail::strip_comment(raw));
        if (tokens.empty()) continue;
        const std::string& head = tokens[0];
        if (head == "alphabet") {
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                if (a.find_event(tokens[i])) {
                    diags.push_back({lineno, 0, "duplicate-event", "event already declared: " + tokens[i]});
                } else {
                    a.add_event(tokens[i]);
                }
            }
        } else if (head == "states") {
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                if (a.find_state(tokens[i])) {
                    diags.push_back({lineno, 0, "duplicate-state", "state already declared: " + tokens[i]});
                } else {
                    a.add_state(tokens[i]);
                }
            }
        } else if (head == "initial") {
            initial_lines.push_back({lineno, tokens});
        } else if (head == "marked") {
            marked_lines.push_back({lineno, tokens});
        } else if (head == "trans") {
            trans_lines.push_back({lineno, tokens});
        } else if (head == "decision") {
            decision_lines.push_back({lineno, tokens});
        } else {
            diags.push_back({lineno, 0, "unknown-directive", "unrecognized directive: " + head});
        }
    }

    auto state_of = [&](const std::string& name, std::size_t line) -> std::optional<StateId> {
        auto id = a.find_state(name);
        if (!id) diags.push_back({line, 0, "unknown-state", "undeclared state: " + name});
        return id;
    };
    auto event_of = [&](const std::string& name, std::size_t line) -> std::optional<EventId> {
        auto id = a.find_event(name);
        if (!id) diags.push_back({line, 0, "unknown-event", "undeclared event: " + name});
        return id;
    };

    for (const auto& p : initial_lines) {
        if (p.tokens.size() != 2) {
            diags.push_back({p.line, 0, "bad-initial", "expected exactly one initial state"});
            continue;
        }
        if (auto id = state_of(p.tokens[1], p.line)) {
            if (has_initial)
                diags.push_back({p.line, 0, "bad-initial", "initial state declared twice"});
            a.set_initial(*id);
            has_initial = true;
        }
    }
    for (const auto& p : marked_lines)
        for (std::size_t i = 1; i < p.tokens.size(); ++i)
            if (auto id = state_of(p.tokens[i], p.line)) a.set_marked(*id);
    for (const auto& p : trans_lines) {
        if (p.tokens.size() != 4) {
            diags.push_back({p.line, 0, "bad-transition", "expected: trans <src> <event> <dst>"});
            continue;
        }
        auto src = state_of(p.tokens[1], p.line);
        auto ev = event_of(p.tokens[2], p.line);
        auto dst = state_of(p.tokens[3], p.line);
        if (src && ev && dst) a.add_transition(*src, *ev, *dst);
    }
    for (const auto& p : decision_lines) {
        // decision <state>: a b c      (the colon may be glued to the state name)
        if (p.tokens.size() < 2) {
            diags.push_back({p.line, 0, "bad-decision", "expected: decision <state>: <events>"});
            continue;
        }
        std::string name = p.tokens[1];
        std::size_t first_event = 2;
        if (!name.empty() && name.back() == ':') {
            name.pop_back();
        } else if (p.tokens.size() >= 3 && p.tokens[2] == ":") {
            first_event = 3;
        }
        auto id = state_of(name, p.line);
        if (!id) continue;
        EventSet dec;
        for (std::size_t i = first_event; i < p.tokens.size(); ++i)
            if (auto ev = event_of(p.tokens[i], p.line)) dec.insert(*ev);
        result.decisions[*id] = std::move(dec);
    }

    if (a.state_count() == 0) {
        diags.push_back({0, 0, "empty-automaton", "no states declared"});
    } else if (!has_initial) {
        diags.push_back({0, 0, "bad-initial", "no initial state declared"});
    }

    if (diags.empty()) result.automaton = std::move(a);
    return result;
}

/// Canonical serialization: identical automata produce identical bytes.
inline std::string serialize_automaton(const Automaton& a,
                                       const std::map<StateId, EventSet>* decisions = nullptr) {
    std::ostringstream os;
    os << "alphabet";
    for (const auto& e : a.event_names()) os << ' ' << e;
    os << '\n' << "states";
    for (StateId s = 0; s < a.state_count(); ++s) os << ' ' << a.state_name(s);
    os << '\n' << "initial " << a.state_name(a.initial()) << '\n';
    bool any_marked = false;
    for (StateId s = 0; s < a.state_count(); ++s) any_marked |= a.marked(s);
    if (any_marked) {
        os << "marked";
        for (StateId s = 0; s < a.state_count(); ++s)
            if (a.marked(s)) os << ' ' << a.state_name(s);
        os << '\n';
    }
    a.for_each_transition([&](StateId s, EventId e, StateId t) {
        os << "trans " << a.state_name(s) << ' ' << a.event_name(e) << ' ' << a.state_name(t) << '\n';
    });
    if (decisions != nullptr) {
        for (const auto& [state, dec] : *decisions) {
            os << "decision " << a.state_name(state) << ":";
            for (EventId e : dec) os << ' ' << a.event_name(e);
            os << '\n';
        }
    }
    return os.str();
}

}  // namespace bisup
