#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bisup/automaton_io.hpp"
#include "bisup/problem.hpp"

namespace bisup {

/// Parsed problem file before the referenced automata are loaded.
struct ProblemFile {
    std::string plant_path;
    std::string spec_path;
    std::string architecture = "conjunctive";
    struct AgentBlock {
        int index = 0;
        std::vector<std::string> controllable;
        std::vector<std::string> observable;
    };
    std::vector<AgentBlock> agents;
    std::vector<std::string> enable_default;
    std::vector<std::string> disable_default;
};

struct ParsedProblem {
    std::optional<ProblemFile> file;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return file.has_value() && diagnostics.empty(); }
};

/// Problem file format, one declaration per line:
///
///   plant g.aut
///   spec r.aut
///   architecture conjunctive
///   agent 1 { controllable: b1 b2; observable: a c b1 b2 }
///   enable-default: f e        # general architecture only
///   disable-default: a
inline ParsedProblem parse_problem_file(const std::string& text) {
    ParsedProblem result;
    ProblemFile f;
    std::vector<Diagnostic>& diags = result.diagnostics;
    bool have_plant = false, have_spec = false, have_arch = false;

    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = detail::strip_comment(raw);
        auto tokens = detail::split_ws(line);
        if (tokens.empty()) continue;
        const std::string& head = tokens[0];
        if (head == "plant" || head == "spec") {
            if (tokens.size() != 2) {
                diags.push_back({lineno, 0, "bad-path", head + " expects one file path"});
                continue;
            }
            (head == "plant" ? f.plant_path : f.spec_path) = tokens[1];
            (head == "plant" ? have_plant : have_spec) = true;
        } else if (head == "architecture") {
            if (tokens.size() != 2 || !architecture_from(tokens[1])) {
                diags.push_back({lineno, 0, "bad-architecture",
                                 "expected: architecture conjunctive|disjunctive|general"});
                continue;
            }
            f.architecture = tokens[1];
            have_arch = true;
        } else if (head == "agent") {
            // agent <index> { controllable: ...; observable: ... }  (may span lines)
            std::string block = line;
            while (block.find('}') == std::string::npos && std::getline(is, raw)) {
                ++lineno;
                block += ' ' + detail::strip_comment(raw);
            }
            auto open = block.find('{');
            auto close = block.find('}');
            if (open == std::string::npos || close == std::string::npos || close < open) {
                diags.push_back({lineno, 0, "bad-agent", "expected: agent <i> { ... }"});
                continue;
            }
            ProblemFile::AgentBlock ag;
            {
                auto header = detail::split_ws(block.substr(0, open));
                if (header.size() != 2) {
                    diags.push_back({lineno, 0, "bad-agent", "expected: agent <i> { ... }"});
                    continue;
                }
                try {
                    ag.index = std::stoi(header[1]);
                } catch (const std::exception&) {
                    diags.push_back({lineno, 0, "bad-agent", "agent index must be an integer"});
                    continue;
                }
            }
            std::string body = block.substr(open + 1, close - open - 1);
            std::istringstream parts(body);
            std::string part;
            while (std::getline(parts, part, ';')) {
                auto colon = part.find(':');
                if (colon == std::string::npos) {
                    if (!detail::split_ws(part).empty())
                        diags.push_back({lineno, 0, "bad-agent", "expected '<key>: <events>' sections"});
                    continue;
                }
                auto keys = detail::split_ws(part.substr(0, colon));
                auto events = detail::split_ws(part.substr(colon + 1));
                if (keys.size() != 1) {
                    diags.push_back({lineno, 0, "bad-agent", "expected one key before ':'"});
                    continue;
                }
                if (keys[0] == "controllable")
                    ag.controllable = events;
                else if (keys[0] == "observable")
                    ag.observable = events;
                else
                    diags.push_back({lineno, 0, "bad-agent", "unknown agent section: " + keys[0]});
            }
            f.agents.push_back(std::move(ag));
        } else if (head == "enable-default:" || head == "disable-default:" ||
                   head == "enable-default" || head == "disable-default") {
            std::vector<std::string> events(tokens.begin() + 1, tokens.end());
            if (!events.empty() && events[0] == ":") events.erase(events.begin());
            if (head.rfind("enable", 0) == 0)
                f.enable_default = std::move(events);
            else
                f.disable_default = std::move(events);
        } else {
            diags.push_back({lineno, 0, "unknown-directive", "unrecognized directive: " + head});
        }
    }

    if (!have_plant) diags.push_back({0, 0, "missing-plant", "no plant file declared"});
    if (!have_spec) diags.push_back({0, 0, "missing-spec", "no spec file declared"});
    if (!have_arch) diags.push_back({0, 0, "missing-architecture", "no architecture declared"});
    if (f.agents.empty()) diags.push_back({0, 0, "missing-agent", "at least one agent block is required"});
    for (std::size_t i = 0; i < f.agents.size(); ++i)
        if (f.agents[i].index != static_cast<int>(i) + 1)
            diags.push_back({0, 0, "bad-agent", "agent blocks must be numbered consecutively from 1"});

    if (diags.empty()) result.file = std::move(f);
    return result;
}

inline std::string serialize_problem_file(const ProblemFile& f) {
    std::ostringstream os;
    os << "plant " << f.plant_path << '\n';
    os << "spec " << f.spec_path << '\n';
    os << "architecture " << f.architecture << '\n';
    for (const auto& ag : f.agents) {
        os << "agent " << ag.index << " { controllable:";
        for (const auto& e : ag.controllable) os << ' ' << e;
        os << "; observable:";
        for (const auto& e : ag.observable) os << ' ' << e;
        os << " }\n";
    }
    auto emit = [&](const char* key, const std::vector<std::string>& events) {
        if (events.empty()) return;
        os << key << ':';
        for (const auto& e : events) os << ' ' << e;
        os << '\n';
    };
    emit("enable-default", f.enable_default);
    emit("disable-default", f.disable_default);
    return os.str();
}

struct LoadedProblem {
    std::optional<ControlProblem> problem;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return problem.has_value() && diagnostics.empty(); }
};

inline std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Resolves a parsed problem file against its base directory: loads the two
/// automata and maps agent blocks onto the shared alphabet.
inline LoadedProblem load_problem(const ProblemFile& f, const std::filesystem::path& base_dir) {
    LoadedProblem result;
    auto& diags = result.diagnostics;
    auto load_automaton = [&](const std::string& rel, const char* what) -> std::optional<Automaton> {
        auto path = base_dir / rel;
        auto text = read_file(path);
        if (!text) {
            diags.push_back({0, 0, "io-error", std::string(what) + " file not readable: " + path.string()});
            return std::nullopt;
        }
        ParsedAutomaton parsed = parse_automaton(*text);
        for (auto d : parsed.diagnostics) {
            d.message = path.string() + ": " + d.message;
            diags.push_back(std::move(d));
        }
        return parsed.automaton;
    };
    auto plant = load_automaton(f.plant_path, "plant");
    auto spec = load_automaton(f.spec_path, "spec");
    if (!plant || !spec || !diags.empty()) return result;

    ControlProblem p;
    p.plant = std::move(*plant);
    p.spec = std::move(*spec);
    p.architecture = *architecture_from(f.architecture);

    auto event_set = [&](const std::vector<std::string>& names, int agent) {
        EventSet out;
        for (const auto& n : names) {
            auto id = p.plant.find_event(n);
            if (!id) {
                diags.push_back({0, 0, "unknown-event",
                                 "agent " + std::to_string(agent) + ": event not in alphabet: " + n});
                continue;
            }
            out.insert(*id);
        }
        return out;
    };
    for (const auto& ag : f.agents) {
        AgentProfile profile;
        profile.index = ag.index;
        profile.controllable = event_set(ag.controllable, ag.index);
        profile.observable = event_set(ag.observable, ag.index);
        p.agents.push_back(std::move(profile));
    }
    if (!f.enable_default.empty() || !f.disable_default.empty()) {
        DefaultSplit split;
        split.enabled = event_set(f.enable_default, 0);
        split.disabled = event_set(f.disable_default, 0);
        p.split = std::move(split);
    }
    if (!diags.empty()) return result;

    for (auto d : validate(p)) diags.push_back(std::move(d));
    if (diags.empty()) result.problem = std::move(p);
    return result;
}

inline LoadedProblem load_problem_file(const std::filesystem::path& path) {
    LoadedProblem result;
    auto text = read_file(path);
    if (!text) {
        result.diagnostics.push_back({0, 0, "io-error", "problem file not readable: " + path.string()});
        return result;
    }
    ParsedProblem parsed = parse_problem_file(*text);
    if (!parsed.ok()) {
        result.diagnostics = std::move(parsed.diagnostics);
        return result;
    }
    return load_problem(*parsed.file, path.parent_path());
}

}  // namespace bisup
