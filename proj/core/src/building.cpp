#include "cloak/building.hpp"

#include <algorithm>

#include "cloak/error.hpp"

namespace cloak {

namespace {

std::string cr_event(int floor, int door) {
    return "c" + std::to_string(floor) + "_" + std::to_string(door);
}

std::string elev_event(int floor, int elevator) {
    return "e" + std::to_string(floor) + "_" + std::to_string(elevator);
}

}  // namespace

TransitionSystem gen_floor(int floor, int elevators) {
    if (floor < 1 || elevators < 1)
        throw_input("gen_floor: floor and elevator count must be >= 1");
    const int m = elevators;
    TsBuilder b("F" + std::to_string(floor));

    std::vector<EventIdx> c(m + 1), e(m + 1);
    for (int j = 1; j <= m; ++j) {
        c[j] = b.add_event(cr_event(floor, j), true, true);
        e[j] = b.add_event(elev_event(floor, j), true, true);
    }

    // Ring states 1..2m, elevator states 2m+1..3m; all initial.
    std::vector<StateIdx> state(3 * m + 1);
    for (int s = 1; s <= 3 * m; ++s) {
        state[s] = b.add_state(std::to_string(s));
        b.mark_initial(state[s]);
    }

    for (int j = 1; j <= m; ++j) {
        int corridor = 2 * j - 1;
        int entrance = 2 * j;
        int next = (entrance % (2 * m)) + 1;
        int cab = 2 * m + j;
        b.add_transition(state[corridor], c[j], state[entrance]);
        b.add_transition(state[entrance], c[j], state[corridor]);
        b.add_transition(state[entrance], c[j], state[next]);
        b.add_transition(state[entrance], e[j], state[cab]);
        b.add_transition(state[cab], e[j], state[entrance]);
    }
    return b.build();
}

TransitionSystem gen_elevator(int elevator, int floors) {
    if (elevator < 1 || floors < 1)
        throw_input("gen_elevator: elevator and floor count must be >= 1");
    const int n = floors;
    TsBuilder b("E" + std::to_string(elevator));

    EventIdx up = 0, down = 0;
    if (n > 1) {
        up = b.add_event("u" + std::to_string(elevator), true, true);
        down = b.add_event("d" + std::to_string(elevator), true, true);
    }
    std::vector<EventIdx> e(n + 1);
    for (int i = 1; i <= n; ++i)
        e[i] = b.add_event(elev_event(i, elevator), true, true);

    std::vector<StateIdx> state(2 * n + 1);
    for (int s = 1; s <= 2 * n; ++s) {
        state[s] = b.add_state(std::to_string(s));
        b.mark_initial(state[s]);
    }
    for (int i = 1; i <= n; ++i) {
        int shaft = 2 * i - 1;
        int entrance = 2 * i;
        b.add_transition(state[shaft], e[i], state[entrance]);
        b.add_transition(state[entrance], kEpsilon, state[shaft]);  // silent return
        if (i < n) {
            b.add_transition(state[shaft], up, state[shaft + 2]);
            b.add_transition(state[shaft + 2], down, state[shaft]);
        }
    }
    return b.build();
}

std::string resolve_floor_state(int elevators, const std::string& token) {
    if (token.empty())
        throw_input("empty floor-state token");
    char suffix = token.back();
    if (suffix == '\'' || suffix == 'p') {
        std::string head = token.substr(0, token.size() - 1);
        int entrance = 0;
        try {
            entrance = std::stoi(head);
        } catch (...) {
            throw_input("bad floor-state token '" + token + "'");
        }
        if (entrance < 2 || entrance % 2 != 0 || entrance > 2 * elevators)
            throw_input("'" + token + "' does not name an elevator entrance");
        return std::to_string(2 * elevators + entrance / 2);
    }
    return token;
}

Project gen_building(const BuildingSpec& spec) {
    if (spec.floors < 1 || spec.elevators < 1)
        throw_input("gen_building: floors and elevators must be >= 1");

    Project project;
    project.name = "building_" + std::to_string(spec.floors) + "x" + std::to_string(spec.elevators);
    project.spec.property = Property::Cso;

    std::set<std::string> disabled_seen;
    auto strip_disabled = [&](const TransitionSystem& ts) {
        std::set<EventIdx> gone;
        for (const std::string& name : spec.disabled) {
            auto e = ts.events().find(name);
            if (e) {
                gone.insert(*e);
                disabled_seen.insert(name);
            }
        }
        if (gone.empty())
            return ts;
        TsBuilder b(ts.name());
        b.copy_events(ts.events());
        for (StateIdx s = 0; s < ts.num_states(); ++s)
            b.add_state(ts.state_name(s), ts.labels(s));
        for (StateIdx s : ts.initial())
            b.mark_initial(s);
        for (const Transition& t : ts.transitions())
            if (is_pseudo_event(t.event) || !gone.count(t.event))
                b.add_transition(t.src, t.event, t.dst);
        return b.build();
    };

    for (int i = 1; i <= spec.floors; ++i) {
        TransitionSystem floor = gen_floor(i, spec.elevators);
        auto secrets = spec.secrets.find(i);
        if (secrets != spec.secrets.end()) {
            TsBuilder b(floor.name());
            b.copy_events(floor.events());
            std::set<std::string> wanted;
            for (const std::string& token : secrets->second)
                wanted.insert(resolve_floor_state(spec.elevators, token));
            std::set<std::string> found;
            for (StateIdx s = 0; s < floor.num_states(); ++s) {
                LabelSet labels = floor.labels(s);
                if (wanted.count(floor.state_name(s))) {
                    labels = with_label(std::move(labels), kSecretLabel);
                    found.insert(floor.state_name(s));
                }
                b.add_state(floor.state_name(s), std::move(labels));
            }
            for (const std::string& w : wanted)
                if (!found.count(w))
                    throw_input("secret state '" + w + "' not in floor model " + floor.name());
            for (StateIdx s : floor.initial())
                b.mark_initial(s);
            for (const Transition& t : floor.transitions())
                b.add_transition(t.src, t.event, t.dst);
            floor = b.build();
            project.spec.secrets.emplace(floor.name(), found);
        }
        project.members.push_back(strip_disabled(floor));
    }
    for (int j = 1; j <= spec.elevators; ++j)
        project.members.push_back(strip_disabled(gen_elevator(j, spec.floors)));

    for (const std::string& name : spec.disabled)
        if (!disabled_seen.count(name))
            throw_input("disabled event '" + name + "' not in the generated alphabet");

    project.validate();
    return project;
}

}  // namespace cloak
