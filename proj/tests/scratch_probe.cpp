#include <iostream>

#include "cloak/building.hpp"
#include "cloak/format.hpp"
#include "cloak/observer.hpp"
#include "cloak/security.hpp"
#include "cloak/ts_ops.hpp"

using namespace cloak;

int main() {
    BuildingSpec s;
    s.floors = 2;
    s.elevators = 2;
    s.secrets[1] = {"3"};
    s.secrets[2] = {"1", "5"};
    Project p = gen_building(s);

    for (const TransitionSystem& member : p.members) {
        TransitionSystem obs = observe(member, {});
        std::set<std::string> secret;
        auto it = p.spec.secrets.find(member.name());
        if (it != p.spec.secrets.end())
            secret = it->second;
        TransitionSystem marked = mark_non_safe_cso(obs, secret);
        std::cout << "=== " << member.name() << ": obs " << obs.num_states() << " states, "
                  << obs.transitions().size() << " transitions; N = ";
        for (StateIdx i = 0; i < marked.num_states(); ++i)
            if (has_label(marked.labels(i), kNonSafeLabel))
                std::cout << marked.state_name(i) << " ";
        std::cout << "\n";
    }
    print_automaton(std::cout, p.members[2]);  // E1
    return 0;
}
