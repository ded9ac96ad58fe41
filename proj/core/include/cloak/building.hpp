#pragma once

#include <map>
#include <set>
#include <string>

#include "cloak/project.hpp"

namespace cloak {

// Parametric n-floor / m-elevator building security benchmark.
//
// Floor F<i> is a ring of 2m corridor/entrance states 1..2m plus elevator
// states 2m+j (one behind each entrance 2j). Every state is initial. Door j
// carries card-reader event c<i>_<j> in both directions between 2j-1 and 2j
// and one way from 2j onward around the ring, so entrance states have two
// successors with the same event. Entrance 2j connects to its elevator
// state via e<i>_<j> in both directions.
//
// Elevator E<j> is a column of 2n states: odd floors 1,3,..,2n-1 chained by
// u<j>/d<j>, each with an entrance state reached and left via e<i>_<j>.
// Every state is initial. All events are observable and controllable.
struct BuildingSpec {
    int floors = 1;
    int elevators = 1;
    // floor index (1-based) -> secret floor-state names
    std::map<int, std::set<std::string>> secrets;
    // card-reader events whose transitions are removed (power failure)
    std::set<std::string> disabled;
};

TransitionSystem gen_floor(int floor, int elevators);
TransitionSystem gen_elevator(int elevator, int floors);
Project gen_building(const BuildingSpec& spec);

// Resolves a floor-state token for gen_building secrets: plain numbers name
// ring/elevator states directly ("5" is the first elevator state when m=2);
// "4'" or "4p" name the elevator state behind entrance 4.
std::string resolve_floor_state(int elevators, const std::string& token);

}  // namespace cloak
