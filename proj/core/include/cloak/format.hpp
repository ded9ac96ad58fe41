#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cloak/project.hpp"
#include "cloak/transition_system.hpp"

namespace cloak {

// Line-oriented automaton format (UTF-8, '#' comments):
//
//   system F1
//   event c1_1 obs ctrl
//   event u1 unobs unctrl
//   state 1 init
//   state 2 init secret label:N
//   trans 1 c1_1 2
//
// State flags: init, marked, secret, label:<name> (repeatable). "marked"
// and "secret" are shorthand for the reserved labels "M" and "S". The
// transition event may also be "tau" or "epsilon".
TransitionSystem parse_automaton(std::istream& in, const std::string& source_name);
TransitionSystem parse_automaton_string(const std::string& text, const std::string& source_name);
TransitionSystem load_automaton(const std::filesystem::path& path);

void print_automaton(std::ostream& out, const TransitionSystem& ts);
std::string automaton_to_string(const TransitionSystem& ts);
void save_automaton(const std::filesystem::path& path, const TransitionSystem& ts);

// Project format:
//
//   project two_floors
//   module f1.aut
//   module f2.aut
//   property cso
//   uncontrollable d1 d2
//
// Module paths are resolved relative to the project file. Secret sets are
// taken from the "secret" flags of the member automata.
Project load_project(const std::filesystem::path& path);
Project parse_project(std::istream& in, const std::string& source_name,
                      const std::filesystem::path& base_dir);

void save_project(const std::filesystem::path& dir, const Project& project);

}  // namespace cloak
