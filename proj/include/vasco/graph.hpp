#pragma once

#include "vasco/model.hpp"

#include <optional>
#include <vector>

namespace vasco {

struct EndComponent {
  std::vector<int> states;       // sorted ascending
  std::vector<int> transitions;  // sorted ascending
};

struct MecDecomposition {
  std::vector<EndComponent> mecs;                 // sorted by smallest member state
  std::vector<std::optional<int>> state_mec;      // state -> owning MEC
  std::vector<std::optional<int>> transition_mec; // transition -> owning MEC
};

// Strongly connected components of the transition graph restricted to the
// given transitions; returned as state lists in reverse topological order.
std::vector<std::vector<int>> scc_of(const VassMdp& m, const std::vector<bool>& trans_mask);

// Maximal end components: iterated SCC computation, dropping nondeterministic
// escapes per transition and probabilistic states with any escape wholesale.
// States and transitions outside every MEC are left unmapped. The masked
// overload decomposes the sub-MDP on the given transitions; the mask must
// keep probabilistic bundles all-or-nothing.
MecDecomposition mec_decomposition(const VassMdp& m);
MecDecomposition mec_decomposition(const VassMdp& m, const std::vector<bool>& init_mask);

// The five defining conditions, checked independently of the decomposition:
// nonempty, transitions stay inside the state set, every nondeterministic
// member keeps a choice, probabilistic members keep all their transitions,
// and the induced graph is strongly connected.
bool is_end_component(const VassMdp& m, const EndComponent& ec);

}  // namespace vasco
