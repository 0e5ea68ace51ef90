#pragma once

#include <optional>
#include <vector>

#include "opaq/observer.hpp"
#include "opaq/strategy.hpp"

namespace opaq {

/// Node of the insertion game. SYSTEM nodes hold the pair (intruder
/// estimate, true estimate); INSERTION nodes additionally hold the
/// genuine event awaiting output. The intruder estimate of any node is
/// never revealing.
struct AisNode {
  enum Kind { System, Insertion };

  Kind kind;
  ObsIndex intruder_est;
  ObsIndex system_est;
  std::optional<EventId> pending;  // present iff kind == Insertion

  auto operator<=>(const AisNode&) const = default;
};

struct AisEdge {
  enum Kind {
    SystemMove,  // SYSTEM --genuine e--> INSERTION
    Insert,      // INSERTION --inserted e'--> INSERTION
    Emit,        // INSERTION --pending e--> SYSTEM
  };

  std::uint32_t from;
  std::uint32_t to;
  EventId label;
  Kind kind;
};

/// Game graph of all privately enforcing insertion choices for one
/// intruder. Node 0 is the initial SYSTEM node (est0, est0) when the
/// structure is nonempty.
class Ais {
 public:
  Ais(Observer obs, int intruder, std::vector<AisNode> nodes,
      std::vector<AisEdge> edges);

  bool empty() const { return nodes_.empty(); }
  int intruder() const { return intruder_; }
  const Observer& observer() const { return obs_; }
  const std::vector<AisNode>& nodes() const { return nodes_; }
  const std::vector<AisEdge>& edges() const { return edges_; }
  const std::vector<std::uint32_t>& out_edges(std::uint32_t node) const;
  std::size_t system_count() const;
  std::size_t insertion_count() const;

 private:
  Observer obs_;
  int intruder_;
  std::vector<AisNode> nodes_;
  std::vector<AisEdge> edges_;
  std::vector<std::vector<std::uint32_t>> out_;
};

/// Observer estimates that lie entirely inside the secret set.
std::vector<Estimate> revealing_states(const Model& m, const Observer& o);

/// Unfolded insertion game before pruning; exposed for diagnostics.
Ais build_ais_unpruned(const Model& m, const Mask& mask, int intruder_label);

/// Admissible pruned game for one declared intruder (1-based), empty iff
/// CSO is not privately enforceable against that intruder.
Ais build_ais(const Model& m, int intruder);
Ais build_ais(const Model& m, const Mask& mask, int intruder_label = 0);

/// Greatest admissible subgame: every INSERTION node can still complete
/// a burst, every SYSTEM node still answers every enabled genuine event,
/// and everything is reachable from the initial node.
Ais prune_ais(const Model& m, const Ais& a);

/// A pruned game is winnable for the insertion player iff nonempty.
bool check_private_enforceability(const Ais& a);

/// Deterministic local insertion function chosen from a nonempty AIS.
InsertionStrategy extract_local_insertion(
    const Model& m, const Ais& a, ChoicePolicy policy = ChoicePolicy::MinInsert);

}  // namespace opaq
