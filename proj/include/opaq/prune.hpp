#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opaq/nfm.hpp"

namespace opaq {

/// Snapshot of every party's estimate at one synchronized output step.
struct JointState {
  std::vector<Estimate> intruder_ests;
  Estimate obs_est;
};

/// Event-by-event expansion of one product transition: the output
/// strings are left-aligned and padded with trailing empty steps; the
/// true estimate switches to its post-event value from the first step
/// on. Returns the strictly intermediate states followed by the final
/// one.
std::vector<JointState> expand_intermediates(const ProductNfm& p,
                                             const ProductTransition& t);

/// Intersection of the true estimate with every intruder estimate.
StateSet joint_estimate(const JointState& j);

/// A coordinated estimate is safe unless it is nonempty and entirely
/// secret.
bool is_joint_safe(const Model& m, const StateSet& joint);

enum class PruneReason { Unsafe, Blocked, Orphaned };

std::string prune_reason_name(PruneReason reason);

struct PruneRecord {
  std::string label;                    // display tuple of the state
  std::vector<StateSet> intruder_ests;  // structured copy for reports
  StateSet obs_est;
  PruneReason reason;
};

struct PruneReport {
  std::vector<PruneRecord> deleted;  // in deletion order
  std::size_t surviving_states = 0;
  std::size_t surviving_transitions = 0;
};

struct PrunedProduct {
  ProductNfm product;
  PruneReport report;
};

struct PruneOptions {
  /// When set, deletable candidates are processed in a seeded random
  /// order instead of the canonical sweep. The surviving subgraph is the
  /// same either way; only the report order changes.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Iteratively removes revealing states, transitions whose intermediate
/// expansion reveals, orphaned states, and states that block an event
/// enabled at their true estimate, until a fixpoint; empty iff the
/// initial state falls.
PrunedProduct prune_product(const Model& m, const ProductNfm& p,
                            const PruneOptions& options = {});

/// Nonemptiness of the pruned product.
bool check_joint_enforceability(const PrunedProduct& pruned);

}  // namespace opaq
