#pragma once

#include <map>
#include <optional>
#include <vector>

#include "opaq/model.hpp"

namespace opaq {

/// A state estimate: nonempty sorted subset of model states.
using Estimate = StateSet;

/// Index of an observer state.
using ObsIndex = std::uint32_t;

/// Deterministic estimator automaton over a mask, obtained by subset
/// construction. State 0 is the initial estimate (unobservable-reach
/// closure of the model's initial set); only reachable estimates are
/// materialized, in breadth-first discovery order with events taken in
/// token order, so the layout is canonical.
class Observer {
 public:
  Observer(Mask mask, std::vector<Estimate> states,
           std::vector<std::map<EventId, ObsIndex>> delta);

  const Mask& mask() const { return mask_; }
  std::size_t size() const { return states_.size(); }
  ObsIndex initial() const { return 0; }
  const Estimate& state(ObsIndex i) const { return states_.at(i); }
  const std::vector<Estimate>& states() const { return states_; }

  std::optional<ObsIndex> find(const Estimate& estimate) const;
  std::optional<ObsIndex> step(ObsIndex from, EventId e) const;
  const std::map<EventId, ObsIndex>& moves(ObsIndex from) const;
  std::vector<EventId> enabled(ObsIndex from) const;

  /// Runs the observer on an observed word; nullopt if some transition
  /// is undefined.
  std::optional<ObsIndex> walk(const Word& w) const;

 private:
  Mask mask_;
  std::vector<Estimate> states_;
  std::vector<std::map<EventId, ObsIndex>> delta_;
  std::map<Estimate, ObsIndex> index_;
};

/// Smallest superset of `seed` closed under transitions labeled outside
/// the mask. Throws std::invalid_argument on an empty seed.
Estimate unobservable_reach(const Model& m, const Mask& mask,
                            const StateSet& seed);

Observer build_observer(const Model& m, const Mask& mask);

/// The estimate reached on an observed word; throws std::invalid_argument
/// if the observation is inconsistent with the model.
Estimate estimate(const Observer& o, const Word& w);

}  // namespace opaq
