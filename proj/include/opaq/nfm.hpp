#pragma once

#include <map>
#include <vector>

#include "opaq/ais.hpp"

namespace opaq {

/// Nondeterministic finite-state Mealy machine. Intruder machines map
/// each genuine observable event to the decorated strings an admissible
/// insertion burst can produce (inserted prefix, genuine event last);
/// the global-observer wrapper outputs the empty string on every input.
class Nfm {
 public:
  struct State {
    ObsIndex intruder_est;
    ObsIndex system_est;  // == intruder_est for the observer wrapper

    auto operator<=>(const State&) const = default;
  };

  struct Choice {
    std::uint32_t to;
    Word output;
  };

  Nfm(Observer obs, int intruder, std::vector<State> states,
      std::map<std::pair<std::uint32_t, EventId>, std::vector<Choice>> trans);

  /// 0 for the global observer wrapper, 1-based intruder index otherwise.
  int intruder() const { return intruder_; }
  const Observer& observer() const { return obs_; }
  std::size_t size() const { return states_.size(); }
  std::uint32_t initial() const { return 0; }
  const State& state(std::uint32_t i) const { return states_.at(i); }
  const std::vector<State>& states() const { return states_; }

  const std::vector<Choice>& choices(std::uint32_t from, EventId e) const;
  std::vector<EventId> inputs_at(std::uint32_t from) const;
  const std::map<std::pair<std::uint32_t, EventId>, std::vector<Choice>>&
  transitions() const {
    return trans_;
  }
  std::size_t transition_count() const;

 private:
  Observer obs_;
  int intruder_;
  std::vector<State> states_;
  std::map<std::pair<std::uint32_t, EventId>, std::vector<Choice>> trans_;
};

/// Encodes a nonempty pruned AIS as an NFM: states are the SYSTEM nodes;
/// each maximal insertion chain ending in an emit becomes one transition
/// labeled input/insertions+input.
Nfm ais_to_nfm(const Ais& a);

/// Observer over the union of all intruder alphabets, wrapped as a
/// machine that outputs the empty string on every input.
Nfm build_global_observer(const Model& m);

struct ProductState {
  std::vector<std::uint32_t> comps;  // one per intruder machine
  std::uint32_t obs;

  auto operator<=>(const ProductState&) const = default;
};

struct ProductTransition {
  std::uint32_t from;
  EventId input;
  std::uint32_t to;
  std::vector<Word> outputs;  // per intruder; empty = that intruder idles
};

/// Synchronous product of the intruder machines with the global
/// observer: a transition on e exists only where the global observer
/// moves, components with e in their alphabet follow their own machine,
/// all others idle with empty output.
class ProductNfm {
 public:
  ProductNfm(std::vector<Nfm> machines, Nfm global,
             std::vector<ProductState> states,
             std::vector<ProductTransition> transitions);

  bool empty() const { return states_.empty(); }
  std::size_t size() const { return states_.size(); }
  std::size_t intruders() const { return machines_.size(); }
  std::uint32_t initial() const { return 0; }
  const Nfm& machine(std::size_t i) const { return machines_.at(i); }
  const Nfm& global() const { return global_; }
  const std::vector<ProductState>& states() const { return states_; }
  const std::vector<ProductTransition>& transitions() const {
    return transitions_;
  }
  const std::vector<std::uint32_t>& out_transitions(std::uint32_t state) const;
  const std::vector<std::uint32_t>& in_transitions(std::uint32_t state) const;

  const Estimate& intruder_estimate(std::uint32_t state, std::size_t i) const;
  const Estimate& obs_estimate(std::uint32_t state) const;
  /// Display label "({0,1},{0,2},{0})": intruder estimates then the true
  /// estimate, mirroring the usual drawing of such products.
  std::string label(const Model& m, std::uint32_t state) const;

  /// Restriction to the flagged states/transitions, renumbered in the
  /// original order. Returns an empty product if the initial state is
  /// dropped.
  ProductNfm subgraph(const std::vector<bool>& keep_state,
                      const std::vector<bool>& keep_transition) const;

 private:
  std::vector<Nfm> machines_;
  Nfm global_;
  std::vector<ProductState> states_;
  std::vector<ProductTransition> transitions_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
};

ProductNfm compose_product(const std::vector<Nfm>& machines,
                           const Nfm& global);

}  // namespace opaq
