#include "opaq/observer.hpp"

#include <algorithm>
#include <deque>

namespace opaq {

Observer::Observer(Mask mask, std::vector<Estimate> states,
                   std::vector<std::map<EventId, ObsIndex>> delta)
    : mask_(std::move(mask)), states_(std::move(states)),
      delta_(std::move(delta)) {
  for (ObsIndex i = 0; i < states_.size(); ++i) index_[states_[i]] = i;
}

std::optional<ObsIndex> Observer::find(const Estimate& estimate) const {
  auto it = index_.find(estimate);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ObsIndex> Observer::step(ObsIndex from, EventId e) const {
  const auto& moves = delta_.at(from);
  auto it = moves.find(e);
  if (it == moves.end()) return std::nullopt;
  return it->second;
}

const std::map<EventId, ObsIndex>& Observer::moves(ObsIndex from) const {
  return delta_.at(from);
}

std::vector<EventId> Observer::enabled(ObsIndex from) const {
  std::vector<EventId> events;
  for (const auto& [e, _] : delta_.at(from)) events.push_back(e);
  return events;
}

std::optional<ObsIndex> Observer::walk(const Word& w) const {
  ObsIndex current = initial();
  for (EventId e : w) {
    auto next = step(current, e);
    if (!next) return std::nullopt;
    current = *next;
  }
  return current;
}

Estimate unobservable_reach(const Model& m, const Mask& mask,
                            const StateSet& seed) {
  if (seed.empty())
    throw std::invalid_argument("unobservable_reach: empty state set");
  std::vector<bool> in_reach(m.state_count(), false);
  std::deque<StateId> frontier;
  for (StateId s : seed) {
    in_reach[s] = true;
    frontier.push_back(s);
  }
  while (!frontier.empty()) {
    StateId s = frontier.front();
    frontier.pop_front();
    for (EventId e = 0; e < m.event_count(); ++e) {
      if (mask.observes(e)) continue;
      for (StateId t : m.successors(s, e)) {
        if (!in_reach[t]) {
          in_reach[t] = true;
          frontier.push_back(t);
        }
      }
    }
  }
  Estimate closure;
  for (StateId s = 0; s < m.state_count(); ++s)
    if (in_reach[s]) closure.push_back(s);
  return closure;
}

Observer build_observer(const Model& m, const Mask& mask) {
  std::vector<Estimate> states;
  std::vector<std::map<EventId, ObsIndex>> delta;
  std::map<Estimate, ObsIndex> index;

  Estimate init = unobservable_reach(m, mask, m.initial());
  states.push_back(init);
  delta.emplace_back();
  index[init] = 0;

  for (ObsIndex current = 0; current < states.size(); ++current) {
    for (EventId e : mask.observable) {
      StateSet image = m.step(states[current], e);
      if (image.empty()) continue;
      Estimate next = unobservable_reach(m, mask, image);
      auto [it, fresh] = index.try_emplace(next, static_cast<ObsIndex>(states.size()));
      if (fresh) {
        states.push_back(next);
        delta.emplace_back();
      }
      delta[current][e] = it->second;
    }
  }
  return Observer(std::move(mask), std::move(states), std::move(delta));
}

Estimate estimate(const Observer& o, const Word& w) {
  auto reached = o.walk(w);
  if (!reached)
    throw std::invalid_argument("observation inconsistent with model");
  return o.state(*reached);
}

}  // namespace opaq
