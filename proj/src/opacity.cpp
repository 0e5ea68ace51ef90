#include "opaq/opacity.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace opaq {

StateSet intersect(const StateSet& a, const StateSet& b) {
  StateSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

namespace {

// Shortest observed word to every observer state, BFS in event order.
std::vector<Word> shortest_words(const Observer& o) {
  std::vector<Word> words(o.size());
  std::vector<bool> seen(o.size(), false);
  std::deque<ObsIndex> queue;
  seen[o.initial()] = true;
  queue.push_back(o.initial());
  while (!queue.empty()) {
    ObsIndex current = queue.front();
    queue.pop_front();
    for (const auto& [e, next] : o.moves(current)) {
      if (seen[next]) continue;
      seen[next] = true;
      words[next] = words[current];
      words[next].push_back(e);
      queue.push_back(next);
    }
  }
  return words;
}

}  // namespace

Verdict verify_cso(const Model& m, const Mask& mask) {
  Observer obs = build_observer(m, mask);
  std::vector<Word> words = shortest_words(obs);
  Verdict verdict;
  for (ObsIndex i = 0; i < obs.size(); ++i) {
    if (m.reveals(obs.state(i))) {
      verdict.holds = false;
      verdict.witnesses.push_back({std::nullopt, words[i], obs.state(i)});
    }
  }
  return verdict;
}

Verdict verify_dcso(const Model& m) {
  if (m.intruder_count() == 0)
    throw std::invalid_argument("model declares no intruders");
  Verdict verdict;
  for (std::size_t i = 0; i < m.intruder_count(); ++i) {
    Verdict local = verify_cso(m, m.masks()[i]);
    for (auto& w : local.witnesses) {
      w.intruder = static_cast<int>(i + 1);
      verdict.witnesses.push_back(std::move(w));
    }
    verdict.holds = verdict.holds && local.holds;
  }
  return verdict;
}

StateSet coordinated_estimate(const Model& m, const std::vector<Word>& words) {
  if (words.size() != m.intruder_count())
    throw std::invalid_argument("one observed word per intruder required");
  if (words.empty())
    throw std::invalid_argument("model declares no intruders");
  StateSet joint;
  for (std::size_t i = 0; i < words.size(); ++i) {
    Observer obs = build_observer(m, m.masks()[i]);
    Estimate est = estimate(obs, words[i]);
    joint = i == 0 ? est : intersect(joint, est);
  }
  return joint;
}

namespace {

// Lifts an observed word (over the union alphabet) to a shortest genuine
// word of the plant with that projection. BFS over (state, position).
Word lift_observed_word(const Model& m, const Mask& union_mask,
                        const Word& observed) {
  struct Node {
    StateId state;
    std::size_t pos;
  };
  std::map<std::pair<StateId, std::size_t>, std::pair<std::pair<StateId, std::size_t>, EventId>>
      parent;
  std::deque<Node> queue;
  for (StateId s : m.initial()) {
    if (parent.try_emplace({s, 0}, std::make_pair(std::make_pair(s, std::size_t{0}), EventId{0})).second)
      queue.push_back({s, 0});
  }
  while (!queue.empty()) {
    Node n = queue.front();
    queue.pop_front();
    if (n.pos == observed.size()) {
      Word genuine;
      auto key = std::make_pair(n.state, n.pos);
      while (true) {
        auto [prev, event] = parent.at(key);
        if (prev == key) break;
        genuine.push_back(event);
        key = prev;
      }
      std::reverse(genuine.begin(), genuine.end());
      return genuine;
    }
    for (EventId e = 0; e < m.event_count(); ++e) {
      bool visible = union_mask.observes(e);
      if (visible && (n.pos >= observed.size() || observed[n.pos] != e))
        continue;
      std::size_t next_pos = visible ? n.pos + 1 : n.pos;
      for (StateId t : m.successors(n.state, e)) {
        auto key = std::make_pair(t, next_pos);
        if (parent.try_emplace(key, std::make_pair(std::make_pair(n.state, n.pos), e)).second)
          queue.push_back({t, next_pos});
      }
    }
  }
  throw std::logic_error("observed word not realizable by the plant");
}

}  // namespace

Verdict verify_jcso_plain(const Model& m) {
  Verdict verdict = verify_dcso(m);

  const std::size_t n = m.intruder_count();
  std::vector<Observer> observers;
  for (std::size_t i = 0; i < n; ++i)
    observers.push_back(build_observer(m, m.masks()[i]));
  Mask union_mask = m.union_mask();
  Observer global = build_observer(m, union_mask);

  // Synchronous product of the local observers with the global observer,
  // driven by the union-observable events the plant can produce.
  using Tuple = std::vector<ObsIndex>;  // n local indices + global index
  std::map<Tuple, Word> shortest;
  std::deque<Tuple> queue;

  Tuple init(n + 1, 0);
  shortest[init] = {};
  queue.push_back(init);

  auto joint_of = [&](const Tuple& t) {
    StateSet joint = observers[0].state(t[0]);
    for (std::size_t i = 1; i < n; ++i)
      joint = intersect(joint, observers[i].state(t[i]));
    return joint;
  };

  while (!queue.empty()) {
    Tuple current = queue.front();
    queue.pop_front();
    StateSet joint = joint_of(current);
    if (m.reveals(joint)) {
      verdict.holds = false;
      Word genuine = lift_observed_word(m, union_mask, shortest[current]);
      verdict.witnesses.push_back({std::nullopt, genuine, joint});
    }
    for (const auto& [e, gnext] : global.moves(current[n])) {
      Tuple next = current;
      next[n] = gnext;
      bool defined = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (!m.masks()[i].observes(e)) continue;
        auto succ = observers[i].step(current[i], e);
        if (!succ) {
          defined = false;  // cannot happen on genuine runs
          break;
        }
        next[i] = *succ;
      }
      if (!defined) continue;
      Word w = shortest[current];
      w.push_back(e);
      if (shortest.try_emplace(next, std::move(w)).second) queue.push_back(next);
    }
  }
  return verdict;
}

bool is_safe_output(const Model& m, const Mask& mask, const Word& w) {
  Observer obs = build_observer(m, mask);
  ObsIndex current = obs.initial();
  if (m.reveals(obs.state(current))) return false;
  for (EventId e : w) {
    auto next = obs.step(current, e);
    if (!next) return false;
    current = *next;
    if (m.reveals(obs.state(current))) return false;
  }
  return true;
}

}  // namespace opaq
