#include "opaq/prune.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "opaq/opacity.hpp"

namespace opaq {

std::vector<JointState> expand_intermediates(const ProductNfm& p,
                                             const ProductTransition& t) {
  const std::size_t n = p.intruders();
  std::size_t steps = 1;
  for (const Word& o : t.outputs) steps = std::max(steps, o.size());

  std::vector<ObsIndex> at(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Nfm& machine = p.machine(i);
    at[i] = machine.state(p.states()[t.from].comps[i]).intruder_est;
  }
  const Estimate& obs_after = p.obs_estimate(t.to);

  std::vector<JointState> expansion;
  for (std::size_t k = 0; k < steps; ++k) {
    JointState snapshot;
    snapshot.obs_est = obs_after;
    for (std::size_t i = 0; i < n; ++i) {
      const Nfm& machine = p.machine(i);
      if (k < t.outputs[i].size()) {
        auto next = machine.observer().step(at[i], t.outputs[i][k]);
        if (!next)
          throw std::logic_error("insertion output leaves the observer");
        at[i] = *next;
      }
      snapshot.intruder_ests.push_back(machine.observer().state(at[i]));
    }
    expansion.push_back(std::move(snapshot));
  }
  return expansion;
}

StateSet joint_estimate(const JointState& j) {
  StateSet joint = j.obs_est;
  for (const Estimate& est : j.intruder_ests) joint = intersect(joint, est);
  return joint;
}

bool is_joint_safe(const Model& m, const StateSet& joint) {
  return !m.reveals(joint);
}

std::string prune_reason_name(PruneReason reason) {
  switch (reason) {
    case PruneReason::Unsafe: return "unsafe";
    case PruneReason::Blocked: return "blocked";
    case PruneReason::Orphaned: return "orphaned";
  }
  return "?";
}

namespace {

StateSet state_joint_estimate(const ProductNfm& p, std::uint32_t s) {
  StateSet joint = p.obs_estimate(s);
  for (std::size_t i = 0; i < p.intruders(); ++i)
    joint = intersect(joint, p.intruder_estimate(s, i));
  return joint;
}

// Same walk as expand_intermediates without materializing the
// snapshots; scratch buffers are reused across the millions of
// transitions a dense product can carry.
struct UnsafeScratch {
  std::vector<ObsIndex> at;
  StateSet joint;
  StateSet narrowed;
};

struct Shared;
bool transition_unsafe(const Shared& shared, const ProductTransition& t,
                       UnsafeScratch& scratch);

constexpr ObsIndex kNoStep = 0xffffffffu;

struct Shared {
  const Model& m;
  const ProductNfm& p;
  std::vector<bool> state_unsafe;
  std::vector<bool> trans_unsafe;
  std::vector<std::vector<EventId>> enabled;  // per state, from the true
                                              // estimate
  // Flattened per-machine observer deltas; dense products evaluate
  // millions of intermediate steps.
  std::vector<std::vector<ObsIndex>> step_table;

  ObsIndex step(std::size_t machine, ObsIndex from, EventId e) const {
    return step_table[machine][from * m.event_count() + e];
  }

  explicit Shared(const Model& model, const ProductNfm& product)
      : m(model), p(product) {
    for (std::size_t i = 0; i < p.intruders(); ++i) {
      const Observer& obs = p.machine(i).observer();
      std::vector<ObsIndex> flat(obs.size() * m.event_count(), kNoStep);
      for (ObsIndex s = 0; s < obs.size(); ++s)
        for (const auto& [e, next] : obs.moves(s))
          flat[s * m.event_count() + e] = next;
      step_table.push_back(std::move(flat));
    }
    state_unsafe.resize(p.size());
    for (std::uint32_t s = 0; s < p.size(); ++s)
      state_unsafe[s] = !is_joint_safe(m, state_joint_estimate(p, s));
    trans_unsafe.resize(p.transitions().size());
    UnsafeScratch scratch;
    for (std::uint32_t t = 0; t < p.transitions().size(); ++t)
      trans_unsafe[t] = transition_unsafe(*this, p.transitions()[t], scratch);
    enabled.resize(p.size());
    for (std::uint32_t s = 0; s < p.size(); ++s)
      enabled[s] = p.global().inputs_at(p.states()[s].obs);
  }
};

bool transition_unsafe(const Shared& shared, const ProductTransition& t,
                       UnsafeScratch& scratch) {
  const ProductNfm& p = shared.p;
  const std::size_t n = p.intruders();
  std::size_t steps = 1;
  for (const Word& o : t.outputs) steps = std::max(steps, o.size());
  scratch.at.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Nfm& machine = p.machine(i);
    scratch.at[i] = machine.state(p.states()[t.from].comps[i]).intruder_est;
  }
  const Estimate& obs_after = p.obs_estimate(t.to);
  for (std::size_t k = 0; k < steps; ++k) {
    scratch.joint = obs_after;
    for (std::size_t i = 0; i < n; ++i) {
      if (k < t.outputs[i].size())
        scratch.at[i] = shared.step(i, scratch.at[i], t.outputs[i][k]);
      const Estimate& est = p.machine(i).observer().state(scratch.at[i]);
      scratch.narrowed.clear();
      std::set_intersection(scratch.joint.begin(), scratch.joint.end(),
                            est.begin(), est.end(),
                            std::back_inserter(scratch.narrowed));
      scratch.joint.swap(scratch.narrowed);
    }
    if (shared.m.reveals(scratch.joint)) return true;
  }
  return false;
}

// Counter-driven cascade: deleting a transition can block its source or
// orphan its target; both effects propagate through a FIFO worklist, so
// the run is linear in the number of incident transitions.
class CanonicalRun {
 public:
  CanonicalRun(const Shared& shared, PruneReport& report)
      : shared_(shared), report_(report),
        state_alive_(shared.p.size(), true),
        trans_alive_(shared.p.transitions().size(), true),
        queued_(shared.p.size(), false), in_count_(shared.p.size(), 0),
        out_count_(shared.p.size(),
                   std::vector<int>(shared.m.event_count(), 0)) {
    const ProductNfm& p = shared_.p;
    for (const ProductTransition& t : p.transitions()) {
      ++in_count_[t.to];
      ++out_count_[t.from][t.input];
    }

    for (std::uint32_t t = 0; t < p.transitions().size(); ++t)
      if (shared_.trans_unsafe[t]) delete_transition(t);
    for (std::uint32_t s = 0; s < p.size(); ++s)
      if (shared_.state_unsafe[s] && state_alive_[s])
        delete_state(s, PruneReason::Unsafe);
    for (std::uint32_t s = 0; s < p.size(); ++s) enqueue_if_dead(s);

    while (!queue_.empty() && state_alive_[p.initial()]) {
      std::uint32_t s = queue_.front();
      queue_.pop_front();
      queued_[s] = false;
      if (!state_alive_[s]) continue;
      if (s != p.initial() && in_count_[s] == 0)
        delete_state(s, PruneReason::Orphaned);
      else if (blocked(s))
        delete_state(s, PruneReason::Blocked);
    }
  }

  const std::vector<bool>& state_alive() const { return state_alive_; }
  const std::vector<bool>& trans_alive() const { return trans_alive_; }

 private:
  bool blocked(std::uint32_t s) const {
    for (EventId e : shared_.enabled[s])
      if (out_count_[s][e] == 0) return true;
    return false;
  }

  void enqueue_if_dead(std::uint32_t s) {
    if (!state_alive_[s] || queued_[s]) return;
    if ((s != shared_.p.initial() && in_count_[s] == 0) || blocked(s)) {
      queued_[s] = true;
      queue_.push_back(s);
    }
  }

  void delete_transition(std::uint32_t t) {
    if (!trans_alive_[t]) return;
    trans_alive_[t] = false;
    const ProductTransition& tr = shared_.p.transitions()[t];
    --out_count_[tr.from][tr.input];
    --in_count_[tr.to];
    enqueue_if_dead(tr.from);
    enqueue_if_dead(tr.to);
  }

  void delete_state(std::uint32_t s, PruneReason reason) {
    state_alive_[s] = false;
    for (std::uint32_t t : shared_.p.out_transitions(s)) delete_transition(t);
    for (std::uint32_t t : shared_.p.in_transitions(s)) delete_transition(t);
    PruneRecord record;
    record.label = shared_.p.label(shared_.m, s);
    for (std::size_t i = 0; i < shared_.p.intruders(); ++i)
      record.intruder_ests.push_back(shared_.p.intruder_estimate(s, i));
    record.obs_est = shared_.p.obs_estimate(s);
    record.reason = reason;
    report_.deleted.push_back(std::move(record));
  }

  const Shared& shared_;
  PruneReport& report_;
  std::vector<bool> state_alive_;
  std::vector<bool> trans_alive_;
  std::vector<bool> queued_;
  std::vector<int> in_count_;
  std::vector<std::vector<int>> out_count_;
  std::deque<std::uint32_t> queue_;
};

// Reference cascade: recompute every deletable candidate from scratch
// and remove one at random until the fixpoint. Used to demonstrate that
// the surviving subgraph does not depend on deletion order.
class RandomizedRun {
 public:
  RandomizedRun(const Shared& shared, std::uint64_t seed, PruneReport& report)
      : shared_(shared), report_(report),
        state_alive_(shared.p.size(), true),
        trans_alive_(shared.p.transitions().size(), true) {
    std::mt19937_64 rng(seed);
    while (state_alive_[shared_.p.initial()]) {
      auto found = candidates();
      if (found.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, found.size() - 1);
      remove(found[pick(rng)]);
    }
  }

  const std::vector<bool>& state_alive() const { return state_alive_; }
  const std::vector<bool>& trans_alive() const { return trans_alive_; }

 private:
  struct Candidate {
    bool is_state;
    std::uint32_t index;
    PruneReason reason;
  };

  bool has_alive_in(std::uint32_t s) const {
    for (std::uint32_t t : shared_.p.in_transitions(s))
      if (trans_alive_[t] && state_alive_[shared_.p.transitions()[t].from])
        return true;
    return false;
  }

  bool blocked(std::uint32_t s) const {
    for (EventId e : shared_.enabled[s]) {
      bool answered = false;
      for (std::uint32_t t : shared_.p.out_transitions(s)) {
        const ProductTransition& tr = shared_.p.transitions()[t];
        if (trans_alive_[t] && tr.input == e && state_alive_[tr.to]) {
          answered = true;
          break;
        }
      }
      if (!answered) return true;
    }
    return false;
  }

  std::vector<Candidate> candidates() const {
    std::vector<Candidate> found;
    for (std::uint32_t t = 0; t < trans_alive_.size(); ++t)
      if (trans_alive_[t] && shared_.trans_unsafe[t])
        found.push_back({false, t, PruneReason::Unsafe});
    for (std::uint32_t s = 0; s < state_alive_.size(); ++s) {
      if (!state_alive_[s]) continue;
      if (shared_.state_unsafe[s])
        found.push_back({true, s, PruneReason::Unsafe});
      else if (s != shared_.p.initial() && !has_alive_in(s))
        found.push_back({true, s, PruneReason::Orphaned});
      else if (blocked(s))
        found.push_back({true, s, PruneReason::Blocked});
    }
    return found;
  }

  void remove(const Candidate& c) {
    if (!c.is_state) {
      trans_alive_[c.index] = false;
      return;
    }
    state_alive_[c.index] = false;
    for (std::uint32_t t : shared_.p.out_transitions(c.index))
      trans_alive_[t] = false;
    for (std::uint32_t t : shared_.p.in_transitions(c.index))
      trans_alive_[t] = false;
    PruneRecord record;
    record.label = shared_.p.label(shared_.m, c.index);
    for (std::size_t i = 0; i < shared_.p.intruders(); ++i)
      record.intruder_ests.push_back(shared_.p.intruder_estimate(c.index, i));
    record.obs_est = shared_.p.obs_estimate(c.index);
    record.reason = c.reason;
    report_.deleted.push_back(std::move(record));
  }

  const Shared& shared_;
  PruneReport& report_;
  std::vector<bool> state_alive_;
  std::vector<bool> trans_alive_;
};

}  // namespace

PrunedProduct prune_product(const Model& m, const ProductNfm& p,
                            const PruneOptions& options) {
  Shared shared(m, p);
  PruneReport report;

  std::vector<bool> state_alive;
  std::vector<bool> trans_alive;
  if (options.shuffle_seed) {
    RandomizedRun run(shared, *options.shuffle_seed, report);
    state_alive = run.state_alive();
    trans_alive = run.trans_alive();
  } else {
    CanonicalRun run(shared, report);
    state_alive = run.state_alive();
    trans_alive = run.trans_alive();
  }

  bool initial_alive = !state_alive.empty() && state_alive[p.initial()];
  ProductNfm pruned =
      initial_alive
          ? p.subgraph(state_alive, trans_alive)
          : p.subgraph(std::vector<bool>(p.size(), false),
                       std::vector<bool>(p.transitions().size(), false));
  report.surviving_states = pruned.size();
  report.surviving_transitions = pruned.transitions().size();
  return {std::move(pruned), std::move(report)};
}

bool check_joint_enforceability(const PrunedProduct& pruned) {
  return !pruned.product.empty();
}

}  // namespace opaq
