#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opaq/observer.hpp"

namespace opaq {

struct PrunedProduct;

/// Output symbol of an insertion interface, flagged when fictitious.
struct ModifiedSymbol {
  EventId event;
  bool inserted;

  auto operator<=>(const ModifiedSymbol&) const = default;
};

/// What one intruder observes: genuine events interleaved with inserted
/// ones; erasing the flags yields the stream the intruder sees, the
/// unflagged subsequence is the genuine projected word.
using ModifiedWord = std::vector<ModifiedSymbol>;

/// Choice among admissible insertion bursts.
enum class ChoicePolicy {
  MinInsert,  // fewest inserted symbols, lexicographic tie-break (default)
  MaxInsert,  // most inserted symbols, lexicographic tie-break
};

std::string policy_name(ChoicePolicy policy);
std::optional<ChoicePolicy> policy_from_name(const std::string& name);

/// Deterministic insertion interface for one intruder: a Mealy machine
/// whose step consumes one driving event and emits the decorated segment
/// shown to the intruder. Local strategies are driven by the intruder's
/// own observable alphabet; coordinator-extracted strategies are driven
/// by the union alphabet and emit empty segments on events the intruder
/// cannot see.
struct InsertionStrategy {
  struct Step {
    std::size_t next;
    ModifiedWord output;  // empty for events invisible to this intruder

    bool operator==(const Step&) const = default;
  };

  int intruder = 0;  // 1-based
  std::vector<std::string> event_names;  // alphabet binding for serialization
  std::vector<std::string> state_labels;
  std::size_t initial = 0;
  std::set<EventId> inputs;  // events that drive the machine
  std::map<std::pair<std::size_t, EventId>, Step> steps;
  std::string policy;

  const Step& step(std::size_t state, EventId e) const;
};

/// The zero-insertion strategy f(s,e)=e over one intruder's alphabet.
InsertionStrategy identity_strategy(const Model& m, int intruder);

/// Runs a strategy over a word of driving observations, concatenating
/// the per-event segments. Throws std::invalid_argument on observations
/// outside the strategy's domain.
ModifiedWord apply_insertion(const InsertionStrategy& f, const Word& w);

/// JSON round-trip for strategies (schema documented in the README).
std::string strategies_to_json(const std::vector<InsertionStrategy>& fs);
std::vector<InsertionStrategy> strategies_from_json(const std::string& text);

/// Per-genuine-event record of a simulated run. Estimates are the
/// post-event values; the reveal flags cover every intermediate point of
/// the aligned insertion outputs, not just the final one.
struct TraceStep {
  EventId genuine;
  std::vector<ModifiedWord> outputs;
  std::vector<Estimate> intruder_estimates;
  Estimate obs_estimate;
  StateSet joint_estimate;
  std::vector<bool> local_reveal;
  bool joint_reveal = false;
};

struct Trace {
  std::vector<Estimate> initial_intruder_estimates;
  Estimate initial_obs_estimate;
  StateSet initial_joint_estimate;
  bool initial_reveal = false;
  std::vector<TraceStep> steps;

  bool any_local_reveal() const;
  bool any_joint_reveal() const;
};

/// Replays a genuine word under one strategy per intruder, tracking what
/// each intruder observes and estimates, the true estimate, and the
/// coordinated estimate at every intermediate step.
/// Throws std::invalid_argument if the word is not generable.
Trace simulate_run(const Model& m,
                   const std::vector<InsertionStrategy>& strategies,
                   const Word& s);

/// Picks one transition per (state, event) of the pruned product —
/// default: fewest total inserted symbols, then lexicographically
/// smallest output tuple — and projects the result onto each intruder.
std::vector<InsertionStrategy> extract_joint_strategy(
    const Model& m, const PrunedProduct& pruned,
    ChoicePolicy policy = ChoicePolicy::MinInsert);

}  // namespace opaq
