#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace opaq {

// States and events are interned: ids index the model's sorted symbol
// tables, so id order equals token order and every derived structure is
// reproducible byte for byte.
using StateId = std::uint32_t;
using EventId = std::uint32_t;

/// Sorted, duplicate-free set of state ids.
using StateSet = std::vector<StateId>;

/// A finite string of events; the empty vector is the empty word.
using Word = std::vector<EventId>;

/// Total order on symbol tokens. All-digit tokens compare numerically
/// (by length, then lexicographically) and sort before other tokens;
/// everything else compares lexicographically.
bool token_less(const std::string& a, const std::string& b);

/// Shortlex order on words: length first, then elementwise.
bool shortlex_less(const Word& a, const Word& b);

/// Observable alphabet of one observer/intruder.
struct Mask {
  std::vector<EventId> observable;  // sorted, duplicate-free

  bool observes(EventId e) const;
};

struct Transition {
  StateId from;
  EventId event;
  StateId to;

  auto operator<=>(const Transition&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);

  /// 1-based line of the offending input, 0 if not line-specific.
  int line() const { return line_; }

 private:
  int line_;
};

/// Symbolic description of a model, used by parsing and by programmatic
/// construction (tests, random generation). Everything is validated in
/// Model::from_parts.
struct ModelParts {
  std::vector<std::string> states;
  std::vector<std::string> events;
  std::vector<std::array<std::string, 3>> transitions;  // from, event, to
  std::vector<std::string> initial;
  std::vector<std::string> secret;
  std::vector<std::vector<std::string>> masks;  // one entry per intruder
};

/// Nondeterministic finite automaton with an initial-state set, a secret
/// state set, and one observable alphabet per intruder. Immutable after
/// construction; the non-secret set is always derived as states \ secret.
class Model {
 public:
  static Model from_parts(const ModelParts& parts);

  std::size_t state_count() const { return state_names_.size(); }
  std::size_t event_count() const { return event_names_.size(); }
  const std::string& state_name(StateId s) const { return state_names_.at(s); }
  const std::string& event_name(EventId e) const { return event_names_.at(e); }
  const std::vector<std::string>& state_names() const { return state_names_; }
  const std::vector<std::string>& event_names() const { return event_names_; }

  std::optional<StateId> find_state(const std::string& token) const;
  std::optional<EventId> find_event(const std::string& token) const;

  const std::vector<Transition>& transitions() const { return transitions_; }
  const StateSet& initial() const { return initial_; }
  const StateSet& secret() const { return secret_; }
  StateSet non_secret() const;

  std::size_t intruder_count() const { return masks_.size(); }
  /// Intruder indices are 1-based throughout the public surface.
  const Mask& mask(int intruder) const;
  const std::vector<Mask>& masks() const { return masks_; }
  /// Union of all intruder alphabets.
  Mask union_mask() const;

  /// Successors of one state on one event (empty set if undefined).
  const StateSet& successors(StateId s, EventId e) const;
  /// Relational image of a state set under one event.
  StateSet step(const StateSet& from, EventId e) const;
  /// Events with at least one transition out of the set.
  std::vector<EventId> enabled(const StateSet& from) const;
  /// True iff the word is generable from some initial state.
  bool generates(const Word& w) const;

  /// Secret-revealing estimate: nonempty and contained in the secret set.
  bool reveals(const StateSet& estimate) const;

  /// "{0,1}" rendering of a state set, in token order.
  std::string format_state_set(const StateSet& set) const;
  std::string format_word(const Word& w) const;

 private:
  Model() = default;

  std::vector<std::string> state_names_;
  std::vector<std::string> event_names_;
  std::vector<Transition> transitions_;
  StateSet initial_;
  StateSet secret_;
  std::vector<Mask> masks_;
  std::map<std::pair<StateId, EventId>, StateSet> adjacency_;
};

/// Parses the line-oriented `.des` model format:
///
///   [events] a b c d
///   [states] 0 1 2
///   [initial] 0
///   [secret] 1
///   [observable 1] b c d
///   [transitions]
///   0 a 1
///
/// Sections may appear in any order and may repeat; `#` starts a comment.
Model parse_model(const std::string& text);

/// Canonical text form; parse_model(serialize_model(m)) is structurally
/// equal to m.
std::string serialize_model(const Model& m);

/// Natural projection of a word onto a mask's observable alphabet.
/// Throws std::invalid_argument on symbols outside the model alphabet.
Word project(const Model& m, const Mask& mask, const Word& w);

/// All words of length <= max_len generable from the initial set, in
/// shortlex order. The result is prefix-closed.
std::vector<Word> enumerate_language(const Model& m, std::size_t max_len);

}  // namespace opaq
