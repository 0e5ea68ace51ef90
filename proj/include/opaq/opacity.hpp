#pragma once

#include <optional>
#include <vector>

#include "opaq/observer.hpp"

namespace opaq {

/// One opacity violation. For per-intruder checks the word is the
/// shortest observed word (over that intruder's mask) reaching the
/// revealing estimate; for joint checks `intruder` is empty and the word
/// is a shortest genuine word whose run produces the revealing
/// coordinated estimate.
struct Witness {
  std::optional<int> intruder;  // 1-based; nullopt = joint
  Word word;
  StateSet estimate;
};

struct Verdict {
  bool holds = true;
  std::vector<Witness> witnesses;
};

/// Current-state opacity against a single mask: no reachable observer
/// estimate may lie entirely inside the secret set.
Verdict verify_cso(const Model& m, const Mask& mask);

/// CSO against every declared intruder; witnesses carry intruder indices.
Verdict verify_dcso(const Model& m);

/// Intersection of the per-intruder estimates after the given observed
/// words (one per intruder). May be empty.
StateSet coordinated_estimate(const Model& m, const std::vector<Word>& words);

/// Joint CSO without insertion functions: every intruder is locally
/// opaque and no reachable coordinated estimate reveals the secret.
Verdict verify_jcso_plain(const Model& m);

/// Membership in the safe language: the observed word and all its
/// prefixes trace defined, non-revealing observer estimates. Undefined
/// paths are unsafe.
bool is_safe_output(const Model& m, const Mask& mask, const Word& w);

/// Set intersection of sorted state sets.
StateSet intersect(const StateSet& a, const StateSet& b);

}  // namespace opaq
