#pragma once

#include <string>

#include "opaq/ais.hpp"
#include "opaq/nfm.hpp"
#include "opaq/prune.hpp"

namespace opaq {

// Graphviz renderings. Observer estimates that reveal the secret are
// shaded; AIS system nodes are boxes and insertion nodes ellipses; NFM
// and product edges carry input/output labels. When a prune report is
// supplied the deleted product states are grouped in a dashed cluster.

std::string observer_dot(const Model& m, const Observer& o);
std::string ais_dot(const Model& m, const Ais& a);
std::string nfm_dot(const Model& m, const Nfm& machine);
std::string product_dot(const Model& m, const ProductNfm& p,
                        const PruneReport* pruned = nullptr);

}  // namespace opaq
