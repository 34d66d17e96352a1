#pragma once

#include <ostream>

#include "tkge/dataset.hpp"
#include "tkge/model.hpp"

namespace tkge {

// CSV with header id,label,v_0..v_{d-1}; labels are quoted when needed.
void export_entity_embeddings(std::ostream& out, const ModelParameters& params, const Vocabulary& entities);

// One row per distinct predicate sequence appearing in `split`, labeled by
// its decoded token names. Requires a TA scorer (the encoder defines the
// sequence vectors).
void export_sequence_embeddings(std::ostream& out, const ModelParameters& params, const DatasetBundle& data,
                                const std::vector<TemporalFact>& split);

}  // namespace tkge
