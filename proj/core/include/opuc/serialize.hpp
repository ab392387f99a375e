#ifndef OPUC_SERIALIZE_HPP
#define OPUC_SERIALIZE_HPP

#include <json.hpp>
#include <ostream>
#include <string>

#include "opuc/approximant.hpp"
#include "opuc/arcset.hpp"
#include "opuc/cmv.hpp"
#include "opuc/predictor.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

// Complex numbers serialize as [re, im]; all floating-point CSV output uses
// 17 significant digits so reruns diff byte-identically.

std::string format_double(double v);

nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);

/// Stable sequence schema: {"kind", "params", "offset", "capBound"}.
/// Custom-generator sequences are in-process only and refuse to serialize.
nlohmann::json sequence_to_json(const Sequence& seq);
Sequence sequence_from_json(const nlohmann::json& j);

nlohmann::json arcset_to_json(const ArcSet& set);
ArcSet arcset_from_json(const nlohmann::json& j);

void write_lprofile_csv(std::ostream& os, const LProfile& profile);
void write_density_csv(std::ostream& os, const DensityProfile& profile);
void write_spectral_sample_csv(std::ostream& os, const SpectralSample& sample);

}  // namespace opuc

#endif  // OPUC_SERIALIZE_HPP
