#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "htridiag/band.hpp"
#include "htridiag/factorization.hpp"
#include "htridiag/models.hpp"
#include "htridiag/recurrence.hpp"

namespace htridiag {

// Emission uses ordered JSON so field order (and therefore byte output) is
// stable across runs. Complex numbers are always two-element [re, im] arrays.
using json = nlohmann::ordered_json;

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

json band_to_json(const BandSpec& spec, std::size_t n_terms);
BandSpec band_from_json(const json& j);

json factorization_to_json(const FactorizationSpec& f, std::size_t n_terms);
FactorizationSpec factorization_from_json(const json& j);

json packet_to_json(const EigenPacket& packet);
EigenPacket packet_from_json(const json& j);

json model_to_json(const models::ModelDescriptor& model, std::size_t n_terms);

std::string spectrum_to_csv(const std::vector<cplx>& eigenvalues);
std::string band_to_csv(const BandSpec& spec, std::size_t n_terms);
std::string packets_to_csv(const std::vector<EigenPacket>& packets);

/// Fixed 17-significant-digit decimal form used by the CSV writers.
std::string format_real(double value);

}  // namespace htridiag
