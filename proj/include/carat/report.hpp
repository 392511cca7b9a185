#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

namespace carat::report {

using json = nlohmann::ordered_json;

// Deterministic JSON writer: insertion-ordered keys, doubles at 17 significant
// digits (round-trip exact), non-finite numbers as null, no locale dependence.
std::string emit(const json& j, int indent = 2);

json from_complex(std::complex<double> z);
json from_vector(const std::vector<double>& v);

}  // namespace carat::report
