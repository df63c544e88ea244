#pragma once

#include <json.hpp>

#include "pdiv/combinatorics.hpp"
#include "pdiv/lattice.hpp"

namespace pdiv {

using Json = nlohmann::ordered_json;

/// All emitted documents carry "schema": 1.
inline constexpr int kSchemaVersion = 1;

Json field_to_json(const FiniteField& f);
Json vector_to_json(const IsoVector& v);
Json lattice_to_json(const DieudonneLattice& L);
Json profile_to_json(const PavingProfile& p);
Json cycle_to_json(const Cycle& c);
Json semimodule_to_json(const SemiModule& a);

} // namespace pdiv
