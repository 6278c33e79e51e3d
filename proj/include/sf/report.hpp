#pragma once

#include <json.hpp>
#include <string>

#include "sf/families.hpp"
#include "sf/isotopy.hpp"
#include "sf/maps.hpp"
#include "sf/planarity.hpp"
#include "sf/structure.hpp"

namespace sf {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

// Nonzero field elements cross report boundaries as discrete logs relative to
// the canonical generator; zero is the literal string "zero". Map
// coefficients are serialized as coordinate vectors instead, which keeps the
// map files readable without a log table.
json dlog_json(const FieldCtx& K, elt v);
elt dlog_from_json(const FieldCtx& K, const json& j);
json coords_json(const FieldCtx& K, elt v);
elt coords_from_json(const FieldCtx& K, const json& j);

json planar_to_json(const PlanarMap& F, const FamilyMeta* meta = nullptr);
PlanarMap planar_from_json(const json& j);
FamilyMeta meta_from_json(const json& j);
FamilyInstance instance_from_json(const json& j);

std::string canonical_dump(const json& payload);
uint64_t fnv1a64(std::string_view s);
std::string map_hash(const PlanarMap& F);

json certificate_to_json(const PlanarityCertificate& cert, const FieldCtx& base);
PlanarityCertificate certificate_from_json(const json& j, const FieldCtx& base);

json matrix_to_json(const MatFp& m);
json isotopism_to_json(const Isotopism& iso, const FieldCtx& base);
json nuclei_to_json(const NucleiReport& rep);
json centralizer_to_json(const CentralizerReport& rep);
json orbit_to_json(const OrbitReport& rep);
json classify_to_json(const ClassifyReport& rep, const FieldCtx* M);
json compare_to_json(const CompareResult& res, const FieldCtx* base);

// Structural validation against the versioned schemas shipped in schemas/:
// checks required fields and their JSON types (dotted paths, [] = array
// element). Returns false and fills err on the first violation.
bool validate_schema(const json& payload, const json& schema, std::string* err = nullptr);

}  // namespace sf
