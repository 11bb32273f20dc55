#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ka/instanton.hpp"

namespace ka {

using json = nlohmann::json;

// {"p":..,"q":..,"terms":[{"blade":[1-based ascending],"re":..,"im":..}]}
json to_json(const Multivector& a);
Multivector multivector_from_json(const json& j);

struct SpinorData {
  Vector comps;
  std::optional<int> chirality;

  bool operator==(const SpinorData& o) const { return comps == o.comps && chirality == o.chirality; }
};
// {"comps":[{"re":..,"im":..}],"chirality":1|-1|null}
json to_json(const SpinorData& s);
SpinorData spinor_from_json(const json& j);

json to_json(const StructureData& d);
StructureData structure_from_json(const json& j);

json to_json(const VerificationReport& r);
json to_json(const ConditionReport& r);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace ka
