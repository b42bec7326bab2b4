#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "peritl/families.hpp"

namespace peritl {

// Diagram schema: {"n_out":int,"n_in":int,"b":int,"l":int,"out":[int],"in":[int]}
nlohmann::json diagram_to_json(const AnnularDiagram& d);
AnnularDiagram diagram_from_json(const nlohmann::json& j);
AnnularDiagram parse_diagram(const std::string& text);

nlohmann::json state_to_json(const BState& s);
BState state_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const ModuleVector& v);

}  // namespace peritl
