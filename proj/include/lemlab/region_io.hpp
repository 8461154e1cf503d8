#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "lemlab/region.hpp"

namespace lemlab {

// Region documents are JSON objects tagged by "type":
//   {"type": "disc", "center": "0+0i", "radius": 1}
//   {"type": "annulus", "center": "0+0i", "r_in": 1, "r_out": 2}
//   {"type": "polygon", "vertices": ["0+0i", "1+0i", "1+1i"]}
//   {"type": "sublevel", "poly": "-1+0i,0+0i,1+0i", "x": 1}
//   {"type": "preimage", "poly": "...", "inner": {...}}
//   {"type": "union", "parts": [{...}, ...]}
//   {"type": "mask", "origin": "0+0i", "h": 0.1, "rows": ["0110", ...]}   (rows bottom-up)

nlohmann::json region_to_json(const Region& K);
Region region_from_json(const nlohmann::json& doc, const std::string& path = "region");
Region parse_region(std::string_view text);
Region load_region(const std::string& file);

/// Reads a whole file; throws ParseError naming the file when unreadable.
std::string read_text_file(const std::string& file);

}  // namespace lemlab
