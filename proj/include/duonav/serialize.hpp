#pragma once

#include <string>

#include "duonav/world.hpp"

namespace duonav {

// Versioned JSON for worlds and episodes. The occupancy grid is
// run-length-encoded in scanline order; schema_version mismatches and
// malformed documents raise parse errors.
std::string world_to_json(const World& w);
World world_from_json(const std::string& text);
void save_world(const std::string& path, const World& w);
World load_world(const std::string& path);

std::string episode_to_json(const Episode& ep);
Episode episode_from_json(const std::string& text);

// One character per cell, '#' wall and '.' free; row 0 first.
std::string world_ascii(const World& w);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace duonav
