#pragma once

#include "co2net/network.hpp"

#include <stdexcept>
#include <string>

namespace co2net {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Network interchange is a GeoJSON FeatureCollection: nodes as Point
/// features, pipes and pumps as LineStrings. All quantities are SI;
/// pressures are echoed in barg alongside.
std::string network_to_geojson(const Network &net);
Network network_from_geojson(const std::string &text);

void save_network_geojson(const Network &net, const std::string &path);
Network load_network_geojson(const std::string &path);

std::string boundary_to_json(const BoundarySet &bounds);
BoundarySet boundary_from_json(const std::string &text);

void save_boundary_json(const BoundarySet &bounds, const std::string &path);
BoundarySet load_boundary_json(const std::string &path);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

} // namespace co2net
