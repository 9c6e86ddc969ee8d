#pragma once

#include <stdexcept>
#include <string>

namespace physdyn {

// Malformed input file, schema violation, or inconsistent call arguments.
// The CLI maps this to exit code 2.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad geometry or a numerical failure (non-watertight mesh, degenerate
// volume, solver non-convergence). The CLI maps this to exit code 3.
class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace physdyn
