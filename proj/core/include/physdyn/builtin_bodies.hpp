#pragma once

#include <string>
#include <vector>

#include "physdyn/body_model.hpp"

namespace physdyn {

// Free-floating box with the root joint at the box center. When
// with_bottom_contacts is set the four bottom corners become contact
// vertices.
RestBody make_box_body(const Eigen::Vector3d& size, double total_kg,
                       const Eigen::Vector3d& center,
                       bool with_bottom_contacts = false);

// Serial chain of part_count box links hanging along -z from a root joint at
// the origin. Equal mass fractions.
RestBody make_chain_body(int part_count, double link_length, double total_kg);

// 24-part box-segment humanoid, about 1.76 m tall, standing on z = 0.
// Contact vertices: four sole corners per foot, two per hand, two on the
// pelvis underside. Mass split by a fixed per-part fraction table.
RestBody make_box_humanoid(double total_kg = 70.0);

// Part names for make_box_humanoid, indexed by part id.
const std::vector<std::string>& humanoid_part_names();

}  // namespace physdyn
