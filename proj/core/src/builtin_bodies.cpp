#include "physdyn/builtin_bodies.hpp"

#include "physdyn/mesh_primitives.hpp"

namespace physdyn {

RestBody make_box_body(const Eigen::Vector3d& size, double total_kg,
                       const Eigen::Vector3d& center,
                       bool with_bottom_contacts) {
  RestBody body;
  body.tree.part_count = 1;
  body.tree.parent = {kNoParent};
  body.tree.joint_rest_offset = {center};
  body.part_meshes.push_back(make_box(center, size));
  body.part_meshes[0].part_id = 0;
  body.contact_vertices.resize(1);
  if (with_bottom_contacts) body.contact_vertices[0] = {0, 1, 2, 3};
  body.mass_config.total_kg = total_kg;
  body.mass_config.mode = MassMode::kFractionTable;
  body.mass_config.fractions = {1.0};
  return body;
}

RestBody make_chain_body(int part_count, double link_length, double total_kg) {
  RestBody body;
  body.tree.part_count = part_count;
  body.tree.parent.resize(part_count);
  body.tree.joint_rest_offset.resize(part_count);
  const double w = link_length / 5.0;
  for (int i = 0; i < part_count; ++i) {
    body.tree.parent[i] = i - 1;  // root gets kNoParent
    body.tree.joint_rest_offset[i] =
        i == 0 ? Eigen::Vector3d::Zero()
               : Eigen::Vector3d(0.0, 0.0, -link_length);
    PartMesh mesh = make_box({0.0, 0.0, -link_length * (i + 0.5)},
                             {w, w, link_length});
    mesh.part_id = i;
    body.part_meshes.push_back(std::move(mesh));
  }
  body.contact_vertices.resize(part_count);
  body.mass_config.total_kg = total_kg;
  body.mass_config.mode = MassMode::kFractionTable;
  body.mass_config.fractions.assign(part_count, 1.0 / part_count);
  return body;
}

namespace {

struct SegmentSpec {
  const char* name;
  int parent;
  Eigen::Vector3d joint;   // rest world joint position
  Eigen::Vector3d center;  // box center
  Eigen::Vector3d size;
  double fraction;
};

// Fractions sum to 1.000 exactly. Foot and toe boxes sit flush on z = 0.
const SegmentSpec kHumanoid[24] = {
    {"pelvis", -1, {0, 0, 0.95}, {0, 0, 0.975}, {0.18, 0.28, 0.15}, 0.140},
    {"l_thigh", 0, {0, 0.10, 0.90}, {0, 0.10, 0.70}, {0.12, 0.12, 0.40}, 0.105},
    {"r_thigh", 0, {0, -0.10, 0.90}, {0, -0.10, 0.70}, {0.12, 0.12, 0.40}, 0.105},
    {"spine1", 0, {0, 0, 1.05}, {0, 0, 1.125}, {0.16, 0.24, 0.15}, 0.080},
    {"l_shank", 1, {0, 0.10, 0.50}, {0, 0.10, 0.30}, {0.10, 0.10, 0.40}, 0.0475},
    {"r_shank", 2, {0, -0.10, 0.50}, {0, -0.10, 0.30}, {0.10, 0.10, 0.40}, 0.0475},
    {"spine2", 3, {0, 0, 1.20}, {0, 0, 1.25}, {0.17, 0.26, 0.10}, 0.090},
    {"l_foot", 4, {0, 0.10, 0.10}, {0.04, 0.10, 0.05}, {0.18, 0.08, 0.10}, 0.009},
    {"r_foot", 5, {0, -0.10, 0.10}, {0.04, -0.10, 0.05}, {0.18, 0.08, 0.10}, 0.009},
    {"chest", 6, {0, 0, 1.30}, {0, 0, 1.40}, {0.18, 0.30, 0.20}, 0.140},
    {"l_toes", 7, {0.13, 0.10, 0.02}, {0.17, 0.10, 0.02}, {0.08, 0.08, 0.04}, 0.006},
    {"r_toes", 8, {0.13, -0.10, 0.02}, {0.17, -0.10, 0.02}, {0.08, 0.08, 0.04}, 0.006},
    {"neck", 9, {0, 0, 1.50}, {0, 0, 1.54}, {0.08, 0.08, 0.08}, 0.014},
    {"l_collar", 9, {0, 0.06, 1.46}, {0, 0.13, 1.46}, {0.08, 0.14, 0.08}, 0.012},
    {"r_collar", 9, {0, -0.06, 1.46}, {0, -0.13, 1.46}, {0.08, 0.14, 0.08}, 0.012},
    {"head", 12, {0, 0, 1.58}, {0, 0, 1.67}, {0.16, 0.18, 0.18}, 0.081},
    {"l_upper_arm", 13, {0, 0.20, 1.45}, {0, 0.20, 1.31}, {0.08, 0.08, 0.28}, 0.026},
    {"r_upper_arm", 14, {0, -0.20, 1.45}, {0, -0.20, 1.31}, {0.08, 0.08, 0.28}, 0.026},
    {"l_forearm", 16, {0, 0.20, 1.17}, {0, 0.20, 1.045}, {0.07, 0.07, 0.25}, 0.016},
    {"r_forearm", 17, {0, -0.20, 1.17}, {0, -0.20, 1.045}, {0.07, 0.07, 0.25}, 0.016},
    {"l_hand", 18, {0, 0.20, 0.92}, {0, 0.20, 0.88}, {0.03, 0.08, 0.08}, 0.004},
    {"r_hand", 19, {0, -0.20, 0.92}, {0, -0.20, 0.88}, {0.03, 0.08, 0.08}, 0.004},
    {"l_fingers", 20, {0, 0.20, 0.84}, {0, 0.20, 0.80}, {0.025, 0.07, 0.08}, 0.002},
    {"r_fingers", 21, {0, -0.20, 0.84}, {0, -0.20, 0.80}, {0.025, 0.07, 0.08}, 0.002},
};

}  // namespace

RestBody make_box_humanoid(double total_kg) {
  RestBody body;
  body.tree.part_count = 24;
  body.contact_vertices.resize(24);
  for (int i = 0; i < 24; ++i) {
    const SegmentSpec& seg = kHumanoid[i];
    body.tree.parent.push_back(seg.parent);
    body.tree.joint_rest_offset.push_back(
        seg.parent == kNoParent ? seg.joint
                                : seg.joint - kHumanoid[seg.parent].joint);
    PartMesh mesh = make_box(seg.center, seg.size);
    mesh.part_id = i;
    body.part_meshes.push_back(std::move(mesh));
    body.mass_config.fractions.push_back(seg.fraction);
  }
  // make_box orders corners with the four z- corners first.
  body.contact_vertices[7] = {0, 1, 2, 3};   // l_foot sole
  body.contact_vertices[8] = {0, 1, 2, 3};   // r_foot sole
  body.contact_vertices[20] = {0, 3};        // l_hand
  body.contact_vertices[21] = {0, 3};        // r_hand
  body.contact_vertices[0] = {0, 3};         // pelvis underside
  body.mass_config.total_kg = total_kg;
  body.mass_config.mode = MassMode::kFractionTable;
  return body;
}

const std::vector<std::string>& humanoid_part_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const SegmentSpec& seg : kHumanoid) out.emplace_back(seg.name);
    return out;
  }();
  return names;
}

}  // namespace physdyn
