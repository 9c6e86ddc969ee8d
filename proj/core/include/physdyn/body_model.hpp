#pragma once

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace physdyn {

inline constexpr int kNoParent = -1;

// One degree of freedom of the generalized coordinate vector. The root part
// owns the three translation DOFs plus its three rotation DOFs; every other
// part owns three rotation DOFs.
struct DofRef {
  int part = 0;
  int axis = 0;             // 0,1,2 = x,y,z
  bool translation = false; // only the root has translation DOFs
};

// Articulated tree topology and rest-pose joint placement. Parts are stored
// in topological order: parent[i] < i for every non-root part, part 0 is the
// floating-base root (parent == kNoParent). joint_rest_offset[i] is the
// position of part i's joint in its parent's rest frame; for the root it is
// the rest-pose world position of the root joint.
struct KinematicTree {
  int part_count = 0;
  std::vector<int> parent;
  std::vector<Eigen::Vector3d> joint_rest_offset; // [m]

  // DOF layout: [root tx ty tz, root rx ry rz, part1 rx ry rz, part2 ...].
  int dof_count() const { return 6 + 3 * (part_count - 1); }

  // True if `ancestor` is on the chain from the root to `part` (inclusive).
  bool is_ancestor_or_self(int ancestor, int part) const;
};

int dof_index(const KinematicTree& tree, const DofRef& ref);
DofRef dof_ref(const KinematicTree& tree, int index);

// Triangle mesh of one body part, vertices in rest-pose world coordinates.
struct PartMesh {
  int part_id = 0;
  std::vector<Eigen::Vector3d> vertices; // [m]
  std::vector<std::array<int, 3>> triangles;
};

enum class MassMode { kFractionTable, kUniformDensity };

struct MassConfig {
  double total_kg = 70.0;
  MassMode mode = MassMode::kFractionTable;
  std::vector<double> fractions;    // per part; must sum to 1 in fraction mode
  double density_kg_m3 = 985.0;     // uniform-density mode
  std::vector<double> density_scale; // optional per-part multiplier (uniform
                                     // density mode only); empty means all 1
};

// Immutable after load; safe for concurrent read-only use.
struct RestBody {
  KinematicTree tree;
  std::vector<PartMesh> part_meshes;
  std::vector<std::vector<int>> contact_vertices; // per part, vertex indices
  MassConfig mass_config;

  int contact_point_count() const;
  // Rest-pose world position of every joint (offsets accumulated down the tree).
  std::vector<Eigen::Vector3d> rest_joint_positions() const;
};

// Throws SchemaError naming the part and field on any invariant violation
// (cyclic tree, fraction sum != 1, invalid indices, non-finite values).
void check_body_invariants(const RestBody& body);

// Loads and validates a body from the JSON schema described in the README.
// Part meshes may be inline or referenced as ASCII OBJ files ("obj" key,
// path relative to the body file). Throws SchemaError.
RestBody load_body(const std::filesystem::path& path);
void save_body(const RestBody& body, const std::filesystem::path& path);

// Loads a single ASCII OBJ mesh (v/f records, 1-based indices).
PartMesh load_obj(const std::filesystem::path& path);

// Fills every boundary loop with a triangle fan to the loop's centroid
// vertex. A closed input is returned unchanged; the output is watertight.
// Throws GeometryError identifying any non-manifold edge (> 2 incident
// triangles).
PartMesh close_part_mesh(const PartMesh& mesh);

// Every edge shared by exactly two triangles.
bool is_watertight(const PartMesh& mesh);

struct PartValidation {
  int part_id = 0;
  bool watertight = false;
  bool winding_consistent = false;  // coherent orientation and signed volume > 0
  double signed_volume = 0.0;       // [m^3]
  std::vector<int> degenerate_triangles; // area < 1e-12 m^2
};

struct ValidationReport {
  std::vector<PartValidation> parts;
  bool all_ok() const;
};

// Report-only: never throws.
ValidationReport validate_body(const RestBody& body);

}  // namespace physdyn
