#include "physdyn/body_model.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "physdyn/errors.hpp"
#include "json_util.hpp"

namespace physdyn {

namespace {

std::string part_tag(int part_id) { return "part " + std::to_string(part_id); }

// Undirected edge key with vertex order normalized.
std::pair<int, int> edge_key(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

struct EdgeUse {
  int count = 0;
  int forward = 0; // traversals as (min -> max)
};

std::map<std::pair<int, int>, EdgeUse> edge_uses(const PartMesh& mesh) {
  std::map<std::pair<int, int>, EdgeUse> uses;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      EdgeUse& u = uses[edge_key(a, b)];
      ++u.count;
      if (a < b) ++u.forward;
    }
  }
  return uses;
}

double triangle_area(const PartMesh& mesh, const std::array<int, 3>& t) {
  const Eigen::Vector3d e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
  const Eigen::Vector3d e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
  return 0.5 * e1.cross(e2).norm();
}

double signed_volume(const PartMesh& mesh) {
  double vol = 0.0;
  for (const auto& t : mesh.triangles) {
    vol += mesh.vertices[t[0]].dot(
               mesh.vertices[t[1]].cross(mesh.vertices[t[2]])) /
           6.0;
  }
  return vol;
}

}  // namespace

bool KinematicTree::is_ancestor_or_self(int ancestor, int part) const {
  for (int p = part; p != kNoParent; p = parent[p]) {
    if (p == ancestor) return true;
  }
  return false;
}

int dof_index(const KinematicTree& tree, const DofRef& ref) {
  if (ref.axis < 0 || ref.axis > 2 || ref.part < 0 ||
      ref.part >= tree.part_count || (ref.translation && ref.part != 0)) {
    throw SchemaError("dof_index: invalid DOF reference");
  }
  if (ref.translation) return ref.axis;
  if (ref.part == 0) return 3 + ref.axis;
  return 6 + 3 * (ref.part - 1) + ref.axis;
}

DofRef dof_ref(const KinematicTree& tree, int index) {
  if (index < 0 || index >= tree.dof_count()) {
    throw SchemaError("dof_ref: index out of range");
  }
  if (index < 3) return {0, index, true};
  if (index < 6) return {0, index - 3, false};
  const int k = index - 6;
  return {1 + k / 3, k % 3, false};
}

int RestBody::contact_point_count() const {
  int n = 0;
  for (const auto& list : contact_vertices) n += static_cast<int>(list.size());
  return n;
}

std::vector<Eigen::Vector3d> RestBody::rest_joint_positions() const {
  std::vector<Eigen::Vector3d> joints(tree.part_count);
  for (int i = 0; i < tree.part_count; ++i) {
    joints[i] = tree.joint_rest_offset[i];
    if (tree.parent[i] != kNoParent) joints[i] += joints[tree.parent[i]];
  }
  return joints;
}

void check_body_invariants(const RestBody& body) {
  const KinematicTree& tree = body.tree;
  const int n = tree.part_count;
  if (n < 1) throw SchemaError("body: part_count must be >= 1");
  if (static_cast<int>(tree.parent.size()) != n ||
      static_cast<int>(tree.joint_rest_offset.size()) != n ||
      static_cast<int>(body.part_meshes.size()) != n ||
      static_cast<int>(body.contact_vertices.size()) != n) {
    throw SchemaError("body: per-part array sizes disagree with part_count");
  }

  int roots = 0;
  for (int i = 0; i < n; ++i) {
    if (tree.parent[i] == kNoParent) {
      ++roots;
      if (i != 0) throw SchemaError(part_tag(i) + ": root must be part 0");
    } else if (tree.parent[i] < 0 || tree.parent[i] >= i) {
      // parent[i] < i also rules out cycles.
      throw SchemaError(part_tag(i) +
                        ": field parent must name an earlier part");
    }
    if (!tree.joint_rest_offset[i].allFinite()) {
      throw SchemaError(part_tag(i) + ": field joint_offset is not finite");
    }
  }
  if (roots != 1) throw SchemaError("body: exactly one root part required");

  for (int i = 0; i < n; ++i) {
    const PartMesh& mesh = body.part_meshes[i];
    const int nv = static_cast<int>(mesh.vertices.size());
    for (const auto& v : mesh.vertices) {
      if (!v.allFinite()) {
        throw SchemaError(part_tag(i) + ": field vertices has non-finite entry");
      }
    }
    for (const auto& t : mesh.triangles) {
      for (int k : t) {
        if (k < 0 || k >= nv) {
          throw SchemaError(part_tag(i) +
                            ": field triangles references invalid vertex " +
                            std::to_string(k));
        }
      }
    }
    for (int k : body.contact_vertices[i]) {
      if (k < 0 || k >= nv) {
        throw SchemaError(part_tag(i) +
                          ": field contact_vertices references invalid vertex " +
                          std::to_string(k));
      }
    }
  }

  const MassConfig& mass = body.mass_config;
  if (!(mass.total_kg > 0.0)) {
    throw SchemaError("body: field total_kg must be positive");
  }
  if (mass.mode == MassMode::kFractionTable) {
    if (static_cast<int>(mass.fractions.size()) != n) {
      throw SchemaError("body: field mass_fractions must list one entry per part");
    }
    double sum = 0.0;
    for (double f : mass.fractions) {
      if (!(f >= 0.0) || !std::isfinite(f)) {
        throw SchemaError("body: field mass_fractions has invalid entry");
      }
      sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "body: field mass_fractions must sum to 1 (got " << sum << ")";
      throw SchemaError(msg.str());
    }
  } else {
    if (!(mass.density_kg_m3 > 0.0)) {
      throw SchemaError("body: field density_kg_m3 must be positive");
    }
    if (!mass.density_scale.empty() &&
        static_cast<int>(mass.density_scale.size()) != n) {
      throw SchemaError("body: field density_scale must list one entry per part");
    }
    for (double s : mass.density_scale) {
      if (!(s > 0.0)) {
        throw SchemaError("body: field density_scale entries must be positive");
      }
    }
  }
}

PartMesh close_part_mesh(const PartMesh& mesh) {
  const auto uses = edge_uses(mesh);
  for (const auto& [key, use] : uses) {
    if (use.count > 2) {
      throw GeometryError(part_tag(mesh.part_id) + ": non-manifold edge (" +
                          std::to_string(key.first) + ", " +
                          std::to_string(key.second) + ") has " +
                          std::to_string(use.count) + " incident triangles");
    }
  }

  // Boundary edges, reversed against their single triangle's traversal so
  // the caps keep the orientation coherent. next[v] lists boundary successors.
  std::multimap<int, int> next;
  std::map<std::pair<int, int>, bool> unused;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      if (uses.at(edge_key(a, b)).count == 1) {
        next.emplace(b, a);
        unused[{b, a}] = true;
      }
    }
  }
  if (next.empty()) return mesh;

  PartMesh closed = mesh;
  while (!unused.empty()) {
    // Deterministic loop start: smallest unused reversed edge.
    auto start = unused.begin()->first;
    std::vector<int> loop;
    int v = start.first;
    while (true) {
      loop.push_back(v);
      auto range = next.equal_range(v);
      auto it = range.first;
      while (it != range.second && !unused[{v, it->second}]) ++it;
      if (it == range.second) {
        throw GeometryError(part_tag(mesh.part_id) +
                            ": boundary does not close into loops");
      }
      unused[{v, it->second}] = false;
      v = it->second;
      if (v == start.first) break;
    }
    for (auto it = unused.begin(); it != unused.end();) {
      it = it->second ? std::next(it) : unused.erase(it);
    }

    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (int idx : loop) centroid += closed.vertices[idx];
    centroid /= static_cast<double>(loop.size());

    const int c = static_cast<int>(closed.vertices.size());
    closed.vertices.push_back(centroid);
    for (size_t k = 0; k < loop.size(); ++k) {
      const int a = loop[k];
      const int b = loop[(k + 1) % loop.size()];
      closed.triangles.push_back({a, b, c});
    }
  }
  return closed;
}

bool is_watertight(const PartMesh& mesh) {
  if (mesh.triangles.empty()) return false;
  for (const auto& [key, use] : edge_uses(mesh)) {
    if (use.count != 2) return false;
  }
  return true;
}

bool ValidationReport::all_ok() const {
  return std::all_of(parts.begin(), parts.end(), [](const PartValidation& p) {
    return p.watertight && p.winding_consistent && p.degenerate_triangles.empty();
  });
}

ValidationReport validate_body(const RestBody& body) {
  ValidationReport report;
  for (const PartMesh& mesh : body.part_meshes) {
    PartValidation v;
    v.part_id = mesh.part_id;
    v.signed_volume = signed_volume(mesh);

    bool manifold = !mesh.triangles.empty();
    bool coherent = manifold;
    for (const auto& [key, use] : edge_uses(mesh)) {
      if (use.count != 2) manifold = false;
      // Coherent orientation traverses a shared edge once in each direction.
      if (use.count == 2 && use.forward != 1) coherent = false;
    }
    v.watertight = manifold;
    v.winding_consistent = coherent && v.signed_volume > 0.0;

    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
      if (triangle_area(mesh, mesh.triangles[t]) < 1e-12) {
        v.degenerate_triangles.push_back(static_cast<int>(t));
      }
    }
    report.parts.push_back(std::move(v));
  }
  return report;
}

PartMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open OBJ file: " + path.string());

  PartMesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Eigen::Vector3d v;
      if (!(ls >> v.x() >> v.y() >> v.z())) {
        throw SchemaError(path.string() + ":" + std::to_string(lineno) +
                          ": malformed vertex");
      }
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        // "i", "i/j", "i/j/k" forms; only the vertex index is used.
        const int v = std::stoi(tok.substr(0, tok.find('/')));
        if (v <= 0 || v > static_cast<int>(mesh.vertices.size())) {
          throw SchemaError(path.string() + ":" + std::to_string(lineno) +
                            ": face references invalid vertex");
        }
        idx.push_back(v - 1);
      }
      if (idx.size() < 3) {
        throw SchemaError(path.string() + ":" + std::to_string(lineno) +
                          ": face needs at least 3 vertices");
      }
      for (size_t k = 1; k + 1 < idx.size(); ++k) {
        mesh.triangles.push_back({idx[0], idx[k], idx[k + 1]});
      }
    }
  }
  return mesh;
}

RestBody load_body(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open body file: " + path.string());

  detail::json j;
  try {
    in >> j;
  } catch (const detail::json::exception& e) {
    throw SchemaError("body file " + path.string() + ": " + e.what());
  }

  const auto& parts = detail::require(j, "parts", "body");
  if (!parts.is_array() || parts.empty()) {
    throw SchemaError("body: field parts must be a non-empty array");
  }
  const int n = static_cast<int>(parts.size());

  RestBody body;
  body.tree.part_count = n;
  body.tree.parent.assign(n, kNoParent);
  body.tree.joint_rest_offset.assign(n, Eigen::Vector3d::Zero());
  body.part_meshes.resize(n);
  body.contact_vertices.resize(n);

  std::vector<bool> seen(n, false);
  for (const auto& pj : parts) {
    const int id = detail::require(pj, "id", "part").get<int>();
    if (id < 0 || id >= n || seen[id]) {
      throw SchemaError("body: part ids must be a permutation of 0.." +
                        std::to_string(n - 1));
    }
    seen[id] = true;
    const std::string tag = part_tag(id);

    const auto& parent = detail::require(pj, "parent", tag);
    body.tree.parent[id] = parent.is_null() ? kNoParent : parent.get<int>();
    body.tree.joint_rest_offset[id] =
        detail::as_vec3(detail::require(pj, "joint_offset", tag), tag + ".joint_offset");

    PartMesh& mesh = body.part_meshes[id];
    mesh.part_id = id;
    if (pj.contains("obj")) {
      const auto obj_path = path.parent_path() / pj["obj"].get<std::string>();
      mesh = load_obj(obj_path);
      mesh.part_id = id;
    } else {
      const auto& vs = detail::require(pj, "vertices", tag);
      for (size_t k = 0; k < vs.size(); ++k) {
        mesh.vertices.push_back(
            detail::as_vec3(vs[k], tag + ".vertices[" + std::to_string(k) + "]"));
      }
      const auto& ts = detail::require(pj, "triangles", tag);
      for (const auto& tj : ts) {
        if (!tj.is_array() || tj.size() != 3) {
          throw SchemaError(tag + ".triangles: expected index triples");
        }
        mesh.triangles.push_back(
            {tj[0].get<int>(), tj[1].get<int>(), tj[2].get<int>()});
      }
    }
    if (pj.contains("contact_vertices")) {
      for (const auto& cj : pj["contact_vertices"]) {
        body.contact_vertices[id].push_back(cj.get<int>());
      }
    }
  }

  MassConfig& mass = body.mass_config;
  if (j.contains("mass")) {
    const auto& mj = j["mass"];
    if (mj.contains("total_kg")) mass.total_kg = mj["total_kg"].get<double>();
    if (mj.contains("mode")) {
      const std::string mode = mj["mode"].get<std::string>();
      if (mode == "fraction-table") {
        mass.mode = MassMode::kFractionTable;
      } else if (mode == "uniform-density") {
        mass.mode = MassMode::kUniformDensity;
      } else {
        throw SchemaError("body: field mass.mode must be \"fraction-table\" or "
                          "\"uniform-density\"");
      }
    }
    if (mj.contains("fractions")) {
      mass.fractions = mj["fractions"].get<std::vector<double>>();
    }
    if (mj.contains("density_kg_m3")) {
      mass.density_kg_m3 = mj["density_kg_m3"].get<double>();
    }
    if (mj.contains("density_scale")) {
      mass.density_scale = mj["density_scale"].get<std::vector<double>>();
    }
  }
  if (mass.mode == MassMode::kFractionTable && mass.fractions.empty()) {
    // A single free body needs no table.
    if (n == 1) mass.fractions = {1.0};
  }

  check_body_invariants(body);
  return body;
}

void save_body(const RestBody& body, const std::filesystem::path& path) {
  detail::json j;
  j["parts"] = detail::json::array();
  for (int i = 0; i < body.tree.part_count; ++i) {
    detail::json pj;
    pj["id"] = i;
    if (body.tree.parent[i] == kNoParent) {
      pj["parent"] = nullptr;
    } else {
      pj["parent"] = body.tree.parent[i];
    }
    pj["joint_offset"] = detail::vec3_to_json(body.tree.joint_rest_offset[i]);
    pj["vertices"] = detail::json::array();
    for (const auto& v : body.part_meshes[i].vertices) {
      pj["vertices"].push_back(detail::vec3_to_json(v));
    }
    pj["triangles"] = detail::json::array();
    for (const auto& t : body.part_meshes[i].triangles) {
      pj["triangles"].push_back(detail::json::array({t[0], t[1], t[2]}));
    }
    pj["contact_vertices"] = body.contact_vertices[i];
    j["parts"].push_back(std::move(pj));
  }

  detail::json mj;
  mj["total_kg"] = body.mass_config.total_kg;
  mj["mode"] = body.mass_config.mode == MassMode::kFractionTable
                   ? "fraction-table"
                   : "uniform-density";
  if (!body.mass_config.fractions.empty()) {
    mj["fractions"] = body.mass_config.fractions;
  }
  mj["density_kg_m3"] = body.mass_config.density_kg_m3;
  if (!body.mass_config.density_scale.empty()) {
    mj["density_scale"] = body.mass_config.density_scale;
  }
  j["mass"] = std::move(mj);

  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write body file: " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace physdyn
