// Structured 2:1 hexahedral meshes (base grid plus one refinement level) and
// their mortar decomposition.
//
// Positions are measured in "fine units": half a base cell. A base-level
// element spans 2 fine units per axis, a child spans 1. Every element carries
// a frame mapping its reference axes onto the global axes, so neighbouring
// elements may see a shared face flipped or rotated.
#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <vector>

namespace mdg {

struct Frame {
  // Reference axis a runs along global axis perm[a] in direction sgn[a].
  std::array<int, 3> perm{0, 1, 2};
  std::array<int, 3> sgn{1, 1, 1};

  int local_axis(int global_axis) const;
  bool operator==(const Frame&) const = default;
};

// The 24 orientation-preserving signed permutations, identity first.
const std::vector<Frame>& proper_frames();

struct Element {
  int level = 0;
  std::array<int, 3> lo{0, 0, 0};
  int size = 2;
  std::array<int, 3> base_cell{0, 0, 0};
  int child = -1;
  Frame frame;
};

enum class FaceKind { Boundary, Conforming, Hanging, Full };

struct FaceRef {
  int elem = -1;
  int face = -1;
  bool operator==(const FaceRef&) const = default;
};

// A neighbour seen from some element. `shift` (fine units, a multiple of the
// period on each axis) translates the neighbour's stored position onto the
// image that actually touches the element.
struct Neighbor {
  FaceRef ref;
  std::array<int, 3> shift{0, 0, 0};
};

struct FaceLink {
  FaceKind kind = FaceKind::Boundary;
  // Conforming: the face across. Hanging: the full face of the coarse
  // neighbour. Full: the four hanging faces, ascending element index.
  std::vector<Neighbor> across;
};

// Local edge e runs along reference axis e / 4; bits 0 and 1 of e % 4 select
// the r = +1 side of the first and second remaining axes.
inline int edge_axis(int e) { return e / 4; }

// A fine element edge lying on an edge of a coarse element. The owner is the
// coarse element of smallest index among those sharing the line.
struct HangingEdge {
  int elem = -1;
  int edge = -1;
  int owner = -1;
  int owner_edge = -1;
  std::array<int, 3> shift{0, 0, 0};
};

struct MeshSpec {
  std::array<int, 3> base{1, 1, 1};
  std::vector<std::array<int, 3>> refined;
  std::array<bool, 3> periodic{true, true, true};
  // Negative: every element uses the identity frame. Otherwise each element
  // draws one of the 24 proper frames from this seed.
  std::int64_t frame_seed = -1;

  // The same refinement pattern on a grid of twice the resolution.
  MeshSpec bisected() const;
};

// Base cells (i, j, k) with i + j + k even: every other corner of the grid.
std::vector<std::array<int, 3>> alternating_cells(const std::array<int, 3>& base);

class Mesh {
 public:
  std::array<int, 3> base{1, 1, 1};
  std::array<bool, 3> periodic{true, true, true};
  std::vector<Element> elements;
  std::vector<std::array<FaceLink, 6>> faces;
  std::vector<HangingEdge> hanging_edges;

  int num_elements() const { return static_cast<int>(elements.size()); }
  int period(int g) const { return 2 * base[g]; }
  // Element owning the fine cell c, or -1 outside a non-periodic domain.
  int owner(std::array<int, 3> c) const;

  // Rebuilds connectivity for an explicit element list (used for relabelled
  // meshes and by build_adapted_box).
  static Mesh from_elements(const std::array<int, 3>& base, const std::array<bool, 3>& periodic,
                            std::vector<Element> elements);
  Mesh permuted(const std::vector<int>& new_of_old) const;

  nlohmann::json summary() const;

 private:
  std::vector<int> owner_;
};

Mesh build_adapted_box(const MeshSpec& spec);

// r_to = c1 r_from + c0 along one global axis.
struct AxisMap {
  int to_axis = 0;
  double c1 = 1.0;
  double c0 = 0.0;
};

// Map from the reference coordinate of `from` along its local axis a to the
// reference coordinate of `to` along the same global axis, with `to`
// translated by shift (fine units, from a Neighbor or HangingEdge record).
AxisMap axis_map(const Element& from, int a, const Element& to,
                 const std::array<int, 3>& shift);

// Face tangential axis t of a mortar side: face coordinate =
// c1 * (mortar coordinate along mortar tangential axis mortar_axis) + c0.
struct FaceAxisMap {
  int mortar_axis = 0;
  double c1 = 1.0;
  double c0 = 0.0;
};

enum class MortarKind { FullSide, SplitSide };
enum class MortarType { Conforming, Nonconforming, Boundary };

struct MortarSide {
  FaceRef ref;
  std::array<FaceAxisMap, 2> map;
  // 8-way dihedral code: bit 2 swaps axes, bits 1 and 0 flip the mortar axes
  // feeding face axes 0 and 1.
  int orientation = 0;
  // Quarter of the larger surface covered by the smaller one, -1 if equal.
  int quadrant = -1;
  // Periodic image of this side's element relative to the minus element.
  std::array<int, 3> shift{0, 0, 0};
};

struct Mortar {
  MortarType type = MortarType::Conforming;
  MortarSide minus;
  std::vector<MortarSide> plus;
};

struct MortarSet {
  MortarKind kind = MortarKind::FullSide;
  std::vector<Mortar> mortars;
  // For every element face: (mortar index, side) with side -1 for the minus
  // side and i for plus[i].
  std::vector<std::array<std::vector<std::pair<int, int>>, 6>> element_faces;

  int num_mortars() const { return static_cast<int>(mortars.size()); }
  nlohmann::json summary() const;
};

MortarSet build_mortars(const Mesh& mesh, MortarKind kind);

// Node permutation of a conforming connection: entry p + n q is the face node
// holding the value of mortar node (p, q).
std::vector<int> orientation_permutation(int code, int n);

}  // namespace mdg
