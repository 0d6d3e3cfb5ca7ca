#include "mortar_dg/mesh_topology.hpp"

#include "mortar_dg/random.hpp"
#include "mortar_dg/tensor_basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace mdg {

int Frame::local_axis(int global_axis) const {
  for (int a = 0; a < 3; ++a)
    if (perm[a] == global_axis) return a;
  throw std::logic_error("Frame: axis not found");
}

const std::vector<Frame>& proper_frames() {
  static const std::vector<Frame> frames = [] {
    std::vector<Frame> out;
    std::array<int, 3> p{0, 1, 2};
    do {
      int inversions = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) inversions += p[i] > p[j];
      const int parity = inversions % 2 ? -1 : 1;
      for (int s = 0; s < 8; ++s) {
        Frame f;
        f.perm = p;
        f.sgn = {s & 1 ? -1 : 1, s & 2 ? -1 : 1, s & 4 ? -1 : 1};
        if (parity * f.sgn[0] * f.sgn[1] * f.sgn[2] == 1) out.push_back(f);
      }
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  }();
  return frames;
}

MeshSpec MeshSpec::bisected() const {
  MeshSpec s = *this;
  for (int g = 0; g < 3; ++g) s.base[g] = 2 * base[g];
  s.refined.clear();
  for (const auto& c : refined)
    for (int d = 0; d < 8; ++d)
      s.refined.push_back({2 * c[0] + (d & 1), 2 * c[1] + ((d >> 1) & 1), 2 * c[2] + (d >> 2)});
  std::sort(s.refined.begin(), s.refined.end());
  return s;
}

std::vector<std::array<int, 3>> alternating_cells(const std::array<int, 3>& base) {
  std::vector<std::array<int, 3>> out;
  for (int k = 0; k < base[2]; ++k)
    for (int j = 0; j < base[1]; ++j)
      for (int i = 0; i < base[0]; ++i)
        if ((i + j + k) % 2 == 0) out.push_back({i, j, k});
  return out;
}

namespace {

int wrap(int c, int P) { return ((c % P) + P) % P; }

// Local face of `el` whose outward normal points along global axis g in the
// positive (high = true) or negative direction.
int face_toward(const Element& el, int g, bool high) {
  const int a = el.frame.local_axis(g);
  const bool local_high = high == (el.frame.sgn[a] > 0);
  return 2 * a + (local_high ? 1 : 0);
}

// Global axis and direction of a local face.
void face_global(const Element& el, int f, int& g, bool& high) {
  const int a = face_axis(f);
  g = el.frame.perm[a];
  high = (face_side(f) == 1) == (el.frame.sgn[a] > 0);
}

}  // namespace

int Mesh::owner(std::array<int, 3> c) const {
  for (int g = 0; g < 3; ++g) {
    const int P = period(g);
    if (c[g] < 0 || c[g] >= P) {
      if (!periodic[g]) return -1;
      c[g] = wrap(c[g], P);
    }
  }
  return owner_[c[0] + period(0) * (c[1] + period(1) * c[2])];
}

Mesh Mesh::from_elements(const std::array<int, 3>& base, const std::array<bool, 3>& periodic,
                         std::vector<Element> elements) {
  Mesh m;
  m.base = base;
  m.periodic = periodic;
  m.elements = std::move(elements);
  for (int g = 0; g < 3; ++g)
    if (base[g] < 1) throw std::invalid_argument("mesh: base dimensions must be at least 1");
  const int P0 = m.period(0), P1 = m.period(1), P2 = m.period(2);
  m.owner_.assign(static_cast<std::size_t>(P0) * P1 * P2, -1);
  for (int e = 0; e < m.num_elements(); ++e) {
    const Element& el = m.elements[e];
    if (el.level < 0 || el.level > 1 || el.size != (el.level == 0 ? 2 : 1))
      throw std::invalid_argument("mesh: only base and once-refined elements are supported");
    for (int z = 0; z < el.size; ++z)
      for (int y = 0; y < el.size; ++y)
        for (int x = 0; x < el.size; ++x) {
          const std::array<int, 3> c{el.lo[0] + x, el.lo[1] + y, el.lo[2] + z};
          for (int g = 0; g < 3; ++g)
            if (c[g] < 0 || c[g] >= m.period(g))
              throw std::invalid_argument("mesh: element outside the box");
          int& slot = m.owner_[c[0] + P0 * (c[1] + P1 * c[2])];
          if (slot >= 0) throw std::invalid_argument("mesh: overlapping elements");
          slot = e;
        }
  }
  for (int o : m.owner_)
    if (o < 0) throw std::invalid_argument("mesh: elements do not cover the box");

  m.faces.assign(m.elements.size(), {});
  for (int e = 0; e < m.num_elements(); ++e) {
    const Element& el = m.elements[e];
    for (int f = 0; f < 6; ++f) {
      int g;
      bool high;
      face_global(el, f, g, high);
      const int raw = high ? el.lo[g] + el.size : el.lo[g] - 1;
      FaceLink& link = m.faces[e][f];
      if (!periodic[g] && (raw < 0 || raw >= m.period(g))) {
        link.kind = FaceKind::Boundary;
        continue;
      }
      std::array<int, 3> shift{0, 0, 0};
      shift[g] = raw - wrap(raw, m.period(g));
      const int h1 = (g + 1) % 3, h2 = (g + 2) % 3;
      std::set<int> owners;
      for (int b = 0; b < el.size; ++b)
        for (int a = 0; a < el.size; ++a) {
          std::array<int, 3> c;
          c[g] = raw;
          c[h1] = el.lo[h1] + a;
          c[h2] = el.lo[h2] + b;
          owners.insert(m.owner(c));
        }
      for (int o : owners) {
        const Element& other = m.elements[o];
        if (std::abs(other.level - el.level) > 1)
          throw std::runtime_error("mesh: face neighbours differ by more than one level");
        link.across.push_back({{o, face_toward(other, g, !high)}, shift});
      }
      if (owners.size() == 1) {
        const Element& other = m.elements[*owners.begin()];
        link.kind = other.level == el.level ? FaceKind::Conforming : FaceKind::Hanging;
        if (other.level > el.level) throw std::runtime_error("mesh: inconsistent face ownership");
      } else if (owners.size() == 4) {
        link.kind = FaceKind::Full;
      } else {
        throw std::runtime_error("mesh: unsupported face subdivision");
      }
    }
  }

  // Hanging edges: fine-element edges lying on an edge of a coarse element.
  for (int e = 0; e < m.num_elements(); ++e) {
    const Element& el = m.elements[e];
    if (el.level == 0) continue;
    for (int edge = 0; edge < 12; ++edge) {
      const int a = edge_axis(edge);
      const auto t = face_tangents(2 * a);
      const int g = el.frame.perm[a];
      std::array<int, 2> h{}, p{};
      for (int j = 0; j < 2; ++j) {
        const int lt = t[j];
        h[j] = el.frame.perm[lt];
        const bool local_high = (edge >> j) & 1;
        const bool high = local_high == (el.frame.sgn[lt] > 0);
        p[j] = el.lo[h[j]] + (high ? 1 : 0);
      }
      if (p[0] % 2 != 0 || p[1] % 2 != 0) continue;
      int best = -1;
      std::array<int, 3> best_shift{0, 0, 0};
      for (int s = 0; s < 4; ++s) {
        std::array<int, 3> c, shift{0, 0, 0};
        c[g] = el.lo[g];
        bool inside = true;
        for (int j = 0; j < 2; ++j) {
          const int raw = p[j] - 1 + ((s >> j) & 1);
          const int P = m.period(h[j]);
          if (!periodic[h[j]] && (raw < 0 || raw >= P)) inside = false;
          c[h[j]] = raw;
          shift[h[j]] = raw - wrap(raw, P);
        }
        if (!inside) continue;
        const int o = m.owner(c);
        if (m.elements[o].level != 0) continue;
        if (best < 0 || o < best) {
          best = o;
          best_shift = shift;
        }
      }
      if (best < 0) continue;
      const Element& C = m.elements[best];
      const int b = C.frame.local_axis(g);
      const auto tc = face_tangents(2 * b);
      int owner_edge = 4 * b;
      for (int j = 0; j < 2; ++j) {
        const int gh = C.frame.perm[tc[j]];
        const int pj = gh == h[0] ? p[0] : p[1];
        const int lo = C.lo[gh] + best_shift[gh];
        bool high;
        if (pj == lo) high = false;
        else if (pj == lo + C.size) high = true;
        else throw std::runtime_error("mesh: hanging edge does not lie on the owner's edge");
        const bool local_high = high == (C.frame.sgn[tc[j]] > 0);
        if (local_high) owner_edge += 1 << j;
      }
      m.hanging_edges.push_back({e, edge, best, owner_edge, best_shift});
    }
  }
  return m;
}

Mesh Mesh::permuted(const std::vector<int>& new_of_old) const {
  if (new_of_old.size() != elements.size())
    throw std::invalid_argument("Mesh::permuted: permutation size mismatch");
  std::vector<Element> els(elements.size());
  std::vector<bool> seen(elements.size(), false);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const int j = new_of_old[i];
    if (j < 0 || j >= num_elements() || seen[j])
      throw std::invalid_argument("Mesh::permuted: not a permutation");
    seen[j] = true;
    els[j] = elements[i];
  }
  return from_elements(base, periodic, std::move(els));
}

Mesh build_adapted_box(const MeshSpec& spec) {
  for (int g = 0; g < 3; ++g)
    if (spec.base[g] < 1) throw std::invalid_argument("build_adapted_box: base dimensions must be >= 1");
  std::set<std::array<int, 3>> refine;
  for (const auto& c : spec.refined) {
    for (int g = 0; g < 3; ++g)
      if (c[g] < 0 || c[g] >= spec.base[g])
        throw std::invalid_argument("build_adapted_box: refined cell outside the base grid");
    refine.insert(c);
  }
  std::vector<Element> els;
  for (int k = 0; k < spec.base[2]; ++k)
    for (int j = 0; j < spec.base[1]; ++j)
      for (int i = 0; i < spec.base[0]; ++i) {
        const std::array<int, 3> cell{i, j, k};
        if (!refine.count(cell)) {
          Element el;
          el.level = 0;
          el.size = 2;
          el.lo = {2 * i, 2 * j, 2 * k};
          el.base_cell = cell;
          els.push_back(el);
          continue;
        }
        for (int c = 0; c < 8; ++c) {
          Element el;
          el.level = 1;
          el.size = 1;
          el.lo = {2 * i + (c & 1), 2 * j + ((c >> 1) & 1), 2 * k + (c >> 2)};
          el.base_cell = cell;
          el.child = c;
          els.push_back(el);
        }
      }
  if (spec.frame_seed >= 0) {
    const auto& frames = proper_frames();
    for (std::size_t e = 0; e < els.size(); ++e)
      els[e].frame = frames[counter_u64(static_cast<std::uint64_t>(spec.frame_seed), 0x6672616d65ULL, e) %
                            frames.size()];
  }
  // Single-level refinement is always 2:1 balanced; from_elements still
  // verifies the level difference of every face neighbour.
  return Mesh::from_elements(spec.base, spec.periodic, std::move(els));
}

AxisMap axis_map(const Element& from, int a, const Element& to, const std::array<int, 3>& shift) {
  const int g = from.frame.perm[a];
  AxisMap m;
  m.to_axis = to.frame.local_axis(g);
  const int sf = from.frame.sgn[a];
  const int st = to.frame.sgn[m.to_axis];
  const int lo_t = to.lo[g] + shift[g];
  m.c1 = static_cast<double>(st * sf * from.size) / to.size;
  m.c0 = st * (static_cast<double>(2 * (from.lo[g] - lo_t) + from.size) / to.size - 1.0);
  return m;
}

namespace {

MortarSide minus_side(FaceRef ref) {
  MortarSide s;
  s.ref = ref;
  s.map[0] = {0, 1.0, 0.0};
  s.map[1] = {1, 1.0, 0.0};
  return s;
}

MortarSide plus_side(const Mesh& mesh, FaceRef minus, const Neighbor& nb) {
  const Element& em = mesh.elements[minus.elem];
  const Element& ep = mesh.elements[nb.ref.elem];
  MortarSide s;
  s.ref = nb.ref;
  s.shift = nb.shift;
  const auto tm = face_tangents(minus.face);
  const auto tp = face_tangents(nb.ref.face);
  for (int j = 0; j < 2; ++j) {
    const AxisMap am = axis_map(em, tm[j], ep, nb.shift);
    const int t = am.to_axis == tp[0] ? 0 : (am.to_axis == tp[1] ? 1 : -1);
    if (t < 0) throw std::logic_error("build_mortars: tangential axes do not match");
    s.map[t] = {j, am.c1, am.c0};
  }
  s.orientation = (s.map[0].mortar_axis == 1 ? 4 : 0) + (s.map[0].c1 < 0 ? 2 : 0) +
                  (s.map[1].c1 < 0 ? 1 : 0);
  const double ratio = std::abs(s.map[0].c1);
  if (ratio > 1.5) {
    // Small face on a large mortar: its centre sits at mortar coordinate -c0/c1.
    int q = 0;
    for (int t = 0; t < 2; ++t)
      if (-s.map[t].c0 / s.map[t].c1 > 0) q += 1 << s.map[t].mortar_axis;
    s.quadrant = q;
  } else if (ratio < 0.75) {
    // Small mortar on a large face: mortar centre sits at face coordinate c0.
    s.quadrant = (s.map[0].c0 > 0 ? 1 : 0) + (s.map[1].c0 > 0 ? 2 : 0);
  }
  return s;
}

std::array<int, 3> negated(const std::array<int, 3>& v) { return {-v[0], -v[1], -v[2]}; }

}  // namespace

MortarSet build_mortars(const Mesh& mesh, MortarKind kind) {
  MortarSet ms;
  ms.kind = kind;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int f = 0; f < 6; ++f) {
      const FaceLink& link = mesh.faces[e][f];
      const FaceRef self{e, f};
      switch (link.kind) {
        case FaceKind::Boundary: {
          Mortar m;
          m.type = MortarType::Boundary;
          m.minus = minus_side(self);
          ms.mortars.push_back(m);
          break;
        }
        case FaceKind::Conforming: {
          const FaceRef other = link.across[0].ref;
          if (other.elem < e || (other.elem == e && other.face < f)) break;
          Mortar m;
          m.type = MortarType::Conforming;
          m.minus = minus_side(self);
          m.plus.push_back(plus_side(mesh, self, link.across[0]));
          ms.mortars.push_back(m);
          break;
        }
        case FaceKind::Full: {
          if (kind == MortarKind::FullSide) {
            Mortar m;
            m.type = MortarType::Nonconforming;
            m.minus = minus_side(self);
            for (const auto& nb : link.across) m.plus.push_back(plus_side(mesh, self, nb));
            ms.mortars.push_back(m);
          } else {
            for (const auto& nb : link.across) {
              Mortar m;
              m.type = MortarType::Nonconforming;
              m.minus = minus_side(nb.ref);
              m.plus.push_back(plus_side(mesh, nb.ref, {self, negated(nb.shift)}));
              ms.mortars.push_back(m);
            }
          }
          break;
        }
        case FaceKind::Hanging:
          break;
      }
    }
  ms.element_faces.assign(mesh.elements.size(), {});
  for (int mi = 0; mi < ms.num_mortars(); ++mi) {
    const Mortar& m = ms.mortars[mi];
    ms.element_faces[m.minus.ref.elem][m.minus.ref.face].push_back({mi, -1});
    for (int i = 0; i < static_cast<int>(m.plus.size()); ++i)
      ms.element_faces[m.plus[i].ref.elem][m.plus[i].ref.face].push_back({mi, i});
  }
  return ms;
}

std::vector<int> orientation_permutation(int code, int n) {
  if (code < 0 || code > 7) throw std::invalid_argument("orientation_permutation: bad code");
  const bool swap = code & 4, flip0 = code & 2, flip1 = code & 1;
  std::vector<int> perm(n * n);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) {
      const int m[2] = {p, q};
      int a = m[swap ? 1 : 0], b = m[swap ? 0 : 1];
      if (flip0) a = n - 1 - a;
      if (flip1) b = n - 1 - b;
      perm[p + n * q] = a + n * b;
    }
  return perm;
}

namespace {

const char* kind_name(FaceKind k) {
  switch (k) {
    case FaceKind::Boundary: return "boundary";
    case FaceKind::Conforming: return "conforming";
    case FaceKind::Hanging: return "hanging";
    case FaceKind::Full: return "full";
  }
  return "?";
}

const char* type_name(MortarType t) {
  switch (t) {
    case MortarType::Conforming: return "conforming";
    case MortarType::Nonconforming: return "nonconforming";
    case MortarType::Boundary: return "boundary";
  }
  return "?";
}

}  // namespace

nlohmann::json Mesh::summary() const {
  nlohmann::json j;
  j["base"] = base;
  j["periodic"] = periodic;
  j["num_elements"] = num_elements();
  int fine = 0;
  std::map<std::string, int> counts;
  for (int e = 0; e < num_elements(); ++e) {
    fine += elements[e].level;
    for (const auto& link : faces[e]) counts[kind_name(link.kind)]++;
  }
  j["num_level1"] = fine;
  j["face_counts"] = counts;
  j["num_hanging_edges"] = hanging_edges.size();
  auto& els = j["elements"] = nlohmann::json::array();
  for (const auto& el : elements)
    els.push_back({{"level", el.level}, {"lo", el.lo}, {"perm", el.frame.perm}, {"sgn", el.frame.sgn}});
  return j;
}

nlohmann::json MortarSet::summary() const {
  nlohmann::json j;
  j["kind"] = kind == MortarKind::FullSide ? "full" : "split";
  j["num_mortars"] = num_mortars();
  std::map<std::string, int> counts;
  auto& list = j["mortars"] = nlohmann::json::array();
  for (const auto& m : mortars) {
    counts[type_name(m.type)]++;
    nlohmann::json plus = nlohmann::json::array();
    for (const auto& s : m.plus)
      plus.push_back({s.ref.elem, s.ref.face, s.quadrant, s.orientation});
    list.push_back({{"type", type_name(m.type)},
                    {"minus", {m.minus.ref.elem, m.minus.ref.face}},
                    {"plus", plus}});
  }
  j["type_counts"] = counts;
  return j;
}

}  // namespace mdg
