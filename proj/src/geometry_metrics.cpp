#include "mortar_dg/geometry_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdg {

GeometryTreatment parse_treatment(const std::string& name) {
  if (name == "interpolated") return GeometryTreatment::Interpolated;
  if (name == "watertight") return GeometryTreatment::Watertight;
  if (name == "continuous-metric" || name == "continuous_metric")
    return GeometryTreatment::ContinuousMetric;
  throw std::invalid_argument("unknown geometry treatment: " + name);
}

std::string treatment_name(GeometryTreatment t) {
  switch (t) {
    case GeometryTreatment::Interpolated: return "interpolated";
    case GeometryTreatment::Watertight: return "watertight";
    case GeometryTreatment::ContinuousMetric: return "continuous-metric";
  }
  return "?";
}

TransformSpec TransformSpec::affine_box(const Vec3& lo, const Vec3& hi) {
  TransformSpec t;
  t.kind = Kind::AffineBox;
  t.lo = lo;
  t.hi = hi;
  return t;
}

TransformSpec TransformSpec::skew(double amplitude) {
  TransformSpec t;
  t.kind = Kind::Skew;
  t.lo = {-1.0, -1.0, -1.0};
  t.hi = {1.0, 1.0, 1.0};
  t.amplitude = amplitude;
  return t;
}

std::array<Vec3, 3> skew_rotation(double beta) {
  const double c = std::cos(beta), s = std::sin(beta);
  return {Vec3{c * c, -c * s, s}, Vec3{s, c, 0.0}, Vec3{-c * s, s * s, c}};
}

Vec3 TransformSpec::map(const Vec3& s) const {
  switch (kind) {
    case Kind::AffineBox: {
      Vec3 d;
      for (int g = 0; g < 3; ++g) d[g] = (hi[g] - lo[g]) * s[g];
      Vec3 x;
      for (int i = 0; i < 3; ++i)
        x[i] = lo[i] + shear[i][0] * d[0] + shear[i][1] * d[1] + shear[i][2] * d[2];
      return x;
    }
    case Kind::Skew: {
      Vec3 r;
      double beta = amplitude;
      for (int g = 0; g < 3; ++g) {
        r[g] = lo[g] + (hi[g] - lo[g]) * s[g];
        const double rh = 2.0 * s[g] - 1.0;
        beta *= 1.0 - rh * rh;
      }
      const auto Q = skew_rotation(beta);
      Vec3 x;
      for (int i = 0; i < 3; ++i) x[i] = Q[i][0] * r[0] + Q[i][1] * r[1] + Q[i][2] * r[2];
      return x;
    }
    case Kind::User:
      if (!user) throw std::invalid_argument("TransformSpec: user transform not set");
      return user(s);
  }
  return {};
}

Vec3 TransformSpec::period(int g) const {
  Vec3 e{0.0, 0.0, 0.0};
  e[g] = 1.0;
  const Vec3 a = map({0.0, 0.0, 0.0}), b = map(e);
  return {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
}

double Geometry::volume() const {
  double v = 0.0;
  for (double w : wJ) v += w;
  return v;
}

PointEvaluator::PointEvaluator(const LglRule& rule, const std::vector<Vec3>& points)
    : n_(rule.size()) {
  rows_.resize(points.size());
  for (std::size_t p = 0; p < points.size(); ++p)
    for (int a = 0; a < 3; ++a) {
      const Mat row = interp_matrix(rule.nodes, {points[p][a]});
      rows_[p][a].assign(row.data(), row.data() + n_);
    }
}

void PointEvaluator::eval(const double* field, double* out) const {
  const int n = n_;
  for (std::size_t p = 0; p < rows_.size(); ++p) {
    const auto& r = rows_[p];
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      if (r[2][k] == 0.0) continue;
      double sj = 0.0;
      for (int j = 0; j < n; ++j) {
        if (r[1][j] == 0.0) continue;
        const double* line = field + n * (j + n * k);
        double si = 0.0;
        for (int i = 0; i < n; ++i) si += r[0][i] * line[i];
        sj += r[1][j] * si;
      }
      s += r[2][k] * sj;
    }
    out[p] = s;
  }
}

namespace {

std::array<int, 3> decode(int node, int n) { return {node % n, (node / n) % n, node / (n * n)}; }

// Reference coordinates, inside `to` (translated by shift), of the nodes of
// `from` listed by volume index.
std::vector<Vec3> mapped_nodes(const Element& from, const Element& to,
                               const std::array<int, 3>& shift, const LglRule& rule,
                               const std::vector<int>& nodes) {
  std::array<AxisMap, 3> maps;
  for (int a = 0; a < 3; ++a) maps[a] = axis_map(from, a, to, shift);
  std::vector<Vec3> pts(nodes.size());
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    const auto idx = decode(nodes[p], rule.size());
    for (int a = 0; a < 3; ++a)
      pts[p][maps[a].to_axis] = maps[a].c1 * rule.nodes[idx[a]] + maps[a].c0;
  }
  return pts;
}

Vec3 physical_shift(const Mesh& mesh, const TransformSpec& spec, const std::array<int, 3>& shift) {
  Vec3 c{0.0, 0.0, 0.0};
  for (int g = 0; g < 3; ++g) {
    if (shift[g] == 0) continue;
    const double periods = static_cast<double>(shift[g]) / mesh.period(g);
    const Vec3 p = spec.period(g);
    for (int i = 0; i < 3; ++i) c[i] += periods * p[i];
  }
  return c;
}

std::vector<int> edge_nodes(int edge, int n) {
  const int a = edge_axis(edge);
  const auto t = face_tangents(2 * a);
  std::vector<int> out(n);
  for (int m = 0; m < n; ++m) {
    int idx[3];
    idx[a] = m;
    idx[t[0]] = (edge & 1) ? n - 1 : 0;
    idx[t[1]] = (edge & 2) ? n - 1 : 0;
    out[m] = idx[0] + n * idx[1] + n * n * idx[2];
  }
  return out;
}

// A piece of a fine element (hanging face or hanging edge) that takes its
// data from a coarse element.
struct Borrow {
  int elem;
  int source;
  std::array<int, 3> shift;
  std::vector<int> nodes;
  std::vector<int> axes;  // zeta directions k of `elem` to overwrite
};

std::vector<Borrow> borrows(const Mesh& mesh, int n, bool faces, bool edges) {
  std::vector<Borrow> out;
  if (faces) {
    for (int e = 0; e < mesh.num_elements(); ++e)
      for (int f = 0; f < 6; ++f) {
        const FaceLink& link = mesh.faces[e][f];
        if (link.kind != FaceKind::Hanging) continue;
        Borrow b;
        b.elem = e;
        b.source = link.across[0].ref.elem;
        b.shift = link.across[0].shift;
        const int a = face_axis(f);
        const int c = face_side(f) ? n - 1 : 0;
        const auto t = face_tangents(f);
        for (int q = 0; q < n; ++q)
          for (int p = 0; p < n; ++p) {
            int idx[3];
            idx[a] = c;
            idx[t[0]] = p;
            idx[t[1]] = q;
            b.nodes.push_back(idx[0] + n * idx[1] + n * n * idx[2]);
          }
        b.axes = {t[0], t[1]};
        out.push_back(std::move(b));
      }
  }
  if (edges)
    for (const auto& he : mesh.hanging_edges)
      out.push_back({he.elem, he.owner, he.shift, edge_nodes(he.edge, n), {edge_axis(he.edge)}});
  return out;
}

}  // namespace

std::vector<double> sample_transform(const Mesh& mesh, const TensorOps3D& ops,
                                     const TransformSpec& spec) {
  const int n = ops.n(), nv = ops.volume_size(), N = ops.order();
  const auto& tau = ops.basis().tau;
  std::vector<double> x(static_cast<std::size_t>(mesh.num_elements()) * 3 * nv);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements[e];
    for (int node = 0; node < nv; ++node) {
      const auto idx = decode(node, n);
      Vec3 s;
      for (int a = 0; a < 3; ++a) {
        const int g = el.frame.perm[a];
        const double t = el.frame.sgn[a] > 0 ? tau[idx[a]] : tau[N - idx[a]];
        s[g] = (el.lo[g] + el.size * t) / mesh.period(g);
      }
      const Vec3 X = spec.map(s);
      for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(X[i])) throw std::runtime_error("sample_transform: non-finite coordinate");
        x[(static_cast<std::size_t>(e) * 3 + i) * nv + node] = X[i];
      }
    }
  }
  return x;
}

void make_watertight(const Mesh& mesh, const TensorOps3D& ops, const TransformSpec& spec,
                     std::vector<double>& x) {
  const int nv = ops.volume_size();
  for (const Borrow& b : borrows(mesh, ops.n(), true, true)) {
    const auto pts = mapped_nodes(mesh.elements[b.elem], mesh.elements[b.source], b.shift,
                                  ops.rule(), b.nodes);
    const PointEvaluator pe(ops.rule(), pts);
    const Vec3 c = physical_shift(mesh, spec, b.shift);
    std::vector<double> vals(pts.size());
    for (int i = 0; i < 3; ++i) {
      pe.eval(&x[(static_cast<std::size_t>(b.source) * 3 + i) * nv], vals.data());
      double* xe = &x[(static_cast<std::size_t>(b.elem) * 3 + i) * nv];
      for (std::size_t p = 0; p < pts.size(); ++p) xe[b.nodes[p]] = vals[p] + c[i];
    }
  }
}

std::vector<double> compute_zeta(const TensorOps3D& ops, int num_elements,
                                 const std::vector<double>& x) {
  const int nv = ops.volume_size();
  const Mat P = degree_drop_projection(ops.rule());
  std::vector<double> zeta(static_cast<std::size_t>(num_elements) * 9 * nv);
  std::vector<double> dx(9 * nv), tmp(nv);
  for (int e = 0; e < num_elements; ++e) {
    const double* xe = &x[static_cast<std::size_t>(e) * 3 * nv];
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) ops.derivative(xe + i * nv, &dx[(3 * i + k) * nv], k);
    for (int j = 0; j < 3; ++j) {
      const int jp = (j + 1) % 3, jm = (j + 2) % 3;
      for (int k = 0; k < 3; ++k) {
        const double* xp = xe + jp * nv;
        const double* xm = xe + jm * nv;
        const double* dxp = &dx[(3 * jp + k) * nv];
        const double* dxm = &dx[(3 * jm + k) * nv];
        for (int q = 0; q < nv; ++q) tmp[q] = xp[q] * dxm[q] - dxp[q] * xm[q];
        ops.apply_axis(P, tmp.data(), &zeta[(static_cast<std::size_t>(e) * 9 + 3 * j + k) * nv], k);
      }
    }
  }
  return zeta;
}

void make_zeta_consistent(const Mesh& mesh, const TensorOps3D& ops, const TransformSpec& spec,
                          const std::vector<double>& x, std::vector<double>& zeta) {
  const int nv = ops.volume_size();
  const Mat P = degree_drop_projection(ops.rule());
  std::vector<double> d(nv), pd(3 * nv), vals, extra;
  for (const Borrow& b : borrows(mesh, ops.n(), true, true)) {
    const Element& fine = mesh.elements[b.elem];
    const Element& coarse = mesh.elements[b.source];
    const auto pts = mapped_nodes(fine, coarse, b.shift, ops.rule(), b.nodes);
    const PointEvaluator pe(ops.rule(), pts);
    const Vec3 c = physical_shift(mesh, spec, b.shift);
    vals.resize(pts.size());
    extra.resize(pts.size());
    const double* xc = &x[static_cast<std::size_t>(b.source) * 3 * nv];
    for (int k : b.axes) {
      const AxisMap am = axis_map(fine, k, coarse, b.shift);
      const int kc = am.to_axis;
      // Projected derivatives of the coarse coordinates along kc: the zeta
      // of a translated element differs by c_{j+1} D x_{j-1} - c_{j-1} D x_{j+1}.
      for (int i = 0; i < 3; ++i) {
        ops.derivative(xc + i * nv, d.data(), kc);
        ops.apply_axis(P, d.data(), &pd[i * nv], kc);
      }
      for (int j = 0; j < 3; ++j) {
        const int jp = (j + 1) % 3, jm = (j + 2) % 3;
        pe.eval(&zeta[(static_cast<std::size_t>(b.source) * 9 + 3 * j + kc) * nv], vals.data());
        if (c[jp] != 0.0) {
          pe.eval(&pd[jm * nv], extra.data());
          for (std::size_t p = 0; p < pts.size(); ++p) vals[p] += c[jp] * extra[p];
        }
        if (c[jm] != 0.0) {
          pe.eval(&pd[jp * nv], extra.data());
          for (std::size_t p = 0; p < pts.size(); ++p) vals[p] -= c[jm] * extra[p];
        }
        double* ze = &zeta[(static_cast<std::size_t>(b.elem) * 9 + 3 * j + k) * nv];
        for (std::size_t p = 0; p < pts.size(); ++p) ze[b.nodes[p]] = am.c1 * vals[p];
      }
    }
  }
}

void compute_metrics(const TensorOps3D& ops, Geometry& g) {
  const int nv = g.nodes, nf = g.face_nodes, E = g.num_elements;
  g.Jr.assign(static_cast<std::size_t>(E) * 9 * nv, 0.0);
  g.wJr.assign(g.Jr.size(), 0.0);
  g.J.assign(static_cast<std::size_t>(E) * nv, 0.0);
  g.wJ.assign(g.J.size(), 0.0);
  g.SJ.assign(static_cast<std::size_t>(E) * 6 * nf, 0.0);
  g.normal.assign(static_cast<std::size_t>(E) * 18 * nf, 0.0);
  g.metric_scale.assign(E, 0.0);
  const auto& w = ops.volume_weights();
  std::vector<double> a(nv), b(nv), dx(9 * nv), face(nf);
  for (int e = 0; e < E; ++e) {
    for (int k = 0; k < 3; ++k) {
      const int kp = (k + 1) % 3, km = (k + 2) % 3;
      for (int j = 0; j < 3; ++j) {
        ops.derivative(g.zeta_of(e, j, km), a.data(), kp);
        ops.derivative(g.zeta_of(e, j, kp), b.data(), km);
        double* jr = &g.Jr[(static_cast<std::size_t>(e) * 9 + 3 * k + j) * nv];
        double* wjr = &g.wJr[(static_cast<std::size_t>(e) * 9 + 3 * k + j) * nv];
        for (int q = 0; q < nv; ++q) {
          jr[q] = 0.5 * (a[q] - b[q]);
          wjr[q] = w[q] * jr[q];
          g.metric_scale[e] = std::max(g.metric_scale[e], std::abs(jr[q]));
        }
      }
    }
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) ops.derivative(g.coord(e, i), &dx[(3 * i + k) * nv], k);
    for (int q = 0; q < nv; ++q) {
      auto m = [&](int i, int k) { return dx[(3 * i + k) * nv + q]; };
      const double det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
      if (!(det > 0.0)) throw std::runtime_error("geometry: non-positive Jacobian");
      g.J[static_cast<std::size_t>(e) * nv + q] = det;
      g.wJ[static_cast<std::size_t>(e) * nv + q] = w[q] * det;
    }
    for (int f = 0; f < 6; ++f) {
      const int ax = face_axis(f);
      const double sign = face_side(f) ? 1.0 : -1.0;
      double* sj = &g.SJ[(static_cast<std::size_t>(e) * 6 + f) * nf];
      double* nrm = &g.normal[(static_cast<std::size_t>(e) * 6 + f) * 3 * nf];
      for (int j = 0; j < 3; ++j) {
        ops.restrict_to_face(f, g.jr(e, ax, j), face.data());
        for (int p = 0; p < nf; ++p) nrm[j * nf + p] = sign * face[p];
      }
      for (int p = 0; p < nf; ++p) {
        const double mag = std::sqrt(nrm[p] * nrm[p] + nrm[nf + p] * nrm[nf + p] +
                                     nrm[2 * nf + p] * nrm[2 * nf + p]);
        if (!(mag > 0.0)) throw std::runtime_error("geometry: degenerate face normal");
        sj[p] = mag;
        for (int j = 0; j < 3; ++j) nrm[j * nf + p] /= mag;
      }
    }
  }
}

Geometry build_geometry(const Mesh& mesh, const TensorOps3D& ops, const TransformSpec& spec,
                        GeometryTreatment treatment) {
  Geometry g;
  g.order = ops.order();
  g.n = ops.n();
  g.nodes = ops.volume_size();
  g.face_nodes = ops.face_size();
  g.num_elements = mesh.num_elements();
  g.treatment = treatment;
  g.x = sample_transform(mesh, ops, spec);
  if (treatment != GeometryTreatment::Interpolated) make_watertight(mesh, ops, spec, g.x);
  g.zeta = compute_zeta(ops, g.num_elements, g.x);
  if (treatment == GeometryTreatment::ContinuousMetric)
    make_zeta_consistent(mesh, ops, spec, g.x, g.zeta);
  compute_metrics(ops, g);
  return g;
}

double freestream_residual(const TensorOps3D& ops, const Geometry& g) {
  const int nv = g.nodes;
  std::vector<double> acc(nv);
  double worst = 0.0;
  for (int e = 0; e < g.num_elements; ++e)
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) ops.derivative(g.jr(e, k, j), acc.data(), k, k > 0);
      for (double v : acc) worst = std::max(worst, std::abs(v) / g.metric_scale[e]);
    }
  return worst;
}

double max_hanging_coordinate_jump(const Mesh& mesh, const TensorOps3D& ops,
                                   const TransformSpec& spec, const Geometry& g) {
  double worst = 0.0;
  std::vector<double> vals;
  for (const Borrow& b : borrows(mesh, ops.n(), true, false)) {
    const auto pts = mapped_nodes(mesh.elements[b.elem], mesh.elements[b.source], b.shift,
                                  ops.rule(), b.nodes);
    const PointEvaluator pe(ops.rule(), pts);
    const Vec3 c = physical_shift(mesh, spec, b.shift);
    vals.resize(pts.size());
    for (int i = 0; i < 3; ++i) {
      pe.eval(g.coord(b.source, i), vals.data());
      const double* xe = g.coord(b.elem, i);
      for (std::size_t p = 0; p < pts.size(); ++p)
        worst = std::max(worst, std::abs(xe[b.nodes[p]] - vals[p] - c[i]));
    }
  }
  return worst;
}

double discrete_divergence_residual(const TensorOps3D& ops, const Geometry& g,
                                    const MortarSet& mortars, const MortarOperators& mops) {
  const int nv = g.nodes, nf = g.face_nodes;
  const auto& wf = ops.face_weights();
  std::vector<double> r(nv), mort(nf), face(nf);
  double worst = 0.0;
  for (int e = 0; e < g.num_elements; ++e)
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k)
        ops.derivative_transpose(&g.wJr[(static_cast<std::size_t>(e) * 9 + 3 * k + j) * nv],
                                 r.data(), k, k > 0);
      for (int f = 0; f < 6; ++f)
        for (const auto& [m, s] : mortars.element_faces[e][f]) {
          const FaceRef minus = mortars.mortars[m].minus.ref;
          const double sign = s < 0 ? 1.0 : -1.0;
          const double* sj = g.sj(minus.elem, minus.face);
          const double* nj = g.n_of(minus.elem, minus.face, j);
          for (int p = 0; p < nf; ++p) mort[p] = sign * wf[p] * sj[p] * nj[p];
          mops.transpose(m, s, mort.data(), face.data());
          for (int p = 0; p < nf; ++p) face[p] = -face[p];
          ops.add_from_face(f, face.data(), r.data());
        }
      for (double v : r) worst = std::max(worst, std::abs(v) / g.metric_scale[e]);
    }
  return worst;
}

}  // namespace mdg
