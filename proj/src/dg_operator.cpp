#include "mortar_dg/dg_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace mdg {

namespace {

constexpr int kVoigtA[6] = {0, 1, 2, 1, 0, 0};
constexpr int kVoigtB[6] = {0, 1, 2, 2, 2, 1};
constexpr int kVoigtOf[3][3] = {{0, 5, 4}, {5, 1, 3}, {4, 3, 2}};

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

Scheme parse_scheme(const std::string& name) {
  if (name == "sfim") return Scheme::Sfim;
  if (name == "afim") return Scheme::Afim;
  throw std::invalid_argument("unknown scheme: " + name);
}

std::string scheme_name(Scheme s) { return s == Scheme::Sfim ? "sfim" : "afim"; }

FluxResult numerical_flux(const Vec3& n, const PointTrace& tr, double alpha) {
  if (!(tr.zpm > 0.0 && tr.zpp > 0.0 && tr.zsm > 0.0 && tr.zsp > 0.0))
    throw std::invalid_argument("numerical_flux: impedances must be positive");
  const double kp = 1.0 / (tr.zpm + tr.zpp), ks = 1.0 / (tr.zsm + tr.zsp);
  const double Tpm = dot(n, tr.Tm), Tpp = dot(n, tr.Tp);
  const double vpm = dot(n, tr.vm), vpp = dot(n, tr.vp);
  const double Tpar = kp * (tr.zpp * Tpm + tr.zpm * Tpp - alpha * tr.zpm * tr.zpp * (vpm - vpp));
  const double vpar = kp * (tr.zpm * vpm + tr.zpp * vpp - alpha * (Tpm - Tpp));
  FluxResult r;
  for (int i = 0; i < 3; ++i) {
    const double Tm = tr.Tm[i] - n[i] * Tpm, Tp = tr.Tp[i] - n[i] * Tpp;
    const double vm = tr.vm[i] - n[i] * vpm, vp = tr.vp[i] - n[i] * vpp;
    const double Tperp = ks * (tr.zsp * Tm + tr.zsm * Tp - alpha * tr.zsm * tr.zsp * (vm - vp));
    const double vperp = ks * (tr.zsm * vm + tr.zsp * vp - alpha * (Tm - Tp));
    r.T[i] = n[i] * Tpar + Tperp;
    r.v[i] = n[i] * vpar + vperp;
  }
  return r;
}

FluxResult boundary_flux(const Vec3& n, const Vec3& vm, const Vec3& Tm, double zp, double zs,
                         double alpha) {
  const double Tpar = dot(n, Tm);
  FluxResult r;
  for (int i = 0; i < 3; ++i) {
    const double Tperp = Tm[i] - n[i] * Tpar;
    r.v[i] = vm[i] - alpha * (n[i] * Tpar / zp + Tperp / zs);
    r.T[i] = 0.0;
  }
  return r;
}

DgOperator::DgOperator(const TensorOps3D& ops, const MortarSet& mortars,
                       const MortarOperators& mops, const Geometry& geometry,
                       const MaterialField& material, Options options)
    : ops_(ops), ms_(mortars), mops_(mops), geo_(geometry), mat_(material), opt_(options) {
  E_ = geometry.num_elements;
  nv_ = ops.volume_size();
  nf_ = ops.face_size();
  M_ = mortars.num_mortars();
  if (material.num_elements != E_ || material.nodes != nv_ || geometry.nodes != nv_)
    throw std::invalid_argument("DgOperator: geometry, material and basis sizes differ");
  if (!(opt_.alpha >= 0.0)) throw std::invalid_argument("DgOperator: alpha must be >= 0");

  jr_over_j_.resize(static_cast<std::size_t>(E_) * 9 * nv_);
  inv_wj_.resize(static_cast<std::size_t>(E_) * nv_);
  for (int e = 0; e < E_; ++e) {
    for (int q = 0; q < nv_; ++q) inv_wj_[e * nv_ + q] = 1.0 / geo_.wJ[e * nv_ + q];
    for (int kj = 0; kj < 9; ++kj)
      for (int q = 0; q < nv_; ++q) {
        const std::size_t i = (static_cast<std::size_t>(e) * 9 + kj) * nv_ + q;
        jr_over_j_[i] = geo_.Jr[i] / geo_.J[e * nv_ + q];
      }
  }

  const auto& wf = ops.face_weights();
  w_mortar_.resize(static_cast<std::size_t>(M_) * nf_);
  n_mortar_.resize(static_cast<std::size_t>(M_) * 3 * nf_);
  z_.assign(static_cast<std::size_t>(M_) * 4 * nf_, 0.0);
  std::vector<double> face(nf_), zfield(nf_);
  for (int m = 0; m < M_; ++m) {
    const Mortar& mo = ms_.mortars[m];
    const FaceRef r = mo.minus.ref;
    for (int p = 0; p < nf_; ++p) w_mortar_[m * nf_ + p] = wf[p] * geo_.sj(r.elem, r.face)[p];
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < nf_; ++p) n_mortar_[(m * 3 + j) * nf_ + p] = geo_.n_of(r.elem, r.face, j)[p];

    for (int side = 0; side < 2; ++side) {
      std::vector<std::pair<FaceRef, int>> refs;
      if (side == 0 || mo.type == MortarType::Boundary)
        refs.push_back({r, -1});
      else
        for (std::size_t k = 0; k < mo.plus.size(); ++k)
          refs.push_back({mo.plus[k].ref, static_cast<int>(k)});
      for (int which = 0; which < 2; ++which) {
        const auto& field = which == 0 ? mat_.zp : mat_.zs;
        double* out = &z_[((static_cast<std::size_t>(m) * 2 + side) * 2 + which) * nf_];
        double floor = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < refs.size(); ++k) {
          ops_.restrict_to_face(refs[k].first.face, &field[static_cast<std::size_t>(refs[k].first.elem) * nv_],
                                face.data());
          for (double v : face)
            if (v > 0.0) floor = std::min(floor, v);
          mops_.to_mortar(m, refs[k].second, face.data(), zfield.data(), false);
          for (int p = 0; p < nf_; ++p) out[p] += zfield[p];
        }
        for (int p = 0; p < nf_; ++p)
          if (!(out[p] > 0.0)) {
            out[p] = floor;
            ++clamped_;
          }
      }
    }
  }
  if (clamped_ > 0)
    std::fprintf(stderr, "mortar_dg: clamped %d nonpositive mortar impedance values\n", clamped_);

  trace_.assign(static_cast<std::size_t>(E_) * 6 * 9 * nf_, 0.0);
  flux_.assign(static_cast<std::size_t>(M_) * 2 * 9 * nf_, 0.0);
}

void DgOperator::gather_face_traces(const State& q) const {
#pragma omp parallel for schedule(static)
  for (int e = 0; e < E_; ++e)
    for (int f = 0; f < 6; ++f)
      for (int c = 0; c < 9; ++c)
        ops_.restrict_to_face(f, q.field(e, c), &trace_[((static_cast<std::size_t>(e) * 6 + f) * 9 + c) * nf_]);
}

void DgOperator::side_fields(int m, int side, double* v, double* s) const {
  const Mortar& mo = ms_.mortars[m];
  auto load = [&](const FaceRef& r, int sidx, bool acc) {
    const double* tr = &trace_[(static_cast<std::size_t>(r.elem) * 6 + r.face) * 9 * nf_];
    for (int c = 0; c < 3; ++c) mops_.to_mortar(m, sidx, tr + c * nf_, v + c * nf_, acc);
    for (int c = 0; c < 6; ++c) mops_.to_mortar(m, sidx, tr + (3 + c) * nf_, s + c * nf_, acc);
  };
  if (side == 0) {
    load(mo.minus.ref, -1, false);
  } else {
    for (std::size_t k = 0; k < mo.plus.size(); ++k)
      load(mo.plus[k].ref, static_cast<int>(k), k > 0);
  }
}

void DgOperator::mortar_fluxes(bool afim) const {
  const double alpha = opt_.alpha;
  const int nf = nf_;
#pragma omp parallel
  {
    std::vector<double> vm(3 * nf), sm(6 * nf), vp(3 * nf), sp(6 * nf);
#pragma omp for schedule(static)
    for (int m = 0; m < M_; ++m) {
      const bool boundary = ms_.mortars[m].type == MortarType::Boundary;
      side_fields(m, 0, vm.data(), sm.data());
      if (!boundary) side_fields(m, 1, vp.data(), sp.data());
      const double* w = &w_mortar_[static_cast<std::size_t>(m) * nf];
      const double* nn = &n_mortar_[static_cast<std::size_t>(m) * 3 * nf];
      const double* z = &z_[static_cast<std::size_t>(m) * 4 * nf];
      double* fm = &flux_[(static_cast<std::size_t>(m) * 2) * 9 * nf];
      double* fp = fm + 9 * nf;
      for (int p = 0; p < nf; ++p) {
        const Vec3 n{nn[p], nn[nf + p], nn[2 * nf + p]};
        PointTrace tr;
        for (int i = 0; i < 3; ++i) {
          tr.vm[i] = vm[i * nf + p];
          double t = 0.0;
          for (int j = 0; j < 3; ++j) t += n[j] * sm[kVoigtOf[i][j] * nf + p];
          tr.Tm[i] = t;
        }
        FluxResult fl;
        if (boundary) {
          fl = boundary_flux(n, tr.vm, tr.Tm, z[p], z[nf + p], alpha);
        } else {
          for (int i = 0; i < 3; ++i) {
            tr.vp[i] = vp[i * nf + p];
            double t = 0.0;
            for (int j = 0; j < 3; ++j) t += n[j] * sp[kVoigtOf[i][j] * nf + p];
            tr.Tp[i] = t;
          }
          tr.zpm = z[p];
          tr.zsm = z[nf + p];
          tr.zpp = z[2 * nf + p];
          tr.zsp = z[3 * nf + p];
          fl = numerical_flux(n, tr, alpha);
        }
        if (afim) {
          for (int i = 0; i < 3; ++i) {
            fm[i * nf + p] = fl.T[i];
            fm[(3 + i) * nf + p] = fl.v[i];
            fp[i * nf + p] = -fl.T[i];
            fp[(3 + i) * nf + p] = fl.v[i];
          }
        } else {
          Vec3 dm, dp;
          for (int i = 0; i < 3; ++i) {
            dm[i] = fl.v[i] - tr.vm[i];
            dp[i] = fl.v[i] - tr.vp[i];
            fm[i * nf + p] = w[p] * fl.T[i];
            fp[i * nf + p] = -w[p] * fl.T[i];
          }
          for (int c = 0; c < 6; ++c) {
            const int a = kVoigtA[c], b = kVoigtB[c];
            fm[(3 + c) * nf + p] = 0.5 * w[p] * (n[b] * dm[a] + n[a] * dm[b]);
            fp[(3 + c) * nf + p] = -0.5 * w[p] * (n[b] * dp[a] + n[a] * dp[b]);
          }
        }
      }
    }
  }
}

void DgOperator::element_update(const State& q, State& dq, bool afim) const {
  const int nv = nv_, nf = nf_;
  const auto& wf = ops_.face_weights();
#pragma omp parallel
  {
    std::vector<double> lift(9 * nv), dv(9 * nv), tmp(nv), face(9 * nf), out(9 * nf);
#pragma omp for schedule(static)
    for (int e = 0; e < E_; ++e) {
      std::fill(lift.begin(), lift.end(), 0.0);
      for (int f = 0; f < 6; ++f) {
        const auto& list = ms_.element_faces[e][f];
        const int fields = afim ? 6 : 9;
        bool first = true;
        for (const auto& [m, s] : list) {
          const double* src = &flux_[((static_cast<std::size_t>(m) * 2) + (s < 0 ? 0 : 1)) * 9 * nf];
          for (int c = 0; c < fields; ++c) {
            if (afim)
              mops_.to_face(m, s, src + c * nf, &face[c * nf], !first);
            else
              mops_.transpose(m, s, src + c * nf, &face[c * nf], !first);
          }
          first = false;
        }
        if (first) continue;
        if (afim) {
          // face holds T* (0..2) and v* (3..5) on the element face.
          const double* sj = geo_.sj(e, f);
          const double* tr = &trace_[(static_cast<std::size_t>(e) * 6 + f) * 9 * nf];
          for (int p = 0; p < nf; ++p) {
            const double w = wf[p] * sj[p];
            Vec3 n, d;
            for (int j = 0; j < 3; ++j) {
              n[j] = geo_.n_of(e, f, j)[p];
              d[j] = face[(3 + j) * nf + p] - tr[j * nf + p];
            }
            for (int i = 0; i < 3; ++i) out[i * nf + p] = w * face[i * nf + p];
            for (int c = 0; c < 6; ++c) {
              const int a = kVoigtA[c], b = kVoigtB[c];
              out[(3 + c) * nf + p] = 0.5 * w * (n[b] * d[a] + n[a] * d[b]);
            }
          }
          for (int c = 0; c < 9; ++c) ops_.add_from_face(f, &out[c * nf], &lift[c * nv]);
        } else {
          for (int c = 0; c < 9; ++c) ops_.add_from_face(f, &face[c * nf], &lift[c * nv]);
        }
      }

      const double* wjr = &geo_.wJr[static_cast<std::size_t>(e) * 9 * nv];
      const double* jrj = &jr_over_j_[static_cast<std::size_t>(e) * 9 * nv];
      const double* iw = &inv_wj_[static_cast<std::size_t>(e) * nv];
      const double* rho = &mat_.rho[static_cast<std::size_t>(e) * nv];
      const double* lam = &mat_.lambda[static_cast<std::size_t>(e) * nv];
      const double* mu = &mat_.mu[static_cast<std::size_t>(e) * nv];

      // Velocity: -sum_k D_k^T (sum_j wJr_{k,j} sigma_ij) plus the lifted traction.
      for (int i = 0; i < 3; ++i) {
        double* out = dq.field(e, i);
        for (int k = 0; k < 3; ++k) {
          const double* s0 = q.field(e, 3 + kVoigtOf[i][0]);
          const double* s1 = q.field(e, 3 + kVoigtOf[i][1]);
          const double* s2 = q.field(e, 3 + kVoigtOf[i][2]);
          const double* w0 = wjr + (3 * k + 0) * nv;
          const double* w1 = wjr + (3 * k + 1) * nv;
          const double* w2 = wjr + (3 * k + 2) * nv;
          for (int p = 0; p < nv; ++p) tmp[p] = w0[p] * s0[p] + w1[p] * s1[p] + w2[p] * s2[p];
          ops_.derivative_transpose(tmp.data(), out, k, k > 0);
        }
        const double* li = &lift[i * nv];
        for (int p = 0; p < nv; ++p) out[p] = (li[p] - out[p]) * iw[p] / rho[p];
      }

      // Stress: C applied to the symmetric velocity gradient plus the lifted jump.
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) ops_.derivative(q.field(e, i), &dv[(3 * i + k) * nv], k);
      for (int p = 0; p < nv; ++p) {
        double g[3][3];
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            g[i][j] = dv[(3 * i) * nv + p] * jrj[(0 + j) * nv + p] +
                      dv[(3 * i + 1) * nv + p] * jrj[(3 + j) * nv + p] +
                      dv[(3 * i + 2) * nv + p] * jrj[(6 + j) * nv + p];
        Voigt eps;
        for (int c = 0; c < 6; ++c) {
          const int a = kVoigtA[c], b = kVoigtB[c];
          eps[c] = 0.5 * (g[a][b] + g[b][a]) + lift[(3 + c) * nv + p] * iw[p];
        }
        const Voigt sd = stiffness_apply(lam[p], mu[p], eps);
        for (int c = 0; c < 6; ++c) dq.field(e, 3 + c)[p] = sd[c];
      }
    }
  }
}

void DgOperator::rhs(const State& q, State& dq) const {
  if (opt_.scheme == Scheme::Sfim)
    rhs_sfim(q, dq);
  else
    rhs_afim(q, dq);
}

void DgOperator::rhs_sfim(const State& q, State& dq) const {
  if (dq.data.size() != q.data.size()) dq = State(q.num_elements, q.nodes);
  dq.t = q.t;
  gather_face_traces(q);
  mortar_fluxes(false);
  element_update(q, dq, false);
}

void DgOperator::rhs_afim(const State& q, State& dq) const {
  if (dq.data.size() != q.data.size()) dq = State(q.num_elements, q.nodes);
  dq.t = q.t;
  gather_face_traces(q);
  mortar_fluxes(true);
  element_update(q, dq, true);
}

std::vector<MortarTrace> DgOperator::mortar_traces(const State& q) const {
  gather_face_traces(q);
  const int nf = nf_;
  std::vector<MortarTrace> out(M_);
  std::vector<double> v(3 * nf), s(6 * nf);
  for (int m = 0; m < M_; ++m) {
    MortarTrace& t = out[m];
    t.boundary = ms_.mortars[m].type == MortarType::Boundary;
    const double* nn = &n_mortar_[static_cast<std::size_t>(m) * 3 * nf];
    const double* z = &z_[static_cast<std::size_t>(m) * 4 * nf];
    for (int side = 0; side < (t.boundary ? 1 : 2); ++side) {
      side_fields(m, side, v.data(), s.data());
      auto& vv = side == 0 ? t.vm : t.vp;
      auto& TT = side == 0 ? t.Tm : t.Tp;
      vv = v;
      TT.assign(3 * nf, 0.0);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int p = 0; p < nf; ++p) TT[i * nf + p] += nn[j * nf + p] * s[kVoigtOf[i][j] * nf + p];
    }
    t.zpm.assign(z, z + nf);
    t.zsm.assign(z + nf, z + 2 * nf);
    t.zpp.assign(z + 2 * nf, z + 3 * nf);
    t.zsp.assign(z + 3 * nf, z + 4 * nf);
  }
  return out;
}

double DgOperator::energy_rate(const State& q, const State& dq) const {
  return energy_inner(q, dq, mat_, geo_.wJ);
}

}  // namespace mdg
