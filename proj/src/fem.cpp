#include "ferro/fem.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ferro {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Degree-4 rule on the reference simplex (6 points, weights sum to 1).
struct TriQuadrature {
  std::array<std::array<double, 3>, 6> bary;
  std::array<double, 6> w;
};
const TriQuadrature& tri_quadrature() {
  static const TriQuadrature q = [] {
    TriQuadrature t{};
    const double a = 0.445948490915965;
    const double wa = 0.223381589678011;
    const double b = 0.091576213509771;
    const double wb = 0.109951743655322;
    t.bary = {{{a, a, 1 - 2 * a},
               {a, 1 - 2 * a, a},
               {1 - 2 * a, a, a},
               {b, b, 1 - 2 * b},
               {b, 1 - 2 * b, b},
               {1 - 2 * b, b, b}}};
    t.w = {wa, wa, wa, wb, wb, wb};
    return t;
  }();
  return q;
}

// Normal traces of the two edge shape functions in the edge parameter
// (dual to the moments (1/|e|) \int (v.n) q_i ds).
double edge_trace(int i, double s) { return i == 0 ? 4.0 - 6.0 * s : 6.0 * s - 2.0; }

constexpr double kGauss1 = 0.21132486540518713;  // 1/2 - 1/(2 sqrt 3)
constexpr double kGauss2 = 0.7886751345948129;

}  // namespace

std::vector<FacetBc> bc_from_tags(const Mesh& mesh) {
  std::vector<FacetBc> bc(mesh.boundary.size());
  for (std::size_t f = 0; f < mesh.boundary.size(); ++f) {
    const std::string& tag = mesh.boundary[f].tag;
    if (tag == "fix") {
      bc[f].clamp = true;
    } else if (tag == "trac") {
      bc[f].traction = true;
    } else if (tag == "ins") {
      bc[f].insulated = true;
    } else if (tag == "el") {
      bc[f].electrode = true;
      bc[f].phi_a = 1.0;
    }
  }
  return bc;
}

DofMap DofMap::build(const Mesh& mesh, const std::vector<FacetBc>& bc) {
  if (bc.size() != mesh.boundary.size())
    throw std::invalid_argument("boundary condition table size mismatch");
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_edges();
  std::vector<bool> u_fixed(2 * nv, false);
  std::vector<bool> d_fixed(2 * ne, false);
  std::vector<int> pin_vertices;
  for (std::size_t f = 0; f < bc.size(); ++f) {
    for (int v : mesh.boundary[f].v) {
      if (bc[f].clamp || bc[f].roller_x) u_fixed[2 * v] = true;
      if (bc[f].clamp || bc[f].roller_y) u_fixed[2 * v + 1] = true;
      if (bc[f].pin_y_mid) pin_vertices.push_back(v);
    }
    if (bc[f].insulated) {
      const int e = mesh.boundary_edge[f];
      d_fixed[2 * e] = true;
      d_fixed[2 * e + 1] = true;
    }
  }
  if (!pin_vertices.empty()) {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (int v : pin_vertices) c += mesh.vertices.row(v).transpose();
    c /= static_cast<double>(pin_vertices.size());
    int best = pin_vertices.front();
    for (int v : pin_vertices)
      if ((mesh.vertices.row(v).transpose() - c).norm() <
          (mesh.vertices.row(best).transpose() - c).norm())
        best = v;
    u_fixed[2 * best + 1] = true;
  }
  DofMap dm;
  dm.u_dof.assign(2 * nv, -1);
  dm.d_dof.assign(2 * ne, -1);
  int next = 0;
  for (int i = 0; i < 2 * nv; ++i)
    if (!u_fixed[i]) dm.u_dof[i] = next++;
  dm.n_u = next;
  dm.offset_d = next;
  for (int i = 0; i < 2 * ne; ++i)
    if (!d_fixed[i]) dm.d_dof[i] = next++;
  dm.n_d = next - dm.offset_d;
  dm.offset_p = next;
  dm.n_p = 2 * mesh.num_elements();
  dm.n_primal = next + dm.n_p;
  return dm;
}

Eigen::Vector2d ElementBasis::eval(int f, const Eigen::Vector2d& x) const {
  const double X = (x.x() - xc.x()) / h;
  const double Y = (x.y() - xc.y()) / h;
  return {coef(0, f) + coef(1, f) * X + coef(2, f) * Y,
          coef(3, f) + coef(4, f) * X + coef(5, f) * Y};
}

ElementBasis bdm1_basis(const Mesh& mesh, int elem) {
  ElementBasis eb;
  eb.xc = mesh.centroid(elem);
  double hmax = 0.0;
  for (int k = 0; k < 3; ++k)
    hmax = std::max(hmax, mesh.edge_length(mesh.tri_edges[elem][k]));
  eb.h = hmax;

  Eigen::Matrix<double, 6, 6> moments;
  for (int k = 0; k < 3; ++k) {
    const int ei = mesh.tri_edges[elem][k];
    const Mesh::Edge& ed = mesh.edges[ei];
    const Eigen::Vector2d pa = mesh.vertices.row(ed.a);
    const Eigen::Vector2d pb = mesh.vertices.row(ed.b);
    const Eigen::Vector2d n = mesh.edge_normal(ei);
    for (int i = 0; i < 2; ++i) {
      for (int c = 0; c < 6; ++c) {
        double acc = 0.0;
        for (double s : {kGauss1, kGauss2}) {
          const Eigen::Vector2d x = pa + s * (pb - pa);
          const double X = (x.x() - eb.xc.x()) / eb.h;
          const double Y = (x.y() - eb.xc.y()) / eb.h;
          const double mono[6] = {1.0, X, Y, 1.0, X, Y};
          const double vn = c < 3 ? mono[c] * n.x() : mono[c] * n.y();
          const double q = i == 0 ? 1.0 - s : s;
          acc += 0.5 * vn * q;
        }
        moments(2 * k + i, c) = acc;
      }
    }
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(moments);
  if (!lu.isInvertible())
    throw std::invalid_argument("degenerate element " + std::to_string(elem));
  eb.coef = lu.inverse();
  for (int f = 0; f < 6; ++f) eb.div[f] = (eb.coef(1, f) + eb.coef(5, f)) / eb.h;
  return eb;
}

Eigen::Vector2d bdm1_edge_moments(
    const Mesh& mesh, int edge,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field) {
  const Mesh::Edge& ed = mesh.edges[edge];
  const Eigen::Vector2d pa = mesh.vertices.row(ed.a);
  const Eigen::Vector2d pb = mesh.vertices.row(ed.b);
  const Eigen::Vector2d n = mesh.edge_normal(edge);
  Eigen::Vector2d m{0.0, 0.0};
  for (double s : {kGauss1, kGauss2}) {
    const Eigen::Vector2d x = pa + s * (pb - pa);
    const double vn = field(x).dot(n);
    m[0] += 0.5 * vn * (1.0 - s);
    m[1] += 0.5 * vn * s;
  }
  return m;
}

FeSystem::FeSystem(Mesh mesh, const MaterialParams& params,
                   std::vector<FacetBc> bc)
    : mesh_(std::move(mesh)), params_(params), bc_(std::move(bc)) {
  params_.validate();
  if (mesh_.edges.empty()) mesh_.build_topology();
  dofs_ = DofMap::build(mesh_, bc_);

  const int ne = mesh_.num_elements();
  cache_.resize(ne);
  const TriQuadrature& q = tri_quadrature();
  for (int e = 0; e < ne; ++e) {
    ElementCache& c = cache_[e];
    c.area = mesh_.area(e);
    c.basis = bdm1_basis(mesh_, e);

    const auto& t = mesh_.tris[e];
    const Eigen::Vector2d p0 = mesh_.vertices.row(t[0]);
    const Eigen::Vector2d p1 = mesh_.vertices.row(t[1]);
    const Eigen::Vector2d p2 = mesh_.vertices.row(t[2]);
    // gradients of the barycentric functions
    Eigen::Matrix<double, 3, 2> g;
    const double inv2a = 1.0 / (2.0 * c.area);
    g.row(0) = inv2a * Eigen::RowVector2d(p1.y() - p2.y(), p2.x() - p1.x());
    g.row(1) = inv2a * Eigen::RowVector2d(p2.y() - p0.y(), p0.x() - p2.x());
    g.row(2) = inv2a * Eigen::RowVector2d(p0.y() - p1.y(), p1.x() - p0.x());
    c.strain_op.setZero();
    for (int i = 0; i < 3; ++i) {
      c.strain_op(0, 2 * i) = g(i, 0);
      c.strain_op(1, 2 * i + 1) = g(i, 1);
      c.strain_op(2, 2 * i) = g(i, 1) / kSqrt2;
      c.strain_op(2, 2 * i + 1) = g(i, 0) / kSqrt2;
    }
    for (int k = 0; k < 6; ++k) {
      const auto& b = q.bary[k];
      c.qp[k] = b[0] * p0 + b[1] * p1 + b[2] * p2;
      c.qw[k] = q.w[k] * c.area;
      for (int f = 0; f < 6; ++f)
        c.dshape[k].col(f) = c.basis.eval(f, c.qp[k]);
    }
  }

  // constraint rows: per element, \int_T div D dx
  std::vector<Eigen::Triplet<double>> trip;
  for (int e = 0; e < ne; ++e) {
    for (int k = 0; k < 3; ++k) {
      const int ei = mesh_.tri_edges[e][k];
      for (int i = 0; i < 2; ++i) {
        const int gd = dofs_.d_dof[2 * ei + i];
        if (gd >= 0)
          trip.emplace_back(e, gd, cache_[e].area * cache_[e].basis.div[2 * k + i]);
      }
    }
  }
  constraints_.resize(ne, dofs_.n_primal);
  constraints_.setFromTriplets(trip.begin(), trip.end());
  constraints_.makeCompressed();

  w_prev_ = Eigen::VectorXd::Zero(dofs_.n_primal);
  p_prev_ = Eigen::MatrixXd::Zero(ne, 2);
}

void FeSystem::gather(const Eigen::VectorXd& w, int e,
                      Eigen::Matrix<double, 6, 1>& ue,
                      Eigen::Matrix<double, 6, 1>& de,
                      Eigen::Vector2d& pe) const {
  const auto& t = mesh_.tris[e];
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 2; ++c) {
      const int gd = dofs_.u_dof[2 * t[i] + c];
      ue[2 * i + c] = gd >= 0 ? w[gd] : 0.0;
    }
  for (int k = 0; k < 3; ++k) {
    const int ei = mesh_.tri_edges[e][k];
    for (int i = 0; i < 2; ++i) {
      const int gd = dofs_.d_dof[2 * ei + i];
      de[2 * k + i] = gd >= 0 ? w[gd] : 0.0;
    }
  }
  pe = {w[dofs_.p_dof(e, 0)], w[dofs_.p_dof(e, 1)]};
}

void FeSystem::begin_step(const Eigen::VectorXd& w_prev) {
  if (w_prev.size() != dofs_.n_primal)
    throw std::invalid_argument("state size mismatch");
  w_prev_ = w_prev;
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    p_prev_(e, 0) = w_prev[dofs_.p_dof(e, 0)];
    p_prev_(e, 1) = w_prev[dofs_.p_dof(e, 1)];
  }
}

double FeSystem::objective(const Eigen::VectorXd& dw,
                           const Eigen::VectorXd& load) const {
  const Eigen::VectorXd w = w_prev_ + dw;
  double total = -load.dot(dw);
  PointState st(2);
  Eigen::Matrix<double, 6, 1> ue, de;
  Eigen::Vector2d pe;
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const ElementCache& c = cache_[e];
    gather(w, e, ue, de, pe);
    st.S = SymTensor(2, c.strain_op * ue);
    st.P = pe;
    st.P_prev = p_prev_.row(e).transpose();
    const Eigen::Vector2d dpe{dw[dofs_.p_dof(e, 0)], dw[dofs_.p_dof(e, 1)]};
    const double psi_i = psi_irreversible(st.P, params_);
    for (int k = 0; k < 6; ++k) {
      st.D = c.dshape[k] * de;
      total += c.qw[k] * (psi_reversible(st, params_) + psi_i);
    }
    total += c.area *
             dissipation_regularized(dpe, params_.E0, params_.reg_eps, false)
                 .value;
  }
  return total;
}

Eigen::VectorXd FeSystem::gradient(const Eigen::VectorXd& dw,
                                   const Eigen::VectorXd& load) const {
  const Eigen::VectorXd w = w_prev_ + dw;
  Eigen::VectorXd out = -load;
  PointState st(2);
  Eigen::Matrix<double, 6, 1> ue, de;
  Eigen::Vector2d pe;
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const ElementCache& c = cache_[e];
    gather(w, e, ue, de, pe);
    st.S = SymTensor(2, c.strain_op * ue);
    st.P = pe;
    st.P_prev = p_prev_.row(e).transpose();
    const Eigen::Vector2d dpe{dw[dofs_.p_dof(e, 0)], dw[dofs_.p_dof(e, 1)]};

    Eigen::Matrix<double, 6, 1> gu = Eigen::Matrix<double, 6, 1>::Zero();
    Eigen::Matrix<double, 6, 1> gd = Eigen::Matrix<double, 6, 1>::Zero();
    Eigen::Vector2d gp = Eigen::Vector2d::Zero();
    for (int k = 0; k < 6; ++k) {
      st.D = c.dshape[k] * de;
      const PointEval ev = evaluate(st, params_);
      gu += c.qw[k] * (c.strain_op.transpose() * ev.grad.head(3));
      gd += c.qw[k] * (c.dshape[k].transpose() * ev.grad.segment(3, 2));
      gp += c.qw[k] * ev.grad.tail(2);
    }
    const RegularizedDissipation dis =
        dissipation_regularized(dpe, params_.E0, params_.reg_eps, false);
    gp += c.area * dis.grad;

    const auto& t = mesh_.tris[e];
    for (int i = 0; i < 3; ++i)
      for (int comp = 0; comp < 2; ++comp) {
        const int gdof = dofs_.u_dof[2 * t[i] + comp];
        if (gdof >= 0) out[gdof] += gu[2 * i + comp];
      }
    for (int k = 0; k < 3; ++k) {
      const int ei = mesh_.tri_edges[e][k];
      for (int i = 0; i < 2; ++i) {
        const int gdof = dofs_.d_dof[2 * ei + i];
        if (gdof >= 0) out[gdof] += gd[2 * k + i];
      }
    }
    out[dofs_.p_dof(e, 0)] += gp[0];
    out[dofs_.p_dof(e, 1)] += gp[1];
  }
  return out;
}

Eigen::SparseMatrix<double> FeSystem::hessian(const Eigen::VectorXd& dw) const {
  const Eigen::VectorXd w = w_prev_ + dw;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh_.num_elements() * 200);
  PointState st(2);
  Eigen::Matrix<double, 6, 1> ue, de;
  Eigen::Vector2d pe;
  std::array<int, 14> gidx{};
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const ElementCache& c = cache_[e];
    gather(w, e, ue, de, pe);
    st.S = SymTensor(2, c.strain_op * ue);
    st.P = pe;
    st.P_prev = p_prev_.row(e).transpose();
    const Eigen::Vector2d dpe{dw[dofs_.p_dof(e, 0)], dw[dofs_.p_dof(e, 1)]};

    Eigen::Matrix<double, 14, 14> ke = Eigen::Matrix<double, 14, 14>::Zero();
    for (int k = 0; k < 6; ++k) {
      st.D = c.dshape[k] * de;
      const PointEval ev = evaluate(st, params_);
      const auto& bu = c.strain_op;
      const auto& phi = c.dshape[k];
      const Eigen::Matrix3d hss = ev.hess.block<3, 3>(0, 0);
      const Eigen::Matrix<double, 3, 2> hsd = ev.hess.block<3, 2>(0, 3);
      const Eigen::Matrix<double, 3, 2> hsp = ev.hess.block<3, 2>(0, 5);
      const Eigen::Matrix2d hdd = ev.hess.block<2, 2>(3, 3);
      const Eigen::Matrix2d hdp = ev.hess.block<2, 2>(3, 5);
      const Eigen::Matrix2d hpp = ev.hess.block<2, 2>(5, 5);
      const double wq = c.qw[k];
      ke.block<6, 6>(0, 0) += wq * (bu.transpose() * hss * bu);
      ke.block<6, 6>(0, 6) += wq * (bu.transpose() * hsd * phi);
      ke.block<6, 2>(0, 12) += wq * (bu.transpose() * hsp);
      ke.block<6, 6>(6, 6) += wq * (phi.transpose() * hdd * phi);
      ke.block<6, 2>(6, 12) += wq * (phi.transpose() * hdp);
      ke.block<2, 2>(12, 12) += wq * hpp;
    }
    const RegularizedDissipation dis =
        dissipation_regularized(dpe, params_.E0, params_.reg_eps, true);
    ke.block<2, 2>(12, 12) += c.area * dis.hess;
    ke.block<6, 6>(6, 0) = ke.block<6, 6>(0, 6).transpose();
    ke.block<2, 6>(12, 0) = ke.block<6, 2>(0, 12).transpose();
    ke.block<2, 6>(12, 6) = ke.block<6, 2>(6, 12).transpose();

    const auto& t = mesh_.tris[e];
    for (int i = 0; i < 3; ++i)
      for (int comp = 0; comp < 2; ++comp)
        gidx[2 * i + comp] = dofs_.u_dof[2 * t[i] + comp];
    for (int k = 0; k < 3; ++k) {
      const int ei = mesh_.tri_edges[e][k];
      gidx[6 + 2 * k] = dofs_.d_dof[2 * ei];
      gidx[6 + 2 * k + 1] = dofs_.d_dof[2 * ei + 1];
    }
    gidx[12] = dofs_.p_dof(e, 0);
    gidx[13] = dofs_.p_dof(e, 1);
    for (int a = 0; a < 14; ++a) {
      if (gidx[a] < 0) continue;
      for (int b = 0; b < 14; ++b)
        if (gidx[b] >= 0 && ke(a, b) != 0.0)
          trip.emplace_back(gidx[a], gidx[b], ke(a, b));
    }
  }
  Eigen::SparseMatrix<double> h(dofs_.n_primal, dofs_.n_primal);
  h.setFromTriplets(trip.begin(), trip.end());
  h.makeCompressed();
  return h;
}

bool FeSystem::saturation_ok(const Eigen::VectorXd& dw) const {
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const Eigen::Vector2d pe{p_prev_(e, 0) + dw[dofs_.p_dof(e, 0)],
                             p_prev_(e, 1) + dw[dofs_.p_dof(e, 1)]};
    if (!ferro::saturation_ok(pe, params_)) return false;
  }
  return true;
}

Eigen::VectorXd FeSystem::assemble_load(const LoadData& load) const {
  Eigen::VectorXd l = Eigen::VectorXd::Zero(dofs_.n_primal);
  for (std::size_t f = 0; f < bc_.size(); ++f) {
    const FacetBc& fb = bc_[f];
    const int ei = mesh_.boundary_edge[f];
    const Mesh::Edge& ed = mesh_.edges[ei];
    const double len = mesh_.edge_length(ei);
    if (fb.traction) {
      for (int v : {ed.a, ed.b})
        for (int c = 0; c < 2; ++c) {
          const int gd = dofs_.u_dof[2 * v + c];
          if (gd >= 0) l[gd] += load.traction[c] * len / 2.0;
        }
    }
    if (fb.electrode && load.phi_scale != 0.0) {
      const Eigen::Vector2d pa = mesh_.vertices.row(ed.a);
      const Eigen::Vector2d pb = mesh_.vertices.row(ed.b);
      const Eigen::Vector2d n = mesh_.edge_normal(ei);
      const Eigen::Vector2d mid = 0.5 * (pa + pb);
      const Eigen::Vector2d cen = mesh_.centroid(ed.elem[0]);
      const double sign = n.dot(mid - cen) > 0.0 ? 1.0 : -1.0;
      for (int i = 0; i < 2; ++i) {
        const int gd = dofs_.d_dof[2 * ei + i];
        if (gd < 0) continue;
        double acc = 0.0;
        for (double s : {kGauss1, kGauss2}) {
          const Eigen::Vector2d x = pa + s * (pb - pa);
          const double phi0 =
              load.phi_scale * (fb.phi_a + fb.phi_bx * x.x() + fb.phi_by * x.y());
          acc += 0.5 * phi0 * edge_trace(i, s);
        }
        l[gd] += -sign * len * acc;
      }
    }
  }
  if (load.body) {
    const TriQuadrature& q = tri_quadrature();
    for (int e = 0; e < mesh_.num_elements(); ++e) {
      const ElementCache& c = cache_[e];
      const auto& t = mesh_.tris[e];
      for (int k = 0; k < 6; ++k) {
        const Eigen::Vector2d fval = load.body(c.qp[k]);
        for (int i = 0; i < 3; ++i) {
          const double ni = q.bary[k][i];
          for (int comp = 0; comp < 2; ++comp) {
            const int gd = dofs_.u_dof[2 * t[i] + comp];
            if (gd >= 0) l[gd] += c.qw[k] * fval[comp] * ni;
          }
        }
      }
    }
  }
  return l;
}

PointState FeSystem::element_state(const Eigen::VectorXd& w, int e,
                                   const Eigen::Vector2d& x) const {
  Eigen::Matrix<double, 6, 1> ue, de;
  Eigen::Vector2d pe;
  gather(w, e, ue, de, pe);
  PointState st(2);
  st.S = SymTensor(2, cache_[e].strain_op * ue);
  Eigen::Vector2d d = Eigen::Vector2d::Zero();
  for (int f = 0; f < 6; ++f) d += de[f] * cache_[e].basis.eval(f, x);
  st.D = d;
  st.P = pe;
  st.P_prev = p_prev_.row(e).transpose();
  return st;
}

double FeSystem::element_div(const Eigen::VectorXd& w, int e) const {
  Eigen::Matrix<double, 6, 1> ue, de;
  Eigen::Vector2d pe;
  gather(w, e, ue, de, pe);
  double div = 0.0;
  for (int f = 0; f < 6; ++f) div += de[f] * cache_[e].basis.div[f];
  return div;
}

void FeSystem::interpolate_d(
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field,
    Eigen::VectorXd& w) const {
  for (int ei = 0; ei < mesh_.num_edges(); ++ei) {
    const Eigen::Vector2d m = bdm1_edge_moments(mesh_, ei, field);
    for (int i = 0; i < 2; ++i) {
      const int gd = dofs_.d_dof[2 * ei + i];
      if (gd >= 0) w[gd] = m[i];
    }
  }
}

Eigen::MatrixXd FeSystem::displacement(const Eigen::VectorXd& w) const {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(mesh_.num_vertices(), 2);
  for (int v = 0; v < mesh_.num_vertices(); ++v)
    for (int c = 0; c < 2; ++c) {
      const int gd = dofs_.u_dof[2 * v + c];
      if (gd >= 0) u(v, c) = w[gd];
    }
  return u;
}

CellFields postprocess(const FeSystem& sys, const Eigen::VectorXd& w) {
  const Mesh& mesh = sys.mesh();
  const int ne = mesh.num_elements();
  CellFields f;
  f.u = sys.displacement(w);
  f.abs_p.resize(ne);
  f.p.resize(ne, 2);
  f.t_xx.resize(ne);
  f.div_d.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const PointState st = sys.element_state(w, e, mesh.centroid(e));
    const PointResponse r = response(st, sys.params());
    f.abs_p[e] = st.P.norm();
    f.p.row(e) = st.P.transpose();
    f.t_xx[e] = r.T(0, 0);
    f.div_d[e] = sys.element_div(w, e);
  }
  return f;
}

void write_vtk(const std::string& path, const Mesh& mesh, const CellFields& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  out << "# vtk DataFile Version 3.0\n";
  out << "ferro fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (int v = 0; v < mesh.num_vertices(); ++v)
    out << num(mesh.vertices(v, 0)) << " " << num(mesh.vertices(v, 1)) << " 0\n";
  out << "CELLS " << mesh.num_elements() << " " << 4 * mesh.num_elements() << "\n";
  for (const auto& t : mesh.tris)
    out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.num_elements() << "\n";
  for (int e = 0; e < mesh.num_elements(); ++e) out << "5\n";
  out << "POINT_DATA " << mesh.num_vertices() << "\n";
  out << "VECTORS displacement double\n";
  for (int v = 0; v < mesh.num_vertices(); ++v)
    out << num(f.u(v, 0)) << " " << num(f.u(v, 1)) << " 0\n";
  out << "CELL_DATA " << mesh.num_elements() << "\n";
  auto scalars = [&](const std::string& name, const Eigen::VectorXd& a) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int e = 0; e < a.size(); ++e) out << num(a[e]) << "\n";
  };
  scalars("abs_P", f.abs_p);
  scalars("P_x", f.p.col(0));
  scalars("P_y", f.p.col(1));
  scalars("T_xx", f.t_xx);
  scalars("div_D", f.div_d);
  return;
}

}  // namespace ferro
