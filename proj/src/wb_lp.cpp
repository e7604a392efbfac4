// The fixed-support weight LP.
//
// Variables, per distribution j: f_jis (point i of P_j to support point s), d_ji (to the dummy
// column, only when mass is discarded), e_js (dummy row to s, two-side only). Shared: w_s.
// Rows, per j: A_ji  sum_s f_jis + d_ji = w(p_ji)
//              B_j   sum_i d_ji = Z1                       (Z1 = z_remove + z2)
//              C_js  sum_i f_jis + e_js - w_s = 0
//              D_j   sum_s e_js = z2
// For j >= 1 one row per block is implied by the others and is left out.
//
// Small problems go to the dense simplex. Larger ones use a primal-dual interior point
// method whose normal equations are reduced to the (B, C, D) rows by eliminating the
// diagonal A-row block. Big candidate sets enter through column generation on w.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rwb/barycenter.hpp"
#include "rwb/log.hpp"
#include "rwb/ot.hpp"

namespace rwb {

namespace {

using Vec = std::vector<double>;
constexpr long kNone = -1;

struct Layout {
  std::size_t m = 0, K = 0;
  std::vector<std::size_t> nj;
  bool hasD = false, hasE = false;
  double Z1 = 0.0, z2 = 0.0;
  // costs[j][i*K + s], already divided by m
  std::vector<Vec> cost;
  std::vector<Vec> mass;
  // column offsets
  std::vector<std::size_t> off_f, off_d, off_e;
  std::size_t off_w = 0, N = 0;
  // row numbering: point rows first, then small rows
  std::vector<std::size_t> off_p;
  std::size_t NP = 0;
  std::vector<long> rowB, rowD, rowC;  // small-row index or kNone
  std::size_t NS = 0;

  long C(std::size_t j, std::size_t s) const { return rowC[j * K + s]; }
};

Layout make_layout(const Instance& inst, const PointMatrix& G, const std::vector<std::size_t>& active,
                   double z_remove, double z2, double cost_scale, double mass_scale) {
  Layout L;
  L.m = inst.m();
  L.K = active.size();
  L.Z1 = (z_remove + z2) / mass_scale;
  L.z2 = z2 / mass_scale;
  L.hasD = z_remove + z2 > 0.0;
  L.hasE = z2 > 0.0;
  const double inv_m = 1.0 / static_cast<double>(L.m);
  std::size_t col = 0;
  for (std::size_t j = 0; j < L.m; ++j) {
    const auto& P = inst.distribution(j);
    L.nj.push_back(P.size());
    Vec c(P.size() * L.K);
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t s = 0; s < L.K; ++s)
        c[i * L.K + s] =
            cost_from_squared(squared_distance(P.point(i), G[active[s]]), inst.l()) * inv_m / cost_scale;
    L.cost.push_back(std::move(c));
    Vec a(P.weights());
    for (double& v : a) v /= mass_scale;
    L.mass.push_back(std::move(a));
    L.off_f.push_back(col);
    col += P.size() * L.K;
    L.off_d.push_back(col);
    if (L.hasD) col += P.size();
    L.off_e.push_back(col);
    if (L.hasE) col += L.K;
    L.off_p.push_back(L.NP);
    L.NP += P.size();
  }
  L.off_w = col;
  L.N = col + L.K;

  L.rowB.assign(L.m, kNone);
  L.rowD.assign(L.m, kNone);
  L.rowC.assign(L.m * L.K, kNone);
  long r = 0;
  for (std::size_t j = 0; j < L.m; ++j) {
    const bool first = j == 0;
    if (L.hasD && first) L.rowB[j] = r++;  // B_j (j >= 1) is the implied row
    for (std::size_t s = 0; s < L.K; ++s) {
      const bool drop = !first && !L.hasD && !L.hasE && s + 1 == L.K;
      if (!drop) L.rowC[j * L.K + s] = r++;
    }
    if (L.hasE) L.rowD[j] = r++;
  }
  L.NS = static_cast<std::size_t>(r);
  return L;
}

// ---------------------------------------------------------------------------------------------
// dense simplex path

LpProblem layout_to_lp(const Layout& L) {
  LpProblem lp(L.N);
  for (std::size_t j = 0; j < L.m; ++j)
    std::copy(L.cost[j].begin(), L.cost[j].end(), lp.objective.begin() + static_cast<long>(L.off_f[j]));
  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t j = 0; j < L.m; ++j)
    for (std::size_t i = 0; i < L.nj[j]; ++i) {
      row.clear();
      for (std::size_t s = 0; s < L.K; ++s) row.emplace_back(L.off_f[j] + i * L.K + s, 1.0);
      if (L.hasD) row.emplace_back(L.off_d[j] + i, 1.0);
      lp.add_sparse_row(row, L.mass[j][i]);
    }
  // small rows in index order
  struct Small {
    std::vector<std::pair<std::size_t, double>> entries;
    double rhs = 0.0;
  };
  std::vector<Small> small(L.NS);
  for (std::size_t j = 0; j < L.m; ++j) {
    if (L.rowB[j] != kNone) {
      auto& b = small[static_cast<std::size_t>(L.rowB[j])];
      for (std::size_t i = 0; i < L.nj[j]; ++i) b.entries.emplace_back(L.off_d[j] + i, 1.0);
      b.rhs = L.Z1;
    }
    for (std::size_t s = 0; s < L.K; ++s) {
      if (L.C(j, s) == kNone) continue;
      auto& c = small[static_cast<std::size_t>(L.C(j, s))];
      for (std::size_t i = 0; i < L.nj[j]; ++i) c.entries.emplace_back(L.off_f[j] + i * L.K + s, 1.0);
      if (L.hasE) c.entries.emplace_back(L.off_e[j] + s, 1.0);
      c.entries.emplace_back(L.off_w + s, -1.0);
    }
    if (L.rowD[j] != kNone) {
      auto& d = small[static_cast<std::size_t>(L.rowD[j])];
      for (std::size_t s = 0; s < L.K; ++s) d.entries.emplace_back(L.off_e[j] + s, 1.0);
      d.rhs = L.z2;
    }
  }
  for (auto& s : small) lp.add_sparse_row(s.entries, s.rhs);
  return lp;
}

// ---------------------------------------------------------------------------------------------
// interior point path

class NormalSystem {
 public:
  explicit NormalSystem(const Layout& L) : L_(L), mpp_(L.NP), S_(L.NS, L.NS) {}

  // r = A x, split into point rows and small rows
  void apply(const Vec& x, Vec& rp, Vec& rs) const {
    rp.assign(L_.NP, 0.0);
    rs.assign(L_.NS, 0.0);
    const std::size_t K = L_.K;
    for (std::size_t j = 0; j < L_.m; ++j) {
      for (std::size_t i = 0; i < L_.nj[j]; ++i) {
        const double* f = &x[L_.off_f[j] + i * K];
        double acc = 0.0;
        for (std::size_t s = 0; s < K; ++s) {
          acc += f[s];
          const long c = L_.C(j, s);
          if (c != kNone) rs[static_cast<std::size_t>(c)] += f[s];
        }
        if (L_.hasD) {
          const double d = x[L_.off_d[j] + i];
          acc += d;
          if (L_.rowB[j] != kNone) rs[static_cast<std::size_t>(L_.rowB[j])] += d;
        }
        rp[L_.off_p[j] + i] = acc;
      }
      for (std::size_t s = 0; s < K; ++s) {
        const long c = L_.C(j, s);
        double e = L_.hasE ? x[L_.off_e[j] + s] : 0.0;
        if (c != kNone) rs[static_cast<std::size_t>(c)] += e - x[L_.off_w + s];
        if (L_.hasE && L_.rowD[j] != kNone) rs[static_cast<std::size_t>(L_.rowD[j])] += e;
      }
    }
  }

  // out = A^T y
  void apply_t(const Vec& yp, const Vec& ys, Vec& out) const {
    out.assign(L_.N, 0.0);
    const std::size_t K = L_.K;
    auto ysr = [&](long r) { return r == kNone ? 0.0 : ys[static_cast<std::size_t>(r)]; };
    for (std::size_t j = 0; j < L_.m; ++j) {
      const double yb = ysr(L_.rowB[j]);
      const double yd = ysr(L_.rowD[j]);
      for (std::size_t i = 0; i < L_.nj[j]; ++i) {
        const double u = yp[L_.off_p[j] + i];
        double* f = &out[L_.off_f[j] + i * K];
        for (std::size_t s = 0; s < K; ++s) f[s] = u + ysr(L_.C(j, s));
        if (L_.hasD) out[L_.off_d[j] + i] = u + yb;
      }
      for (std::size_t s = 0; s < K; ++s) {
        const double yc = ysr(L_.C(j, s));
        if (L_.hasE) out[L_.off_e[j] + s] = yc + yd;
        out[L_.off_w + s] -= yc;
      }
    }
  }

  // Factor A D A^T through the Schur complement on the small rows.
  void factor(const Vec& D) {
    D_ = &D;
    const std::size_t K = L_.K;
    S_.setZero();
    for (std::size_t j = 0; j < L_.m; ++j) {
      const std::size_t nj = L_.nj[j];
      Eigen::MatrixXd V(static_cast<Eigen::Index>(nj), static_cast<Eigen::Index>(K + 1));
      Eigen::VectorXd colsum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K + 1));
      for (std::size_t i = 0; i < nj; ++i) {
        const double* df = &D[L_.off_f[j] + i * K];
        double diag = 0.0;
        for (std::size_t s = 0; s < K; ++s) diag += df[s];
        const double dd = L_.hasD ? D[L_.off_d[j] + i] : 0.0;
        diag += dd;
        mpp_[L_.off_p[j] + i] = diag;
        const double inv = 1.0 / std::sqrt(diag);
        for (std::size_t s = 0; s < K; ++s) {
          V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) = df[s] * inv;
          colsum(static_cast<Eigen::Index>(s)) += df[s];
        }
        V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(K)) = dd * inv;
        colsum(static_cast<Eigen::Index>(K)) += dd;
      }
      Eigen::MatrixXd Gm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K + 1), static_cast<Eigen::Index>(K + 1));
      Gm.selfadjointView<Eigen::Lower>().rankUpdate(V.transpose(), -1.0);
      for (Eigen::Index t = 0; t <= static_cast<Eigen::Index>(K); ++t) Gm(t, t) += colsum(t);
      // scatter: local index s < K -> C_js, K -> B_j
      auto global = [&](std::size_t loc) { return loc < K ? L_.C(j, loc) : L_.rowB[j]; };
      for (std::size_t a = 0; a <= K; ++a) {
        const long ga = global(a);
        if (ga == kNone) continue;
        for (std::size_t b = 0; b <= a; ++b) {
          const long gb = global(b);
          if (gb == kNone) continue;
          const double v = Gm(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
          S_(ga, gb) += v;
          if (ga != gb) S_(gb, ga) += v;
        }
      }
      for (std::size_t s = 0; s < K; ++s) {
        const double de = L_.hasE ? D[L_.off_e[j] + s] : 0.0;
        const long c = L_.C(j, s);
        const long d = L_.rowD[j];
        if (!L_.hasE) continue;
        if (c != kNone) S_(c, c) += de;
        if (d != kNone) S_(d, d) += de;
        if (c != kNone && d != kNone) {
          S_(c, d) += de;
          S_(d, c) += de;
        }
      }
    }
    // w couples C_js across all j
    for (std::size_t s = 0; s < K; ++s) {
      const double dw = D[L_.off_w + s];
      for (std::size_t j = 0; j < L_.m; ++j) {
        const long a = L_.C(j, s);
        if (a == kNone) continue;
        for (std::size_t jj = 0; jj < L_.m; ++jj) {
          const long b = L_.C(jj, s);
          if (b != kNone) S_(a, b) += dw;
        }
      }
    }
    double scale = 0.0;
    for (Eigen::Index t = 0; t < S_.rows(); ++t) scale = std::max(scale, S_(t, t));
    double reg = 1e-14 * std::max(scale, 1e-300);
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::MatrixXd Sr = S_;
      Sr.diagonal().array() += reg;
      llt_.compute(Sr);
      if (llt_.info() == Eigen::Success) return;
      reg *= 100.0;
    }
    throw Error(ErrorCode::NumericalBreakdown, "normal equations are not positive definite");
  }

  // Solve (A D A^T) y = r for the factored D.
  void solve(const Vec& rp, const Vec& rs, Vec& yp, Vec& ys) const {
    const Vec& D = *D_;
    const std::size_t K = L_.K;
    Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(rs.data(), static_cast<Eigen::Index>(L_.NS));
    for (std::size_t j = 0; j < L_.m; ++j)
      for (std::size_t i = 0; i < L_.nj[j]; ++i) {
        const double q = rp[L_.off_p[j] + i] / mpp_[L_.off_p[j] + i];
        const double* df = &D[L_.off_f[j] + i * K];
        for (std::size_t s = 0; s < K; ++s) {
          const long c = L_.C(j, s);
          if (c != kNone) t(c) -= df[s] * q;
        }
        if (L_.hasD && L_.rowB[j] != kNone) t(L_.rowB[j]) -= D[L_.off_d[j] + i] * q;
      }
    Eigen::VectorXd y = llt_.solve(t);
    ys.assign(y.data(), y.data() + y.size());
    yp.assign(L_.NP, 0.0);
    for (std::size_t j = 0; j < L_.m; ++j)
      for (std::size_t i = 0; i < L_.nj[j]; ++i) {
        const double* df = &D[L_.off_f[j] + i * K];
        double acc = rp[L_.off_p[j] + i];
        for (std::size_t s = 0; s < K; ++s) {
          const long c = L_.C(j, s);
          if (c != kNone) acc -= df[s] * ys[static_cast<std::size_t>(c)];
        }
        if (L_.hasD && L_.rowB[j] != kNone) acc -= D[L_.off_d[j] + i] * ys[static_cast<std::size_t>(L_.rowB[j])];
        yp[L_.off_p[j] + i] = acc / mpp_[L_.off_p[j] + i];
      }
  }

  // y = (A D A^T)^{-1} r with one step of iterative refinement
  void solve_refined(const Vec& rp, const Vec& rs, Vec& yp, Vec& ys) const {
    solve(rp, rs, yp, ys);
    Vec tmp, ap, as;
    apply_t(yp, ys, tmp);
    const Vec& D = *D_;
    for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] *= D[k];
    apply(tmp, ap, as);
    for (std::size_t k = 0; k < ap.size(); ++k) ap[k] = rp[k] - ap[k];
    for (std::size_t k = 0; k < as.size(); ++k) as[k] = rs[k] - as[k];
    Vec dp, ds;
    solve(ap, as, dp, ds);
    for (std::size_t k = 0; k < yp.size(); ++k) yp[k] += dp[k];
    for (std::size_t k = 0; k < ys.size(); ++k) ys[k] += ds[k];
  }

 private:
  const Layout& L_;
  Vec mpp_;
  Eigen::MatrixXd S_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  const Vec* D_ = nullptr;
};

struct IpmResult {
  Vec x, yp, ys;
  std::size_t iterations = 0;
};

double norm_inf(const Vec& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

double dot(const Vec& a, const Vec& b) {
  double r = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) r += a[k] * b[k];
  return r;
}

double step_to_boundary(const Vec& v, const Vec& dv) {
  double a = 1.0;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (dv[k] < 0.0) a = std::min(a, -v[k] / dv[k]);
  return a;
}

// Mehrotra predictor-corrector on min c^T x, A x = b, x >= 0.
IpmResult run_ipm(const Layout& L) {
  NormalSystem ns(L);
  const std::size_t N = L.N;
  Vec c(N, 0.0);
  for (std::size_t j = 0; j < L.m; ++j)
    std::copy(L.cost[j].begin(), L.cost[j].end(), c.begin() + static_cast<long>(L.off_f[j]));
  Vec bp(L.NP), bs(L.NS, 0.0);
  for (std::size_t j = 0; j < L.m; ++j) {
    for (std::size_t i = 0; i < L.nj[j]; ++i) bp[L.off_p[j] + i] = L.mass[j][i];
    if (L.rowB[j] != kNone) bs[static_cast<std::size_t>(L.rowB[j])] = L.Z1;
    if (L.rowD[j] != kNone) bs[static_cast<std::size_t>(L.rowD[j])] = L.z2;
  }
  const double bnorm = std::max(norm_inf(bp), norm_inf(bs));
  const double cnorm = norm_inf(c);

  // starting point
  Vec ones(N, 1.0), x, s, yp, ys, tp, ts;
  ns.factor(ones);
  ns.solve_refined(bp, bs, tp, ts);
  ns.apply_t(tp, ts, x);
  Vec acp, acs;
  ns.apply(c, acp, acs);
  ns.solve_refined(acp, acs, yp, ys);
  ns.apply_t(yp, ys, s);
  for (std::size_t k = 0; k < N; ++k) s[k] = c[k] - s[k];
  {
    double dx = 0.0, ds = 0.0;
    for (std::size_t k = 0; k < N; ++k) dx = std::max(dx, -1.5 * x[k]), ds = std::max(ds, -1.5 * s[k]);
    for (std::size_t k = 0; k < N; ++k) x[k] += dx, s[k] += ds;
    const double xs = dot(x, s);
    double sx = 0.0, ss = 0.0;
    for (std::size_t k = 0; k < N; ++k) sx += x[k], ss += s[k];
    const double ddx = 0.5 * xs / std::max(ss, 1e-300), dds = 0.5 * xs / std::max(sx, 1e-300);
    for (std::size_t k = 0; k < N; ++k) {
      x[k] += ddx;
      s[k] += dds;
      if (x[k] <= 0.0) x[k] = 1e-8;
      if (s[k] <= 0.0) s[k] = 1e-8;
    }
  }

  IpmResult res;
  Vec rp, rs, rc(N), D(N), dyp, dys, dx(N), dsv(N), tmp, qp, qs, dxa(N), dsa(N);
  const int max_iter = 200;
  for (int it = 0; it < max_iter; ++it) {
    ns.apply(x, rp, rs);
    for (std::size_t k = 0; k < rp.size(); ++k) rp[k] = bp[k] - rp[k];
    for (std::size_t k = 0; k < rs.size(); ++k) rs[k] = bs[k] - rs[k];
    ns.apply_t(yp, ys, tmp);
    for (std::size_t k = 0; k < N; ++k) rc[k] = c[k] - tmp[k] - s[k];
    const double mu = dot(x, s) / static_cast<double>(N);
    const double pobj = dot(c, x);
    const double dobj = dot(bp, yp) + dot(bs, ys);
    const double pres = std::max(norm_inf(rp), norm_inf(rs)) / (1.0 + bnorm);
    const double dres = norm_inf(rc) / (1.0 + cnorm);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    log_debug("ipm it=" + std::to_string(it) + " pres=" + std::to_string(pres) + " dres=" +
              std::to_string(dres) + " gap=" + std::to_string(gap));
    res.iterations = static_cast<std::size_t>(it);
    if (pres < 1e-10 && dres < 1e-10 && gap < 1e-10) break;
    if (it + 1 == max_iter) {
      if (pres < 1e-7 && dres < 1e-7 && gap < 1e-7) break;
      throw Error(ErrorCode::NumericalBreakdown, "interior point method did not converge");
    }

    for (std::size_t k = 0; k < N; ++k) D[k] = x[k] / s[k];
    ns.factor(D);

    // direction for a given complementarity target r_xs: returns dx, ds
    auto direction = [&](const Vec& rxs) {
      for (std::size_t k = 0; k < N; ++k) tmp[k] = D[k] * rc[k] - rxs[k] / s[k];
      ns.apply(tmp, qp, qs);
      for (std::size_t k = 0; k < qp.size(); ++k) qp[k] += rp[k];
      for (std::size_t k = 0; k < qs.size(); ++k) qs[k] += rs[k];
      ns.solve_refined(qp, qs, dyp, dys);
      ns.apply_t(dyp, dys, tmp);
      for (std::size_t k = 0; k < N; ++k) {
        dsv[k] = rc[k] - tmp[k];
        dx[k] = rxs[k] / s[k] - D[k] * dsv[k];
      }
    };

    Vec rxs(N);
    for (std::size_t k = 0; k < N; ++k) rxs[k] = -x[k] * s[k];
    direction(rxs);
    const double ap_aff = step_to_boundary(x, dx), ad_aff = step_to_boundary(s, dsv);
    double mu_aff = 0.0;
    for (std::size_t k = 0; k < N; ++k) mu_aff += (x[k] + ap_aff * dx[k]) * (s[k] + ad_aff * dsv[k]);
    mu_aff /= static_cast<double>(N);
    const double sigma = std::pow(mu_aff / mu, 3.0);
    dxa = dx;
    dsa = dsv;
    for (std::size_t k = 0; k < N; ++k) rxs[k] = -x[k] * s[k] - dxa[k] * dsa[k] + sigma * mu;
    direction(rxs);
    const Vec dyp_c = dyp, dys_c = dys;

    const double eta = 0.995;
    const double ap = std::min(1.0, eta * step_to_boundary(x, dx));
    const double ad = std::min(1.0, eta * step_to_boundary(s, dsv));
    for (std::size_t k = 0; k < N; ++k) {
      x[k] += ap * dx[k];
      s[k] += ad * dsv[k];
    }
    for (std::size_t k = 0; k < yp.size(); ++k) yp[k] += ad * dyp_c[k];
    for (std::size_t k = 0; k < ys.size(); ++k) ys[k] += ad * dys_c[k];
  }
  res.x = std::move(x);
  res.yp = std::move(yp);
  res.ys = std::move(ys);
  return res;
}

struct ActiveSolve {
  Vec w;         // scaled weights on the active set
  Vec yp;        // point-row duals (scaled costs)
  Vec yd;        // D_j duals, 0 when absent
  double objective = 0.0;  // scaled
  std::string backend;
  std::size_t iterations = 0;
};

bool use_simplex(const Layout& L, const std::string& forced) {
  if (forced == "simplex") return true;
  if (forced == "ipm") return false;
  const double rows = static_cast<double>(L.NP + L.NS);
  return rows <= 150.0 && rows * static_cast<double>(L.N) <= 4e5;
}

ActiveSolve solve_active(const Layout& L, const std::string& forced) {
  ActiveSolve out;
  out.yd.assign(L.m, 0.0);
  if (use_simplex(L, forced)) {
    LpSolution sol = solve_lp(layout_to_lp(L));
    if (sol.status != LpStatus::Optimal)
      throw Error(ErrorCode::LpInfeasible, "fixed-support LP reported no optimum");
    out.w.assign(sol.x.begin() + static_cast<long>(L.off_w), sol.x.end());
    out.yp.assign(sol.duals.begin(), sol.duals.begin() + static_cast<long>(L.NP));
    for (std::size_t j = 0; j < L.m; ++j)
      if (L.rowD[j] != kNone) out.yd[j] = sol.duals[L.NP + static_cast<std::size_t>(L.rowD[j])];
    out.objective = sol.objective;
    out.backend = "simplex";
    out.iterations = sol.iterations;
    return out;
  }
  IpmResult r = run_ipm(L);
  out.w.assign(r.x.begin() + static_cast<long>(L.off_w), r.x.end());
  out.yp = r.yp;
  for (std::size_t j = 0; j < L.m; ++j)
    if (L.rowD[j] != kNone) out.yd[j] = r.ys[static_cast<std::size_t>(L.rowD[j])];
  double obj = 0.0;
  for (std::size_t j = 0; j < L.m; ++j)
    for (std::size_t k = 0; k < L.cost[j].size(); ++k) obj += L.cost[j][k] * r.x[L.off_f[j] + k];
  out.objective = obj;
  out.backend = "ipm";
  out.iterations = r.iterations;
  return out;
}

void check_inputs(const Instance& inst, const PointMatrix& G, double z_remove, double z2) {
  if (G.empty()) throw Error(ErrorCode::EmptySupport, "candidate support is empty");
  if (G.dim() != inst.dim()) throw Error(ErrorCode::DimMismatch, "support dimension differs from the instance");
  if (!(z_remove >= 0.0) || !(z_remove < inst.n()))
    throw Error(ErrorCode::BadOutlierMass, "z_remove must satisfy 0 <= z_remove < n");
  if (!(z2 >= 0.0)) throw Error(ErrorCode::BadOutlierMass, "z2 must be nonnegative");
  if (z_remove + z2 >= inst.n() && z2 > 0.0)
    throw Error(ErrorCode::BadOutlierMass, "z_remove + z2 must stay below n");
}

double max_cost(const Instance& inst, const PointMatrix& G, const std::vector<std::size_t>& active) {
  double c = 0.0;
  for (const auto& P : inst.distributions())
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t s : active) c = std::max(c, cost_from_squared(squared_distance(P.point(i), G[s]), inst.l()));
  return c > 0.0 ? c : 1.0;
}

}  // namespace

LpProblem wb_as_lp(const Instance& inst, const PointMatrix& G, double z_remove, double z2) {
  check_inputs(inst, G, z_remove, z2);
  std::vector<std::size_t> all(G.size());
  std::iota(all.begin(), all.end(), 0);
  return layout_to_lp(make_layout(inst, G, all, z_remove, z2, 1.0, 1.0));
}

WbLpResult solve_wb_lp(const Instance& inst, const PointMatrix& G, double z_remove, double z2,
                       const WbLpOptions& opt) {
  check_inputs(inst, G, z_remove, z2);
  const double mass_scale = inst.n();
  const std::size_t total = G.size();

  std::vector<std::size_t> active;
  if (total <= opt.colgen_threshold) {
    active.resize(total);
    std::iota(active.begin(), active.end(), 0);
  } else {
    // seed the active set with the candidates nearest to a spread of input points
    std::vector<char> in(total, 0);
    std::size_t pooled = 0;
    for (const auto& P : inst.distributions()) pooled += P.size();
    const std::size_t stride = std::max<std::size_t>(1, pooled / 32);
    std::size_t idx = 0;
    for (const auto& P : inst.distributions())
      for (std::size_t i = 0; i < P.size(); ++i, ++idx) {
        if (idx % stride != 0) continue;
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < total; ++g) {
          double d = squared_distance(P.point(i), G[g]);
          if (d < bd) bd = d, best = g;
        }
        if (!in[best]) in[best] = 1, active.push_back(best);
      }
    std::sort(active.begin(), active.end());
  }

  std::size_t iterations = 0;
  std::string backend;
  while (true) {
    const double cscale = max_cost(inst, G, active);
    Layout L = make_layout(inst, G, active, z_remove, z2, cscale, mass_scale);
    ActiveSolve sol = solve_active(L, opt.backend);
    iterations += sol.iterations;
    backend = sol.backend;
    if (active.size() == total) {
      WbLpResult r;
      r.weights.assign(total, 0.0);
      for (std::size_t s = 0; s < active.size(); ++s) r.weights[active[s]] = std::max(0.0, sol.w[s]) * mass_scale;
      r.objective = sol.objective * cscale * mass_scale;
      r.backend = backend + (total > opt.colgen_threshold ? "+colgen" : "");
      r.iterations = iterations;
      return r;
    }

    // price every inactive candidate
    std::vector<char> in(total, 0);
    for (std::size_t s : active) in[s] = 1;
    const double inv_m = 1.0 / static_cast<double>(inst.m());
    std::vector<std::pair<double, std::size_t>> entering;
    for (std::size_t g = 0; g < total; ++g) {
      if (in[g]) continue;
      double sum = 0.0;
      for (std::size_t j = 0; j < inst.m(); ++j) {
        const auto& P = inst.distribution(j);
        double bound = L.hasE ? -sol.yd[j] : std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < P.size(); ++i) {
          const double c = cost_from_squared(squared_distance(P.point(i), G[g]), inst.l()) * inv_m / cscale;
          bound = std::min(bound, c - sol.yp[L.off_p[j] + i]);
        }
        sum += bound;
      }
      if (sum < -1e-7) entering.emplace_back(sum, g);
    }
    log_debug("colgen active=" + std::to_string(active.size()) + " entering=" + std::to_string(entering.size()));
    if (entering.empty()) {
      WbLpResult r;
      r.weights.assign(total, 0.0);
      for (std::size_t s = 0; s < active.size(); ++s) r.weights[active[s]] = std::max(0.0, sol.w[s]) * mass_scale;
      r.objective = sol.objective * cscale * mass_scale;
      r.backend = backend + "+colgen";
      r.iterations = iterations;
      return r;
    }
    std::sort(entering.begin(), entering.end());
    const std::size_t batch = std::min<std::size_t>(entering.size(), 64);
    for (std::size_t t = 0; t < batch; ++t) active.push_back(entering[t].second);
    std::sort(active.begin(), active.end());
  }
}

}  // namespace rwb
