#include "qsync/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qsync {

EpsNorm::EpsNorm(CMat U, CMat U_inv, Vec scale)
    : U_(std::move(U)), U_inv_(std::move(U_inv)), scale_(std::move(scale)) {}

double EpsNorm::operator()(const CVec& x) const {
  return (scale_.cast<Complex>().asDiagonal() * (U_ * x)).cwiseAbs().maxCoeff();
}

double EpsNorm::induced(const CMat& S) const { return inf_norm(forward() * S * inverse()); }

CMat EpsNorm::forward() const { return scale_.cast<Complex>().asDiagonal() * U_; }

CMat EpsNorm::inverse() const {
  return U_inv_ * scale_.cwiseInverse().cast<Complex>().asDiagonal();
}

double dense_spectral_radius(const CMat& M) {
  Eigen::ComplexEigenSolver<CMat> solver(M, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "dense eigensolve failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

constexpr double kMaxCoupling = 1e4;

std::vector<Eigen::Index> cluster_eigenvalues(const CMat& R, double gap) {
  const Eigen::Index m = R.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(m));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (std::abs(R(i, i) - R(j, j)) <= gap) {
        const auto a = find(i);
        const auto b = find(j);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  std::vector<Eigen::Index> label(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) label[static_cast<std::size_t>(i)] = find(i);
  return label;
}

double group_norm(const CMat& B, const std::vector<Eigen::Index>& members, const Vec& scale) {
  double worst = 0.0;
  for (auto a : members) {
    double row = 0.0;
    for (auto b : members) row += std::abs(B(a, b)) * scale(a) / scale(b);
    worst = std::max(worst, row);
  }
  return worst;
}

// Scales every row of |D U input_map| to one; fails if the group coupling
// then exceeds the bound.
bool balance_group(const CMat& B, const std::vector<Eigen::Index>& members, const Vec& gains,
                   double bound, Vec& scale) {
  Vec trial = scale;
  for (auto a : members) {
    if (!(gains(a) > 0.0) || !std::isfinite(gains(a))) return false;
    trial(a) = 1.0 / gains(a);
  }
  if (group_norm(B, members, trial) > bound * (1.0 + 1e-12)) return false;
  scale = trial;
  return true;
}

// diag(1, 1/δ, 1/δ², ...) with the largest δ in {1, ε, ε/2, ...} meeting the
// bound, then one common factor so the group's largest input row sum is one.
void damp_group(const CMat& B, const std::vector<Eigen::Index>& members, const Vec& gains,
                double bound, double eps, Vec& scale) {
  double delta = 1.0;
  for (int attempts = 0;; ++attempts) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      scale(members[a]) = std::pow(delta, -static_cast<double>(a));
    }
    if (group_norm(B, members, scale) <= bound * (1.0 + 1e-12)) break;
    if (attempts >= 200) {
      throw Error(ErrorCode::EpsilonTooSmall, "cannot damp triangular coupling below rho + eps");
    }
    delta = attempts == 0 ? std::min(1.0, eps) : delta / 2.0;
  }
  double group_gain = 0.0;
  for (auto a : members) group_gain = std::max(group_gain, scale(a) * gains(a));
  if (!(group_gain > 0.0) || !std::isfinite(group_gain)) return;
  for (auto a : members) scale(a) /= group_gain;
}

}  // namespace

EpsNorm build_eps_norm(const CMat& M, double eps, const CMat* input_map,
                       const CMat* output_map) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "eps-norm needs a nonempty square matrix");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps_norm must be positive");

  Eigen::ComplexSchur<CMat> schur(M);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "Schur decomposition of reduced map failed");
  }
  const CMat& W = schur.matrixU();
  CMat R = schur.matrixT();
  const Eigen::Index m = R.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) R(i, j) = Complex(0.0, 0.0);
  }

  const double rho = R.diagonal().cwiseAbs().maxCoeff();
  if (!(rho < 1.0)) {
    throw Error(ErrorCode::SpectralRadiusTooLarge, "rho(E_hat) >= 1");
  }
  if (!(rho + eps < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "eps_norm must satisfy rho + eps < 1");
  }

  // Unit upper-triangular Y with R Y = Y B, B zero between distinct groups.
  // Groups whose separation would make Y ill-conditioned are merged.
  auto group = cluster_eigenvalues(R, eps);
  auto same = [&](Eigen::Index i, Eigen::Index j) {
    return group[static_cast<std::size_t>(i)] == group[static_cast<std::size_t>(j)];
  };
  CMat Y;
  CMat B;
  for (bool restart = true; restart;) {
    restart = false;
    Y = CMat::Identity(m, m);
    B = CMat::Zero(m, m);
    for (Eigen::Index j = 0; j < m && !restart; ++j) {
      B(j, j) = R(j, j);
      for (Eigen::Index i = j - 1; i >= 0; --i) {
        Complex yb(0.0, 0.0);
        for (Eigen::Index k = i + 1; k < j; ++k) yb += Y(i, k) * B(k, j);
        Complex ry(0.0, 0.0);
        for (Eigen::Index k = i + 1; k <= j; ++k) ry += R(i, k) * Y(k, j);
        if (same(i, j)) {
          B(i, j) = ry - yb;
          continue;
        }
        Y(i, j) = (yb - ry) / (R(i, i) - R(j, j));
        if (std::abs(Y(i, j)) > kMaxCoupling) {
          const auto from = std::max(group[static_cast<std::size_t>(i)],
                                     group[static_cast<std::size_t>(j)]);
          const auto to = std::min(group[static_cast<std::size_t>(i)],
                                   group[static_cast<std::size_t>(j)]);
          for (auto& g : group) {
            if (g == from) g = to;
          }
          restart = true;
          break;
        }
      }
    }
  }

  CMat U_inv = W * Y;
  const CMat Y_inv = Y.triangularView<Eigen::UnitUpper>().solve(CMat::Identity(m, m));
  CMat U = Y_inv * W.adjoint();

  std::vector<std::vector<Eigen::Index>> groups;
  {
    std::vector<bool> done(static_cast<std::size_t>(m), false);
    for (Eigen::Index lead = 0; lead < m; ++lead) {
      if (done[static_cast<std::size_t>(lead)]) continue;
      groups.emplace_back();
      for (Eigen::Index j = lead; j < m; ++j) {
        if (same(lead, j)) {
          groups.back().push_back(j);
          done[static_cast<std::size_t>(j)] = true;
        }
      }
    }
  }

  const double bound = rho + eps;
  auto row_gains = [&]() -> Vec {
    if (input_map == nullptr) return Vec::Zero(m);
    return (U * *input_map).cwiseAbs().rowwise().sum();
  };
  Vec gains = row_gains();
  Vec scale = Vec::Ones(m);
  for (const auto& members : groups) {
    if (!balance_group(B, members, gains, bound, scale)) {
      damp_group(B, members, gains, bound, eps, scale);
    }
  }

  // A group of (numerically) repeated eigenvalues has no preferred basis.
  // Re-express it so that U input_map is the identity on pivot columns,
  // which localizes the modes, and keep the change if it lowers the
  // product of input and output gains.
  if (input_map != nullptr && output_map != nullptr) {
    auto objective = [&]() {
      const Vec inv = scale.cwiseInverse();
      return inf_norm(*output_map * U_inv * inv.cast<Complex>().asDiagonal()) *
             inf_norm(scale.cast<Complex>().asDiagonal() * U * *input_map);
    };
    for (const auto& members : groups) {
      const auto mc = static_cast<Eigen::Index>(members.size());
      if (mc < 2) continue;
      const CMat C = U(members, Eigen::all) * *input_map;
      Eigen::ColPivHouseholderQR<CMat> qr(C);
      if (qr.rank() < mc) continue;
      const auto& perm = qr.colsPermutation().indices();
      CMat S(mc, mc);
      for (Eigen::Index a = 0; a < mc; ++a) S.col(a) = C.col(perm(a));
      Eigen::PartialPivLU<CMat> lu(S);
      const CMat S_inv = lu.inverse();
      if (!S_inv.allFinite()) continue;

      const double before = objective();
      const CMat U_rows = U(members, Eigen::all);
      const CMat U_inv_cols = U_inv(Eigen::all, members);
      const CMat B_block = B(members, members);
      const Vec scale_old = scale;
      const Vec gains_old = gains;

      U(members, Eigen::all) = S_inv * U_rows;
      U_inv(Eigen::all, members) = U_inv_cols * S;
      B(members, members) = S_inv * B_block * S;
      gains = row_gains();
      if (balance_group(B, members, gains, bound, scale) && objective() < before) continue;

      U(members, Eigen::all) = U_rows;
      U_inv(Eigen::all, members) = U_inv_cols;
      B(members, members) = B_block;
      gains = gains_old;
      scale = scale_old;
    }
  }

  EpsNorm norm(U, U_inv, scale);
  const double achieved = norm.induced(M);
  if (!(achieved <= bound * (1.0 + 1e-9))) {
    throw Error(ErrorCode::EpsilonTooSmall, "induced norm exceeds rho + eps after construction");
  }
  return norm;
}

double default_eps_norm(double rho) noexcept { return (1.0 - rho) / 2.0; }

EpsNormFrame build_eps_frame(const SystemMatrices& sys, double eps_norm) {
  const double rho = dense_spectral_radius(sys.E_hat);
  if (!(rho < 1.0)) throw Error(ErrorCode::SpectralRadiusTooLarge, "rho(E_hat) >= 1");
  const double eps = eps_norm > 0.0 ? eps_norm : default_eps_norm(rho);
  const CMat input = sys.dual2 * (sys.F * sys.B).cast<Complex>();
  EpsNorm norm = build_eps_norm(sys.E_hat, eps, &input, &sys.basis2);
  const double norm_Ehat = norm.induced(sys.E_hat);
  const double c_out = inf_norm(sys.basis2 * norm.inverse());
  const double c_in = inf_norm(norm.forward() * input);
  return EpsNormFrame{eps, rho, std::move(norm), norm_Ehat, c_out, c_in};
}

Certificate certify(const SystemMatrices& sys, const EpsNormFrame& frame, double xi_bar,
                    double delta, double M, double eps_slack) {
  if (!(delta > 0.0) || !(M > 0.0) || !(eps_slack > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "Delta, M and eps_slack must be positive");
  }
  if (!(xi_bar > 0.0 && xi_bar < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "xi_bar must lie in (0, 1)");
  }
  const double a = frame.norm_Ehat;
  if (!(a < 1.0)) throw Error(ErrorCode::SpectralRadiusTooLarge, "||E_hat||_eps >= 1");

  Certificate cert{};
  cert.rho = frame.rho;
  cert.norm_eps = a;
  cert.xi_bar = xi_bar;
  cert.delta = delta;
  cert.M = M;
  cert.eps_slack = eps_slack;
  const double gain = frame.c_out * frame.c_in / ((1.0 - xi_bar) * (1.0 - a));
  cert.M_threshold = gain * (1.0 + eps_slack) * delta;
  cert.theta = gain * (1.0 + eps_slack) * delta / M;
  cert.S1_radius = (1.0 - xi_bar) * M / frame.c_out;
  cert.S2_radius = frame.c_in * delta * (1.0 + eps_slack) / (1.0 - a);
  cert.ultimate_radius = frame.c_in * delta / (1.0 - a);
  if (!(M > cert.M_threshold)) {
    throw Error(ErrorCode::BelowThreshold,
                "M = " + std::to_string(M) + " does not exceed the admissible threshold " +
                    std::to_string(cert.M_threshold));
  }
  const double arg = gain * delta * eps_slack / M;
  std::size_t steps = 1;
  if (a > 0.0 && arg < 1.0) {
    const double exact = std::log(arg) / std::log(a);
    steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(exact)));
  }
  cert.dwell_steps = steps;
  cert.T = static_cast<double>(steps) * sys.tau;
  return cert;
}

IntersampleTerms intersample_terms(const SystemMatrices& sys, const EpsNormFrame& frame,
                                   double dt) {
  const Flow flow = assemble_flow(sys.omega, dt, sys.L);
  const CMat reduced = sys.dual2 * flow.E.cast<Complex>() * sys.basis2;
  const CMat forcing = sys.dual2 * (flow.F * sys.B).cast<Complex>();
  return {dt, frame.norm.induced(reduced), inf_norm(frame.norm.forward() * forcing)};
}

}  // namespace qsync
