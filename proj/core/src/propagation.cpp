#include "qsync/propagation.hpp"

#include <cmath>

namespace qsync {

namespace {

Mat block2x2(double a, double b, double c, double d, std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Mat out = Mat::Zero(2 * m, 2 * m);
  out.topLeftCorner(m, m).diagonal().setConstant(a);
  out.topRightCorner(m, m).diagonal().setConstant(b);
  out.bottomLeftCorner(m, m).diagonal().setConstant(c);
  out.bottomRightCorner(m, m).diagonal().setConstant(d);
  return out;
}

}  // namespace

Mat harmonic_flow(double omega, double dt, std::size_t n) {
  const double s = std::sin(omega * dt);
  const double c = std::cos(omega * dt);
  return block2x2(c, s / omega, -omega * s, c, n);
}

Mat forcing_integral(double omega, double dt, std::size_t n) {
  const double s = std::sin(omega * dt);
  const double c = std::cos(omega * dt);
  return block2x2(s / omega, (1.0 - c) / (omega * omega), c - 1.0, s / omega, n);
}

Mat coupling_block(const Mat& L) {
  const Eigen::Index n = L.rows();
  Mat B = Mat::Zero(2 * n, 2 * n);
  B.bottomRightCorner(n, n) = -L;
  return B;
}

Flow assemble_flow(double omega, double dt, const Mat& L) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "flow interval must be positive");
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  const auto n = static_cast<std::size_t>(L.rows());
  Flow flow;
  flow.F = forcing_integral(omega, dt, n);
  flow.E = harmonic_flow(omega, dt, n) + flow.F * coupling_block(L);
  return flow;
}

CMat double_basis(const CMat& P) {
  CMat out = CMat::Zero(2 * P.rows(), 2 * P.cols());
  out.topLeftCorner(P.rows(), P.cols()) = P;
  out.bottomRightCorner(P.rows(), P.cols()) = P;
  return out;
}

CMat reduced_map(const Mat& E, const LaplacianSpectrum& spectrum) {
  if (E.rows() != 2 * spectrum.basis.rows() || E.cols() != E.rows()) {
    throw Error(ErrorCode::InvalidArgument, "flow matrix and spectral basis sizes differ");
  }
  return double_basis(spectrum.dual_basis) * E.cast<Complex>() * double_basis(spectrum.basis);
}

SystemMatrices build_system(double omega, double tau, const Laplacian& L,
                            const LaplacianSpectrum& spectrum) {
  if (spectrum.basis.rows() != L.matrix().rows()) {
    throw Error(ErrorCode::InvalidArgument, "spectrum does not belong to this Laplacian");
  }
  const auto n = L.size();
  SystemMatrices sys;
  sys.omega = omega;
  sys.tau = tau;
  sys.L = L.matrix();
  const Flow flow = assemble_flow(omega, tau, sys.L);
  sys.expA = harmonic_flow(omega, tau, n);
  sys.F = flow.F;
  sys.B = coupling_block(sys.L);
  sys.E = flow.E;
  sys.basis2 = double_basis(spectrum.basis);
  sys.dual2 = double_basis(spectrum.dual_basis);
  sys.E_hat = sys.dual2 * sys.E.cast<Complex>() * sys.basis2;
  return sys;
}

}  // namespace qsync
