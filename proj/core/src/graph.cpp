#include "qsync/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

namespace qsync {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidGraph: return "invalid graph";
    case ErrorCode::NotStronglyConnected: return "graph not strongly connected";
    case ErrorCode::EigensolverFailure: return "eigensolver failure";
    case ErrorCode::NonPositiveRealPart: return "eigenvalue with nonpositive real part";
    case ErrorCode::DegenerateSampling: return "degenerate sampling period";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::SpectralRadiusTooLarge: return "spectral radius not below one";
    case ErrorCode::EpsilonTooSmall: return "epsilon too small";
    case ErrorCode::BelowThreshold: return "quantizer range below threshold";
    case ErrorCode::ZoomRangeTooSmall: return "zoom range too small";
    case ErrorCode::InfeasibleSamplingPeriod: return "infeasible sampling period";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

DirectedGraph::DirectedGraph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n_ < 2) {
    throw Error(ErrorCode::InvalidGraph, "graph needs at least two nodes");
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges_) {
    if (e.receiver >= n_ || e.sender >= n_) {
      throw Error(ErrorCode::InvalidGraph, "edge endpoint out of range");
    }
    if (e.receiver == e.sender) {
      throw Error(ErrorCode::InvalidGraph,
                  "self-loop at node " + std::to_string(e.receiver + 1));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::InvalidGraph, "edge weights must be positive and finite");
    }
    if (!seen.emplace(e.receiver, e.sender).second) {
      throw Error(ErrorCode::InvalidGraph,
                  "duplicate edge (" + std::to_string(e.receiver + 1) + ", " +
                      std::to_string(e.sender + 1) + ")");
    }
  }
}

Mat DirectedGraph::adjacency() const {
  Mat A = Mat::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  for (const auto& e : edges_) {
    A(static_cast<Eigen::Index>(e.receiver), static_cast<Eigen::Index>(e.sender)) = e.weight;
  }
  return A;
}

Laplacian build_laplacian(const DirectedGraph& g) {
  Mat L = -g.adjacency();
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    L(i, i) = 0.0;
    double s = 0.0;
    for (Eigen::Index j = 0; j < L.cols(); ++j) {
      if (j != i) s -= L(i, j);
    }
    L(i, i) = s;
  }
  return Laplacian(std::move(L));
}

Laplacian Laplacian::from_matrix(Mat L) {
  if (L.rows() != L.cols() || L.rows() < 2) {
    throw Error(ErrorCode::InvalidArgument, "Laplacian must be square with n >= 2");
  }
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    double scale = 0.0;
    for (Eigen::Index j = 0; j < L.cols(); ++j) {
      if (i != j && L(i, j) > 0.0) {
        throw Error(ErrorCode::InvalidArgument, "Laplacian off-diagonal entries must be <= 0");
      }
      scale += std::abs(L(i, j));
    }
    if (std::abs(L.row(i).sum()) > 1e-12 * std::max(1.0, scale)) {
      throw Error(ErrorCode::InvalidArgument, "Laplacian rows must sum to zero");
    }
  }
  return Laplacian(std::move(L));
}

namespace {

std::vector<bool> reachable(const DirectedGraph& g, bool along_information_flow) {
  // Information flows sender -> receiver.
  std::vector<std::vector<std::size_t>> next(g.size());
  for (const auto& e : g.edges()) {
    if (along_information_flow) {
      next[e.sender].push_back(e.receiver);
    } else {
      next[e.receiver].push_back(e.sender);
    }
  }
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (auto w : next[u]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

// Swap adjacent diagonal entries k, k+1 of a complex upper-triangular T with a
// unitary plane rotation, updating the accumulated Schur vectors Z.
void swap_schur_pair(CMat& T, CMat& Z, Eigen::Index k) {
  const Complex a = T(k, k);
  const Complex b = T(k + 1, k + 1);
  const Complex t = T(k, k + 1);
  // Eigenvector of [[a, t], [0, b]] for eigenvalue b.
  Complex v0 = t;
  Complex v1 = b - a;
  const double nrm = std::hypot(std::abs(v0), std::abs(v1));
  if (nrm == 0.0) return;
  v0 /= nrm;
  v1 /= nrm;
  Eigen::Matrix2cd G;
  G << v0, -std::conj(v1), v1, std::conj(v0);

  const Eigen::Index n = T.rows();
  T.middleCols(k, 2) = (T.middleCols(k, 2) * G).eval();
  T.middleRows(k, 2) = (G.adjoint() * T.middleRows(k, 2)).eval();
  T(k + 1, k) = Complex(0.0, 0.0);
  T(k, k) = b;
  T(k + 1, k + 1) = a;
  for (Eigen::Index i = k + 2; i < n; ++i) T(i, k) = T(i, k + 1) = Complex(0.0, 0.0);
  Z.middleCols(k, 2) = (Z.middleCols(k, 2) * G).eval();
}

}  // namespace

bool is_strongly_connected(const DirectedGraph& g) {
  const auto fwd = reachable(g, true);
  const auto bwd = reachable(g, false);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

bool spectral_order(const Complex& a, const Complex& b) noexcept {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

LaplacianSpectrum spectral_decomposition(const Laplacian& laplacian) {
  const Mat& L = laplacian.matrix();
  const Eigen::Index n = L.rows();

  // Null space of Lᵀ from the SVD; a second (near) zero singular value means
  // the zero eigenvalue is not simple.
  Eigen::JacobiSVD<Mat> svd(L.transpose(), Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  if (sv(n - 2) <= 1e-10 * scale) {
    throw Error(ErrorCode::NotStronglyConnected,
                "zero Laplacian eigenvalue has multiplicity > 1");
  }
  Vec xi = svd.matrixV().col(n - 1);
  xi /= xi.sum();
  if (!xi.allFinite() || xi.minCoeff() <= 1e-12) {
    throw Error(ErrorCode::NotStronglyConnected,
                "left null vector has a nonpositive component");
  }

  // Columns 1..n-1 of the Householder reflector built from ξ span ξ^⊥, which
  // is L-invariant because ξᵀL = 0.
  Eigen::HouseholderQR<Mat> qr{Mat(xi)};
  const Mat Qfull = qr.householderQ() * Mat::Identity(n, n);
  const Mat Q = Qfull.rightCols(n - 1);
  const Mat reduced = Q.transpose() * L * Q;

  Eigen::ComplexSchur<CMat> schur(reduced.cast<Complex>());
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "complex Schur decomposition failed");
  }
  CMat T = schur.matrixT();
  CMat Z = schur.matrixU();
  for (Eigen::Index i = 0; i < T.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) T(i, j) = Complex(0.0, 0.0);
  }

  // Bubble sort of the diagonal by (Re, Im) using adjacent Schur swaps.
  const Eigen::Index m = n - 1;
  for (Eigen::Index pass = 0; pass < m; ++pass) {
    bool swapped = false;
    for (Eigen::Index k = 0; k + 1 < m - pass; ++k) {
      if (spectral_order(T(k + 1, k + 1), T(k, k))) {
        swap_schur_pair(T, Z, k);
        swapped = true;
      }
    }
    if (!swapped) break;
  }

  LaplacianSpectrum out;
  out.xi = xi;
  out.basis = Q.cast<Complex>() * Z;
  const Mat projector = Mat::Identity(n, n) - Vec::Ones(n) * xi.transpose();
  out.dual_basis = Z.adjoint() * (Q.transpose() * projector).cast<Complex>();
  // Real eigenvalues come out of the complex Schur form with round-off
  // imaginary parts; snap those so real modes use the real-λ formulas.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(T(i, i).imag()) <= 1e-12 * std::max(1.0, std::abs(T(i, i)))) {
      T(i, i).imag(0.0);
    }
  }
  out.triangular = T;
  out.lambdas.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(T(i, i).real() > 0.0)) {
      throw Error(ErrorCode::NotStronglyConnected,
                  "nonzero Laplacian eigenvalue with nonpositive real part");
    }
    out.lambdas.push_back(T(i, i));
  }
  return out;
}

DirectedGraph parse_graph(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t declared = 0;
  std::size_t largest = 0;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::Parse, "graph line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string head;
    fields >> head;
    if (head == "n") {
      long long count = 0;
      if (!(fields >> count) || count < 2) fail("bad node count");
      declared = static_cast<std::size_t>(count);
      continue;
    }
    long long i = 0;
    long long j = 0;
    double w = 0.0;
    std::istringstream record(line);
    if (!(record >> i >> j >> w)) fail("expected `i j a_ij`");
    std::string extra;
    if (record >> extra && extra[0] != '#') fail("trailing characters");
    if (i < 1 || j < 1) fail("node ids are one-based");
    edges.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), w});
    largest = std::max({largest, static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
  }
  if (declared != 0 && largest > declared) {
    throw Error(ErrorCode::Parse, "edge references node beyond declared n");
  }
  return DirectedGraph(declared != 0 ? declared : largest, std::move(edges));
}

DirectedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open graph file " + path);
  return parse_graph(in);
}

void write_graph(std::ostream& out, const DirectedGraph& g) {
  out << "n " << g.size() << '\n';
  out << std::setprecision(17);
  for (const auto& e : g.edges()) {
    out << e.receiver + 1 << ' ' << e.sender + 1 << ' ' << e.weight << '\n';
  }
}

}  // namespace qsync
