#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qsync/types.hpp"

namespace qsync {

/// One nonzero adjacency entry a_ij > 0: node `receiver` (i) hears node
/// `sender` (j). Indices are zero-based in memory; files use one-based ids.
struct Edge {
  std::size_t receiver;
  std::size_t sender;
  double weight;

  bool operator==(const Edge&) const = default;
};

/// Weighted digraph without self-loops or duplicate entries.
class DirectedGraph {
 public:
  /// Throws Error(InvalidGraph) on self-loops, duplicates, out-of-range ids,
  /// nonpositive or non-finite weights, or n < 2.
  DirectedGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Dense adjacency matrix [a_ij].
  Mat adjacency() const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

/// L = diag(row sums of A) - A. Immutable once built.
class Laplacian {
 public:
  /// Accepts any square matrix with nonpositive off-diagonals whose rows sum
  /// to zero (relative tolerance 1e-12); throws Error(InvalidArgument) otherwise.
  static Laplacian from_matrix(Mat L);

  const Mat& matrix() const noexcept { return L_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(L_.rows()); }

 private:
  explicit Laplacian(Mat L) : L_(std::move(L)) {}
  friend Laplacian build_laplacian(const DirectedGraph& g);

  Mat L_;
};

/// Spectral objects of a strongly connected Laplacian.
///
/// `basis` (P̂, n x (n-1)) and `dual_basis` (P̂†, (n-1) x n) satisfy
/// P̂†P̂ = I, P̂†1 = 0, ξᵀP̂ = 0, 1ξᵀ + P̂P̂† = I and P̂†LP̂ = `triangular`,
/// an upper-triangular matrix whose diagonal is `lambdas` in (Re, Im) order.
struct LaplacianSpectrum {
  Vec xi;
  std::vector<Complex> lambdas;
  CMat basis;
  CMat dual_basis;
  CMat triangular;

  double xi_max() const { return xi.maxCoeff(); }
};

Laplacian build_laplacian(const DirectedGraph& g);

bool is_strongly_connected(const DirectedGraph& g);

/// Left null vector, nonzero eigenvalues and a triangularizing basis of the
/// complement of the consensus direction. Throws Error(NotStronglyConnected)
/// when the zero eigenvalue is not simple or ξ has a component <= 1e-12.
LaplacianSpectrum spectral_decomposition(const Laplacian& L);

/// Lexicographic (Re, Im) ordering used for all reported spectra.
bool spectral_order(const Complex& a, const Complex& b) noexcept;

/// Edge-list reader: `i j a_ij` per line, `#` comments, optional `n <count>`
/// header. Node ids are one-based. Throws Error(Parse) with the line number.
DirectedGraph parse_graph(std::istream& in);
DirectedGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const DirectedGraph& g);

/// Ten-node strongly connected digraph shipped as the default topology for
/// simulation runs (see data/standin10.graph).
DirectedGraph standin_graph();

}  // namespace qsync
