#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sublin/errors.hpp"
#include "sublin/graph.hpp"

namespace sublin {

struct SpectralLimits {
  std::size_t dense_limit = 4096;
  // Cyclic Jacobi up to this size, Eigen's tridiagonal QR above it.
  std::size_t jacobi_limit = 256;
};

struct SpectralProfile {
  std::vector<double> eigenvalues;  // ascending
  double tolerance = 0;
  const char* method = "jacobi";

  double lambda(std::size_t k) const { return eigenvalues.at(k - 1); }  // 1-based
  double lambda2() const { return eigenvalues.size() >= 2 ? eigenvalues[1] : 0.0; }
  double lambda_max() const { return eigenvalues.back(); }
};

inline bool is_connected(const Graph& g) {
  if (g.n() == 0) return true;
  std::vector<char> seen(g.n(), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.n();
}

// I - D^{-1/2} A D^{-1/2}. A self-loop adds 2 to A(u,u), matching its
// contribution to the degree.
inline Eigen::MatrixXd normalized_laplacian(const Graph& g, const SpectralLimits& lim = {},
                                            bool require_connected = true) {
  if (g.n() > lim.dense_limit) throw LimitError("exceeds brute-force limit (dense n)");
  if (require_connected && !is_connected(g)) throw ParameterError("graph is disconnected");
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Vertex v = 0; v < g.n(); ++v)
    for (auto w : g.neighbors(v)) a(v, w) += 1.0;
  Eigen::VectorXd s(n);
  for (Vertex v = 0; v < g.n(); ++v) s(v) = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  Eigen::MatrixXd l = -(s.asDiagonal() * a * s.asDiagonal());
  l.diagonal().array() += 1.0;
  return l;
}

inline double off_diagonal_norm(const Eigen::MatrixXd& m) {
  double s = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

// Cyclic Jacobi sweeps until the off-diagonal Frobenius norm is below 1e-12.
inline SpectralProfile jacobi_eigenvalues(Eigen::MatrixXd a, int max_sweeps = 100) {
  const Eigen::Index n = a.rows();
  double off = off_diagonal_norm(a);
  for (int sweep = 0; sweep < max_sweeps && off >= 1e-12; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
    off = off_diagonal_norm(a);
  }
  SpectralProfile prof;
  prof.eigenvalues.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) prof.eigenvalues[i] = a(i, i);
  std::sort(prof.eigenvalues.begin(), prof.eigenvalues.end());
  prof.tolerance = off + 64.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                             std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
  prof.method = "jacobi";
  return prof;
}

inline SpectralProfile eigenvalues_symmetric(const Eigen::MatrixXd& m, const SpectralLimits& lim = {}) {
  if (m.rows() != m.cols()) throw ParameterError("matrix is not square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ParameterError("matrix is not symmetric");
  if (static_cast<std::size_t>(m.rows()) <= lim.jacobi_limit) return jacobi_eigenvalues(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
  SpectralProfile prof;
  prof.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(prof.eigenvalues.begin(), prof.eigenvalues.end());
  prof.tolerance = 64.0 * static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() *
                   std::max(1.0, m.norm());
  prof.method = "tridiagonal-qr";
  return prof;
}

inline SpectralProfile spectrum(const Graph& g, const SpectralLimits& lim = {}) {
  return eigenvalues_symmetric(normalized_laplacian(g, lim), lim);
}

// Bottom r eigenvectors of the normalized Laplacian (columns), connectivity not required.
inline Eigen::MatrixXd bottom_eigenvectors(const Graph& g, std::size_t r, Eigen::VectorXd* values = nullptr,
                                           const SpectralLimits& lim = {}) {
  Eigen::MatrixXd l = normalized_laplacian(g, lim, false);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
  if (values) *values = es.eigenvalues().head(static_cast<Eigen::Index>(r));
  return es.eigenvectors().leftCols(static_cast<Eigen::Index>(r));
}

}  // namespace sublin
