// Lanczos iteration for the algebraic connectivity. The all-ones vector
// spans the Laplacian's null space for every graph, so the iteration runs
// in its orthogonal complement and the smallest Ritz value there converges
// to lambda_2.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "segmeter/errors.hpp"
#include "segmeter/kernels.hpp"
#include "segmeter/measures.hpp"

namespace segmeter {
namespace {

void laplacian_apply(const Graph& g, std::span<const double> x, std::span<double> y) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
        double acc = static_cast<double>(g.degree(u)) * x[u];
        for (NodeId v : g.neighbors(u)) acc -= x[v];
        y[u] = acc;
    }
}

void remove_mean(std::span<double> x) {
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / static_cast<double>(x.size());
    for (double& v : x) v -= mean;
}

double norm(std::span<const double> x) { return std::sqrt(kernels::dot(x, x)); }

}  // namespace

double fiedler_lanczos(const Graph& g, double tolerance) {
    const std::size_t n = g.node_count();
    if (n < 2) throw DomainError("Fiedler value needs at least 2 nodes");
    const std::size_t max_steps = n - 1;  // dimension of the complement of 1

    // Deterministic pseudo-random start vector.
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i)
        q[i] = static_cast<double>(kernels::mix64(i + 0x51ed270b27a1f3c5ULL) >> 11) * 0x1.0p-53 - 0.5;
    remove_mean(q);
    double qn = norm(q);
    if (qn == 0.0) throw NumericalError("Lanczos start vector vanished");
    for (double& v : q) v /= qn;

    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    basis.push_back(q);
    std::vector<double> w(n);

    double ritz = 0.0;
    for (std::size_t j = 0; j < max_steps; ++j) {
        const auto& v = basis[j];
        laplacian_apply(g, v, w);
        remove_mean(w);
        const double a = kernels::dot(w, v);
        alpha.push_back(a);
        kernels::axpy(-a, v, w);
        if (j > 0) kernels::axpy(-beta[j - 1], basis[j - 1], w);
        // Full reorthogonalization, two passes.
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) kernels::axpy(-kernels::dot(w, b), b, w);
        remove_mean(w);
        const double b = norm(w);

        const bool exhausted = j + 1 == max_steps || b < 1e-12;
        const bool check = exhausted || (j + 1) % 8 == 0;
        if (check) {
            const auto m = static_cast<Eigen::Index>(alpha.size());
            Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
            Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
            for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
            if (tri.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolve failed");
            ritz = tri.eigenvalues()(0);
            const double residual = b * std::abs(tri.eigenvectors()(m - 1, 0));
            if (exhausted || residual <= tolerance * std::max(1.0, std::abs(ritz))) return ritz;
        }
        beta.push_back(b);
        std::vector<double> next(w);
        for (double& x : next) x /= b;
        basis.push_back(std::move(next));
    }
    return ritz;
}

}  // namespace segmeter
