#include "qwalk/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace qwalk {

namespace {

// Greedy global matching of two equal-length complex sets by distance:
// smallest pairwise distances claimed first, each index used once.
std::vector<int> match_by_proximity(const Vector& a, const Vector& b) {
    const int n = static_cast<int>(a.size());
    struct Cand { double d; int i, j; };
    std::vector<Cand> cands;
    cands.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cands.push_back({std::abs(a[i] - b[j]), i, j});
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.d != y.d) return x.d < y.d;
        if (x.i != y.i) return x.i < y.i;
        return x.j < y.j;
    });
    std::vector<int> match(n, -1);
    std::vector<char> used(n, 0);
    int placed = 0;
    for (const Cand& c : cands) {
        if (placed == n) break;
        if (match[c.i] >= 0 || used[c.j]) continue;
        match[c.i] = c.j;
        used[c.j] = 1;
        ++placed;
    }
    return match;
}

} // namespace

EigenSystem eig_general(const Matrix& M) {
    if (M.rows() != M.cols())
        throw invalid_parameter("eig_general: matrix must be square");
    const int n = static_cast<int>(M.rows());
    if (n == 0)
        throw invalid_parameter("eig_general: empty matrix");
    if (n > 1024)
        throw invalid_parameter("eig_general: dimension " + std::to_string(n) +
                                " exceeds the dense-solver limit of 1024");

    Eigen::ComplexEigenSolver<Matrix> right(M, true);
    if (right.info() != Eigen::Success)
        throw error("eig_general: eigensolver failed to converge");
    Eigen::ComplexEigenSolver<Matrix> left(M.adjoint(), true);
    if (left.info() != Eigen::Success)
        throw error("eig_general: adjoint eigensolver failed to converge");

    EigenSystem sys;
    sys.values = right.eigenvalues();
    sys.right_vectors = right.eigenvectors();

    // M^H has eigenvalues conj(lambda); match conj(left values) to values.
    const Vector left_conj = left.eigenvalues().conjugate();
    sys.pairing = match_by_proximity(sys.values, left_conj);

    const double scale = std::max(1.0, sys.values.cwiseAbs().maxCoeff());
    sys.left_vectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        sys.left_vectors.col(i) = left.eigenvectors().col(sys.pairing[i]);
        if (std::abs(sys.values[i] - left_conj[sys.pairing[i]]) > 1e-6 * scale)
            sys.degraded = true; // matched partner is suspiciously far away
    }

    // Unit-normalize right vectors (defensive; the solver already does).
    for (int i = 0; i < n; ++i) {
        const double r = sys.right_vectors.col(i).norm();
        if (r > 0.0) sys.right_vectors.col(i) /= r;
        const double l = sys.left_vectors.col(i).norm();
        if (l > 0.0) sys.left_vectors.col(i) /= l;
    }

    // Cluster (near-)degenerate eigenvalues and re-biorthogonalize each
    // cluster with a dense solve on its small subspace: L_c <- L_c O^{-H}
    // with O = L_c^H R_c, which restores L_c^H R_c = I.
    const double cluster_tol = 1e-8 * scale;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const complexd a = sys.values[i], b = sys.values[j];
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<std::vector<int>> clusters;
    for (int k = 0; k < n; ++k) {
        if (!clusters.empty()) {
            const int prev = clusters.back().back();
            if (std::abs(sys.values[order[k]] - sys.values[prev]) < cluster_tol) {
                clusters.back().push_back(order[k]);
                continue;
            }
        }
        clusters.push_back({order[k]});
    }

    double min_cos = 1.0;
    for (const auto& cluster : clusters) {
        const int k = static_cast<int>(cluster.size());
        Matrix R(n, k), L(n, k);
        for (int c = 0; c < k; ++c) {
            R.col(c) = sys.right_vectors.col(cluster[c]);
            L.col(c) = sys.left_vectors.col(cluster[c]);
        }
        const Matrix O = L.adjoint() * R;
        const Eigen::JacobiSVD<Matrix> svd(O);
        const double smin = svd.singularValues().minCoeff();
        min_cos = std::min(min_cos, smin);
        if (smin < 1e-12) {
            sys.degraded = true; // defective cluster; leave unit-norm vectors
            continue;
        }
        if (k == 1) {
            sys.left_vectors.col(cluster[0]) = L.col(0) / std::conj(O(0, 0));
        } else {
            // L <- L O^{-H}  =>  (L O^{-H})^H R = O^{-1} L^H R = I
            const Matrix Lnew = O.partialPivLu().solve(L.adjoint()).adjoint();
            for (int c = 0; c < k; ++c)
                sys.left_vectors.col(cluster[c]) = Lnew.col(c);
        }
        if (smin < 1e-8) sys.degraded = true;
    }
    sys.min_biorthogonality = min_cos;
    return sys;
}

complexd quasienergy_from_eigenvalue(complexd lambda) {
    if (lambda == complexd(0.0, 0.0))
        throw invalid_parameter("quasienergy is undefined for a zero eigenvalue");
    double re = -std::arg(lambda);          // in [-pi, pi)
    if (re <= -std::numbers::pi) re = std::numbers::pi;
    return complexd(re, std::log(std::abs(lambda)));
}

} // namespace qwalk
