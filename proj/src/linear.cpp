#include "mexp/linear.hpp"

#include <cmath>
#include <complex>

#include "mexp/errors.hpp"

namespace mexp {

std::vector<double> LinearMapSpec::eigen_moduli() const {
    std::vector<double> out;
    if (matrix.rows() == 0) return out;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, false);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(std::abs(solver.eigenvalues()[i]));
    return out;
}

const char* to_string(GammaZeroClass c) {
    switch (c) {
        case GammaZeroClass::trivial: return "trivial";
        case GammaZeroClass::positive_volume: return "positive_volume";
        case GammaZeroClass::lower_dimensional: return "lower_dimensional";
    }
    return "?";
}

GammaZeroReport linear_gamma_zero(const LinearMapSpec& m, double delta, double tol) {
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (m.matrix.rows() != m.matrix.cols()) throw DomainError("matrix must be square");
    GammaZeroReport report;
    const Eigen::Index n = m.matrix.rows();
    if (n == 0) return report;
    if (std::abs(m.matrix.determinant()) < tol) throw DomainError("matrix is singular");

    Eigen::EigenSolver<Eigen::MatrixXd> solver(m.matrix, false);
    const Eigen::VectorXcd lambda = solver.eigenvalues();
    bool all_unit = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mod = std::abs(lambda[i]);
        report.moduli.push_back(mod);
        if (std::abs(mod - 1.0) > tol) all_unit = false;
    }
    if (!all_unit) {
        report.cls = GammaZeroClass::lower_dimensional;
        return report;
    }

    // bounded orbits need every eigenvalue to be semisimple
    const Eigen::MatrixXcd a = m.matrix.cast<std::complex<double>>();
    const double scale = std::max(1.0, m.matrix.norm());
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index algebraic = 0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (std::abs(lambda[j] - lambda[i]) < 1e-6) ++algebraic;
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(a - lambda[i] * Eigen::MatrixXcd::Identity(n, n));
        lu.setThreshold(1e-8 * scale);
        const Eigen::Index geometric = n - lu.rank();
        if (geometric < algebraic) {
            report.cls = GammaZeroClass::lower_dimensional;
            report.jordan_caveat = true;
            return report;
        }
    }
    report.cls = GammaZeroClass::positive_volume;
    return report;
}

}  // namespace mexp
