#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mexp {

/// A linear isomorphism of R^n. Leb on R^n is not a probability, so this is
/// classified analytically instead of sampled.
struct LinearMapSpec {
    Eigen::MatrixXd matrix;

    std::vector<double> eigen_moduli() const;
};

enum class GammaZeroClass { trivial, positive_volume, lower_dimensional };

const char* to_string(GammaZeroClass c);

struct GammaZeroReport {
    GammaZeroClass cls = GammaZeroClass::trivial;
    bool jordan_caveat = false;  // a modulus-one eigenvalue is defective
    std::vector<double> moduli;
};

/// Shape of {y : sup_n |A^n y| <= delta}. Throws DomainError for a singular
/// matrix or non-positive delta.
GammaZeroReport linear_gamma_zero(const LinearMapSpec& m, double delta, double tol = 1e-10);

}  // namespace mexp
