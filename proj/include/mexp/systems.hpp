#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mexp/denjoy.hpp"
#include "mexp/geometry.hpp"
#include "mexp/kernels.hpp"
#include "mexp/verdict.hpp"

namespace mexp {

using PointMap = std::function<Point(const Point&)>;
using JacobianMap = std::function<Eigen::MatrixXd(const Point&)>;

/// A continuous self-map of a compact metric space, with optional inverse
/// and Jacobian, plus the closed-form kernel when one exists.
struct SystemSpec {
    std::string name;
    Space space = Space::circle();
    PointMap forward;
    PointMap inverse;
    JacobianMap jacobian;
    bool isometry = false;
    std::map<std::string, double> params;
    std::optional<kernels::Spec> kernel;
    /// Verdict the theory predicts, keyed by canonical measure name.
    std::map<std::string, Verdict> expected;
    /// Present for the Denjoy system.
    std::shared_ptr<const DenjoyConstruction> denjoy;

    bool invertible() const { return static_cast<bool>(inverse); }
    Point operator()(const Point& x) const { return forward(x); }
};

/// f^n(x); negative n uses the inverse and throws CapabilityError without one.
Point iterate(const SystemSpec& f, Point x, long n);

/// f^k by composition (k >= 1). Keeps the kernel, the Jacobian via the chain rule,
/// and the isometry flag.
SystemSpec power(const SystemSpec& f, int k);

/// phi∘f∘phi^-1.
SystemSpec conjugate(const SystemSpec& f, PointMap phi, PointMap phi_inverse, std::string name);

SystemSpec make_identity(const Space& space = Space::circle());
SystemSpec make_rotation(double alpha);
SystemSpec make_doubling();
SystemSpec make_cat();
SystemSpec make_interval_square();
SystemSpec make_tent();
SystemSpec make_denjoy(const DenjoyConstruction& d);

/// identity, rotation, doubling, cat, interval-square, denjoy, tent.
std::vector<SystemSpec> make_zoo();

}  // namespace mexp
