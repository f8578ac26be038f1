#include "mexp/systems.hpp"

#include <cmath>

#include "mexp/errors.hpp"

namespace mexp {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::evidence_expansive: return "evidence_expansive";
        case Verdict::evidence_not_expansive: return "evidence_not_expansive";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(Sided s) { return s == Sided::one_sided ? "one_sided" : "two_sided"; }

namespace {

// The scalar formulas below match src/kernels/ bit for bit.
double wrap_step(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? r - 1.0 : r;
}

Eigen::MatrixXd scalar_matrix(double v) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = v;
    return m;
}

}  // namespace

Point iterate(const SystemSpec& f, Point x, long n) {
    if (n < 0 && !f.invertible()) throw CapabilityError(f.name + " has no inverse; cannot iterate backwards");
    for (long i = 0; i < n; ++i) x = f.forward(x);
    for (long i = 0; i < -n; ++i) x = f.inverse(x);
    return x;
}

SystemSpec power(const SystemSpec& f, int k) {
    if (k < 1) throw DomainError("power must be at least 1");
    if (k == 1) return f;
    SystemSpec g = f;
    g.name = f.name + "^" + std::to_string(k);
    g.params["power"] = k * (f.params.count("power") ? f.params.at("power") : 1.0);
    auto fwd = f.forward;
    g.forward = [fwd, k](const Point& x) {
        Point y = x;
        for (int i = 0; i < k; ++i) y = fwd(y);
        return y;
    };
    if (f.inverse) {
        auto inv = f.inverse;
        g.inverse = [inv, k](const Point& x) {
            Point y = x;
            for (int i = 0; i < k; ++i) y = inv(y);
            return y;
        };
    }
    if (f.jacobian) {
        auto jac = f.jacobian;
        g.jacobian = [fwd, jac, k](const Point& x) {
            Point y = x;
            Eigen::MatrixXd acc = jac(y);
            for (int i = 1; i < k; ++i) {
                y = fwd(y);
                acc = jac(y) * acc;
            }
            return acc;
        };
    }
    if (g.kernel) g.kernel->power *= k;
    return g;
}

SystemSpec conjugate(const SystemSpec& f, PointMap phi, PointMap phi_inverse, std::string name) {
    SystemSpec g;
    g.name = std::move(name);
    g.space = f.space;
    g.params = f.params;
    g.expected = f.expected;
    auto fwd = f.forward;
    g.forward = [phi, phi_inverse, fwd](const Point& y) { return phi(fwd(phi_inverse(y))); };
    if (f.inverse) {
        auto inv = f.inverse;
        g.inverse = [phi, phi_inverse, inv](const Point& y) { return phi(inv(phi_inverse(y))); };
    }
    return g;
}

SystemSpec make_identity(const Space& space) {
    SystemSpec f;
    f.name = "identity";
    f.space = space;
    f.forward = [](const Point& x) { return x; };
    f.inverse = [](const Point& x) { return x; };
    f.jacobian = [dim = space.dim()](const Point&) {
        return Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)).eval();
    };
    f.isometry = true;
    if (space.kind() == SpaceKind::circle) f.kernel = kernels::Spec{kernels::Kind::identity};
    f.expected["lebesgue"] = Verdict::evidence_not_expansive;
    return f;
}

SystemSpec make_rotation(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("rotation angle must lie in [0,1)");
    SystemSpec f;
    f.name = "rotation";
    f.space = Space::circle();
    f.params["alpha"] = alpha;
    f.forward = [alpha](const Point& x) {
        Point y = x;
        double u = x.x[0] + alpha;
        y.x[0] = u >= 1.0 ? u - 1.0 : u;
        return y;
    };
    f.inverse = [alpha](const Point& x) {
        Point y = x;
        double u = x.x[0] - alpha;
        y.x[0] = u < 0.0 ? u + 1.0 : u;
        return y;
    };
    f.jacobian = [](const Point&) { return scalar_matrix(1.0); };
    f.isometry = true;
    f.kernel = kernels::Spec{kernels::Kind::rotation, alpha};
    f.expected["lebesgue"] = Verdict::evidence_not_expansive;
    f.expected["denjoy-minimal"] = Verdict::evidence_not_expansive;
    return f;
}

SystemSpec make_doubling() {
    SystemSpec f;
    f.name = "doubling";
    f.space = Space::circle();
    f.forward = [](const Point& x) {
        Point y = x;
        double u = x.x[0] + x.x[0];
        y.x[0] = u - std::floor(u);
        return y;
    };
    f.jacobian = [](const Point&) { return scalar_matrix(2.0); };
    f.kernel = kernels::Spec{kernels::Kind::doubling};
    f.expected["lebesgue"] = Verdict::evidence_expansive;
    return f;
}

SystemSpec make_cat() {
    SystemSpec f;
    f.name = "cat";
    f.space = Space::torus2();
    f.forward = [](const Point& x) {
        Point y = x;
        const double u = x.x[0], v = x.x[1];
        y.x[0] = wrap_step((u + u) + v);
        y.x[1] = wrap_step(u + v);
        return y;
    };
    f.inverse = [](const Point& x) {
        Point y = x;
        const double u = x.x[0], v = x.x[1];
        y.x[0] = wrap_step(u - v);
        y.x[1] = wrap_step((v + v) - u);
        return y;
    };
    f.jacobian = [](const Point&) {
        Eigen::MatrixXd m(2, 2);
        m << 2.0, 1.0, 1.0, 1.0;
        return m;
    };
    f.kernel = kernels::Spec{kernels::Kind::cat};
    f.expected["lebesgue"] = Verdict::evidence_expansive;
    return f;
}

SystemSpec make_interval_square() {
    SystemSpec f;
    f.name = "interval-square";
    f.space = Space::interval();
    f.forward = [](const Point& x) {
        Point y = x;
        y.x[0] = x.x[0] * x.x[0];
        return y;
    };
    f.inverse = [](const Point& x) {
        Point y = x;
        y.x[0] = std::sqrt(x.x[0]);
        return y;
    };
    f.jacobian = [](const Point& x) { return scalar_matrix(2.0 * x.x[0]); };
    f.kernel = kernels::Spec{kernels::Kind::square};
    f.expected["lebesgue"] = Verdict::evidence_not_expansive;
    f.expected["pushforward-square"] = Verdict::evidence_not_expansive;
    f.expected["pushforward-sine"] = Verdict::evidence_not_expansive;
    return f;
}

SystemSpec make_tent() {
    SystemSpec f;
    f.name = "tent";
    f.space = Space::interval();
    f.forward = [](const Point& x) {
        Point y = x;
        const double u = x.x[0];
        y.x[0] = 1.0 - std::fabs((u + u) - 1.0);
        return y;
    };
    f.jacobian = [](const Point& x) { return scalar_matrix(x.x[0] < 0.5 ? 2.0 : -2.0); };
    f.kernel = kernels::Spec{kernels::Kind::tent};
    f.expected["lebesgue"] = Verdict::evidence_expansive;
    return f;
}

SystemSpec make_denjoy(const DenjoyConstruction& d) {
    auto shared = std::make_shared<const DenjoyConstruction>(d);
    SystemSpec f;
    f.name = "denjoy";
    f.space = Space::circle();
    f.params["alpha"] = d.alpha;
    f.params["N"] = d.gap_bound;
    f.params["profile"] = d.profile;
    f.denjoy = shared;
    f.forward = [shared](const Point& x) {
        Point y = x;
        y.x[0] = shared->map(x.x[0]);
        return y;
    };
    f.inverse = [shared](const Point& x) {
        Point y = x;
        y.x[0] = shared->inverse_map(x.x[0]);
        return y;
    };
    f.expected["denjoy-minimal"] = Verdict::evidence_expansive;
    return f;
}

std::vector<SystemSpec> make_zoo() {
    return {make_identity(),        make_rotation(golden_conjugate()), make_doubling(), make_cat(),
            make_interval_square(), make_denjoy(build_denjoy(golden_conjugate())), make_tent()};
}

}  // namespace mexp
