#include "mexp/registry.hpp"

#include <cmath>
#include <numbers>

#include "mexp/errors.hpp"

namespace mexp {

namespace {

double take(Params& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    const double v = it->second;
    p.erase(it);
    return v;
}

void reject_rest(const Params& rest, const std::string& system) {
    if (!rest.empty()) throw UsageError("unknown parameter '" + rest.begin()->first + "' for system " + system);
}

}  // namespace

std::vector<std::string> system_names() {
    return {"identity", "rotation", "doubling", "cat", "interval-square", "denjoy", "tent"};
}

SystemSpec make_system(const std::string& name, const Params& params) {
    Params p = params;
    SystemSpec f;
    if (name == "identity") {
        f = make_identity();
    } else if (name == "rotation") {
        f = make_rotation(take(p, "alpha", golden_conjugate()));
    } else if (name == "doubling") {
        f = make_doubling();
    } else if (name == "cat") {
        f = make_cat();
    } else if (name == "interval-square") {
        f = make_interval_square();
    } else if (name == "tent") {
        f = make_tent();
    } else if (name == "denjoy") {
        const double alpha = take(p, "alpha", golden_conjugate());
        const double n = take(p, "N", 64.0);
        const double profile = take(p, "profile", 2.0);
        if (n != std::floor(n)) throw UsageError("denjoy parameter N must be an integer");
        f = make_denjoy(build_denjoy(alpha, static_cast<int>(n), profile));
    } else {
        throw UsageError("unknown system '" + name + "' (see --list)");
    }
    reject_rest(p, name);
    return f;
}

std::vector<std::string> measure_names() {
    return {"lebesgue", "denjoy-minimal", "dirac:<x>", "pushforward-square", "pushforward-sine"};
}

PointMap sine_squared() {
    return [](const Point& x) {
        Point y = x;
        const double s = std::sin(0.5 * std::numbers::pi * x.x[0]);
        y.x[0] = std::min(s * s, x.kind == SpaceKind::circle ? std::nextafter(1.0, 0.0) : 1.0);
        return y;
    };
}

MeasureSpec make_measure(const std::string& name, const SystemSpec& f) {
    const Space& space = f.space;
    if (name == "lebesgue") return make_lebesgue(space);
    if (name == "denjoy-minimal") {
        if (space.kind() != SpaceKind::circle) throw UsageError("denjoy-minimal lives on the circle");
        if (f.denjoy) return make_denjoy_minimal(f.denjoy);
        return make_denjoy_minimal(build_denjoy(golden_conjugate()));
    }
    if (name.rfind("dirac:", 0) == 0) {
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(name.substr(6), &used);
            if (used != name.size() - 6) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw UsageError("malformed measure '" + name + "'; expected dirac:<x>");
        }
        std::vector<double> coords(space.dim(), v);
        try {
            return make_dirac(space.point(coords));
        } catch (const DomainError& e) {
            throw UsageError(std::string("bad dirac atom: ") + e.what());
        }
    }
    if (name == "pushforward-square") {
        if (space.dim() != 1) throw UsageError("pushforward-square needs a 1-D space");
        return pushforward(make_lebesgue(space), square_map(space), "pushforward-square");
    }
    if (name == "pushforward-sine") {
        if (space.dim() != 1) throw UsageError("pushforward-sine needs a 1-D space");
        return pushforward(make_lebesgue(space), sine_squared(), "pushforward-sine");
    }
    throw UsageError("unknown measure '" + name + "' (see --list)");
}

}  // namespace mexp
