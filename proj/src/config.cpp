#include "mexp/config.hpp"

#include <charconv>
#include <sstream>

#include "mexp/errors.hpp"
#include "mexp/format.hpp"

namespace mexp {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& raw, const std::string& what) {
    const std::string s = trim(raw);
    T v{};
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size())
        throw UsageError("invalid value '" + raw + "' for " + what);
    return v;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s;
}

}  // namespace

double parse_double(const std::string& s, const std::string& what) { return parse_number<double>(s, what); }
std::uint64_t parse_u64(const std::string& s, const std::string& what) { return parse_number<std::uint64_t>(s, what); }
int parse_int(const std::string& s, const std::string& what) { return parse_number<int>(s, what); }

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_double(item, what));
    if (out.empty()) throw UsageError("empty list for " + what);
    return out;
}

ExperimentConfig ExperimentConfig::defaults_for(const std::string& command) {
    ExperimentConfig c;
    c.command = command;
    if (command == "entropy") {
        c.system = "doubling";
        c.n_max = 14;
        c.x_probes = 30;
    } else if (command == "generator") {
        c.system = "doubling";
        c.n_max = 12;
    }
    return c;
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key), value = trim(raw_value);
    if (key == "command") command = value;
    else if (key == "system") system = value;
    else if (key == "param") {
        const auto eq = value.find('=');
        if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + value + "'");
        params[trim(value.substr(0, eq))] = parse_double(value.substr(eq + 1), "param " + value.substr(0, eq));
    } else if (key.rfind("param.", 0) == 0) params[key.substr(6)] = parse_double(value, key);
    else if (key == "power") {
        power = parse_int(value, key);
        if (power < 1) throw UsageError("power must be at least 1");
    } else if (key == "measure") measure = value;
    else if (key == "sampling") {
        if (value != "automatic" && value != "global" && value != "localized")
            throw UsageError("sampling must be automatic, global or localized");
        sampling = value;
    } else if (key == "sided") {
        if (value == "one") sided = Sided::one_sided;
        else if (value == "two") sided = Sided::two_sided;
        else if (value == "auto") sided.reset();
        else throw UsageError("sided must be one, two or auto");
    } else if (key == "center") center = parse_list(value, key);
    else if (key == "delta") delta = parse_double(value, key);
    else if (key == "delta_grid") delta_grid = parse_list(value, key);
    else if (key == "n_max") n_max = parse_int(value, key);
    else if (key == "samples") samples = parse_u64(value, key);
    else if (key == "x_probes") x_probes = parse_int(value, key);
    else if (key == "threshold") threshold = parse_double(value, key);
    else if (key == "seed") seed = parse_u64(value, key);
    else if (key == "cover_radius") cover_radius = parse_double(value, key);
    else if (key == "cover_spacing") cover_spacing = parse_double(value, key);
    else if (key == "sequences") sequences = parse_int(value, key);
    else if (key == "cases") {
        cases.clear();
        std::stringstream in(value);
        std::string item;
        while (std::getline(in, item, ','))
            if (!trim(item).empty()) cases.push_back(trim(item));
    } else throw UsageError("unknown configuration key '" + key + "'");
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream out;
    out << "command = " << command << "\n";
    out << "system = " << system << "\n";
    for (const auto& [k, v] : params) out << "param." << k << " = " << num(v) << "\n";
    out << "power = " << power << "\n";
    out << "measure = " << measure << "\n";
    out << "sampling = " << sampling << "\n";
    out << "sided = " << (!sided ? "auto" : *sided == Sided::one_sided ? "one" : "two") << "\n";
    out << "center = " << join(center) << "\n";
    out << "delta = " << num(delta) << "\n";
    out << "delta_grid = " << join(delta_grid) << "\n";
    out << "n_max = " << n_max << "\n";
    out << "samples = " << samples << "\n";
    out << "x_probes = " << x_probes << "\n";
    out << "threshold = " << num(threshold) << "\n";
    out << "seed = " << seed << "\n";
    out << "cover_radius = " << num(cover_radius) << "\n";
    out << "cover_spacing = " << num(cover_spacing) << "\n";
    out << "sequences = " << sequences << "\n";
    out << "cases = ";
    for (std::size_t i = 0; i < cases.size(); ++i) out << (i ? "," : "") << cases[i];
    out << "\n";
    return out.str();
}

void ExperimentConfig::apply_text(const std::string& text) {
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        set(key, t.substr(eq + 1));
    }
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    ExperimentConfig c;
    c.params.clear();
    c.cases.clear();
    c.apply_text(text);
    return c;
}

}  // namespace mexp
