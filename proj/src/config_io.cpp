#include "qpr/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qpr/errors.hpp"

namespace qpr {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) throw ConfigError(std::string("unknown config field \"") + key + "\" in " + where);
    }
}

template <typename T>
T get_as(const json& obj, const char* where, const char* key) {
    if (!obj.contains(key))
        throw ConfigError(std::string("missing config field \"") + key + "\" in " + where);
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for \"") + key + "\" in " + where + ": " + e.what());
    }
}

template <typename T>
void maybe(const json& obj, const char* where, const char* key, T& into) {
    if (!obj.contains(key)) return;
    try {
        into = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for \"") + key + "\" in " + where + ": " + e.what());
    }
}

FourierSeries parse_forcing(const json& arr, int dim) {
    if (!arr.is_array()) throw ConfigError("\"forcing\" must be an array of {nu, re, im} records");
    FourierSeries f(dim, true);
    for (const auto& rec : arr) {
        if (!rec.is_object()) throw ConfigError("forcing entries must be {nu, re, im} records");
        reject_unknown(rec, "forcing entry", {"nu", "re", "im"});
        auto nu = get_as<std::vector<int>>(rec, "forcing entry", "nu");
        if (static_cast<int>(nu.size()) != dim)
            throw ConfigError("forcing mode length does not match the frequency dimension");
        double re = 0.0, im = 0.0;
        maybe(rec, "forcing entry", "re", re);
        maybe(rec, "forcing entry", "im", im);
        f.add_coeff(nu, {re, im});
    }
    double defect = f.conjugacy_defect();
    if (defect > 1e-13) {
        std::ostringstream os;
        os << "forcing is not a real function (conjugacy defect " << defect
           << "); list both +nu and -nu with conjugate coefficients";
        throw ConfigError(os.str());
    }
    return f;
}

}  // namespace

Config parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(root, "config root",
                   {"omega", "forcing", "g", "epsilon", "solve", "diagnose", "oracle", "attract",
                    "sweep"});

    Config cfg;
    cfg.problem.omega.omega = get_as<std::vector<double>>(root, "config root", "omega");
    if (cfg.problem.omega.omega.empty()) throw ConfigError("\"omega\" must be nonempty");
    const int dim = cfg.problem.omega.dim();

    if (!root.contains("forcing")) throw ConfigError("missing config field \"forcing\" in config root");
    cfg.problem.forcing = parse_forcing(root.at("forcing"), dim);

    if (!root.contains("g")) throw ConfigError("missing config field \"g\" in config root");
    const json& g = root.at("g");
    if (!g.is_object()) throw ConfigError("\"g\" must be an object with c0 and coeffs");
    reject_unknown(g, "g", {"c0", "coeffs"});
    double c0 = get_as<double>(g, "g", "c0");
    auto coeffs = get_as<std::vector<double>>(g, "g", "coeffs");
    cfg.problem.g = Nonlinearity::from_polynomial(coeffs, c0);

    cfg.problem.epsilon = get_as<double>(root, "config root", "epsilon");

    if (root.contains("solve")) {
        const json& s = root.at("solve");
        reject_unknown(s, "solve", {"order", "grid"});
        maybe(s, "solve", "order", cfg.solve.order);
        maybe(s, "solve", "grid", cfg.solve.grid);
    }
    if (root.contains("diagnose")) {
        const json& d = root.at("diagnose");
        reject_unknown(d, "diagnose", {"n_max", "budget"});
        maybe(d, "diagnose", "n_max", cfg.diagnose.n_max);
        maybe(d, "diagnose", "budget", cfg.diagnose.budget);
    }
    if (root.contains("oracle")) {
        const json& o = root.at("oracle");
        reject_unknown(o, "oracle", {"k_max", "tree_budget"});
        maybe(o, "oracle", "k_max", cfg.oracle.k_max);
        maybe(o, "oracle", "tree_budget", cfg.oracle.tree_budget);
    }
    if (root.contains("attract")) {
        const json& a = root.at("attract");
        reject_unknown(a, "attract", {"offsets", "t_end", "dt", "threshold"});
        maybe(a, "attract", "offsets", cfg.attract.offsets);
        maybe(a, "attract", "t_end", cfg.attract.t_end);
        maybe(a, "attract", "dt", cfg.attract.dt);
        maybe(a, "attract", "threshold", cfg.attract.threshold);
    }
    if (root.contains("sweep")) {
        const json& s = root.at("sweep");
        reject_unknown(s, "sweep", {"eps", "orders"});
        maybe(s, "sweep", "eps", cfg.sweep.eps);
        maybe(s, "sweep", "orders", cfg.sweep.orders);
    }
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(std::complex<double> v) { return fmt(v.real()) + " " + fmt(v.imag()); }

std::string fmt_mode(const Mode& nu) {
    std::string out;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(nu[i]);
    }
    return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("atomic rename to " + path.string() + " failed: " + ec.message());
}

std::string serialize_series(const FourierSeries& s) {
    std::string out;
    for (const auto& [nu, c] : s.terms()) {
        out += fmt_mode(nu);
        out += ' ';
        out += fmt(c);
        out += '\n';
    }
    return out;
}

FourierSeries deserialize_series(const std::string& text, int dim, bool declared_real) {
    FourierSeries s(dim, declared_real);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string mode_text;
        double re = 0.0, im = 0.0;
        if (!(ls >> mode_text >> re >> im))
            throw ConfigError("bad series line: " + line);
        Mode nu;
        std::istringstream ms(mode_text);
        std::string comp;
        while (std::getline(ms, comp, ',')) nu.push_back(std::stoi(comp));
        s.set_coeff(nu, {re, im});
    }
    return s;
}

}  // namespace qpr
