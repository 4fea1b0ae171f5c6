#include "orbital/config.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace orbital {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<ParamSpec> common_params() {
    return {
        {"seed", "int", "1", false, "base seed of the reproducible stream family"},
        {"samples", "int", "1000", false, "number of Monte Carlo realizations"},
        {"out", "string", "", false, "output path prefix (.jsonl and .csv are appended)"},
        {"symmetry", "string", "orthogonal", false, "orthogonal (real) or unitary (complex)"},
    };
}

std::vector<ParamSpec> orbital_model_params() {
    return {
        {"model.kind", "string", "wegnerOrbital", false, "wegnerOrbital or blockAnderson"},
        {"model.d", "int", "1", false, "lattice dimension"},
        {"model.L", "int", "3", false, "box half-side; sites are {-L..L}^d"},
        {"model.N", "int", "4", false, "orbitals per site"},
        {"model.g", "real", "0.3", false, "coupling constant, g >= 0"},
    };
}

std::vector<ParamSpec> deformed_params() {
    return {
        {"blocks", "list", "4,4,4,4", false, "block sizes N_1..N_k"},
        {"h0.kind", "string", "gaussian", false, "deformation: zero or gaussian"},
        {"h0.scale", "real", "0.5", false, "entry scale of the gaussian deformation"},
        {"h0.seed", "int", "7", false, "seed of the fixed deformation draw"},
    };
}

std::vector<ExperimentSchema> build_schemas() {
    std::vector<ExperimentSchema> out;

    auto add = [&](ExperimentSchema s, std::vector<std::vector<ParamSpec>> groups) {
        s.params = common_params();
        for (auto& g : groups) s.params.insert(s.params.end(), g.begin(), g.end());
        out.push_back(std::move(s));
    };

    add({"wegner",
         "Mean eigenvalue count in an interval and the ratio E N / (sum N_j |I|); "
         "probes the Wegner-type estimate for deformed block-Gaussian and orbital models."},
        {orbital_model_params(),
         deformed_params(),
         {{"model.family", "string", "orbital", false, "orbital | deformedBlock | band"},
          {"model.W", "int", "3", false, "band model: sharp-cutoff bandwidth"},
          {"interval.a", "real", "-0.025", false, "interval left endpoint"},
          {"interval.b", "real", "0.025", false, "interval right endpoint"}}});

    add({"minami",
         "Factorial moment E prod_{l<m}(N - l) and tail P{N >= m} of the interval "
         "eigenvalue count; probes the Minami-type estimate and its |I|^m scaling."},
        {orbital_model_params(),
         deformed_params(),
         {{"model.family", "string", "deformedBlock", false, "orbital | deformedBlock | band"},
          {"model.W", "int", "3", false, "band model: sharp-cutoff bandwidth"},
          {"interval.a", "real", "-0.05", false, "interval left endpoint"},
          {"interval.b", "real", "0.05", false, "interval right endpoint"},
          {"m", "int", "2", false, "factorial moment order, m >= 1"}}});

    add({"locdecay",
         "Fractional moment E ||G(x,y) v||^s of the orbital-model resolvent versus "
         "l1 distance, with an exponential fit; probes strong-disorder localisation."},
        {orbital_model_params(),
         {{"s", "real", "0.5", false, "fractional moment exponent, 0 < s < 1"},
          {"energy", "real", "0", false, "spectral parameter lambda"}}});

    add({"dos",
         "Normalized histogram of E N per bin, estimating the density of states."},
        {orbital_model_params(),
         deformed_params(),
         {{"model.family", "string", "orbital", false, "orbital | deformedBlock | band"},
          {"model.W", "int", "3", false, "band model: sharp-cutoff bandwidth"},
          {"bins.count", "int", "40", false, "number of bins"},
          {"bins.lo", "real", "-2.2", false, "histogram lower edge"},
          {"bins.hi", "real", "2.2", false, "histogram upper edge"}}});

    add({"bandloc",
         "Entrywise fractional moments of the band-matrix resolvent versus |i-j| with "
         "per-bandwidth exponential fits; probes band localisation qualitatively."},
        {{{"model.L", "int", "31", false, "box half-side; matrix dimension 2L+1"},
          {"wlist", "list", "3,7,21", false, "bandwidths to scan; each must divide 2L+1"},
          {"s", "real", "0.5", false, "fractional moment exponent, 0 < s < 1"},
          {"energy", "real", "0", false, "spectral parameter lambda"}}});

    add({"repformula",
         "Triple-quadrature representation of N(H, I) through single-block counts, "
         "compared with exact eigenvalue counts along an eta schedule."},
        {deformed_params(),
         {{"interval.a", "real", "-1", false, "interval left endpoint"},
          {"interval.b", "real", "1", false, "interval right endpoint"},
          {"eta.schedule", "list", "0.1,0.05,0.025", false, "decreasing smoothing schedule"},
          {"quad.lambda_nodes", "int", "0", false, "lambda nodes; 0 = max(101, |I|/eta)"},
          {"quad.t_nodes", "int", "201", false, "t substitution nodes"},
          {"quad.xi_nodes", "int", "201", false, "xi substitution nodes"},
          {"instances", "int", "5", false, "number of random realizations"}}});

    add({"tail",
         "Empirical tail P{||(A+V)^{-1} v|| >= t sqrt(N)} on a t-grid with the products "
         "t * P, plus the fractional moment E||(A+V)^{-1} v||^s."},
        {{{"N", "int", "16", false, "block dimension"},
          {"amatrix.kind", "string", "zero", false, "shift matrix A: zero or gaussian"},
          {"amatrix.scale", "real", "1", false, "entry scale of the gaussian A"},
          {"tgrid", "list", "1,2,4,8", false, "tail thresholds, all >= 1"},
          {"s", "real", "0.5", false, "fractional moment exponent, 0 < s < 1"}}});

    add({"smallball",
         "Empirical small-ball probability P{||A v|| <= eps/sqrt(N) ||A||_op} for a "
         "uniform sphere vector v."},
        {{{"N", "int", "16", false, "dimension"},
          {"amatrix.kind", "string", "gaussian", false, "matrix A: identity, rankone or gaussian"},
          {"amatrix.scale", "real", "1", false, "entry scale of the gaussian A"},
          {"epsgrid", "list", "0.01,0.05,0.2", false, "epsilon grid"}}});

    add({"lowerbound",
         "Scans length-t windows of [-2 s2, 2 s2] for the largest mean eigenvalue count "
         "and compares it with the complementary lower bound sum N_j t / (10 s2)."},
        {orbital_model_params(),
         {{"tfraction", "real", "0.25", false, "window length as a fraction of s2 (0 < f < 1)"}}});

    add({"pertshift",
         "Mean eigenvalue shift of a two-site model across the coupling switch-on at "
         "g = a/sqrt(N), regressed against the probe energy."},
        {{{"N", "int", "32", false, "orbitals per site, N >= 32 recommended"},
          {"a", "real", "0.2", false, "coupling amplitude; g = a/sqrt(N)"},
          {"probes", "list", "-1.5,-1,-0.5,0,0.5,1,1.5", false, "probe energies"}}});

    add({"walkcheck",
         "Full-depth self-avoiding-walk resolvent expansion against the dense-solve "
         "resolvent block on small boxes."},
        {orbital_model_params(),
         {{"energy", "real", "0.1", false, "spectral parameter lambda"},
          {"instances", "int", "10", false, "number of random realizations"}}});

    return out;
}

}  // namespace

const std::vector<ExperimentSchema>& experiment_schemas() {
    static const std::vector<ExperimentSchema> schemas = build_schemas();
    return schemas;
}

const ExperimentSchema* find_schema(const std::string& name) {
    for (const auto& s : experiment_schemas())
        if (s.name == name) return &s;
    return nullptr;
}

const std::string& ExperimentConfig::get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw std::out_of_range("config key missing: " + key);
    return it->second;
}

long long ExperimentConfig::get_int(const std::string& key) const {
    return std::stoll(get(key));
}

double ExperimentConfig::get_real(const std::string& key) const {
    return std::stod(get(key));
}

std::vector<double> ExperimentConfig::get_list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<int> ExperimentConfig::get_int_list(const std::string& key) const {
    std::vector<int> out;
    for (double v : get_list(key)) out.push_back(static_cast<int>(v));
    return out;
}

ExperimentConfig parse_config(const std::string& text, std::vector<ConfigError>& errors) {
    std::map<std::string, std::string> raw;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back({"line " + std::to_string(lineno), "expected 'key = value'"});
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) {
            errors.push_back({"line " + std::to_string(lineno), "empty key"});
            continue;
        }
        if (raw.count(key)) errors.push_back({key, "duplicate key"});
        raw[key] = val;
    }

    ExperimentConfig cfg;
    auto expit = raw.find("experiment");
    if (expit == raw.end()) {
        errors.push_back({"experiment", "missing required key"});
        return cfg;
    }
    cfg.experiment = expit->second;
    raw.erase(expit);

    const ExperimentSchema* schema = find_schema(cfg.experiment);
    if (!schema) {
        errors.push_back({"experiment", "unknown experiment '" + cfg.experiment + "'"});
        return cfg;
    }

    for (const auto& p : schema->params) {
        auto it = raw.find(p.key);
        std::string value = it != raw.end() ? it->second : p.default_value;
        if (it == raw.end() && p.required) {
            errors.push_back({p.key, "missing required key"});
            continue;
        }
        if (it != raw.end()) raw.erase(it);
        // type check
        try {
            if (p.type == "int")
                (void)std::stoll(value);
            else if (p.type == "real")
                (void)std::stod(value);
            else if (p.type == "list") {
                std::stringstream ls(value);
                std::string tok;
                while (std::getline(ls, tok, ','))
                    if (!trim(tok).empty()) (void)std::stod(trim(tok));
            }
        } catch (const std::exception&) {
            errors.push_back({p.key, "value '" + value + "' is not a valid " + p.type});
            continue;
        }
        cfg.values[p.key] = value;
    }
    for (const auto& [key, _] : raw)
        errors.push_back({key, "unknown key for experiment '" + cfg.experiment + "'"});

    if (errors.empty()) validate_config(cfg, errors);
    return cfg;
}

void validate_config(const ExperimentConfig& cfg, std::vector<ConfigError>& errors) {
    auto check = [&](bool ok, const std::string& key, const std::string& msg) {
        if (!ok) errors.push_back({key, msg});
    };

    if (cfg.values.count("samples")) check(cfg.get_int("samples") >= 1, "samples", "need >= 1");
    if (cfg.values.count("symmetry")) {
        const std::string& s = cfg.get("symmetry");
        check(s == "orthogonal" || s == "unitary", "symmetry", "must be orthogonal or unitary");
    }
    if (cfg.values.count("s"))
        check(cfg.get_real("s") > 0 && cfg.get_real("s") < 1, "s", "0 < s < 1 required");
    if (cfg.values.count("m")) check(cfg.get_int("m") >= 1, "m", "need m >= 1");
    if (cfg.values.count("model.d")) check(cfg.get_int("model.d") >= 1, "model.d", "need d >= 1");
    if (cfg.values.count("model.L")) check(cfg.get_int("model.L") >= 0, "model.L", "need L >= 0");
    if (cfg.values.count("model.N")) check(cfg.get_int("model.N") >= 1, "model.N", "need N >= 1");
    if (cfg.values.count("model.g")) check(cfg.get_real("model.g") >= 0, "model.g", "need g >= 0");
    if (cfg.values.count("model.kind")) {
        const std::string& k = cfg.get("model.kind");
        check(k == "wegnerOrbital" || k == "blockAnderson", "model.kind",
              "must be wegnerOrbital or blockAnderson");
    }
    if (cfg.values.count("model.family")) {
        const std::string& f = cfg.get("model.family");
        check(f == "orbital" || f == "deformedBlock" || f == "band", "model.family",
              "must be orbital, deformedBlock or band");
    }
    if (cfg.values.count("interval.a") && cfg.values.count("interval.b"))
        check(cfg.get_real("interval.a") < cfg.get_real("interval.b"), "interval.a",
              "interval must have positive length");
    if (cfg.values.count("blocks")) {
        for (int n : cfg.get_int_list("blocks"))
            check(n >= 1, "blocks", "block sizes must be >= 1");
    }
    if (cfg.values.count("tgrid")) {
        for (double t : cfg.get_list("tgrid")) check(t >= 1.0, "tgrid", "thresholds must be >= 1");
    }
    if (cfg.values.count("tfraction"))
        check(cfg.get_real("tfraction") > 0 && cfg.get_real("tfraction") < 1, "tfraction",
              "need 0 < tfraction < 1");
    if (cfg.experiment == "bandloc") {
        int side = 2 * static_cast<int>(cfg.get_int("model.L")) + 1;
        for (int w : cfg.get_int_list("wlist"))
            check(w >= 1 && side % w == 0, "wlist",
                  "each bandwidth must divide 2L+1 = " + std::to_string(side));
    }
    if (cfg.experiment == "wegner" || cfg.experiment == "minami" || cfg.experiment == "dos") {
        if (cfg.values.count("model.family") && cfg.get("model.family") == "band") {
            int side = 2 * static_cast<int>(cfg.get_int("model.L")) + 1;
            check(cfg.get_int("model.W") >= 1 && cfg.get_int("model.W") <= side, "model.W",
                  "need 1 <= W <= 2L+1");
        }
    }
    if (cfg.values.count("eta.schedule")) {
        auto sched = cfg.get_list("eta.schedule");
        check(!sched.empty(), "eta.schedule", "schedule must be nonempty");
        for (double e : sched) check(e > 0, "eta.schedule", "eta values must be positive");
        for (std::size_t i = 1; i < sched.size(); ++i)
            check(sched[i] < sched[i - 1], "eta.schedule", "schedule must decrease");
    }
}

std::string describe_experiment(const std::string& name) {
    const ExperimentSchema* s = find_schema(name);
    if (!s) return "unknown experiment '" + name + "'\n";
    std::ostringstream os;
    os << s->name << ": " << s->summary << "\n\nparameters (key, type, default):\n";
    for (const auto& p : s->params) {
        os << "  " << p.key << "  (" << p.type << ", default '" << p.default_value << "')  "
           << p.doc << "\n";
    }
    return os.str();
}

}  // namespace orbital
