#include "nsalpha/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace nsalpha {

using json = nlohmann::json;

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::Simulate: return "simulate";
        case RunMode::Optimize: return "optimize";
        case RunMode::SweepAlpha: return "sweep-alpha";
        case RunMode::Verify: return "verify";
    }
    return "?";
}

std::string to_string(CostKind k) { return k == CostKind::DaTracking ? "J" : "J0"; }

std::string to_string(TimeScheme s) {
    return s == TimeScheme::ImexEuler ? "euler" : "cn_heun";
}

namespace {

class Validator {
  public:
    explicit Validator(const json& root) : root_(root) {}

    std::vector<std::string> issues;

    void fail(const std::string& path, const std::string& msg) {
        issues.push_back(path + ": " + msg);
    }

    const json* object(const json& j, const std::string& path, const char* key,
                       const std::set<std::string>& allowed_keys) {
        if (!j.contains(key)) return nullptr;
        const json& v = j.at(key);
        if (!v.is_object()) {
            fail(path, "must be an object");
            return nullptr;
        }
        for (auto it = v.begin(); it != v.end(); ++it)
            if (!allowed_keys.count(it.key())) fail(path + "." + it.key(), "unknown key");
        return &v;
    }

    template <typename T>
    bool get(const json& j, const std::string& path, const char* key, T& out) {
        if (!j.contains(key)) return false;
        try {
            out = j.at(key).get<T>();
            return true;
        } catch (const json::exception&) {
            fail(path, "type mismatch");
            return false;
        }
    }

    void check_top_keys(const std::set<std::string>& allowed) {
        for (auto it = root_.begin(); it != root_.end(); ++it)
            if (!allowed.count(it.key())) fail(it.key(), "unknown key");
    }

  private:
    const json& root_;
};

bool file_exists(const std::string& p) {
    std::error_code ec;
    return std::filesystem::exists(p, ec);
}

}  // namespace

RunConfig parse_config(const std::string& text, std::optional<RunMode> cli_mode) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("json: ") + e.what()});
    }
    if (!root.is_object()) throw ConfigError({"top level: must be a JSON object"});

    Validator v(root);
    v.check_top_keys({"mode", "mesh", "physics", "weights", "cost", "admissible", "target",
                      "initial", "forcing", "scheme", "optimizer", "sweep", "output", "seed",
                      "threads"});

    RunConfig cfg;

    // mode
    bool have_mode = false;
    {
        std::string s;
        if (v.get(root, "mode", "mode", s)) {
            have_mode = true;
            if (s == "simulate") cfg.mode = RunMode::Simulate;
            else if (s == "optimize") cfg.mode = RunMode::Optimize;
            else if (s == "sweep-alpha") cfg.mode = RunMode::SweepAlpha;
            else if (s == "verify") cfg.mode = RunMode::Verify;
            else { v.fail("mode", "must be one of simulate|optimize|sweep-alpha|verify"); have_mode = false; }
        }
    }
    if (cli_mode) {
        if (have_mode && cfg.mode != *cli_mode)
            v.fail("mode", "conflicts with the command-line subcommand " + to_string(*cli_mode));
        cfg.mode = *cli_mode;
    } else if (!have_mode) {
        v.fail("mode", "missing (no subcommand supplied it)");
    }

    // mesh
    if (const json* m = v.object(root, "mesh", "mesh", {"dim", "n", "m_steps"})) {
        v.get(*m, "mesh.dim", "dim", cfg.mesh.dim);
        v.get(*m, "mesh.n", "n", cfg.mesh.n);
        v.get(*m, "mesh.m_steps", "m_steps", cfg.mesh.m_steps);
    }
    if (cfg.mesh.dim != 2 && cfg.mesh.dim != 3) v.fail("mesh.dim", "must be 2 or 3");
    if (cfg.mesh.n < 4 || cfg.mesh.n % 2 != 0)
        v.fail("mesh.n", "must be even and >= 4 (dealias cutoff is floor(n/3))");
    if (cfg.mesh.m_steps < 1) v.fail("mesh.m_steps", "must be >= 1");

    // physics
    if (const json* p = v.object(root, "physics", "physics", {"nu", "alpha", "t_final"})) {
        v.get(*p, "physics.nu", "nu", cfg.physics.nu);
        v.get(*p, "physics.alpha", "alpha", cfg.physics.alpha);
        v.get(*p, "physics.t_final", "t_final", cfg.physics.t_final);
    }
    if (!(cfg.physics.nu > 0)) v.fail("physics.nu", "constraint nu > 0 violated");
    if (!(cfg.physics.alpha >= 0)) v.fail("physics.alpha", "constraint alpha >= 0 violated");
    if (!(cfg.physics.t_final > 0)) v.fail("physics.t_final", "constraint t_final > 0 violated");

    // weights
    if (const json* w = v.object(root, "weights", "weights", {"gamma_u", "gamma_T", "gamma_f"})) {
        v.get(*w, "weights.gamma_u", "gamma_u", cfg.weights.gamma_u);
        v.get(*w, "weights.gamma_T", "gamma_T", cfg.weights.gamma_T);
        v.get(*w, "weights.gamma_f", "gamma_f", cfg.weights.gamma_f);
    }
    if (cfg.weights.gamma_u < 0) v.fail("weights.gamma_u", "must be >= 0");
    if (cfg.weights.gamma_T < 0) v.fail("weights.gamma_T", "must be >= 0");
    if (cfg.weights.gamma_f < 0) v.fail("weights.gamma_f", "must be >= 0");
    if (cfg.weights.gamma_u == 0 && cfg.weights.gamma_T == 0 && cfg.weights.gamma_f == 0)
        v.fail("weights", "gamma_u, gamma_T, gamma_f must not all be zero");

    // cost
    {
        std::string s;
        if (v.get(root, "cost", "cost", s)) {
            if (s == "J") cfg.cost = CostKind::DaTracking;
            else if (s == "J0") cfg.cost = CostKind::L4Tracking;
            else v.fail("cost", "must be J or J0");
        }
    }

    // admissible set
    if (const json* a = v.object(root, "admissible", "admissible", {"kind", "radius"})) {
        std::string kind = "unconstrained";
        v.get(*a, "admissible.kind", "kind", kind);
        if (kind == "unconstrained") {
            cfg.set = AdmissibleSet::unconstrained();
            if (a->contains("radius")) v.fail("admissible.radius", "only valid with kind=ball");
        } else if (kind == "ball") {
            double r = 0.0;
            if (!v.get(*a, "admissible.radius", "radius", r))
                v.fail("admissible.radius", "required with kind=ball");
            if (!(r > 0)) v.fail("admissible.radius", "constraint radius > 0 violated");
            cfg.set = AdmissibleSet::ball(r);
        } else {
            v.fail("admissible.kind", "must be unconstrained or ball");
        }
    }
    if (cfg.set.kind == AdmissibleSet::Kind::Unconstrained && !(cfg.weights.gamma_f > 0))
        v.fail("weights.gamma_f", "must be > 0 with an unconstrained admissible set");

    // target
    if (const json* t = v.object(root, "target", "target", {"fixture", "u_d", "u_T"})) {
        const bool has_fixture = t->contains("fixture");
        const bool has_files = t->contains("u_d") || t->contains("u_T");
        if (has_fixture && has_files)
            v.fail("target", "give either a fixture or u_d/u_T files, not both");
        if (has_fixture) {
            v.get(*t, "target.fixture", "fixture", cfg.target.fixture);
            if (cfg.target.fixture != "tracking" && cfg.target.fixture != "rest")
                v.fail("target.fixture", "must be tracking or rest");
        } else if (has_files) {
            cfg.target.fixture.clear();
            if (!v.get(*t, "target.u_d", "u_d", cfg.target.u_d_file))
                v.fail("target.u_d", "required together with target.u_T");
            if (!v.get(*t, "target.u_T", "u_T", cfg.target.u_T_file))
                v.fail("target.u_T", "required together with target.u_d");
            if (!cfg.target.u_d_file.empty() && !file_exists(cfg.target.u_d_file))
                v.fail("target.u_d", "file does not exist: " + cfg.target.u_d_file);
            if (!cfg.target.u_T_file.empty() && !file_exists(cfg.target.u_T_file))
                v.fail("target.u_T", "file does not exist: " + cfg.target.u_T_file);
        }
    }

    // initial / forcing field specs
    auto parse_field_spec = [&](const char* key, FieldSpec& spec, bool allow_file) {
        if (const json* s = v.object(root, key, key, {"fixture", "amplitude", "file"})) {
            const std::string path(key);
            const bool has_fixture = s->contains("fixture");
            const bool has_file = s->contains("file");
            if (has_fixture && has_file)
                v.fail(path, "give either a fixture or a file, not both");
            if (has_file && !allow_file) v.fail(path + ".file", "not supported here");
            if (has_fixture) {
                v.get(*s, path + ".fixture", "fixture", spec.fixture);
                static const std::set<std::string> names{"zero", "single_mode", "taylor_green",
                                                         "random"};
                if (!names.count(spec.fixture))
                    v.fail(path + ".fixture",
                           "must be zero|single_mode|taylor_green|random");
            }
            v.get(*s, path + ".amplitude", "amplitude", spec.amplitude);
            if (has_file) {
                spec.fixture.clear();
                v.get(*s, path + ".file", "file", spec.file);
                if (!spec.file.empty() && !file_exists(spec.file))
                    v.fail(path + ".file", "file does not exist: " + spec.file);
            }
        }
    };
    parse_field_spec("initial", cfg.initial, true);
    parse_field_spec("forcing", cfg.forcing, false);

    // scheme
    {
        std::string s;
        if (v.get(root, "scheme", "scheme", s)) {
            if (s == "euler") cfg.scheme = TimeScheme::ImexEuler;
            else if (s == "cn_heun") cfg.scheme = TimeScheme::ImexCnHeun;
            else v.fail("scheme", "must be euler or cn_heun");
        }
    }

    // optimizer
    if (const json* o = v.object(root, "optimizer", "optimizer", {"max_iters", "tol"})) {
        v.get(*o, "optimizer.max_iters", "max_iters", cfg.optimizer.max_iters);
        v.get(*o, "optimizer.tol", "tol", cfg.optimizer.tol);
    }
    if (cfg.optimizer.max_iters < 1) v.fail("optimizer.max_iters", "must be >= 1");
    if (!(cfg.optimizer.tol > 0)) v.fail("optimizer.tol", "constraint tol > 0 violated");

    // sweep
    if (const json* s = v.object(root, "sweep", "sweep", {"alphas"})) {
        std::vector<double> alphas;
        if (v.get(*s, "sweep.alphas", "alphas", alphas)) {
            if (alphas.empty()) v.fail("sweep.alphas", "must not be empty");
            for (std::size_t i = 0; i < alphas.size(); ++i) {
                if (alphas[i] < 0) v.fail("sweep.alphas", "entries must be >= 0");
                if (alphas[i] == 0 && i + 1 != alphas.size())
                    v.fail("sweep.alphas", "0 may only appear last");
                if (i + 1 < alphas.size() && !(alphas[i] > alphas[i + 1]))
                    v.fail("sweep.alphas", "must be strictly decreasing");
            }
            if (v.issues.empty() || !alphas.empty()) cfg.sweep_alphas = alphas;
        }
    }

    v.get(root, "output", "output", cfg.output_dir);
    v.get(root, "seed", "seed", cfg.seed);
    {
        int threads = 1;
        if (v.get(root, "threads", "threads", threads)) {
            if (threads < 1) v.fail("threads", "must be >= 1");
            else cfg.threads = static_cast<unsigned>(threads);
        }
    }

    if (!v.issues.empty()) throw ConfigError(std::move(v.issues));
    return cfg;
}

RunConfig load_config(const std::string& path, std::optional<RunMode> cli_mode) {
    std::ifstream is(path);
    if (!is) throw IoError("load_config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), cli_mode);
}

}  // namespace nsalpha
