#include "config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qbayes/errors.hpp"

namespace qbayes::cli {

namespace {

constexpr double pi = std::numbers::pi;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError("config: " + path + ": " + what);
}

void check_keys(const Json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : allowed) {
            if (key == k) {
                known = true;
                break;
            }
        }
        if (!known) fail(path + "." + key, "unknown key");
    }
}

double get_number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::vector<double> get_number_list(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::function<double(double)> linear_interpolant(std::vector<double> xs,
                                                 std::vector<double> ys) {
    return [xs = std::move(xs), ys = std::move(ys)](double x) {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        std::size_t hi = 1;
        while (xs[hi] < x) ++hi;
        const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
        return (1.0 - w) * ys[hi - 1] + w * ys[hi];
    };
}

FMap parse_fmap(const Json& j) {
    check_keys(j, "fmap", {"kind", "z0", "anchor", "domain", "t", "F"});
    if (!j.contains("kind") || !j["kind"].is_string()) fail("fmap.kind", "required string");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "location") return location_fmap();
    if (kind == "weight") return weight_fmap();
    if (kind == "scale") {
        if (!j.contains("z0")) fail("fmap.z0", "required for scale kind");
        return scale_fmap(get_number(j["z0"], "fmap.z0"));
    }
    if (kind == "fisher") {
        for (const char* key : {"anchor", "domain", "t", "F"}) {
            if (!j.contains(key)) fail(std::string("fmap.") + key, "required for fisher kind");
        }
        const auto domain = get_number_list(j["domain"], "fmap.domain");
        if (domain.size() != 2) fail("fmap.domain", "expected [lo, hi]");
        auto t = get_number_list(j["t"], "fmap.t");
        auto F = get_number_list(j["F"], "fmap.F");
        if (t.size() != F.size()) fail("fmap.F", "must match fmap.t in length");
        return fisher_fmap(linear_interpolant(std::move(t), std::move(F)),
                           get_number(j["anchor"], "fmap.anchor"),
                           Interval{domain[0], domain[1]});
    }
    fail("fmap.kind", "must be one of location|scale|weight|fisher");
}

PriorDensity parse_prior(const Json& j, std::optional<double>& haldane_a) {
    check_keys(j, "prior", {"kind", "a", "support", "thetas", "densities"});
    if (!j.contains("kind") || !j["kind"].is_string()) fail("prior.kind", "required string");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "haldane") {
        if (!j.contains("a")) fail("prior.a", "required for haldane kind");
        const double a = get_number(j["a"], "prior.a");
        haldane_a = a;
        return haldane_prior(a);
    }
    if (kind == "uniform") {
        if (!j.contains("support")) fail("prior.support", "required for uniform kind");
        const auto support = get_number_list(j["support"], "prior.support");
        if (support.size() != 2) fail("prior.support", "expected [lo, hi]");
        return uniform_prior(Interval{support[0], support[1]});
    }
    if (kind == "table") {
        for (const char* key : {"thetas", "densities"}) {
            if (!j.contains(key)) fail(std::string("prior.") + key, "required for table kind");
        }
        return table_prior(get_number_list(j["thetas"], "prior.thetas"),
                           get_number_list(j["densities"], "prior.densities"));
    }
    fail("prior.kind", "must be one of haldane|uniform|table");
}

Matrix parse_matrix(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a square matrix");
    const std::size_t n = j.size();
    Matrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const Json& row = j[r];
        if (!row.is_array() || row.size() != n) fail(path, "expected a square matrix");
        for (std::size_t c = 0; c < n; ++c) {
            const Json& cell = row[c];
            if (!cell.is_array() || cell.size() != 2) {
                fail(path, "each entry must be a [re, im] pair");
            }
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                Complex(get_number(cell[0], path), get_number(cell[1], path));
        }
    }
    return m;
}

StateFamily parse_custom_family(const Json& j) {
    check_keys(j, "custom", {"thetas", "states"});
    for (const char* key : {"thetas", "states"}) {
        if (!j.contains(key)) fail(std::string("custom.") + key, "required");
    }
    auto thetas = get_number_list(j["thetas"], "custom.thetas");
    const Json& states = j["states"];
    if (!states.is_array() || states.size() != thetas.size()) {
        fail("custom.states", "one matrix per theta sample required");
    }
    if (thetas.size() < 2) fail("custom.thetas", "need >= 2 samples");
    std::vector<Matrix> matrices;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i > 0 && !(thetas[i] > thetas[i - 1])) {
            fail("custom.thetas", "must be strictly increasing");
        }
        matrices.push_back(parse_matrix(states[i], "custom.states[" + std::to_string(i) + "]"));
        if (matrices.back().rows() != matrices.front().rows()) {
            fail("custom.states", "all matrices must share one dimension");
        }
    }

    StateFamily family;
    family.dim = static_cast<int>(matrices.front().rows());
    family.theta_domain = {thetas.front(), thetas.back()};
    family.state_of = [thetas, matrices](double theta, const Controls&) {
        std::size_t hi = 1;
        if (theta <= thetas.front()) {
            hi = 1;
            theta = thetas.front();
        } else if (theta >= thetas.back()) {
            hi = thetas.size() - 1;
            theta = thetas.back();
        } else {
            while (thetas[hi] < theta) ++hi;
        }
        const double w = (theta - thetas[hi - 1]) / (thetas[hi] - thetas[hi - 1]);
        const Matrix rho = (1.0 - w) * matrices[hi - 1] + w * matrices[hi];
        return DensityOperator{HermitianOperator::symmetrized(rho)};
    };
    return family;
}

Controls parse_controls(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object of name -> value");
    Controls y;
    for (const auto& [key, value] : j.items()) {
        y[key] = get_number(value, path + "." + key);
    }
    return y;
}

} // namespace

std::string format_real(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override,
                      std::optional<int> quad_order_override,
                      std::optional<int> threads_override) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }

    check_keys(j, "<root>",
               {"model", "fmap", "prior", "controls", "quadrature_order", "merge_tol",
                "threads", "custom", "sweep", "figure1", "simulate"});

    RunConfig cfg;
    if (j.contains("model")) {
        if (!j["model"].is_string()) fail("model", "expected a string");
        cfg.model = j["model"].get<std::string>();
        if (cfg.model != "blend" && cfg.model != "custom") {
            fail("model", "must be blend or custom");
        }
    }
    cfg.fmap = j.contains("fmap") ? parse_fmap(j["fmap"]) : weight_fmap();
    if (j.contains("prior")) {
        cfg.prior = parse_prior(j["prior"], cfg.haldane_a);
    } else {
        cfg.haldane_a = 0.01;
        cfg.prior = haldane_prior(0.01);
    }
    if (j.contains("controls")) cfg.controls = parse_controls(j["controls"], "controls");
    if (j.contains("quadrature_order")) {
        cfg.quadrature_order = static_cast<int>(get_number(j["quadrature_order"], "quadrature_order"));
        if (cfg.quadrature_order < 1) fail("quadrature_order", "must be >= 1");
    }
    if (j.contains("merge_tol")) {
        cfg.merge_tol = get_number(j["merge_tol"], "merge_tol");
        if (cfg.merge_tol < 0.0) fail("merge_tol", "must be >= 0");
    }
    if (j.contains("threads")) {
        cfg.threads = static_cast<int>(get_number(j["threads"], "threads"));
        if (cfg.threads < 1) fail("threads", "must be >= 1");
    }

    if (cfg.model == "blend") {
        const double alpha = cfg.controls.count("alpha") ? cfg.controls["alpha"] : 0.0;
        const double beta = cfg.controls.count("beta") ? cfg.controls["beta"] : pi / 2.0;
        cfg.controls["alpha"] = alpha;
        cfg.controls["beta"] = beta;
        cfg.family = blend_family({alpha, beta});
    } else {
        if (!j.contains("custom")) fail("custom", "required when model is custom");
        cfg.family = parse_custom_family(j["custom"]);
    }

    if (j.contains("sweep")) {
        const Json& s = j["sweep"];
        check_keys(s, "sweep", {"a", "alpha", "beta"});
        if (s.contains("a")) cfg.sweep_a = get_number_list(s["a"], "sweep.a");
        if (s.contains("alpha")) cfg.sweep_alpha = get_number_list(s["alpha"], "sweep.alpha");
        if (s.contains("beta")) cfg.sweep_beta = get_number_list(s["beta"], "sweep.beta");
    }

    cfg.fig1_a = cfg.haldane_a.value_or(0.01);
    cfg.fig1_beta = pi / 2.0;
    cfg.fig1_alphas = {0.0, pi / 4.0, pi / 2.0};
    for (int i = 0; i < 99; ++i) cfg.fig1_eta0.push_back(0.01 + 0.01 * i);
    if (j.contains("figure1")) {
        const Json& f = j["figure1"];
        check_keys(f, "figure1", {"a", "beta", "alphas", "eta0"});
        if (f.contains("a")) cfg.fig1_a = get_number(f["a"], "figure1.a");
        if (f.contains("beta")) cfg.fig1_beta = get_number(f["beta"], "figure1.beta");
        if (f.contains("alphas")) cfg.fig1_alphas = get_number_list(f["alphas"], "figure1.alphas");
        if (f.contains("eta0")) {
            if (f["eta0"].is_array()) {
                cfg.fig1_eta0 = get_number_list(f["eta0"], "figure1.eta0");
            } else {
                check_keys(f["eta0"], "figure1.eta0", {"min", "max", "count"});
                const double lo = get_number(f["eta0"]["min"], "figure1.eta0.min");
                const double hi = get_number(f["eta0"]["max"], "figure1.eta0.max");
                const int count = static_cast<int>(get_number(f["eta0"]["count"], "figure1.eta0.count"));
                if (count < 1 || !(lo <= hi)) fail("figure1.eta0", "bad grid");
                cfg.fig1_eta0.clear();
                for (int i = 0; i < count; ++i) {
                    cfg.fig1_eta0.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
                }
            }
        }
    }

    if (j.contains("simulate")) {
        const Json& s = j["simulate"];
        check_keys(s, "simulate", {"mu", "theta_true", "seed", "policy", "candidates"});
        if (s.contains("mu")) {
            cfg.sim_mu = static_cast<int>(get_number(s["mu"], "simulate.mu"));
            if (cfg.sim_mu < 1) fail("simulate.mu", "must be >= 1");
        }
        if (s.contains("theta_true")) {
            cfg.sim_theta_true = get_number(s["theta_true"], "simulate.theta_true");
        }
        if (s.contains("seed")) {
            cfg.sim_seed = s["seed"].get<std::uint64_t>();
            cfg.sim_seed_set = true;
        }
        if (s.contains("policy")) {
            const std::string policy = s["policy"].get<std::string>();
            if (policy == "fixed") {
                cfg.sim_policy = PomPolicy::fixed;
            } else if (policy == "adaptive") {
                cfg.sim_policy = PomPolicy::adaptive;
            } else {
                fail("simulate.policy", "must be fixed or adaptive");
            }
        }
        if (s.contains("candidates")) {
            if (!s["candidates"].is_array()) fail("simulate.candidates", "expected an array");
            for (std::size_t i = 0; i < s["candidates"].size(); ++i) {
                cfg.sim_candidates.push_back(parse_controls(
                    s["candidates"][i], "simulate.candidates[" + std::to_string(i) + "]"));
            }
        }
    }

    if (seed_override) {
        cfg.sim_seed = *seed_override;
        cfg.sim_seed_set = true;
    }
    if (quad_order_override) {
        if (*quad_order_override < 1) fail("--quad-order", "must be >= 1");
        cfg.quadrature_order = *quad_order_override;
    }
    if (threads_override) {
        if (*threads_override < 1) fail("--threads", "must be >= 1");
        cfg.threads = *threads_override;
    }
    return cfg;
}

} // namespace qbayes::cli
