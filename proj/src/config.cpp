#include "qbath/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

namespace qbath {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw domain_error("config " + where + ": " + what);
}

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected a JSON object");
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok) fail(where, "unknown key '" + item.key() + "'");
    }
}

double get_number(const json& obj, const std::string& where, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "/" + key, "expected a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const char* key, int dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "/" + key, "expected an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(where + "/" + key, "expected a boolean");
    return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const char* key,
                       const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(where + "/" + key, "expected a string");
    return v.get<std::string>();
}

// β accepts a positive number, null, or "inf"; absent/null/"inf" mean zero temperature.
double get_beta(const json& obj, const std::string& where) {
    if (!obj.contains("beta")) return kInf;
    const json& v = obj.at("beta");
    if (v.is_null()) return kInf;
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
        fail(where + "/beta", "expected a number, null, or \"inf\"");
    }
    if (!v.is_number()) fail(where + "/beta", "expected a number, null, or \"inf\"");
    return v.get<double>();
}

std::vector<double> get_number_list(const json& obj, const std::string& where, const char* key) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const json& v = obj.at(key);
    if (!v.is_array()) fail(where + "/" + key, "expected an array of numbers");
    for (const auto& e : v) {
        if (!e.is_number()) fail(where + "/" + key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<int> get_int_list(const json& obj, const std::string& where, const char* key) {
    std::vector<int> out;
    if (!obj.contains(key)) return out;
    const json& v = obj.at(key);
    if (!v.is_array()) fail(where + "/" + key, "expected an array of integers");
    for (const auto& e : v) {
        if (!e.is_number_integer()) fail(where + "/" + key, "expected an array of integers");
        out.push_back(e.get<int>());
    }
    return out;
}

void parse_initial_state(const json& obj, ExperimentConfig& cfg) {
    const std::string where = "/initial_state";
    require_object(obj, where);
    check_keys(obj, where, {"named", "xi", "phi"});
    if (obj.contains("named")) {
        if (obj.contains("xi") || obj.contains("phi"))
            fail(where, "give either 'named' or Bloch angles (xi, phi), not both");
        const auto name = get_string(obj, where, "named", "");
        const double r = 1.0 / std::sqrt(2.0);
        if (name == "plus-z") {
            cfg.c_plus = 1.0;
            cfg.c_minus = 0.0;
        } else if (name == "minus-z") {
            cfg.c_plus = 0.0;
            cfg.c_minus = 1.0;
        } else if (name == "plus-x") {
            cfg.c_plus = r;
            cfg.c_minus = r;
        } else if (name == "minus-x") {
            cfg.c_plus = r;
            cfg.c_minus = -r;
        } else {
            fail(where + "/named",
                 "unknown state '" + name + "' (plus-x, minus-x, plus-z, minus-z)");
        }
        return;
    }
    if (!obj.contains("xi")) fail(where, "needs 'named' or Bloch angles (xi, phi)");
    const double xi = get_number(obj, where, "xi", 0.0);
    const double phi = get_number(obj, where, "phi", 0.0);
    if (!std::isfinite(xi) || !std::isfinite(phi))
        fail(where, "Bloch angles must be finite");
    cfg.c_plus = std::cos(0.5 * xi);
    cfg.c_minus = std::polar(std::sin(0.5 * xi), phi);
}

void parse_oracle(const json& obj, ExperimentConfig& cfg) {
    const std::string where = "/oracle";
    require_object(obj, where);
    check_keys(obj, where, {"name", "grid"});
    cfg.oracle.name = get_string(obj, where, "name", "");
    if (cfg.oracle.name.empty()) fail(where, "missing oracle name");
    if (!obj.contains("grid")) fail(where, "missing grid");
    const json& g = obj.at("grid");
    if (g.is_array()) {
        for (const auto& e : g) {
            if (!e.is_number()) fail(where + "/grid", "expected numbers");
            cfg.oracle.grid.push_back(e.get<double>());
        }
    } else if (g.is_object()) {
        check_keys(g, where + "/grid", {"start", "stop", "count"});
        const double a = get_number(g, where + "/grid", "start", 0.0);
        const double b = get_number(g, where + "/grid", "stop", 0.0);
        const int n = get_int(g, where + "/grid", "count", 0);
        if (n < 1) fail(where + "/grid/count", "must be >= 1");
        if (!std::isfinite(a) || !std::isfinite(b)) fail(where + "/grid", "bounds must be finite");
        for (int i = 0; i < n; ++i)
            cfg.oracle.grid.push_back(n == 1 ? a : a + (b - a) * i / (n - 1.0));
    } else {
        fail(where + "/grid", "expected an array or {start, stop, count}");
    }
    if (cfg.oracle.grid.empty()) fail(where + "/grid", "must not be empty");
}

}  // namespace

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::pure_decoherence: return "pure-decoherence";
        case ExperimentKind::spin_boson: return "spin-boson";
        case ExperimentKind::anneal: return "anneal";
        case ExperimentKind::oracle_table: return "oracle-table";
    }
    return "?";
}

const char* method_name(Method method) {
    return method == Method::sil ? "sil" : "lindblad";
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw domain_error(std::string("config: malformed JSON: ") + e.what());
    }
    require_object(doc, "/");
    check_keys(doc, "/",
               {"experiment", "method", "bath", "schedule", "sil", "lindblad", "initial_state",
                "time", "sweep", "thermal", "seed", "output", "oracle", "amplitude_cap"});

    ExperimentConfig cfg;

    const auto exp_name = get_string(doc, "/", "experiment", "");
    if (exp_name == "pure-decoherence")
        cfg.experiment = ExperimentKind::pure_decoherence;
    else if (exp_name == "spin-boson")
        cfg.experiment = ExperimentKind::spin_boson;
    else if (exp_name == "anneal")
        cfg.experiment = ExperimentKind::anneal;
    else if (exp_name == "oracle-table")
        cfg.experiment = ExperimentKind::oracle_table;
    else
        fail("/experiment",
             "must be one of pure-decoherence, spin-boson, anneal, oracle-table");

    const auto method = get_string(doc, "/", "method", "sil");
    if (method == "sil")
        cfg.method = Method::sil;
    else if (method == "lindblad")
        cfg.method = Method::lindblad;
    else
        fail("/method", "must be 'sil' or 'lindblad'");

    if (doc.contains("bath")) {
        const json& b = doc.at("bath");
        require_object(b, "/bath");
        check_keys(b, "/bath", {"s", "eta", "omega_c", "beta", "n_modes", "n_ph"});
        cfg.bath.s = get_number(b, "/bath", "s", cfg.bath.s);
        cfg.bath.eta = get_number(b, "/bath", "eta", cfg.bath.eta);
        cfg.bath.omega_c = get_number(b, "/bath", "omega_c", cfg.bath.omega_c);
        cfg.bath.beta = get_beta(b, "/bath");
        cfg.bath.n_modes = get_int(b, "/bath", "n_modes", cfg.bath.n_modes);
        cfg.bath.n_ph = get_int(b, "/bath", "n_ph", cfg.bath.n_ph);
    }

    // Schedule defaults depend on the experiment before user overrides land.
    if (cfg.experiment == ExperimentKind::anneal) {
        cfg.schedule.kind = Schedule::Kind::linear_anneal;
        cfg.schedule.epsilon0 = 1.0;
    } else if (cfg.experiment == ExperimentKind::pure_decoherence) {
        cfg.schedule.gamma0 = 0.0;
    }
    if (doc.contains("schedule")) {
        const json& s = doc.at("schedule");
        require_object(s, "/schedule");
        check_keys(s, "/schedule", {"kind", "gamma0", "epsilon0", "t_f"});
        const auto kind = get_string(s, "/schedule", "kind",
                                     cfg.schedule.kind == Schedule::Kind::constant
                                         ? "constant"
                                         : "linear-anneal");
        if (kind == "constant")
            cfg.schedule.kind = Schedule::Kind::constant;
        else if (kind == "linear-anneal")
            cfg.schedule.kind = Schedule::Kind::linear_anneal;
        else
            fail("/schedule/kind", "must be 'constant' or 'linear-anneal'");
        cfg.schedule.gamma0 = get_number(s, "/schedule", "gamma0", cfg.schedule.gamma0);
        cfg.schedule.epsilon0 = get_number(s, "/schedule", "epsilon0", cfg.schedule.epsilon0);
        cfg.schedule.t_f = get_number(s, "/schedule", "t_f", cfg.schedule.t_f);
    }

    // Per-experiment structural constraints.
    switch (cfg.experiment) {
        case ExperimentKind::pure_decoherence:
            if (cfg.schedule.kind != Schedule::Kind::constant)
                fail("/schedule/kind", "pure-decoherence needs a constant schedule");
            if (cfg.schedule.gamma0 != 0.0)
                fail("/schedule/gamma0",
                     "pure-decoherence means Γ = 0 (σ_z commutes with H); drop gamma0");
            if (cfg.method != Method::sil)
                fail("/method", "pure-decoherence runs the wavefunction propagator only");
            break;
        case ExperimentKind::spin_boson:
            if (cfg.schedule.kind != Schedule::Kind::constant)
                fail("/schedule/kind", "spin-boson uses a constant schedule");
            break;
        case ExperimentKind::anneal:
            if (cfg.schedule.kind != Schedule::Kind::linear_anneal)
                fail("/schedule/kind", "anneal needs kind = linear-anneal");
            break;
        case ExperimentKind::oracle_table:
            break;
    }

    // Initial qubit state: per-experiment default, overridable.
    if (cfg.experiment == ExperimentKind::spin_boson) {
        cfg.c_plus = 1.0;  // ẑ;+ : the σ_z oscillation experiments start here
        cfg.c_minus = 0.0;
    } else {
        const double r = 1.0 / std::sqrt(2.0);
        cfg.c_plus = r;  // x̂;+ : σ_x decay / anneal ground state at θ = 0
        cfg.c_minus = r;
    }
    if (doc.contains("initial_state")) parse_initial_state(doc.at("initial_state"), cfg);

    if (doc.contains("sil")) {
        const json& s = doc.at("sil");
        require_object(s, "/sil");
        check_keys(s, "/sil",
                   {"dt", "krylov_dim", "norm_tol", "adaptive", "adaptive_tol", "krylov_max"});
        cfg.sil.dt = get_number(s, "/sil", "dt", 0.0);
        cfg.sil.krylov_dim = get_int(s, "/sil", "krylov_dim", cfg.sil.krylov_dim);
        cfg.sil.norm_tol = get_number(s, "/sil", "norm_tol", cfg.sil.norm_tol);
        cfg.sil.adaptive = get_bool(s, "/sil", "adaptive", cfg.sil.adaptive);
        cfg.sil.adaptive_tol = get_number(s, "/sil", "adaptive_tol", cfg.sil.adaptive_tol);
        cfg.sil.krylov_max = get_int(s, "/sil", "krylov_max", cfg.sil.krylov_max);
    } else {
        cfg.sil.dt = 0.0;
    }
    if (cfg.sil.dt == 0.0) cfg.sil.dt = 0.005 / cfg.bath.omega_c;  // scale-aware default

    if (doc.contains("lindblad")) {
        const json& l = doc.at("lindblad");
        require_object(l, "/lindblad");
        check_keys(l, "/lindblad", {"dt", "lamb_shift"});
        cfg.lindblad_dt = get_number(l, "/lindblad", "dt", 0.0);
        cfg.lamb_shift = get_bool(l, "/lindblad", "lamb_shift", cfg.lamb_shift);
        if (cfg.lindblad_dt < 0.0 || !std::isfinite(cfg.lindblad_dt))
            fail("/lindblad/dt", "must be a finite non-negative number (0 = auto)");
    }

    if (doc.contains("time")) {
        const json& t = doc.at("time");
        require_object(t, "/time");
        check_keys(t, "/time", {"t_final", "stride"});
        cfg.t_final = get_number(t, "/time", "t_final", cfg.t_final);
        cfg.stride = get_int(t, "/time", "stride", cfg.stride);
    }
    if (cfg.stride < 1) fail("/time/stride", "must be >= 1");

    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        require_object(s, "/sweep");
        check_keys(s, "/sweep", {"eta", "t_f", "n_ph", "s"});
        cfg.sweep.eta = get_number_list(s, "/sweep", "eta");
        cfg.sweep.t_f = get_number_list(s, "/sweep", "t_f");
        cfg.sweep.n_ph = get_int_list(s, "/sweep", "n_ph");
        cfg.sweep.s = get_number_list(s, "/sweep", "s");
        for (double e : cfg.sweep.eta)
            if (e < 0.0 || !std::isfinite(e)) fail("/sweep/eta", "values must be finite and >= 0");
        for (double v : cfg.sweep.t_f)
            if (v <= 0.0 || !std::isfinite(v)) fail("/sweep/t_f", "values must be finite and > 0");
        for (int n : cfg.sweep.n_ph)
            if (n < 0) fail("/sweep/n_ph", "values must be >= 0");
        for (double v : cfg.sweep.s)
            if (v <= 0.0 || !std::isfinite(v)) fail("/sweep/s", "values must be finite and > 0");
        if (!cfg.sweep.t_f.empty() && cfg.experiment != ExperimentKind::anneal)
            fail("/sweep/t_f", "only anneal experiments sweep t_f");
    }

    if (doc.contains("thermal")) {
        const json& t = doc.at("thermal");
        require_object(t, "/thermal");
        check_keys(t, "/thermal", {"samples"});
        cfg.thermal_samples = get_int(t, "/thermal", "samples", cfg.thermal_samples);
    }
    if (cfg.thermal_samples < 1) fail("/thermal/samples", "must be >= 1");

    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (!s.is_number_unsigned()) fail("/seed", "expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        require_object(o, "/output");
        check_keys(o, "/output", {"directory", "prefix"});
        cfg.out_dir = get_string(o, "/output", "directory", cfg.out_dir);
        cfg.out_prefix = get_string(o, "/output", "prefix", cfg.out_prefix);
    }
    if (cfg.out_prefix.empty()) fail("/output/prefix", "must not be empty");
    if (cfg.out_prefix.find('/') != std::string::npos)
        fail("/output/prefix", "must not contain '/' (use output/directory)");

    if (doc.contains("amplitude_cap")) {
        const json& c = doc.at("amplitude_cap");
        if (!c.is_number_integer() || c.get<std::int64_t>() < 2)
            fail("/amplitude_cap", "expected an integer >= 2");
        cfg.amplitude_cap = c.get<std::int64_t>();
    }

    if (cfg.experiment == ExperimentKind::oracle_table) {
        if (!doc.contains("oracle")) fail("/", "oracle-table needs an 'oracle' block");
        parse_oracle(doc.at("oracle"), cfg);
    } else if (doc.contains("oracle")) {
        fail("/oracle", "only oracle-table experiments take an oracle block");
    }

    // Anneal ramps need a positive duration before the schedule-level checks
    // run; when only a sweep supplies it, seed the schedule with the first
    // sweep value so the base schedule is well-formed (the runner overrides
    // t_f per sweep point anyway).
    if (cfg.experiment == ExperimentKind::anneal && !(cfg.schedule.t_f > 0.0)) {
        if (cfg.sweep.t_f.empty())
            fail("/schedule/t_f", "anneal needs t_f > 0 (or a sweep over t_f)");
        cfg.schedule.t_f = cfg.sweep.t_f.front();
    }

    // Cross-module physical validation (throws domain_error on its own).
    validate(cfg.bath);
    validate(cfg.schedule);
    validate(cfg.sil);
    const double nrm = std::norm(cfg.c_plus) + std::norm(cfg.c_minus);
    if (std::abs(nrm - 1.0) > 1e-10) fail("/initial_state", "qubit state is not normalized");

    const bool needs_time = cfg.experiment == ExperimentKind::pure_decoherence ||
                            cfg.experiment == ExperimentKind::spin_boson;
    if (needs_time && !(cfg.t_final > 0.0))
        fail("/time/t_final", "must be > 0 for this experiment");

    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw domain_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace qbath
