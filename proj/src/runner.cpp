#include "qbath/runner.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "qbath/analysis.hpp"
#include "qbath/lindblad.hpp"
#include "qbath/observables.hpp"
#include "qbath/oracles.hpp"
#include "qbath/sil.hpp"

namespace qbath {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// splitmix64 finalizer: the per-(point, sample) seed derivation, so results do
// not depend on which worker ran which point.
std::uint64_t mix(std::uint64_t a) {
    a += 0x9E3779B97F4A7C15ull;
    a = (a ^ (a >> 30)) * 0xBF58476D1CE4E5B9ull;
    a = (a ^ (a >> 27)) * 0x94D049BB133111EBull;
    return a ^ (a >> 31);
}

int worker_count() {
    if (const char* e = std::getenv("QBATH_WORKERS")) {
        const int v = std::atoi(e);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

struct Point {
    int index = 0;
    double eta = 0.0, s = 1.0, t_f = 0.0;
    int n_ph = 0;
};

std::vector<Point> expand_sweep(const ExperimentConfig& cfg) {
    const auto etas = cfg.sweep.eta.empty() ? std::vector<double>{cfg.bath.eta} : cfg.sweep.eta;
    const auto tfs = cfg.sweep.t_f.empty() ? std::vector<double>{cfg.schedule.t_f} : cfg.sweep.t_f;
    const auto nphs = cfg.sweep.n_ph.empty() ? std::vector<int>{cfg.bath.n_ph} : cfg.sweep.n_ph;
    const auto ss = cfg.sweep.s.empty() ? std::vector<double>{cfg.bath.s} : cfg.sweep.s;
    std::vector<Point> out;
    int idx = 0;
    for (double eta : etas)
        for (double tf : tfs)
            for (int nph : nphs)
                for (double s : ss) out.push_back({idx++, eta, s, tf, nph});
    return out;
}

// Per-point parameter assembly: the sweep overrides the base blocks.
BathSpec point_bath(const ExperimentConfig& cfg, const Point& p) {
    BathSpec spec = cfg.bath;
    spec.eta = p.eta;
    spec.s = p.s;
    spec.n_ph = p.n_ph;
    validate(spec);
    return spec;
}

Schedule point_schedule(const ExperimentConfig& cfg, const Point& p) {
    Schedule sched = cfg.schedule;
    if (cfg.experiment == ExperimentKind::anneal) sched.t_f = p.t_f;
    validate(sched);
    return sched;
}

double point_t_final(const ExperimentConfig& cfg, const Point& p) {
    return cfg.experiment == ExperimentKind::anneal ? p.t_f : cfg.t_final;
}

std::string csv_name(const ExperimentConfig& cfg, int index, int n_points) {
    if (n_points == 1 && cfg.sweep.empty()) return cfg.out_prefix + ".csv";
    char buf[32];
    std::snprintf(buf, sizeof buf, "_p%03d", index);
    return cfg.out_prefix + buf + ".csv";
}

// Boltzmann-sampled mode occupations: P(n) ∝ e^{-βω n} per mode (inverse CDF
// of the geometric law).  The uniform variate comes straight from the engine's
// high bits so the byte-identical-rerun guarantee does not depend on any
// library distribution's implementation.
std::vector<std::int32_t> sample_occupations(const DiscreteBath& bath, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::int32_t> n(bath.omega.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
        const double bw = bath.spec.beta * bath.omega[k];
        const double x = std::floor(std::log1p(-u) / (-bw));
        n[k] = x > 2.0e9 ? 2000000000 : static_cast<std::int32_t>(x);
    }
    return n;
}

struct Series {
    std::vector<double> t, sx, sz, h_s, h_b, v, h_tot, drift;
    std::vector<double> se_sx, se_sz;  // standard error of the thermal mean
    ReducedDensity rho_final{};        // mean over samples
    std::int64_t steps = 0;
    double max_norm_drift = 0.0;
    bool recurrence = false;
    std::int64_t patterns = 0, amplitudes = 0, amplitudes_max = 0;
    int samples = 1;
};

Series run_sil_point(const ExperimentConfig& cfg, const Point& p) {
    const BathSpec spec = point_bath(cfg, p);
    const Schedule sched = point_schedule(cfg, p);
    const double t1 = point_t_final(cfg, p);
    const DiscreteBath bath = discretize(spec);
    const bool thermal = std::isfinite(spec.beta);
    const int n_samples = thermal ? cfg.thermal_samples : 1;

    Series out;
    out.samples = n_samples;
    std::vector<double> sum_sx, sum_sx2, sum_sz, sum_sz2;
    std::array<cplx, 4> rho_sum{};

    for (int sample = 0; sample < n_samples; ++sample) {
        std::vector<std::int32_t> ref;
        if (thermal)
            ref = sample_occupations(bath, mix(mix(cfg.seed + p.index) + sample));
        const FockBasis basis =
            FockBasis::enumerate(spec.n_modes, spec.n_ph, ref, cfg.amplitude_cap);
        const HamiltonianModel model(sched, bath, basis);
        SystemState psi = initial_state(basis, cfg.c_plus, cfg.c_minus);

        if (sample == 0) {
            out.patterns = basis.n_patterns();
            out.amplitudes = out.amplitudes_max = basis.dim();
        } else {
            out.amplitudes = std::min(out.amplitudes, basis.dim());
            out.amplitudes_max = std::max(out.amplitudes_max, basis.dim());
        }

        std::size_t slot = 0;
        ReducedDensity rho_last{};
        auto observe = [&](double t, const SystemState& state, const StepInfo& info) {
            const ReducedDensity rho = reduce(state);
            check_density(rho, 1e-10, 1e-8);
            rho_last = rho;
            const EnergyPartition ep = energy_partition(model, t, state);
            if (sample == 0) {
                out.t.push_back(t);
                out.sx.push_back(0.0);
                out.sz.push_back(0.0);
                out.h_s.push_back(0.0);
                out.h_b.push_back(0.0);
                out.v.push_back(0.0);
                out.h_tot.push_back(0.0);
                out.drift.push_back(0.0);
                sum_sx.push_back(0.0);
                sum_sx2.push_back(0.0);
                sum_sz.push_back(0.0);
                sum_sz2.push_back(0.0);
            }
            if (slot >= out.t.size())
                throw numerics_error("runner: observation grids differ between thermal samples");
            const double sx = rho.sigma_x(), sz = rho.sigma_z();
            sum_sx[slot] += sx;
            sum_sx2[slot] += sx * sx;
            sum_sz[slot] += sz;
            sum_sz2[slot] += sz * sz;
            out.h_s[slot] += ep.h_s;
            out.h_b[slot] += ep.h_b;
            out.v[slot] += ep.v;
            out.h_tot[slot] += ep.total;
            out.drift[slot] = std::max(out.drift[slot], info.norm_drift);
            ++slot;
        };
        const PropagateStats st = propagate(model, psi, 0.0, t1, cfg.sil, cfg.stride, observe);
        if (slot != out.t.size())
            throw numerics_error("runner: observation grids differ between thermal samples");
        out.steps = st.steps;
        out.max_norm_drift = std::max(out.max_norm_drift, st.max_norm_drift);
        out.recurrence = out.recurrence || st.recurrence_horizon_exceeded;
        for (int i = 0; i < 4; ++i) rho_sum[i] += rho_last.m[i];
    }

    const double inv = 1.0 / n_samples;
    out.se_sx.resize(out.t.size());
    out.se_sz.resize(out.t.size());
    for (std::size_t i = 0; i < out.t.size(); ++i) {
        out.sx[i] = sum_sx[i] * inv;
        out.sz[i] = sum_sz[i] * inv;
        out.h_s[i] *= inv;
        out.h_b[i] *= inv;
        out.v[i] *= inv;
        out.h_tot[i] *= inv;
        if (n_samples > 1) {
            const double var_x =
                std::max(0.0, sum_sx2[i] * inv - out.sx[i] * out.sx[i]);
            const double var_z =
                std::max(0.0, sum_sz2[i] * inv - out.sz[i] * out.sz[i]);
            out.se_sx[i] = std::sqrt(var_x / (n_samples - 1));
            out.se_sz[i] = std::sqrt(var_z / (n_samples - 1));
        }
    }
    for (int i = 0; i < 4; ++i) out.rho_final.m[i] = rho_sum[i] * inv;
    return out;
}

Series run_lindblad_point(const ExperimentConfig& cfg, const Point& p) {
    const BathSpec spec = point_bath(cfg, p);
    const Schedule sched = point_schedule(cfg, p);
    const double t1 = point_t_final(cfg, p);
    const LindbladModel model{sched, spec, cfg.lamb_shift};

    double dt = cfg.lindblad_dt;
    if (dt == 0.0) {
        const double gap = std::max(spectral_gap(sched, 0.0), spectral_gap(sched, t1));
        if (gap <= 0.0)
            throw domain_error("runner: spectral gap is zero; set lindblad/dt explicitly");
        dt = 0.005 / gap;
    }

    ReducedDensity rho;
    rho.m = {std::norm(cfg.c_plus), cfg.c_plus * std::conj(cfg.c_minus),
             cfg.c_minus * std::conj(cfg.c_plus), std::norm(cfg.c_minus)};

    Series out;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto observe = [&](double t, const ReducedDensity& r) {
        out.t.push_back(t);
        out.sx.push_back(r.sigma_x());
        out.sz.push_back(r.sigma_z());
        out.h_s.push_back(-sched.gamma(t) * r.sigma_x() - sched.epsilon(t) * r.sigma_z());
        out.h_b.push_back(nan);  // the reduced description does not track bath energy
        out.v.push_back(nan);
        out.h_tot.push_back(nan);
        out.drift.push_back(std::abs((r.m[0] + r.m[3]) - 1.0));
    };
    const LindbladStats st = lindblad_rk4(model, rho, 0.0, t1, dt, cfg.stride, observe);
    out.steps = st.steps;
    out.max_norm_drift = st.max_trace_drift;
    out.rho_final = rho;
    out.patterns = 0;
    out.amplitudes = out.amplitudes_max = 4;
    return out;
}

std::string render_csv(const Series& s) {
    std::string out = "t,sigma_x,sigma_z,h_s,h_b,v,h_total,norm_drift\r\n";
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        out += fmt17(s.t[i]);
        out += ',';
        out += fmt17(s.sx[i]);
        out += ',';
        out += fmt17(s.sz[i]);
        out += ',';
        out += fmt17(s.h_s[i]);
        out += ',';
        out += fmt17(s.h_b[i]);
        out += ',';
        out += fmt17(s.v[i]);
        out += ',';
        out += fmt17(s.h_tot[i]);
        out += ',';
        out += fmt17(s.drift[i]);
        out += "\r\n";
    }
    return out;
}

json fit_to_json(const FitResult& fit, std::initializer_list<const char*> names) {
    json j;
    std::size_t i = 0;
    for (const char* n : names) j[n] = fit.params[i++];
    j["residual_norm"] = fit.residual_norm;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["window"] = {fit.window[0], fit.window[1]};
    return j;
}

// Post-run analysis attached to each point's summary entry.
json analyze_point(const ExperimentConfig& cfg, const Point& p, const Series& s) {
    json out;
    const Schedule sched = point_schedule(cfg, p);
    if (cfg.experiment == ExperimentKind::pure_decoherence) {
        const BathSpec spec = point_bath(cfg, p);
        const DiscreteBath bath = discretize(spec);
        std::vector<double> ref(s.t.size());
        for (std::size_t i = 0; i < s.t.size(); ++i)
            ref[i] = exact_sigma_x(bath, sched.epsilon0, s.t[i]);
        const auto delta = relative_error(s.t, s.sx, s.t, ref);
        std::size_t masked = 0;
        for (double d : delta) masked += std::isnan(d);
        out["oracle"] = {{"max_masked_rel_error", max_abs_unmasked(delta)},
                         {"masked_points", masked},
                         {"points", delta.size()}};
    } else if (cfg.experiment == ExperimentKind::spin_boson) {
        double span_z = 0.0;
        for (double z : s.sz) span_z = std::max(span_z, std::abs(z));
        if (span_z > 0.05) {
            try {
                const FitResult fit = fit_damped_cosine(s.t, s.sz);
                out["sigma_z_oscillation"] = fit_to_json(fit, {"amplitude", "omega", "phase", "gamma"});
                if (fit.params[3] > 0.0)
                    out["sigma_z_oscillation"]["quality"] = fit.params[1] / fit.params[3];
            } catch (const domain_error& e) {
                out["sigma_z_oscillation"] = {{"error", e.what()}};
            }
        }
        try {
            const double gap = spectral_gap(sched, 0.0);
            const FitResult fit =
                fit_exponential_saturation(s.t, s.sx, gap > 0.0 ? 5.0 / gap : s.t.front());
            out["sigma_x_saturation"] = fit_to_json(fit, {"sigma_x_eq", "b", "tau"});
            out["sigma_x_eq"] = fit.params[0];
        } catch (const domain_error& e) {
            out["sigma_x_saturation"] = {{"error", e.what()}};
        }
    } else if (cfg.experiment == ExperimentKind::anneal) {
        out["residual_energy"] = residual_energy(sched, s.rho_final);
        out["ground_population"] = ground_population(sched, p.t_f, s.rho_final);
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw domain_error("runner: cannot open output file '" + path.string() + "'");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw domain_error("runner: short write to '" + path.string() + "'");
}

json config_echo(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = experiment_name(cfg.experiment);
    if (cfg.experiment != ExperimentKind::oracle_table) j["method"] = method_name(cfg.method);
    j["seed"] = cfg.seed;
    j["bath"] = {{"s", cfg.bath.s},
                 {"eta", cfg.bath.eta},
                 {"omega_c", cfg.bath.omega_c},
                 {"n_modes", cfg.bath.n_modes},
                 {"n_ph", cfg.bath.n_ph}};
    if (std::isfinite(cfg.bath.beta))
        j["bath"]["beta"] = cfg.bath.beta;
    else
        j["bath"]["beta"] = "inf";
    j["schedule"] = {{"kind", cfg.schedule.kind == Schedule::Kind::constant ? "constant"
                                                                            : "linear-anneal"},
                     {"gamma0", cfg.schedule.gamma0},
                     {"epsilon0", cfg.schedule.epsilon0}};
    return j;
}

}  // namespace

std::string run_experiment(const ExperimentConfig& cfg) {
    if (cfg.experiment == ExperimentKind::oracle_table)
        throw domain_error("runner: oracle-table configs go through the oracle subcommand");
    const auto t_start = std::chrono::steady_clock::now();
    const std::vector<Point> points = expand_sweep(cfg);
    const int n_points = static_cast<int>(points.size());

    struct Slot {
        std::string csv;
        json summary;
        std::exception_ptr error;
    };
    std::vector<Slot> slots(points.size());

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            auto& slot = slots[i];
            try {
                const auto p_start = std::chrono::steady_clock::now();
                const Series s = cfg.method == Method::sil ? run_sil_point(cfg, points[i])
                                                           : run_lindblad_point(cfg, points[i]);
                slot.csv = render_csv(s);
                json e;
                e["index"] = points[i].index;
                e["eta"] = points[i].eta;
                e["s"] = points[i].s;
                e["n_ph"] = points[i].n_ph;
                if (cfg.experiment == ExperimentKind::anneal) e["t_f"] = points[i].t_f;
                e["csv"] = csv_name(cfg, points[i].index, n_points);
                e["dimensions"] = {{"patterns", s.patterns}, {"amplitudes", s.amplitudes}};
                if (s.amplitudes_max != s.amplitudes)
                    e["dimensions"]["amplitudes_max"] = s.amplitudes_max;
                e["steps"] = s.steps;
                e["max_norm_drift"] = s.max_norm_drift;
                if (s.recurrence) e["recurrence_horizon_exceeded"] = true;
                if (s.samples > 1) {
                    double mx = 0.0, mz = 0.0;
                    for (double v : s.se_sx) mx = std::max(mx, v);
                    for (double v : s.se_sz) mz = std::max(mz, v);
                    e["thermal"] = {{"samples", s.samples},
                                    {"max_stderr_sigma_x", mx},
                                    {"max_stderr_sigma_z", mz}};
                }
                e.update(analyze_point(cfg, points[i], s));
                e["wall_time_s"] =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - p_start)
                        .count();
                slot.summary = std::move(e);
            } catch (...) {
                slot.error = std::current_exception();
            }
        }
    };

    const int n_workers = std::min<int>(worker_count(), n_points);
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (auto& slot : slots)  // earliest failing point wins, deterministically
        if (slot.error) std::rethrow_exception(slot.error);

    const fs::path dir(cfg.out_dir);
    if (!dir.empty() && dir != ".") fs::create_directories(dir);
    json summary = config_echo(cfg);
    summary["points"] = json::array();
    for (std::size_t i = 0; i < slots.size(); ++i) {
        write_file(dir / csv_name(cfg, points[i].index, n_points), slots[i].csv);
        summary["points"].push_back(std::move(slots[i].summary));
    }
    summary["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    const std::string text = summary.dump(2) + "\n";
    write_file(dir / (cfg.out_prefix + "_summary.json"), text);
    return text;
}

std::string run_oracle_table(const ExperimentConfig& cfg) {
    if (cfg.experiment != ExperimentKind::oracle_table)
        throw domain_error("runner: not an oracle-table config");
    const auto& name = cfg.oracle.name;
    const auto& grid = cfg.oracle.grid;
    std::string csv;
    auto row = [&csv](std::initializer_list<double> vals) {
        bool first = true;
        for (double v : vals) {
            if (!first) csv += ',';
            first = false;
            csv += fmt17(v);
        }
        csv += "\r\n";
    };

    if (name == "decoherence-k") {
        const auto s_list = cfg.sweep.s.empty() ? std::vector<double>{cfg.bath.s} : cfg.sweep.s;
        csv = "t";
        for (double s : s_list) csv += ",k_s" + fmt17(s);
        csv += "\r\n";
        for (double t : grid) {
            csv += fmt17(t);
            for (double s : s_list) {
                BathSpec spec = cfg.bath;
                spec.s = s;
                validate(spec);
                double k;
                if (!std::isfinite(spec.beta) &&
                    (std::abs(s - 0.5) < 1e-12 || std::abs(s - 1.0) < 1e-12 ||
                     std::abs(s - 2.0) < 1e-12))
                    k = decoherence_closed_form(s, spec.omega_c, t);
                else
                    k = decoherence_finite_T(spec, t).k;
                csv += ',' + fmt17(k);
            }
            csv += "\r\n";
        }
    } else if (name == "quality-factor") {
        csv = "eta,quality\r\n";
        for (double eta : grid) row({eta, quality_factor(eta)});
    } else if (name == "renormalized-gap") {
        csv = "eta,gap\r\n";
        for (double eta : grid)
            row({eta, renormalized_gap(cfg.schedule.gamma0, cfg.bath.omega_c, eta)});
    } else if (name == "anneal-fidelity") {
        const LindbladModel model{cfg.schedule, cfg.bath, cfg.lamb_shift};
        // Ground fraction of the prepared qubit state at θ = 0 (ground = x̂;+).
        const double rho0 = 0.5 * std::norm(cfg.c_plus + cfg.c_minus);
        csv = "t_f,ground_population\r\n";
        for (double tf : grid) row({tf, anneal_fidelity_analytic(model, 1.0, tf, rho0)});
    } else if (name == "lindblad-analytic") {
        const LindbladModel model{cfg.schedule, cfg.bath, cfg.lamb_shift};
        ReducedDensity rho0;
        rho0.m = {std::norm(cfg.c_plus), cfg.c_plus * std::conj(cfg.c_minus),
                  cfg.c_minus * std::conj(cfg.c_plus), std::norm(cfg.c_minus)};
        csv = "t,sigma_x,sigma_z\r\n";
        for (double t : grid) {
            const auto [sx, sz] = sbm_analytic(model, rho0, t);
            row({t, sx, sz});
        }
    } else {
        throw domain_error("runner: unknown oracle '" + name +
                           "' (decoherence-k, quality-factor, renormalized-gap, "
                           "anneal-fidelity, lindblad-analytic)");
    }

    const fs::path dir(cfg.out_dir);
    if (!dir.empty() && dir != ".") fs::create_directories(dir);
    write_file(dir / (cfg.out_prefix + ".csv"), csv);
    json summary = config_echo(cfg);
    summary["oracle"] = {{"name", name}, {"rows", grid.size()},
                         {"csv", cfg.out_prefix + ".csv"}};
    const std::string text = summary.dump(2) + "\n";
    write_file(dir / (cfg.out_prefix + "_summary.json"), text);
    return text;
}

std::string describe_config(const ExperimentConfig& cfg) {
    json report = config_echo(cfg);
    if (cfg.experiment == ExperimentKind::oracle_table) {
        static const char* known[] = {"decoherence-k", "quality-factor", "renormalized-gap",
                                      "anneal-fidelity", "lindblad-analytic"};
        bool ok = false;
        for (const char* k : known) ok = ok || cfg.oracle.name == k;
        if (!ok) throw domain_error("runner: unknown oracle '" + cfg.oracle.name + "'");
        report["oracle"] = {{"name", cfg.oracle.name}, {"rows", cfg.oracle.grid.size()}};
        return report.dump(2) + "\n";
    }
    const std::vector<Point> points = expand_sweep(cfg);
    report["points"] = json::array();
    for (const Point& p : points) {
        const BathSpec spec = point_bath(cfg, p);
        point_schedule(cfg, p);  // validates
        json e;
        e["index"] = p.index;
        e["eta"] = p.eta;
        e["s"] = p.s;
        e["n_ph"] = p.n_ph;
        if (cfg.experiment == ExperimentKind::anneal) e["t_f"] = p.t_f;
        if (cfg.method == Method::sil) {
            const std::int64_t dim = FockBasis::count_dim(spec.n_modes, spec.n_ph);
            e["amplitudes"] = dim;
            if (dim > cfg.amplitude_cap)
                throw resource_error("runner: sweep point " + std::to_string(p.index) +
                                     " needs " + std::to_string(dim) +
                                     " amplitudes, above the cap " +
                                     std::to_string(cfg.amplitude_cap));
        } else {
            e["amplitudes"] = 4;
        }
        e["csv"] = csv_name(cfg, p.index, static_cast<int>(points.size()));
        report["points"].push_back(std::move(e));
    }
    return report.dump(2) + "\n";
}

}  // namespace qbath
