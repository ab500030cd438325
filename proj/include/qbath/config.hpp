#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbath/bath.hpp"
#include "qbath/fock.hpp"
#include "qbath/hamiltonian.hpp"
#include "qbath/sil.hpp"
#include "qbath/types.hpp"

namespace qbath {

enum class ExperimentKind { pure_decoherence, spin_boson, anneal, oracle_table };
enum class Method { sil, lindblad };

const char* experiment_name(ExperimentKind kind);
const char* method_name(Method method);

/// Cartesian sweep grid; empty axes contribute the base value from the bath /
/// schedule blocks.  Points are ordered with s fastest, then n_ph, t_f, eta.
struct SweepAxes {
    std::vector<double> eta;
    std::vector<double> t_f;
    std::vector<int> n_ph;
    std::vector<double> s;

    bool empty() const { return eta.empty() && t_f.empty() && n_ph.empty() && s.empty(); }
};

/// Closed-form table request (the `oracle` subcommand).
struct OracleRequest {
    std::string name;           // decoherence-k | quality-factor | renormalized-gap |
                                // anneal-fidelity | lindblad-analytic
    std::vector<double> grid;   // abscissae; meaning depends on the oracle
};

/// Fully parsed and validated experiment description.  Every embedded spec has
/// already passed its own validate() by the time parse_config returns.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::pure_decoherence;
    Method method = Method::sil;
    BathSpec bath;
    Schedule schedule;
    SilConfig sil;
    double lindblad_dt = 0.0;   // 0 → derived from the spectral gap at run time
    bool lamb_shift = true;
    cplx c_plus{1.0, 0.0};      // initial qubit state in the ẑ basis
    cplx c_minus{0.0, 0.0};
    double t_final = 0.0;       // ignored for anneal runs (t_f rules)
    int stride = 1;
    SweepAxes sweep;
    int thermal_samples = 64;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string out_prefix = "qbath";
    std::int64_t amplitude_cap = FockBasis::kDefaultAmplitudeCap;
    OracleRequest oracle;
};

/// Parse + validate a UTF-8 JSON config document.  Malformed JSON, unknown
/// keys, wrong types, and invalid physics all throw domain_error whose message
/// names the offending JSON pointer.
ExperimentConfig parse_config(const std::string& json_text);

/// Read the file and parse_config its contents.
ExperimentConfig load_config_file(const std::string& path);

}  // namespace qbath
