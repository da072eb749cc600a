#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>

#include "inexact/mirror_prox.hpp"
#include "inexact/solver_run.hpp"

namespace inexact {

// Shortest text that parses back to the same double; "nan", "inf", "-inf".
std::string format_real(double x);

// k, f_delta, L_k, V_to_ref, bound_rhs, cumulative_model_evals; accelerated
// runs add A_k, alpha_k, delta_k, mode; restarted runs add stage.
void write_trace(const SolverRun& run, std::ostream& out);

// k, L_k, S_k, gap_estimate, wallclock_ns; restarted runs add stage,
// R_p_sq, stage_iterations.
void write_trace(const MPRun& run, std::ostream& out);

// Creates parent directories; OutputUnwritable on failure.
void write_text_file(const std::filesystem::path& file, std::string_view text);

}  // namespace inexact
