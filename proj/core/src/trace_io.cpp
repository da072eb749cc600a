#include "inexact/trace_io.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "inexact/errors.hpp"

namespace inexact {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

namespace {

template <class T>
std::string at(const std::vector<T>& v, std::size_t i) {
  if (i >= v.size()) return "";
  if constexpr (std::is_floating_point_v<T>)
    return format_real(v[i]);
  else
    return std::to_string(v[i]);
}

}  // namespace

void write_trace(const SolverRun& run, std::ostream& out) {
  const bool accelerated = !run.A_history.empty();
  const bool staged = !run.stage_history.empty();
  out << "k,f_delta,L_k,V_to_ref,bound_rhs,cumulative_model_evals";
  if (accelerated) out << ",A_k,alpha_k,delta_k,mode";
  if (staged) out << ",stage";
  out << '\n';
  for (int k = 0; k < run.iterations(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    out << k + 1 << ',' << at(run.f_history, i) << ',' << at(run.L_history, i) << ',' << at(run.V_to_ref, i) << ','
        << at(run.bound_history, i) << ',' << at(run.evals_history, i);
    if (accelerated)
      out << ',' << at(run.A_history, i) << ',' << at(run.alpha_history, i) << ',' << at(run.delta_history, i) << ','
          << run.mode;
    if (staged) out << ',' << at(run.stage_history, i);
    out << '\n';
  }
}

void write_trace(const MPRun& run, std::ostream& out) {
  const bool staged = !run.stages.empty();
  out << "k,L_k,S_k,gap_estimate,wallclock_ns";
  if (staged) out << ",stage,R_p_sq,stage_iterations";
  out << '\n';
  for (int k = 0; k < run.iterations(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    const bool last = k + 1 == run.iterations();
    out << k + 1 << ',' << at(run.L_history, i) << ',' << at(run.S_history, i) << ','
        << (last && run.gap_estimate ? format_real(*run.gap_estimate) : "") << ',' << at(run.wallclock_ns, i);
    if (staged) {
      const auto& st = run.stages[static_cast<std::size_t>(run.stage_history[i] - 1)];
      out << ',' << st.stage << ',' << format_real(st.R_sq) << ',' << st.iterations;
    }
    out << '\n';
  }
}

void write_text_file(const std::filesystem::path& file, std::string_view text) {
  std::error_code ec;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kOutputUnwritable, "cannot write " + file.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::kOutputUnwritable, "write failed for " + file.string());
}

}  // namespace inexact
