#pragma once

#include <string>

#include "run_config.hpp"
#include "mprb/space.hpp"

namespace mprb::cli {

// Exit status of `audit` when an applicable audit fails.
inline constexpr int kAuditFailedExit = 5;

SpacePtr build_space(const RunConfig& rc);
State initial_state(const RunConfig& rc, const Space& sp);
double effective_c1(const RunConfig& rc, const Space& sp);
// The configured dt, or the CFL estimate at s0 when dt = auto.
double effective_dt(const RunConfig& rc, const GalerkinSystem& sys, const State& s0);

int cmd_basis(const RunConfig& rc);
int cmd_simulate(const RunConfig& rc);
// Audits `timeseries_csv` when given, otherwise simulates first.
int cmd_audit(const RunConfig& rc, const std::string& timeseries_csv = "");
int cmd_attractor(const RunConfig& rc);
int cmd_sweep_k(const RunConfig& rc);
int cmd_calibrate(const RunConfig& rc);

}  // namespace mprb::cli
