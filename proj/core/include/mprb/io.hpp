#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mprb/attractor.hpp"
#include "mprb/audit.hpp"
#include "mprb/galerkin.hpp"

namespace mprb {

// %.17g, the form used by every CSV writer.
std::string format_double(double x);

struct Checkpoint {
  DomainSpec domain;
  DimensionlessParams params;
  ModelKind model = ModelKind::micropolar;
  State state;
};

void write_checkpoint(std::ostream& os, const Checkpoint& c);
Checkpoint read_checkpoint(std::istream& is, const std::string& what = "checkpoint");
void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

// Columns: t, the NormSet fields, and the energy residuals of the interval
// ending at that row (zero on the first row).
extern const char* const kTimeseriesHeader;
void write_timeseries_csv(std::ostream& os, const Trajectory& traj);
// Reads the norm columns back; energy terms are not stored and stay zero.
Trajectory read_timeseries_csv(std::istream& is, const std::string& what = "time series");

void write_audit_csv(std::ostream& os, const AuditReport& rep, const std::string& run_name);
void write_audit_table(std::ostream& os, const AuditReport& rep);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

void write_sample(std::ostream& os, const AttractorSample& s, const DomainSpec& d);
AttractorSample read_sample(std::istream& is, DomainSpec* domain = nullptr, const std::string& what = "sample");

// Writes to `path` through a stream, raising IoError on failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace mprb
