#include "mprb/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "binary_io.hpp"
#include "mprb/errors.hpp"

namespace mprb {

namespace {

constexpr char kCheckpointMagic[8] = {'M', 'P', 'R', 'B', 'C', 'H', 'K', '\0'};
constexpr char kSampleMagic[8] = {'M', 'P', 'R', 'B', 'S', 'M', 'P', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_params(bin::Writer& w, const DimensionlessParams& p) {
  for (double v : {p.Ra, p.Pr, p.K, p.L, p.M, p.G, p.ax, p.ay}) w.put(v);
}

DimensionlessParams get_params(bin::Reader& r) {
  double v[8];
  for (double& x : v) x = r.get<double>();
  return DimensionlessParams::make(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]);
}

void put_state(bin::Writer& w, const State& s) {
  w.put(s.t);
  w.f64s(s.u.c);
  w.f64s(s.gamma.c);
  w.f64s(s.theta.c);
}

State get_state(bin::Reader& r) {
  State s;
  s.t = r.get<double>();
  s.u.c = r.f64s();
  s.gamma.c = r.f64s();
  s.theta.c = r.f64s();
  return s;
}

void expect_magic(bin::Reader& r, const char (&magic)[8], const std::string& what) {
  char m[8];
  r.bytes(m, 8);
  if (std::memcmp(m, magic, 8) != 0) throw IoError("bad magic in " + what);
  if (r.get<std::uint32_t>() != kVersion) throw IoError("unsupported version in " + what);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_checkpoint(std::ostream& os, const Checkpoint& c) {
  bin::Writer w(os);
  w.bytes(kCheckpointMagic, 8);
  w.put(kVersion);
  bin::write_domain(w, c.domain);
  put_params(w, c.params);
  w.put(static_cast<std::uint32_t>(c.model));
  put_state(w, c.state);
  w.check("checkpoint");
}

Checkpoint read_checkpoint(std::istream& is, const std::string& what) {
  bin::Reader r(is, what);
  expect_magic(r, kCheckpointMagic, what);
  Checkpoint c;
  c.domain = bin::read_domain(r);
  c.params = get_params(r);
  const auto model = r.get<std::uint32_t>();
  if (model > 1) throw IoError("unknown model tag in " + what);
  c.model = static_cast<ModelKind>(model);
  c.state = get_state(r);
  return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& c) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_checkpoint(os, c);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_checkpoint(is, path);
}

const char* const kTimeseriesHeader =
    "t,l2_u,l2_gamma,l2_theta,h1_u,h1_gamma,h1_theta,V,pos_part,neg_part,r_u,r_gamma,r_theta";

void write_timeseries_csv(std::ostream& os, const Trajectory& traj) {
  const auto res = energy_residuals(traj, traj.params);
  os << kTimeseriesHeader << '\n';
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const auto& r = traj.records[i];
    const auto& n = r.norms;
    EnergyResiduals e;
    if (i > 0) e = res[i - 1];
    const double row[] = {r.t,     n.l2_u,     n.l2_gamma,   n.l2_theta, n.h1_u, n.h1_gamma,
                          n.h1_theta, n.V,     n.pos_part,   n.neg_part, e.r_u,  e.r_gamma, e.r_theta};
    for (std::size_t k = 0; k < std::size(row); ++k) os << (k ? "," : "") << format_double(row[k]);
    os << '\n';
  }
  if (!os) throw IoError("write failed: time series");
}

Trajectory read_timeseries_csv(std::istream& is, const std::string& what) {
  std::string line;
  if (!std::getline(is, line) || line != kTimeseriesHeader) throw IoError("unexpected header in " + what);
  Trajectory traj;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 13) throw IoError(what + ":" + std::to_string(lineno) + ": expected 13 columns");
    double v[13];
    for (int k = 0; k < 13; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(cells[k].c_str(), &end);
      if (end == cells[k].c_str() || *end != '\0')
        throw IoError(what + ":" + std::to_string(lineno) + ": bad number '" + cells[k] + "'");
    }
    StepRecord r;
    r.t = v[0];
    r.norms = {v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
    traj.records.push_back(r);
  }
  return traj;
}

void write_audit_csv(std::ostream& os, const AuditReport& rep, const std::string& run_name) {
  os << "audit,name,worst_margin,t_worst,pass,detail\n";
  for (const auto& r : rep.records)
    os << r.name << ',' << csv_quote(run_name) << ',' << format_double(r.worst_margin) << ','
       << format_double(r.t_worst) << ',' << to_string(r.status) << ',' << csv_quote(r.detail) << '\n';
  if (!os) throw IoError("write failed: audit csv");
}

void write_audit_table(std::ostream& os, const AuditReport& rep) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-16s %-6s %14s %12s %12s  %s\n", "audit", "status", "worst_margin", "t_worst",
                "tolerance", "detail");
  os << buf;
  for (const auto& r : rep.records) {
    std::snprintf(buf, sizeof buf, "%-16s %-6s %14.6e %12.6g %12.4e  %s\n", r.name.c_str(), to_string(r.status),
                  r.worst_margin, r.t_worst, r.tolerance, r.detail.c_str());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "T1 = %.6g  R = %.6g  D = %.6g  c1 = %.6g  t* = %.6g  implied c4 = %.6g\n", rep.T1,
                rep.R, rep.D, rep.c1, rep.t_star, rep.implied_c4);
  os << buf;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "K,dist_X,dist_Z,n_samples,burn_in,window\n";
  for (const auto& r : rows) {
    const double nan = std::nan("");
    os << format_double(r.K) << ',' << format_double(r.refused ? nan : r.dist_X) << ','
       << format_double(r.refused ? nan : r.dist_Z) << ',' << r.n_samples << ',' << format_double(r.burn_in) << ','
       << format_double(r.window) << '\n';
  }
  if (!os) throw IoError("write failed: sweep csv");
}

// Layout: magic "MPRBSMP\0", u32 version, u32 metric, u32 model, f64 burn_in,
// window, cadence, dt, u32 scheme, f64 t_star, u64 count, then `count`
// checkpoints sharing the domain and parameters.
void write_sample(std::ostream& os, const AttractorSample& s, const DomainSpec& d) {
  bin::Writer w(os);
  w.bytes(kSampleMagic, 8);
  w.put(kVersion);
  w.put(static_cast<std::uint32_t>(s.metric));
  w.put(static_cast<std::uint32_t>(s.model));
  for (double v : {s.window.burn_in, s.window.window, s.window.cadence, s.window.dt}) w.put(v);
  w.put(static_cast<std::uint32_t>(s.window.scheme));
  w.put(s.t_star);
  w.put<std::uint64_t>(s.states.size());
  w.check("sample header");
  for (const auto& st : s.states) write_checkpoint(os, Checkpoint{d, s.params, s.model, st});
  w.check("sample");
}

AttractorSample read_sample(std::istream& is, DomainSpec* domain, const std::string& what) {
  bin::Reader r(is, what);
  expect_magic(r, kSampleMagic, what);
  AttractorSample s;
  const auto metric = r.get<std::uint32_t>();
  const auto model = r.get<std::uint32_t>();
  if (metric > 1 || model > 1) throw IoError("bad tag in " + what);
  s.metric = static_cast<Metric>(metric);
  s.model = static_cast<ModelKind>(model);
  s.window.burn_in = r.get<double>();
  s.window.window = r.get<double>();
  s.window.cadence = r.get<double>();
  s.window.dt = r.get<double>();
  const auto scheme = r.get<std::uint32_t>();
  if (scheme > 2) throw IoError("bad scheme tag in " + what);
  s.window.scheme = static_cast<Scheme>(scheme);
  s.t_star = r.get<double>();
  const auto count = r.get<std::uint64_t>();
  if (count > (1ull << 32)) throw IoError("corrupt count in " + what);
  for (std::uint64_t i = 0; i < count; ++i) {
    Checkpoint c = read_checkpoint(is, what);
    if (i == 0) {
      s.params = c.params;
      if (domain) *domain = c.domain;
    }
    s.states.push_back(std::move(c.state));
  }
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << content;
  if (!os) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace mprb
