#include "ssfm/diagnostics.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace ssfm {

double SuperActionSet::total() const {
  double t = 0.0;
  for (const auto& [m, v] : I) t += v;
  return t;
}

SuperActionSet super_actions(const XiField& xi, const DiagonalizerSet& diag) {
  const Grid& g = diag.grid();
  if (xi.xi.size() != g.size()) throw std::invalid_argument("super_actions: size mismatch");
  SuperActionSet out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    out.I[diag.at(i).n] += std::norm(xi.xi[i]);
  }
  return out;
}

double weighted_deviation(const SuperActionSet& now, const SuperActionSet& initial,
                          double s) {
  if (now.I.size() != initial.I.size())
    throw std::invalid_argument("weighted_deviation: class sets differ");
  double acc = 0.0;
  auto it = initial.I.begin();
  for (const auto& [m, v] : now.I) {
    if (it->first != m) throw std::invalid_argument("weighted_deviation: class sets differ");
    const double w = std::pow(std::max(1.0, static_cast<double>(m)), s);
    acc += w * std::abs(v - it->second);
    ++it;
  }
  return acc;
}

InstabilityVerdict detect_instability(std::span<const std::uint64_t> steps,
                                      std::span<const double> values, double eps,
                                      double threshold_factor) {
  if (steps.size() != values.size())
    throw std::invalid_argument("detect_instability: length mismatch");
  InstabilityVerdict v;
  for (double x : values)
    if (x > threshold_factor * eps) v.unstable = true;
  std::size_t begin = values.size();
  std::size_t end = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (begin == values.size() && values[i] >= 2.0 * eps) begin = i;
    if (begin != values.size() && values[i] > 50.0 * eps) {
      end = i;
      break;
    }
  }
  if (begin == values.size()) return v;
  v.onset_step = steps[begin];

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) continue;
    const double x = static_cast<double>(steps[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  v.fit_points = n;
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    if (den > 0.0) v.growth_rate = (n * sxy - sx * sy) / den;
  }
  return v;
}

DiagnosticsRecorder::DiagnosticsRecorder(TrajectoryDiagnostics& out, RecorderOptions opts,
                                         std::optional<DiagonalizerSet> diag)
    : out_(out), opts_(std::move(opts)), diag_(std::move(diag)) {}

bool DiagnosticsRecorder::operator()(std::uint64_t step, const SpectralField& f) {
  if (out_.steps.empty()) out_.grid = f.grid();
  const double t = static_cast<double>(step) * opts_.h;
  SeriesSample s;
  s.t = t;
  s.mass = mass(f.coeffs());
  s.orbital_distance = orbital_distance(f.coeffs(), f.grid(), opts_.ell, opts_.s);
  s.D = std::numeric_limits<double>::quiet_NaN();
  if (diag_) {
    try {
      const SuperActionSet now = super_actions(u_to_xi(f, *diag_), *diag_);
      if (!initial_) initial_ = now;
      s.D = weighted_deviation(now, *initial_, opts_.s);
    } catch (const TransformError&) {
      // carrier mode vanished; D stays undefined for this sample
    }
  }
  out_.steps.push_back(step);
  out_.series.push_back(s);

  for (const auto& [lo, hi] : opts_.windows) {
    if (t >= lo && t <= hi) {
      SpectrumSnapshot snap;
      snap.t = t;
      snap.abs_u.reserve(f.grid().size());
      for (const cplx& c : f.coeffs()) snap.abs_u.push_back(std::abs(c));
      out_.spectrum.push_back(std::move(snap));
      break;
    }
  }
  return true;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + p.string() + " for writing: " + std::strerror(errno));
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& p) {
  os.flush();
  if (!os) throw IoError("write failed: " + p.string());
}

}  // namespace

EmittedFiles emit(const TrajectoryDiagnostics& diag, const std::filesystem::path& dir,
                  const std::string& runid) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  EmittedFiles files{dir / (runid + "_series.csv"), dir / (runid + "_spectrum.csv"),
                     dir / (runid + "_meta.json")};
  {
    std::ofstream os = open_out(files.series);
    os << "t,mass,orbital_distance,D\n";
    for (const SeriesSample& s : diag.series)
      os << format_double(s.t) << ',' << format_double(s.mass) << ','
         << format_double(s.orbital_distance) << ',' << format_double(s.D) << '\n';
    finish(os, files.series);
  }
  {
    std::ofstream os = open_out(files.spectrum);
    os << "t,j,abs_uj\n";
    for (const SpectrumSnapshot& snap : diag.spectrum) {
      const std::string t = format_double(snap.t);
      for (std::size_t i = 0; i < snap.abs_u.size(); ++i)
        os << t << ',' << mode_to_string(diag.grid.mode_at(i)) << ','
           << format_double(snap.abs_u[i]) << '\n';
    }
    finish(os, files.spectrum);
  }
  {
    std::ofstream os = open_out(files.meta);
    os << diag.meta.dump(2) << '\n';
    finish(os, files.meta);
  }
  return files;
}

std::vector<SeriesSample> read_series_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != "t,mass,orbital_distance,D")
    throw IoError(path.string() + ": unexpected header");
  std::vector<SeriesSample> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[4];
    const char* p = line.c_str();
    for (int k = 0; k < 4; ++k) {
      char* e = nullptr;
      v[k] = std::strtod(p, &e);
      if (e == p || (k < 3 && *e != ',') || (k == 3 && *e != '\0'))
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
      p = e + 1;
    }
    out.push_back({v[0], v[1], v[2], v[3]});
  }
  return out;
}

}  // namespace ssfm
