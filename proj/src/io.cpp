#include "levy/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace levy::io {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void write_header(std::ostream& out, const std::string& prefix, const std::string& a,
                  Eigen::Index dim, const std::string& b = "") {
  out << prefix;
  for (Eigen::Index i = 0; i < dim; ++i) out << ',' << a << '_' << i;
  if (!b.empty())
    for (Eigen::Index i = 0; i < dim; ++i) out << ',' << b << '_' << i;
  out << '\n';
}

void write_vector(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << format_real(v[i]);
}

Vector read_vector(const std::vector<std::string>& fields, std::size_t offset, Eigen::Index dim) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = parse_real(fields[offset + static_cast<std::size_t>(i)]);
  return v;
}

long parse_long(const std::string& text) {
  long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw InvalidArgument("CSV: bad integer '" + text + "'");
  return v;
}

Eigen::Index columns_dim(const std::vector<std::string>& header, std::size_t fixed,
                         std::size_t blocks) {
  if (header.size() < fixed + blocks || (header.size() - fixed) % blocks != 0)
    throw InvalidArgument("CSV: malformed header");
  return static_cast<Eigen::Index>((header.size() - fixed) / blocks);
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw InvalidArgument("CSV: bad real '" + text + "'");
  return v;
}

void write_paths_csv(std::ostream& out, const std::vector<const CadlagPath*>& paths,
                     Eigen::Index dim) {
  write_header(out, "replica,t,kind", "value", dim, "delta");
  const Vector zero = Vector::Zero(dim);
  for (std::size_t r = 0; r < paths.size(); ++r) {
    require(paths[r]->dim() == dim, "write_paths_csv: dimension mismatch");
    for (const auto& k : paths[r]->knots()) {
      if (k.on_grid) {
        out << r << ',' << format_real(k.time) << ",grid";
        write_vector(out, k.value);
        write_vector(out, zero);
        out << '\n';
      }
      if (k.has_jump) {
        out << r << ',' << format_real(k.time) << ",jump";
        write_vector(out, k.value);
        write_vector(out, k.delta);
        out << '\n';
      }
    }
  }
}

std::map<long, CadlagPath> read_paths_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("paths CSV: empty input");
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "replica" || header[1] != "t" || header[2] != "kind")
    throw InvalidArgument("paths CSV: unexpected header");
  const auto dim = columns_dim(header, 3, 2);

  std::map<long, std::vector<Knot>> knots;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw InvalidArgument("paths CSV: wrong number of fields");
    const long replica = parse_long(f[0]);
    const double t = parse_real(f[1]);
    const bool jump = f[2] == "jump";
    if (!jump && f[2] != "grid") throw InvalidArgument("paths CSV: kind must be grid or jump");
    auto& list = knots[replica];
    if (list.empty() || list.back().time != t) {
      if (!list.empty() && t < list.back().time)
        throw InvalidArgument("paths CSV: rows must be time-ordered per replica");
      list.push_back({t, read_vector(f, 3, dim), Vector::Zero(dim), false, false});
    }
    auto& k = list.back();
    if (jump) {
      k.has_jump = true;
      k.delta = read_vector(f, 3 + static_cast<std::size_t>(dim), dim);
      k.value = read_vector(f, 3, dim);
    } else {
      k.on_grid = true;
    }
  }
  std::map<long, CadlagPath> out;
  for (auto& [replica, list] : knots) out.emplace(replica, CadlagPath(std::move(list)));
  return out;
}

void write_prm_csv(std::ostream& out, const std::vector<const PRMSample*>& samples,
                   Eigen::Index dim) {
  write_header(out, "replica,time,shell", "mark", dim);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    for (const auto& a : samples[r]->atoms) {
      out << r << ',' << format_real(a.time) << ',' << a.shell.n;
      write_vector(out, a.mark);
      out << '\n';
    }
  }
}

std::map<long, PRMSample> read_prm_csv(std::istream& in, double horizon, int shell_cutoff) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("PRM CSV: empty input");
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "replica" || header[1] != "time" || header[2] != "shell")
    throw InvalidArgument("PRM CSV: unexpected header");
  const auto dim = columns_dim(header, 3, 1);
  std::map<long, PRMSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw InvalidArgument("PRM CSV: wrong number of fields");
    auto& prm = out[parse_long(f[0])];
    prm.dim = dim;
    prm.horizon = horizon;
    prm.shell_cutoff = shell_cutoff;
    prm.atoms.push_back({parse_real(f[1]), read_vector(f, 3, dim),
                         ShellIndex{static_cast<int>(parse_long(f[2]))}});
  }
  return out;
}

nlohmann::json to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

nlohmann::json to_json(const Complex& z) { return {z.real(), z.imag()}; }

namespace {
nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}
}  // namespace

nlohmann::json to_json(const CFReport& r) {
  return {{"functional", to_json(r.functional)},
          {"t", r.t},
          {"analytic", to_json(r.analytic)},
          {"empirical", to_json(r.empirical)},
          {"stderr", r.stderr_value},
          {"z_score", finite_or_null(r.z_score)}};
}

nlohmann::json to_json(const IndependenceStat& s) {
  return {{"functional", s.functional_index},
          {"transform", to_string(s.transform)},
          {"pair", s.pair},
          {"correlation", s.correlation.r},
          {"z_score", finite_or_null(s.correlation.z)},
          {"zero_variance", s.correlation.zero_variance}};
}

nlohmann::json to_json(const ReducibilityReport& r) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"level", l.level},
                      {"shift", to_json(l.shift)},
                      {"m", l.m},
                      {"mass_inside", l.mass_inside},
                      {"method", l.method}});
  return {{"epsilon", r.epsilon}, {"levels", levels}, {"monotone_flag", r.monotone_flag}};
}

}  // namespace levy::io
