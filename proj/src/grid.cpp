#include "qhess/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qhess {

std::size_t GridSpec::total() const {
  std::size_t t = 1;
  for (int a = 0; a < axes(); ++a) t *= static_cast<std::size_t>(points);
  return t;
}

std::vector<std::size_t> GridSpec::strides() const {
  std::vector<std::size_t> st(axes());
  std::size_t s = 1;
  for (int a = axes() - 1; a >= 0; --a) {
    st[a] = s;
    s *= static_cast<std::size_t>(points);
  }
  return st;
}

void GridSpec::validate() const {
  if (n < 1 || n > 2)
    throw std::invalid_argument("GridSpec: full grids support n = 1 or 2");
  if (points < 5 || points % 2 == 0)
    throw std::invalid_argument("GridSpec: points must be odd and >= 5");
  if (!(extent > 0.0)) throw std::invalid_argument("GridSpec: extent must be positive");
}

std::size_t interior_count(const GridSpec& s, int margin) {
  const int w = s.points - 2 * margin;
  if (w <= 0) return 0;
  std::size_t t = 1;
  for (int a = 0; a < s.axes(); ++a) t *= static_cast<std::size_t>(w);
  return t;
}

std::size_t interior_point(const GridSpec& s, int margin, std::size_t k, int* idx) {
  const int w = s.points - 2 * margin;
  const int d = s.axes();
  std::size_t flat = 0;
  for (int a = d - 1; a >= 0; --a) {
    idx[a] = margin + static_cast<int>(k % static_cast<std::size_t>(w));
    k /= static_cast<std::size_t>(w);
  }
  const auto st = s.strides();
  for (int a = 0; a < d; ++a) flat += st[a] * static_cast<std::size_t>(idx[a]);
  return flat;
}

GridField field_from_function(const GridSpec& s,
                              const std::function<double(const double*)>& fn) {
  GridField f(s, 0);
  const int d = s.axes();
  parallel_for(s.total(), [&](std::size_t b, std::size_t e) {
    std::vector<double> x(d);
    std::vector<int> idx(d);
    for (std::size_t k = b; k < e; ++k) {
      std::size_t r = k;
      for (int a = d - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(r % static_cast<std::size_t>(s.points));
        r /= static_cast<std::size_t>(s.points);
      }
      for (int a = 0; a < d; ++a) x[a] = s.coord(idx[a]);
      f.v[k] = fn(x.data());
    }
  });
  return f;
}

namespace {

nlohmann::ordered_json header_json(const GridField& f) {
  nlohmann::ordered_json h;
  h["format"] = "qhess-grid-field";
  h["n"] = f.spec.n;
  h["extent"] = f.spec.extent;
  h["points"] = f.spec.points;
  h["margin"] = f.margin;
  h["order"] = "row-major-axis0-slowest";
  h["count"] = f.spec.total();
  return h;
}

GridField field_from_header(const nlohmann::json& h) {
  if (h.value("format", "") != "qhess-grid-field")
    throw std::runtime_error("grid field header: bad format tag");
  GridSpec s;
  s.n = h.at("n").get<int>();
  s.extent = h.at("extent").get<double>();
  s.points = h.at("points").get<int>();
  GridField f(s, h.at("margin").get<int>());
  if (h.at("count").get<std::size_t>() != s.total())
    throw std::runtime_error("grid field header: count mismatch");
  return f;
}

}  // namespace

void save_field_binary(const std::string& path, const GridField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_field_binary: cannot open " + path);
  const std::string h = header_json(f).dump();
  const std::uint32_t hlen = static_cast<std::uint32_t>(h.size());
  out.write("QGF1", 4);
  out.write(reinterpret_cast<const char*>(&hlen), sizeof hlen);
  out.write(h.data(), h.size());
  out.write(reinterpret_cast<const char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!out) throw std::runtime_error("save_field_binary: write failed");
}

GridField load_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_field_binary: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "QGF1", 4) != 0)
    throw std::runtime_error("load_field_binary: bad magic");
  std::uint32_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof hlen);
  std::string h(hlen, '\0');
  in.read(h.data(), hlen);
  GridField f = field_from_header(nlohmann::json::parse(h));
  in.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!in) throw std::runtime_error("load_field_binary: truncated payload");
  return f;
}

void save_field_csv(const std::string& path, const GridField& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_field_csv: cannot open " + path);
  std::string h = header_json(f).dump();
  // RFC-4180 quoting of the single header field.
  std::string quoted = "\"";
  for (char c : h) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += "\"";
  out << quoted << "\r\n";
  out.precision(17);
  for (double x : f.v) out << x << "\r\n";
  if (!out) throw std::runtime_error("save_field_csv: write failed");
}

GridField load_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_field_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_field_csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() < 2 || line.front() != '"' || line.back() != '"')
    throw std::runtime_error("load_field_csv: missing header record");
  std::string h;
  for (std::size_t i = 1; i + 1 < line.size(); ++i) {
    if (line[i] == '"' && i + 2 < line.size() && line[i + 1] == '"') {
      h += '"';
      ++i;
    } else {
      h += line[i];
    }
  }
  GridField f = field_from_header(nlohmann::json::parse(h));
  for (std::size_t k = 0; k < f.v.size(); ++k) {
    if (!std::getline(in, line)) throw std::runtime_error("load_field_csv: short file");
    f.v[k] = std::stod(line);
  }
  return f;
}

}  // namespace qhess
