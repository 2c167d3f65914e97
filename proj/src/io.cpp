#include "relaystab/app/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relaystab::app {

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw std::runtime_error(where + ": bad number '" + s + "'");
  return v;
}

}  // namespace

void write_region_csv(const std::filesystem::path& path, const RegionVertexSet& v,
                      const std::vector<std::string>& axes) {
  if (axes.size() != v.region.dim()) throw DimensionMismatch("axis names do not match region dimension");
  auto out = open_out(path);
  out << "vertex";
  for (const auto& a : axes) out << ',' << a;
  out << ",policy,alpha,limit\n";
  for (std::size_t i = 0; i < v.region.size(); ++i) {
    out << i;
    for (double x : v.region[i]) out << ',' << fmt(x);
    const auto& l = v.labels[i];
    out << ',' << l.policy << ',';
    for (std::size_t j = 0; j < l.alpha.size(); ++j) out << (j ? ";" : "") << fmt(l.alpha[j]);
    out << ',' << (l.limit ? 1 : 0) << '\n';
  }
}

RegionFile read_region_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto head = split(line, ',');
  if (head.size() < 4 || head.front() != "vertex" || head[head.size() - 3] != "policy")
    throw std::runtime_error(path.string() + ": not a region file");
  RegionFile f;
  f.axes.assign(head.begin() + 1, head.end() - 3);
  std::vector<Point> pts;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    const std::string where = path.string() + ":" + std::to_string(row);
    if (cells.size() != head.size()) throw std::runtime_error(where + ": wrong column count");
    Point p;
    for (std::size_t i = 1; i <= f.axes.size(); ++i) p.push_back(parse_double(cells[i], where));
    VertexLabel l;
    l.policy = cells[cells.size() - 3];
    if (!cells[cells.size() - 2].empty())
      for (const auto& a : split(cells[cells.size() - 2], ';')) l.alpha.push_back(parse_double(a, where));
    l.limit = cells.back() == "1";
    pts.push_back(std::move(p));
    f.labels.push_back(std::move(l));
  }
  f.region = CoSet(f.axes.size(), std::move(pts));
  return f;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_trace_csv(const std::filesystem::path& path, const SimOutcome& o) {
  auto out = open_out(path);
  out << "slot";
  for (const auto& q : o.queues) out << ',' << q;
  out << '\n';
  for (const auto& row : o.trace) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

std::vector<std::string> ss_axes() { return {"mu_s", "mu_u"}; }

std::vector<std::string> mu_axes(std::size_t K, std::size_t U) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < K; ++i) out.push_back("mu_s" + std::to_string(i));
  for (std::size_t j = 0; j < U; ++j) out.push_back("mu_u" + std::to_string(K + j));
  return out;
}

}  // namespace relaystab::app
