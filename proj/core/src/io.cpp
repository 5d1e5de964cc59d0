#include "sherk/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "sherk/error.hpp"
#include "sherk/schemes.hpp"

namespace sherk {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::out | std::ios::trunc | mode);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((v >> (8 * i)) & 0xFF);
    return r;
  }
}

}  // namespace

void write_shf1(const std::filesystem::path& path, const RealField& u, double t) {
  auto os = open_out(path, std::ios::binary);
  const GridSpec& g = u.grid();
  os << "SHF1 " << g.size() << ' ' << g17(g.length()) << ' ' << g17(t) << '\n';
  for (double v : u.values()) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    os.write(bytes, 8);
  }
  finish(os, path);
}

Shf1Snapshot read_shf1(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  std::string header;
  if (!std::getline(is, header)) throw IoError(path.string() + ": missing SHF1 header");
  std::istringstream hs(header);
  std::string magic;
  long long n = 0;
  double length = 0.0, t = 0.0;
  if (!(hs >> magic >> n >> length >> t) || magic != "SHF1") {
    throw IoError(path.string() + ": malformed SHF1 header '" + header + "'");
  }
  if (n < 4 || n > (1 << 15)) throw IoError(path.string() + ": unsupported grid size");

  const auto expected = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const auto data_start = static_cast<std::size_t>(is.tellg());
  is.seekg(0, std::ios::end);
  const auto total = static_cast<std::size_t>(is.tellg());
  if (total - data_start != expected * 8) {
    throw IoError(path.string() + ": payload has " + std::to_string(total - data_start) +
                  " bytes, header implies " + std::to_string(expected * 8));
  }
  is.seekg(static_cast<std::streamoff>(data_start));
  std::vector<double> values(expected);
  for (auto& v : values) {
    char bytes[8];
    is.read(bytes, 8);
    std::uint64_t bits;
    std::memcpy(&bits, bytes, 8);
    v = std::bit_cast<double>(to_little_endian(bits));
  }
  if (!is) throw IoError(path.string() + ": truncated payload");
  try {
    return Shf1Snapshot{RealField(make_grid(length, static_cast<int>(n)), std::move(values)), t};
  } catch (const Error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_trace_csv(std::ostream& os, const EnergyTrace& trace) {
  os << "step,t,E,Ec,Ee,l2,linf\n";
  for (const auto& s : trace.samples()) {
    os << s.step << ',' << g17(s.t) << ',' << g17(s.energy) << ',' << g17(s.linear) << ','
       << g17(s.nonlinear) << ',' << g17(s.l2) << ',' << g17(s.linf) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const EnergyTrace& trace) {
  auto os = open_out(path);
  write_trace_csv(os, trace);
  finish(os, path);
}

std::vector<EnergySample> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(is, line);
  if (line != "step,t,E,Ec,Ee,l2,linf") throw IoError(path.string() + ": unexpected trace header");
  std::vector<EnergySample> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    EnergySample s;
    char c[6];
    std::istringstream ls(line);
    if (!(ls >> s.step >> c[0] >> s.t >> c[1] >> s.energy >> c[2] >> s.linear >> c[3] >>
          s.nonlinear >> c[4] >> s.l2 >> c[5] >> s.linf)) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed trace row");
    }
    out.push_back(s);
  }
  return out;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

void write_check_csv(const std::filesystem::path& path, const std::vector<CheckReport>& reports) {
  auto os = open_out(path);
  os << "report,check,sample,big,small,margin,violated\n";
  for (const auto& r : reports) {
    for (const auto& e : r.entries) {
      os << r.name << ',' << csv_quote(e.check) << ',' << csv_quote(e.sample) << ',' << g17(e.big)
         << ',' << g17(e.small) << ',' << g17(e.margin) << ',' << (e.violated ? 1 : 0) << '\n';
    }
  }
  finish(os, path);
}

void write_order_csv(const std::filesystem::path& path, const std::vector<OrderReport>& reports) {
  auto os = open_out(path);
  os << "scheme,tau,error,included,blew_up,fitted_slope,reference_error\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.taus.size(); ++i) {
      os << to_string(r.scheme) << ',' << g17(r.taus[i]) << ',' << g17(r.errors[i]) << ','
         << (r.included[i] ? 1 : 0) << ',' << (r.blew_up[i] ? 1 : 0) << ',' << g17(r.slope) << ','
         << g17(r.reference_error) << '\n';
    }
  }
  finish(os, path);
}

}  // namespace sherk
