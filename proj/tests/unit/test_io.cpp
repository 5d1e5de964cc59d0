#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sherk/error.hpp"
#include "sherk/io.hpp"
#include "sherk/verification.hpp"

using namespace sherk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sherk_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Shf1, RoundTripIsExact) {
  auto g = make_grid(0.1 + 1.0 / 3.0, 12);
  const RealField u = random_field(g, 4, 0, FieldKind::Rough);
  const auto p = scratch("a.shf1");
  write_shf1(p, u, 1.0 / 7.0);
  const auto back = read_shf1(p);
  EXPECT_EQ(back.t, 1.0 / 7.0);
  EXPECT_EQ(back.u.grid().length(), g->length());
  EXPECT_EQ(back.u.grid().size(), 12);
  for (std::size_t i = 0; i < u.values().size(); ++i) EXPECT_EQ(back.u.values()[i], u.values()[i]);
  EXPECT_EQ(fs::file_size(p), std::string("SHF1 12 0.43333333333333335 0.14285714285714285\n").size() + 144 * 8);
}

TEST(Shf1, KnownLayout) {
  auto g = make_grid(4.0, 4);
  std::vector<double> v(16);
  for (int i = 0; i < 16; ++i) v[i] = i;
  const auto p = scratch("layout.shf1");
  write_shf1(p, RealField(g, v), 0.0);
  std::ifstream is(p, std::ios::binary);
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "SHF1 4 4 0");
  unsigned char bytes[16];
  is.read(reinterpret_cast<char*>(bytes), 16);
  // 0.0 then 1.0 = 0x3FF0000000000000, little-endian.
  for (int i = 0; i < 8; ++i) EXPECT_EQ(bytes[i], 0);
  EXPECT_EQ(bytes[14], 0xF0);
  EXPECT_EQ(bytes[15], 0x3F);
}

TEST(Shf1, RejectsTruncatedAndMalformed) {
  auto g = make_grid(1.0, 4);
  const auto p = scratch("t.shf1");
  write_shf1(p, RealField(g), 0.0);
  fs::resize_file(p, fs::file_size(p) - 3);
  EXPECT_THROW(read_shf1(p), IoError);
  {
    std::ofstream os(scratch("bad.shf1"));
    os << "SHF2 4 1 0\n";
  }
  EXPECT_THROW(read_shf1(scratch("bad.shf1")), IoError);
  EXPECT_THROW(read_shf1(scratch("missing.shf1")), IoError);
  try {
    read_shf1(p);
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("t.shf1"), std::string::npos);
  }
}

TEST(TraceCsv, RoundTrip) {
  EnergyTrace t;
  for (int k = 0; k < 3; ++k) {
    EnergySample s{k, 0.1 * k, 1.0 / (k + 3), 0.2, 0.3 / 7, 0.4, 0.5};
    t.append(s);
  }
  const auto p = scratch("trace.csv");
  write_trace_csv(p, t);
  const auto back = read_trace_csv(p);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].step, t.samples()[i].step);
    EXPECT_EQ(back[i].t, t.samples()[i].t);
    EXPECT_EQ(back[i].energy, t.samples()[i].energy);
    EXPECT_EQ(back[i].nonlinear, t.samples()[i].nonlinear);
  }
  std::ifstream is(p);
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "step,t,E,Ec,Ee,l2,linf");
}

TEST(ReportCsv, Writes) {
  CheckReport r;
  r.name = "demo";
  r.record("x", "N=8, k=1", 1.0, 0.5);
  const auto p = scratch("report.csv");
  write_check_csv(p, {r});
  std::ifstream is(p);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "report,check,sample,big,small,margin,violated");
  std::getline(is, line);
  EXPECT_EQ(line, "demo,x,\"N=8, k=1\",1,0.5,0.5,0");
}
