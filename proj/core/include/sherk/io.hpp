#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sherk/energy.hpp"
#include "sherk/grid.hpp"
#include "sherk/verification.hpp"

namespace sherk {

/// SHF1 snapshot: one text line "SHF1 <N> <L> <t>\n" followed by N*N
/// little-endian IEEE-754 doubles in the field's flat order (p * N + q,
/// first index along x). L and t are printed with 17 significant digits.
void write_shf1(const std::filesystem::path& path, const RealField& u, double t);

struct Shf1Snapshot {
  RealField u;
  double t = 0.0;
};

/// Throws IoError on a malformed header or when the payload length differs
/// from the one the header implies.
Shf1Snapshot read_shf1(const std::filesystem::path& path);

/// Columns step,t,E,Ec,Ee,l2,linf with 17 significant digits.
void write_trace_csv(std::ostream& os, const EnergyTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const EnergyTrace& trace);
std::vector<EnergySample> read_trace_csv(const std::filesystem::path& path);

/// Columns report,check,sample,big,small,margin,violated.
void write_check_csv(const std::filesystem::path& path, const std::vector<CheckReport>& reports);

/// Columns scheme,tau,error,included,blew_up,fitted_slope,reference_error.
void write_order_csv(const std::filesystem::path& path, const std::vector<OrderReport>& reports);

}  // namespace sherk
