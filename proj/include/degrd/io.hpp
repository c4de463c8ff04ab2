#pragma once

#include <string>
#include <vector>

#include "degrd/functionals.hpp"
#include "degrd/model.hpp"

namespace degrd {

/// Header of timeseries.csv; 20 columns.
inline constexpr const char* kTimeseriesHeader =
    "t,E,E_rel,D,M1,M2,l1_a,l1_b,l1_c,dev_A2,dev_B2,dev_C2,abc_defect,ckp_lhs,"
    "b_l32,a_l32,b_lN2,c_l3,int_a2ac,int_b2bc";

std::string timeseries_row(const FunctionalSample& s);
std::string format_timeseries(const std::vector<FunctionalSample>& samples);
void write_timeseries(const std::string& path, const std::vector<FunctionalSample>& samples);

/// Throws ParseError naming the first bad line; IoError if unreadable.
std::vector<FunctionalSample> parse_timeseries(const std::string& text);
std::vector<FunctionalSample> read_timeseries(const std::string& path);

/// Cell snapshot: "dim cells... lengths..." then one "a b c" line per cell.
struct Snapshot {
  int dim = 1;
  std::vector<int> cells;
  std::vector<double> lengths;
  SpeciesFields fields;
};

std::string format_snapshot(const Snapshot& snap);
void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot parse_snapshot(const std::string& text);
Snapshot read_snapshot(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace degrd
