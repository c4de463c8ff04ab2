#include "degrd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "degrd/config.hpp"
#include "degrd/error.hpp"

namespace degrd {

namespace {

constexpr std::size_t kColumns = 20;

[[noreturn]] void parse_fail(int line, const std::string& message) {
  throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + message);
}

double parse_number(std::string_view word, int line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size()) {
    parse_fail(line, "malformed number '" + std::string(word) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto end = s.find(sep, pos);
    parts.push_back(s.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return parts;
}

std::vector<std::string_view> lines_of(const std::string& text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return lines;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  out << contents;
  if (!out.flush()) throw Error(ErrorCode::io_error, "write failed for '" + path + "'");
}

std::string timeseries_row(const FunctionalSample& s) {
  const auto diag_value = [&](const char* label) {
    const auto it = s.diag_norms.find(label);
    return it == s.diag_norms.end() ? std::nan("") : it->second;
  };
  const double values[kColumns] = {s.t,         s.E,         s.E_rel,     s.D,
                                   s.M1,        s.M2,        s.l1_dist_a, s.l1_dist_b,
                                   s.l1_dist_c, s.dev_A2,    s.dev_B2,    s.dev_C2,
                                   s.abc_defect, s.ckp_lhs,  diag_value(diag::b_l32), diag_value(diag::a_l32),
                                   diag_value(diag::b_lN2),  diag_value(diag::c_l3),  diag_value(diag::int_a2ac),
                                   diag_value(diag::int_b2bc)};
  std::string row;
  for (std::size_t i = 0; i < kColumns; ++i) {
    if (i > 0) row += ',';
    row += format_double(values[i]);
  }
  return row;
}

std::string format_timeseries(const std::vector<FunctionalSample>& samples) {
  std::string out = kTimeseriesHeader;
  out += '\n';
  for (const auto& s : samples) {
    out += timeseries_row(s);
    out += '\n';
  }
  return out;
}

void write_timeseries(const std::string& path, const std::vector<FunctionalSample>& samples) {
  write_file(path, format_timeseries(samples));
}

std::vector<FunctionalSample> parse_timeseries(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kTimeseriesHeader) parse_fail(1, "timeseries header does not match the schema");
  std::vector<FunctionalSample> samples;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    const auto cells = split(lines[i], ',');
    if (cells.size() != kColumns) {
      parse_fail(line_no, "expected 20 columns, found " + std::to_string(cells.size()));
    }
    double v[kColumns];
    for (std::size_t k = 0; k < kColumns; ++k) v[k] = parse_number(cells[k], line_no);
    FunctionalSample s;
    s.t = v[0];
    s.E = v[1];
    s.E_rel = v[2];
    s.D = v[3];
    s.M1 = v[4];
    s.M2 = v[5];
    s.l1_dist_a = v[6];
    s.l1_dist_b = v[7];
    s.l1_dist_c = v[8];
    s.dev_A2 = v[9];
    s.dev_B2 = v[10];
    s.dev_C2 = v[11];
    s.abc_defect = v[12];
    s.ckp_lhs = v[13];
    s.diag_norms[diag::b_l32] = v[14];
    s.diag_norms[diag::a_l32] = v[15];
    s.diag_norms[diag::b_lN2] = v[16];
    s.diag_norms[diag::c_l3] = v[17];
    s.diag_norms[diag::int_a2ac] = v[18];
    s.diag_norms[diag::int_b2bc] = v[19];
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<FunctionalSample> read_timeseries(const std::string& path) { return parse_timeseries(read_file(path)); }

std::string format_snapshot(const Snapshot& snap) {
  std::string out = std::to_string(snap.dim);
  for (int n : snap.cells) out += ' ' + std::to_string(n);
  for (double l : snap.lengths) out += ' ' + format_double(l);
  out += '\n';
  for (std::size_t i = 0; i < snap.fields.size(); ++i) {
    out += format_double(snap.fields.a[i]) + ' ' + format_double(snap.fields.b[i]) + ' ' +
           format_double(snap.fields.c[i]) + '\n';
  }
  return out;
}

void write_snapshot(const std::string& path, const Snapshot& snap) { write_file(path, format_snapshot(snap)); }

Snapshot parse_snapshot(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) parse_fail(1, "empty snapshot");
  const auto head = split(lines[0], ' ');
  if (head.empty()) parse_fail(1, "missing snapshot header");
  Snapshot snap;
  const double dim = parse_number(head[0], 1);
  if (dim != 1.0 && dim != 2.0 && dim != 3.0) parse_fail(1, "dimension must be 1, 2 or 3");
  snap.dim = static_cast<int>(dim);
  if (head.size() != 1 + 2 * static_cast<std::size_t>(snap.dim)) parse_fail(1, "header needs dim, cells and lengths");
  std::size_t total = 1;
  for (int k = 0; k < snap.dim; ++k) {
    const double n = parse_number(head[1 + k], 1);
    if (!(n >= 1.0) || n != std::floor(n)) parse_fail(1, "cell counts must be positive integers");
    snap.cells.push_back(static_cast<int>(n));
    total *= static_cast<std::size_t>(n);
  }
  for (int k = 0; k < snap.dim; ++k) snap.lengths.push_back(parse_number(head[1 + snap.dim + k], 1));
  if (lines.size() != total + 1) {
    parse_fail(static_cast<int>(std::min(lines.size(), total + 1)) + 1,
               "expected " + std::to_string(total) + " cell lines, found " + std::to_string(lines.size() - 1));
  }
  snap.fields = SpeciesFields::uniform(total, 0.0, 0.0, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    const int line_no = static_cast<int>(i) + 2;
    const auto words = split(lines[i + 1], ' ');
    if (words.size() != 3) parse_fail(line_no, "expected 'a b c'");
    snap.fields.a[i] = parse_number(words[0], line_no);
    snap.fields.b[i] = parse_number(words[1], line_no);
    snap.fields.c[i] = parse_number(words[2], line_no);
  }
  return snap;
}

Snapshot read_snapshot(const std::string& path) { return parse_snapshot(read_file(path)); }

}  // namespace degrd
