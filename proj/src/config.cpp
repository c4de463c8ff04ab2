#include "degrd/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "degrd/error.hpp"

namespace degrd {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

SolverConfig RunConfig::solver() const {
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.record_every = record_every;
  cfg.linsolve_tol = linsolve_tol;
  return cfg;
}

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  std::ostringstream msg;
  if (line > 0) msg << "line " << line << ": ";
  msg << message;
  throw Error(ErrorCode::config_error, msg.str());
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = s.size();
    words.push_back(s.substr(start, end - start));
    pos = end;
  }
  return words;
}

double to_double(std::string_view word, int line, std::string_view key) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size() || !std::isfinite(value)) {
    fail(line, "malformed number '" + std::string(word) + "' for " + std::string(key));
  }
  return value;
}

long long to_integer(std::string_view word, int line, std::string_view key) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size()) {
    fail(line, "malformed integer '" + std::string(word) + "' for " + std::string(key));
  }
  return value;
}

double single_double(std::string_view value, int line, std::string_view key) {
  const auto words = split_words(value);
  if (words.size() != 1) fail(line, std::string(key) + " takes exactly one number");
  return to_double(words[0], line, key);
}

const std::map<std::string, std::size_t, std::less<>> kInitArity = {
    {"uniform", 3}, {"cosine_bump", 1}, {"random_positive", 2}};

void validate_init(const InitSpec& init, int line) {
  const auto it = kInitArity.find(init.preset);
  if (it == kInitArity.end()) fail(line, "unknown init preset '" + init.preset + "'");
  if (init.params.size() != it->second) {
    fail(line, "init " + init.preset + " takes " + std::to_string(it->second) + " parameters");
  }
  if (init.preset == "uniform") {
    for (double v : init.params) {
      if (!(v > 0.0)) fail(line, "uniform concentrations must be positive");
    }
  } else if (init.preset == "cosine_bump") {
    if (!(init.params[0] >= 0.0) || !(init.params[0] < 1.0)) fail(line, "cosine_bump amplitude must lie in [0, 1)");
  } else if (!(init.params[0] > 0.0) || !(init.params[1] >= 0.0)) {
    fail(line, "random_positive needs floor > 0 and amp >= 0");
  }
}

const std::vector<std::string> kRequired = {"dim", "cells", "lengths", "d_a", "d_b", "d_c",
                                            "init", "dt", "t_end", "record_every"};
const std::set<std::string, std::less<>> kKnown = {"dim", "cells", "lengths", "d_a", "d_b", "d_c", "init",
                                                   "dt", "t_end", "record_every", "linsolve_tol", "out_dir", "seed"};

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, int, std::less<>> seen;
  std::vector<std::string_view> cell_words, length_words;
  int cells_line = 0, lengths_line = 0;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!kKnown.contains(key)) fail(line_no, "unknown key '" + std::string(key) + "'");
    if (seen.contains(key)) fail(line_no, "duplicate key '" + std::string(key) + "'");
    seen.emplace(std::string(key), line_no);
    if (value.empty()) fail(line_no, "empty value for " + std::string(key));

    if (key == "dim") {
      const auto words = split_words(value);
      if (words.size() != 1) fail(line_no, "dim takes one integer");
      const long long dim = to_integer(words[0], line_no, key);
      if (dim < 1 || dim > 3) fail(line_no, "dim must be 1, 2 or 3");
      cfg.dim = static_cast<int>(dim);
    } else if (key == "cells") {
      cell_words = split_words(value);
      cells_line = line_no;
    } else if (key == "lengths") {
      length_words = split_words(value);
      lengths_line = line_no;
    } else if (key == "d_a" || key == "d_b" || key == "d_c") {
      const double d = single_double(value, line_no, key);
      if (d < 0.0) fail(line_no, std::string(key) + " must be nonnegative");
      (key == "d_a" ? cfg.d_a : key == "d_b" ? cfg.d_b : cfg.d_c) = d;
    } else if (key == "init") {
      const auto words = split_words(value);
      cfg.init.preset = std::string(words[0]);
      cfg.init.params.clear();
      for (std::size_t i = 1; i < words.size(); ++i) cfg.init.params.push_back(to_double(words[i], line_no, key));
      validate_init(cfg.init, line_no);
    } else if (key == "dt" || key == "t_end" || key == "linsolve_tol") {
      const double v = single_double(value, line_no, key);
      if (!(v > 0.0)) fail(line_no, std::string(key) + " must be positive");
      (key == "dt" ? cfg.dt : key == "t_end" ? cfg.t_end : cfg.linsolve_tol) = v;
    } else if (key == "record_every") {
      const auto words = split_words(value);
      if (words.size() != 1) fail(line_no, "record_every takes one integer");
      const long long n = to_integer(words[0], line_no, key);
      if (n < 1 || n > 1'000'000'000) fail(line_no, "record_every must be positive");
      cfg.record_every = static_cast<int>(n);
    } else if (key == "out_dir") {
      cfg.out_dir = std::string(value);
    } else if (key == "seed") {
      const auto words = split_words(value);
      if (words.size() != 1) fail(line_no, "seed takes one integer");
      std::uint64_t seed = 0;
      const auto [ptr, ec] = std::from_chars(words[0].data(), words[0].data() + words[0].size(), seed);
      if (ec != std::errc() || ptr != words[0].data() + words[0].size()) fail(line_no, "malformed seed");
      cfg.seed = seed;
    }
  }

  for (const auto& key : kRequired) {
    if (!seen.contains(key)) fail(0, "missing required key '" + key + "'");
  }

  const auto per_axis = [&](const std::vector<std::string_view>& words, int line, std::string_view key) {
    if (words.size() != 1 && words.size() != static_cast<std::size_t>(cfg.dim)) {
      fail(line, std::string(key) + " needs 1 or dim values");
    }
    return words.size() == 1 ? std::vector<std::string_view>(cfg.dim, words[0]) : words;
  };
  cfg.cells.clear();
  for (auto w : per_axis(cell_words, cells_line, "cells")) {
    const long long n = to_integer(w, cells_line, "cells");
    if (n < 1 || n > 100000) fail(cells_line, "cells must be positive");
    cfg.cells.push_back(static_cast<int>(n));
  }
  cfg.lengths.clear();
  for (auto w : per_axis(length_words, lengths_line, "lengths")) {
    const double l = to_double(w, lengths_line, "lengths");
    if (!(l > 0.0)) fail(lengths_line, "lengths must be positive");
    cfg.lengths.push_back(l);
  }

  try {
    cfg.params().validate();
  } catch (const Error& e) {
    fail(seen.find("d_a")->second, e.what());
  }
  try {
    cfg.solver().validate();
  } catch (const Error& e) {
    fail(seen.find("dt")->second, e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream out;
  out << "dim = " << config.dim << '\n';
  out << "cells =";
  for (int n : config.cells) out << ' ' << n;
  out << "\nlengths =";
  for (double l : config.lengths) out << ' ' << format_double(l);
  out << "\nd_a = " << format_double(config.d_a) << '\n';
  out << "d_b = " << format_double(config.d_b) << '\n';
  out << "d_c = " << format_double(config.d_c) << '\n';
  out << "init = " << config.init.preset;
  for (double p : config.init.params) out << ' ' << format_double(p);
  out << "\ndt = " << format_double(config.dt) << '\n';
  out << "t_end = " << format_double(config.t_end) << '\n';
  out << "record_every = " << config.record_every << '\n';
  out << "linsolve_tol = " << format_double(config.linsolve_tol) << '\n';
  out << "out_dir = " << config.out_dir << '\n';
  out << "seed = " << config.seed << '\n';
  return out.str();
}

namespace {

constexpr double kFloor = 1e-4;

// Uniform [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

SpeciesFields initial_fields(const RunConfig& config, const Grid& grid) {
  const std::size_t n = grid.size();
  const auto& p = config.init.params;
  validate_init(config.init, 0);
  if (config.init.preset == "uniform") return SpeciesFields::uniform(n, p[0], p[1], p[2]);

  SpeciesFields f{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  if (config.init.preset == "cosine_bump") {
    // Zero-mean profile phi = mean over axes of cos(pi x_k / L_k); the bump
    // starts at local chemical equilibrium c = ab.
    const double amp = p[0];
    for (std::size_t i = 0; i < n; ++i) {
      double phi = 0.0;
      for (int axis = 0; axis < grid.dimension(); ++axis) {
        phi += std::cos(std::numbers::pi * grid.center(i, axis) / grid.length(axis));
      }
      phi /= grid.dimension();
      f.a[i] = std::max(1.0 + amp * phi, kFloor);
      f.b[i] = std::max(1.0 - amp * phi, kFloor);
      f.c[i] = std::max(f.a[i] * f.b[i], kFloor);
    }
    return f;
  }
  std::mt19937_64 rng(config.seed);
  for (std::size_t i = 0; i < n; ++i) {
    f.a[i] = p[0] + p[1] * unit_uniform(rng);
    f.b[i] = p[0] + p[1] * unit_uniform(rng);
    f.c[i] = p[0] + p[1] * unit_uniform(rng);
  }
  return f;
}

}  // namespace degrd
