#include "madic/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "madic/core.hpp"
#include "madic/ctrw.hpp"
#include "madic/fourier.hpp"
#include "madic/haar.hpp"
#include "madic/levy.hpp"
#include "madic/mittag_leffler.hpp"

namespace madic::cli {

namespace {

constexpr const char* kNotice =
    "base m is any integer in [2, 36]; formulas classically stated for a prime p "
    "are evaluated with m in its place";

std::string fmt_double(double x) { return fmt::format("{:.17g}", x); }

// ------------------------------------------------------------ value parsing

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw std::invalid_argument(fmt::format("'{}' is not a valid number", text));
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(value)) throw std::invalid_argument(fmt::format("'{}' is not finite", text));
  return value;
}

double parse_positive(const std::string& text) {
  const double v = parse_number<double>(text);
  if (!(v > 0.0)) throw std::invalid_argument(fmt::format("{} must be positive", text));
  return v;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw std::invalid_argument("expected 'lo,hi'");
  const int lo = parse_number<int>(parts[0]);
  const int hi = parse_number<int>(parts[1]);
  if (lo > hi) throw std::invalid_argument("range lower end exceeds upper end");
  return {lo, hi};
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw std::invalid_argument(fmt::format("'{}' is not a boolean", text));
}

// ------------------------------------------------------------ key table

struct KeySpec {
  const char* name;
  const char* help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"m", "base m, an integer in [2, 36]",
       [](RunConfig& c, const std::string& v) {
         const int m = parse_number<int>(v);
         if (m < 2 || m > kMaxBase)
           throw std::invalid_argument(fmt::format("base must lie in [2, {}], got {}", kMaxBase, m));
         c.m = m;
       },
       [](const RunConfig& c) { return std::to_string(c.m); }},
      {"alpha", "jump exponent alpha > 0",
       [](RunConfig& c, const std::string& v) { c.alpha = parse_positive(v); },
       [](const RunConfig& c) { return fmt_double(c.alpha); }},
      {"beta", "time order beta in (0, 1]",
       [](RunConfig& c, const std::string& v) {
         const double b = parse_number<double>(v);
         if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
         c.beta = b;
       },
       [](const RunConfig& c) { return fmt_double(c.beta); }},
      {"t", "comma-separated list of times >= 0",
       [](RunConfig& c, const std::string& v) {
         std::vector<double> times;
         for (const auto& part : split(v, ',')) {
           const double t = parse_number<double>(part);
           if (!(t >= 0.0)) throw std::invalid_argument("times must be nonnegative");
           times.push_back(t);
         }
         c.times = std::move(times);
       },
       [](const RunConfig& c) {
         std::string out;
         for (double t : c.times) out += (out.empty() ? "" : ",") + fmt_double(t);
         return out;
       }},
      {"samples", "Monte Carlo sample count >= 1",
       [](RunConfig& c, const std::string& v) {
         const auto n = parse_number<std::uint64_t>(v);
         if (n == 0) throw std::invalid_argument("sample count must be at least 1");
         c.samples = n;
       },
       [](const RunConfig& c) { return std::to_string(c.samples); }},
      {"seed", "master random seed",
       [](RunConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>(v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"window", "shell window 'lo,hi' (automatic when absent)",
       [](RunConfig& c, const std::string& v) {
         const auto [lo, hi] = parse_range(v);
         c.window = ShellWindow{lo, hi};
       },
       [](const RunConfig& c) {
         return c.window ? fmt::format("{},{}", c.window->lo, c.window->hi) : std::string("auto");
       }},
      {"tolerance", "mass-defect tolerance > 0",
       [](RunConfig& c, const std::string& v) { c.tolerance = parse_positive(v); },
       [](const RunConfig& c) { return fmt_double(c.tolerance); }},
      {"output", "output file ('-' for stdout)",
       [](RunConfig& c, const std::string& v) { c.output = v; },
       [](const RunConfig& c) { return c.output.empty() ? std::string("default") : c.output; }},
      {"format", "csv or json",
       [](RunConfig& c, const std::string& v) {
         if (v == "csv")
           c.format = Format::csv;
         else if (v == "json")
           c.format = Format::json;
         else
           throw std::invalid_argument("format must be csv or json");
       },
       [](const RunConfig& c) {
         return std::string(c.output_format() == Format::csv ? "csv" : "json");
       }},
      {"r", "ball index r (B_r = {|x| <= m^r})",
       [](RunConfig& c, const std::string& v) { c.r = parse_number<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.r); }},
      {"l", "constancy index l",
       [](RunConfig& c, const std::string& v) { c.l = parse_number<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.l); }},
      {"k", "frequency norm exponent: |k| = m^k",
       [](RunConfig& c, const std::string& v) { c.k = parse_number<int>(v); },
       [](const RunConfig& c) { return c.k ? std::to_string(*c.k) : std::string("none"); }},
      {"k-range", "frequency norm exponents 'lo,hi'",
       [](RunConfig& c, const std::string& v) { std::tie(c.k_lo, c.k_hi) = parse_range(v); },
       [](const RunConfig& c) { return fmt::format("{},{}", c.k_lo, c.k_hi); }},
      {"input", "input CSV file",
       [](RunConfig& c, const std::string& v) { c.input = v; },
       [](const RunConfig& c) { return c.input.empty() ? std::string("none") : c.input; }},
      {"direction", "forward or inverse",
       [](RunConfig& c, const std::string& v) {
         if (v != "forward" && v != "inverse")
           throw std::invalid_argument("direction must be forward or inverse");
         c.direction = v;
       },
       [](const RunConfig& c) { return c.direction; }},
      {"waiting", "exponential or mittag-leffler",
       [](RunConfig& c, const std::string& v) {
         if (v != "exponential" && v != "mittag-leffler")
           throw std::invalid_argument("waiting must be exponential or mittag-leffler");
         c.waiting = v;
       },
       [](const RunConfig& c) { return c.waiting; }},
      {"rate", "exponential waiting rate > 0",
       [](RunConfig& c, const std::string& v) { c.rate = parse_positive(v); },
       [](const RunConfig& c) { return fmt_double(c.rate); }},
      {"tau", "Mittag-Leffler waiting scale > 0",
       [](RunConfig& c, const std::string& v) { c.tau = parse_positive(v); },
       [](const RunConfig& c) { return fmt_double(c.tau); }},
      {"analytic", "also compute the exact marginal (true/false)",
       [](RunConfig& c, const std::string& v) { c.analytic = parse_bool(v); },
       [](const RunConfig& c) { return std::string(c.analytic ? "true" : "false"); }},
      {"initial", "delta or unit-ball",
       [](RunConfig& c, const std::string& v) {
         if (v == "delta")
           c.initial = InitialCondition::delta;
         else if (v == "unit-ball")
           c.initial = InitialCondition::unit_ball;
         else
           throw std::invalid_argument("initial must be delta or unit-ball");
       },
       [](const RunConfig& c) {
         return std::string(c.initial == InitialCondition::delta ? "delta" : "unit-ball");
       }},
  };
  return table;
}

const KeySpec& key(const std::string& name) {
  for (const auto& k : key_table())
    if (name == k.name) return k;
  throw std::logic_error("unknown key " + name);
}

struct CommandSpec {
  const char* name;
  const char* help;
  std::vector<std::string> keys;
};

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> list = {
      {"integrate", "integral of a tabulated radial function over a ball",
       {"m", "r", "k", "input", "output", "format"}},
      {"fourier", "Fourier transform of a locally constant function on a coset grid",
       {"m", "r", "l", "direction", "input", "output", "format"}},
      {"levy-symbol", "Levy-Khinchine symbol of a radial jump kernel",
       {"m", "alpha", "input", "k-range", "output", "format"}},
      {"ctrw-sim", "Monte Carlo shell distribution of a continuous-time random walk",
       {"m", "alpha", "beta", "waiting", "rate", "tau", "t", "samples", "seed", "analytic",
        "window", "output", "format"}},
      {"solve", "radial solution of the fractional diffusion equation",
       {"m", "alpha", "beta", "initial", "t", "window", "tolerance", "output", "format"}},
      {"survival", "probability of remaining in the unit ball, with power-law bounds",
       {"m", "alpha", "beta", "t", "output", "format"}},
      {"selftest", "cross-module invariant checks", {"seed", "output", "format"}},
  };
  return list;
}

const CommandSpec& command(const std::string& name) {
  for (const auto& c : commands())
    if (name == c.name) return c;
  throw CliError(kUsage, "unknown subcommand " + name);
}

std::map<std::string, std::string> parse_config_text(const std::string& text,
                                                     const CommandSpec& cmd) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CliError(kBadConfig, fmt::format("config line {}: expected 'key = value'", number));
    const std::string k = trim(std::string_view(line).substr(0, eq));
    const std::string v = trim(std::string_view(line).substr(eq + 1));
    if (std::find(cmd.keys.begin(), cmd.keys.end(), k) == cmd.keys.end())
      throw CliError(kBadConfig,
                     fmt::format("config line {}: unknown key '{}' for {}", number, k, cmd.name));
    out[k] = v;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ------------------------------------------------------------ reports

using Cell = std::variant<double, std::int64_t, std::string>;

struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<std::string> failures;
};

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return fmt_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

void write_csv(const RunConfig& c, const Report& r, std::ostream& out) {
  out << "# madic " << kVersion << "\n";
  out << "# command: " << c.command << "\n";
  std::string cfg;
  for (const auto& [k, v] : c.effective()) cfg += (cfg.empty() ? "" : " ") + k + "=" + v;
  out << "# config: " << cfg << "\n";
  out << "# seed: " << c.seed << "\n";
  out << "# notice: " << kNotice << "\n";
  if (!r.summary.empty()) out << "# summary: " << r.summary.dump() << "\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
  out << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\n";
  }
}

void write_json(const RunConfig& c, const Report& r, std::ostream& out) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["command"] = c.command;
  j["config"] = c.effective();
  j["seed"] = c.seed;
  j["notice"] = kNotice;
  j["columns"] = r.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  j["summary"] = r.summary;
  out << j.dump(2) << "\n";
}

void write_report(const RunConfig& c, const Report& r, Format f, std::ostream& out) {
  if (f == Format::csv)
    write_csv(c, r, out);
  else
    write_json(c, r, out);
}

const char* extension(Format f) { return f == Format::csv ? ".csv" : ".json"; }

// Output path for the primary format, or empty for stdout.
std::filesystem::path output_path(const RunConfig& c) {
  if (c.output == "-") return {};
  if (!c.output.empty()) return c.output;
  if (const char* dir = std::getenv(kOutputDirVariable); dir && *dir)
    return std::filesystem::path(dir) / (c.command + extension(c.output_format()));
  return {};
}

void write_file(const std::filesystem::path& path, const RunConfig& c, const Report& r,
                Format f) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kUsage, "cannot write " + path.string());
  write_report(c, r, f, out);
}

// ------------------------------------------------------------ input tables

std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  if (path.empty()) throw CliError(kUsage, "this subcommand needs --input");
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw CliError(kUsage, e.what());
  }
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    // A leading line with letters is a header.
    if (first && std::any_of(line.begin(), line.end(), [](unsigned char ch) {
          return std::isalpha(ch) && ch != 'e' && ch != 'E';
        })) {
      first = false;
      continue;
    }
    first = false;
    rows.push_back(split(line, ','));
  }
  if (rows.empty()) throw CliError(kUsage, path + " holds no data rows");
  return rows;
}

double field(const std::vector<std::string>& row, std::size_t i, const std::string& path) {
  if (i >= row.size()) throw CliError(kUsage, fmt::format("{}: row has too few columns", path));
  try {
    return parse_number<double>(row[i]);
  } catch (const std::invalid_argument& e) {
    throw CliError(kUsage, fmt::format("{}: {}", path, e.what()));
  }
}

// Shell table "j,value[,imag]" with consecutive j.
std::pair<int, std::vector<cplx>> read_shell_table(const std::string& path) {
  const auto rows = read_rows(path);
  std::vector<std::pair<int, cplx>> entries;
  for (const auto& row : rows) {
    const double j = field(row, 0, path);
    if (j != std::floor(j)) throw CliError(kUsage, path + ": shell index must be an integer");
    const double im = row.size() > 2 ? field(row, 2, path) : 0.0;
    entries.emplace_back(static_cast<int>(j), cplx(field(row, 1, path), im));
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<cplx> values;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first != entries.front().first + static_cast<int>(i))
      throw CliError(kUsage, path + ": shells must be consecutive");
    values.push_back(entries[i].second);
  }
  return {entries.front().first, std::move(values)};
}

std::string tuple_text(const std::vector<std::uint8_t>& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ":" : "") + std::to_string(t[i]);
  return s;
}

// ------------------------------------------------------------ subcommands

Report run_integrate(const RunConfig& c) {
  auto [j_lo, values] = read_shell_table(c.input);
  const auto f = RadialFunction::tabulated(c.m, j_lo, std::move(values));
  const SeriesResult s =
      c.k ? radial_character_integral(f, Norm::power(*c.k), c.r) : integrate_radial(f, c.r);
  Report r;
  r.columns = {"value_re", "value_im", "tail_bound"};
  r.rows.push_back({s.value.real(), s.value.imag(), s.tail_bound});
  return r;
}

Report run_fourier(const RunConfig& c) {
  const auto rows = read_rows(c.input);
  const auto maps = coset_index_maps(c.m, c.r, c.l);
  std::vector<cplx> values(maps.cells);
  for (const auto& row : rows) {
    std::vector<std::uint8_t> tuple;
    for (const auto& d : split(row.at(0), ':')) {
      int digit = 0;
      try {
        digit = parse_number<int>(d);
      } catch (const std::invalid_argument& e) {
        throw CliError(kUsage, c.input + ": " + e.what());
      }
      if (digit < 0 || digit >= c.m) throw CliError(kUsage, c.input + ": digit out of range");
      tuple.push_back(static_cast<std::uint8_t>(digit));
    }
    if (static_cast<int>(tuple.size()) != maps.digits)
      throw CliError(kUsage, fmt::format("{}: tuples need {} digits", c.input, maps.digits));
    values[maps.flat_index(tuple)] = cplx(field(row, 1, c.input), field(row, 2, c.input));
  }
  int support = 0, constancy = 0;
  std::vector<cplx> out;
  if (c.direction == "forward") {
    const auto g = forward(LocallyConstantFunction(c.m, c.r, c.l, std::move(values)));
    support = g.support();
    constancy = g.constancy();
    out = g.values();
  } else {
    const auto f = inverse(SpectralFunction(c.m, c.r, c.l, std::move(values)));
    support = f.support();
    constancy = f.constancy();
    out = f.values();
  }
  const auto dual = coset_index_maps(c.m, support, constancy);
  Report r;
  r.columns = {"tuple", "re", "im"};
  for (std::size_t i = 0; i < out.size(); ++i)
    r.rows.push_back({tuple_text(dual.tuple(i)), out[i].real(), out[i].imag()});
  r.summary["support"] = support;
  r.summary["constancy"] = constancy;
  return r;
}

Report run_levy_symbol(const RunConfig& c) {
  LevyKernel kernel = LevyKernel::vladimirov(c.m, c.alpha);
  if (!c.input.empty()) {
    auto [j_lo, values] = read_shell_table(c.input);
    std::vector<double> w;
    for (const auto& v : values) w.push_back(v.real());
    kernel = LevyKernel::tabulated(c.m, j_lo, std::move(w));
  }
  Report r;
  r.columns = {"knorm", "re_psi", "im_psi", "remainder"};
  for (int kappa = c.k_lo; kappa <= c.k_hi; ++kappa) {
    const SymbolValue s = levy_symbol(kernel, Norm::power(kappa));
    r.rows.push_back({mpow(c.m, kappa), s.value.real(), s.value.imag(), s.remainder});
  }
  return r;
}

Report run_ctrw(const RunConfig& c, std::ostream& err) {
  const WaitingTimeModel waiting = c.waiting == "exponential"
                                       ? WaitingTimeModel::exponential(c.rate)
                                       : WaitingTimeModel::mittag_leffler(c.beta, c.tau);
  const CtrwModel model{waiting, JumpModel::stable(c.m, c.alpha)};
  Report r;
  r.columns = {"t", "j", "count", "empirical", "lower", "upper", "analytic"};
  auto per_time = nlohmann::ordered_json::array();
  for (double t : c.times) {
    const auto samples = sample_endpoints(model, t, c.samples, c.seed);
    const ShellHistogram h = shell_histogram(samples);
    const ShellPmf emp = h.pmf();
    std::int64_t lost = 0;
    double total_jumps = 0.0;
    for (const auto& s : samples) {
      lost += s.precision_loss;
      total_jumps += s.jumps;
    }
    if (lost > 0)
      err << fmt::format("warning: {} samples at t={} lost jumps below working precision\n", lost,
                         fmt_double(t));
    int lo = emp.p.empty() ? 0 : emp.j_lo;
    int hi = emp.p.empty() ? 0 : emp.j_hi();
    std::optional<ShellPmf> exact;
    if (c.analytic) {
      const ShellWindow w = c.window.value_or(ShellWindow{-40, 40});
      exact = ctrw_marginal_pmf(model, t, std::min(w.lo, lo), std::max(w.hi, hi));
      lo = exact->j_lo;
      hi = exact->j_hi();
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto zi = h.zero_interval();
    r.rows.push_back({t, std::string("zero"), static_cast<std::int64_t>(h.zero), emp.zero,
                      zi.lower, zi.upper, exact ? exact->zero : nan});
    for (int j = lo; j <= hi; ++j) {
      const auto iv = h.interval(j);
      const double p = emp.at(j);
      const auto count = static_cast<std::int64_t>(std::llround(p * static_cast<double>(h.total)));
      if (count == 0 && !exact) continue;
      r.rows.push_back({t, static_cast<std::int64_t>(j), count, p, iv.lower, iv.upper,
                        exact ? exact->at(j) : nan});
    }
    nlohmann::ordered_json s;
    s["t"] = t;
    s["samples"] = h.total;
    s["mean_jumps"] = total_jumps / static_cast<double>(h.total);
    s["precision_loss"] = lost;
    if (exact) s["total_variation"] = total_variation(emp, *exact);
    per_time.push_back(std::move(s));
  }
  r.summary["times"] = std::move(per_time);
  return r;
}

Report run_solve(const RunConfig& c) {
  const FractionalParams p{c.m, c.alpha, c.beta};
  validate(p);
  for (double t : c.times)
    if (c.initial == InitialCondition::delta && t == 0.0)
      throw CliError(kUsage, "the point-source solution is not a function at t = 0");
  ShellWindow w{0, 0};
  if (c.window) {
    w = *c.window;
  } else {
    bool first = true;
    for (double t : c.times) {
      const ShellWindow wt = auto_window(p, c.initial, t, {}, c.tolerance);
      w = first ? wt : ShellWindow{std::min(w.lo, wt.lo), std::max(w.hi, wt.hi)};
      first = false;
    }
  }
  Report r;
  r.columns = {"j", "t", "u"};
  auto masses = nlohmann::ordered_json::array();
  for (double t : c.times) {
    const auto values = solution_profile(p, c.initial, t, w);
    for (int j = w.lo; j <= w.hi; ++j)
      r.rows.push_back({static_cast<std::int64_t>(j), t,
                        values[static_cast<std::size_t>(j - w.lo)]});
    const double mass = profile_mass(p, c.initial, t, w, values);
    masses.push_back({{"t", t}, {"mass", mass}});
    const double defect = std::abs(1.0 - mass);
    if (defect > c.tolerance)
      r.failures.push_back(fmt::format("mass defect at t={}: {} exceeds {}", fmt_double(t),
                                       fmt_double(defect), fmt_double(c.tolerance)));
  }
  r.summary["window"] = {w.lo, w.hi};
  r.summary["mass"] = std::move(masses);
  return r;
}

Report run_survival(const RunConfig& c) {
  const FractionalParams p{c.m, c.alpha, c.beta};
  validate(p);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Report r;
  r.columns = {"t", "S", "lower", "upper", "branch", "rate", "rate_lower", "rate_upper"};
  for (double t : c.times) {
    const double s = survival(p, t);
    SurvivalBounds b{nan, nan};
    if (t > 0.0) {
      b = survival_bounds(p, t);
      if (!(b.lower <= s && s <= b.upper))
        r.failures.push_back(fmt::format("sandwich violation at t={}: S={} outside [{}, {}]",
                                         fmt_double(t), fmt_double(s), fmt_double(b.lower),
                                         fmt_double(b.upper)));
    }
    if (t > 1.0) {
      const SurvivalRate rate = survival_rate(p, t);
      r.rows.push_back({t, s, b.lower, b.upper, std::string(to_string(rate.branch)), rate.rate,
                        rate.lower, rate.upper});
    } else {
      r.rows.push_back({t, s, b.lower, b.upper, std::string("-"), nan, nan, nan});
    }
  }
  return r;
}

// Compact cross-module checks; each row is (check, value, limit, status).
Report run_selftest(const RunConfig& c) {
  Report r;
  r.columns = {"check", "value", "limit", "status"};
  auto check = [&r](const std::string& name, double value, double limit) {
    const bool ok = value <= limit;
    r.rows.push_back({name, value, limit, std::string(ok ? "ok" : "FAIL")});
    if (!ok)
      r.failures.push_back(
          fmt::format("{}: {} exceeds {}", name, fmt_double(value), fmt_double(limit)));
  };

  // Arithmetic: x + (-x) vanishes to working precision, u * u^{-1} = 1.
  {
    SampleStream rng(c.seed, 0);
    double worst = 0.0;
    for (int m : {2, 3, 6, 10}) {
      for (int i = 0; i < 50; ++i) {
        std::vector<std::uint8_t> d(kDefaultPrecision);
        for (auto& x : d) x = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(m)));
        d[0] = 1;
        const auto x = MadicNumber::from_digits(m, static_cast<int>(rng.below(7)) - 3, d);
        const auto sum = x + (-x);
        if (!sum.is_zero()) worst = std::max(worst, sum.pseudonorm());
        const auto one = x * inverse(x) - MadicNumber::from_integer(1, m);
        if (!one.is_zero()) worst = std::max(worst, one.pseudonorm() * std::pow(m, -40));
      }
    }
    check("arithmetic identities", worst, 0.0);
  }
  // Ball character integral against a tabulated indicator.
  {
    double worst = 0.0;
    for (int m : {2, 3, 5}) {
      const auto one = RadialFunction::tabulated(m, -60, std::vector<cplx>(121, 1.0),
                                                 RadialFunction::Tail::hold);
      for (int kappa = -4; kappa <= 4; ++kappa)
        for (int rr = -3; rr <= 3; ++rr) {
          const double exact = character_ball_integral(m, Norm::power(kappa), rr);
          const double via = radial_character_integral(one, Norm::power(kappa), rr).value.real();
          worst = std::max(worst, std::abs(exact - via));
        }
    }
    check("character integrals", worst, 1e-12);
  }
  // Fourier round trip.
  {
    SampleStream rng(c.seed, 1);
    const auto maps = coset_index_maps(3, 3, -3);
    std::vector<cplx> v(maps.cells);
    for (auto& x : v) x = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
    const LocallyConstantFunction f(3, 3, -3, v);
    const auto back = inverse(forward(f));
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(back[i] - v[i]));
    check("fourier round trip", worst, 1e-10);
  }
  // Vladimirov symbol equals -|k|^alpha.
  {
    double worst = 0.0;
    for (double alpha : {0.5, 1.0, 2.0})
      for (int kappa = -3; kappa <= 3; ++kappa) {
        const auto s = levy_symbol(LevyKernel::vladimirov(3, alpha), Norm::power(kappa));
        worst = std::max(worst, std::abs(s.value.real() + std::pow(3.0, kappa * alpha)));
      }
    check("vladimirov symbol", worst, 1e-8);
  }
  // Montroll-Weiss and its alternative form.
  {
    const auto jumps = JumpModel::stable(3, 1.0);
    double worst = 0.0;
    for (const auto& w : {WaitingTimeModel::exponential(1.0), WaitingTimeModel::mittag_leffler(0.5)})
      for (int kappa = -3; kappa <= 3; ++kappa)
        for (double s : {0.1, 1.0, 10.0}) {
          const double a = montroll_weiss(w, jumps, Norm::power(kappa), s);
          const double b = montroll_weiss_alternative(w, jumps, Norm::power(kappa), s);
          worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
    check("montroll-weiss forms", worst, 1e-12);
  }
  // Probability conservation and S(0) = 1.
  {
    const FractionalParams p{3, 1.0, 0.5};
    const ShellWindow w{-60, 60};
    const double mass =
        profile_mass(p, InitialCondition::delta, 1.0, w,
                     solution_profile(p, InitialCondition::delta, 1.0, w));
    check("green function mass", std::abs(1.0 - mass), 1e-6);
    check("survival at t=0", std::abs(1.0 - survival(p, 0.0)), 0.0);
  }
  // E_{1/2}(-1) = e erfc(1).
  check("mittag-leffler value",
        std::abs(mittag_leffler(0.5, -1.0) - std::exp(1.0) * std::erfc(1.0)), 1e-13);
  // Parallel sampling reproduces the serial stream.
  {
    const CtrwModel model{WaitingTimeModel::exponential(1.0), JumpModel::stable(3, 1.0)};
    const auto a = sample_endpoints_serial(model, 2.0, 200, c.seed);
    const auto b = sample_endpoints(model, 2.0, 200, c.seed);
    double mismatches = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      mismatches += !(a[i].endpoint == b[i].endpoint && a[i].jumps == b[i].jumps);
    check("parallel sampling determinism", mismatches, 0.0);
  }
  return r;
}

}  // namespace

std::map<std::string, std::string> RunConfig::effective() const {
  std::map<std::string, std::string> out;
  if (command.empty()) return out;
  for (const auto& k : cli::command(command).keys) out[k] = key(k).get(*this);
  return out;
}

Format RunConfig::output_format() const {
  if (format) return *format;
  return command == "integrate" || command == "ctrw-sim" ? Format::json : Format::csv;
}

RunConfig parse_config(const std::vector<std::string>& args,
                       std::optional<std::string> config_text) {
  CLI::App app{"madic: analysis and random walks on the m-adic numbers"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> options;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_path, "key = value file; flags override it");
    for (const auto& k : cmd.keys) {
      auto* opt = sub->add_option("--" + k, flags[cmd.name][k], key(k).help);
      options[cmd.name].emplace_back(k, opt);
    }
    subs[cmd.name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw CliError(kOk, app.help());
  } catch (const CLI::CallForVersion&) {
    throw CliError(kOk, std::string("madic ") + kVersion + "\n");
  } catch (const CLI::ParseError& e) {
    throw CliError(kUsage, e.what());
  }

  RunConfig config;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) config.command = name;
  const CommandSpec& cmd = command(config.command);

  if (!config_text && !config_path.empty()) {
    try {
      config_text = read_file(config_path);
    } catch (const std::exception& e) {
      throw CliError(kBadConfig, e.what());
    }
  }
  if (config_text) {
    for (const auto& [k, v] : parse_config_text(*config_text, cmd)) {
      try {
        key(k).set(config, v);
      } catch (const std::invalid_argument& e) {
        throw CliError(kBadConfig, fmt::format("config key '{}': {}", k, e.what()));
      }
    }
  }
  for (const auto& [k, opt] : options[config.command]) {
    if (opt->count() == 0) continue;
    try {
      key(k).set(config, flags[config.command][k]);
    } catch (const std::invalid_argument& e) {
      throw CliError(kUsage, fmt::format("--{}: {}", k, e.what()));
    }
  }
  return config;
}

int run(const RunConfig& config, std::ostream& err) {
  Report report;
  try {
    const std::string& c = config.command;
    if (c == "integrate")
      report = run_integrate(config);
    else if (c == "fourier")
      report = run_fourier(config);
    else if (c == "levy-symbol")
      report = run_levy_symbol(config);
    else if (c == "ctrw-sim")
      report = run_ctrw(config, err);
    else if (c == "solve")
      report = run_solve(config);
    else if (c == "survival")
      report = run_survival(config);
    else if (c == "selftest")
      report = run_selftest(config);
    else
      throw CliError(kUsage, "unknown subcommand " + c);
  } catch (const ToleranceError& e) {
    err << "tolerance failure: " << e.quantity() << " = " << fmt_double(e.value())
        << " exceeds " << fmt_double(e.limit()) << "\n";
    return kToleranceFailure;
  }

  const Format primary = config.output_format();
  const auto path = output_path(config);
  if (path.empty()) {
    write_report(config, report, primary, std::cout);
  } else {
    write_file(path, config, report, primary);
    // The simulation keeps both forms side by side.
    if (config.command == "ctrw-sim") {
      const Format other = primary == Format::csv ? Format::json : Format::csv;
      auto second = path;
      second.replace_extension(extension(other));
      if (second != path) write_file(second, config, report, other);
    }
  }
  for (const auto& f : report.failures) err << "tolerance failure: " << f << "\n";
  return report.failures.empty() ? kOk : kToleranceFailure;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig config;
  try {
    config = parse_config(args);
  } catch (const CliError& e) {
    (e.code() == kOk ? std::cout : std::cerr) << e.what();
    if (e.code() != kOk) std::cerr << "\n";
    return e.code();
  }
  try {
    return run(config, std::cerr);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace madic::cli
