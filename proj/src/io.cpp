#include "socindex/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "socindex/errors.hpp"

namespace socindex {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(trim(line.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

// Splits text into lines, remembering 1-based line numbers.
struct Line {
  int number;
  std::string_view text;
};

std::vector<Line> lines_of(std::string_view text) {
  std::vector<Line> out;
  int n = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find('\n', pos);
    const auto raw = text.substr(pos, next == std::string_view::npos ? next : next - pos);
    ++n;
    out.push_back({n, raw});
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

[[noreturn]] void fail_at(const std::string& origin, int line, const std::string& what) {
  throw DataError(origin + ":" + std::to_string(line) + ": " + what);
}

double to_double(std::string_view cell, const std::string& origin, int line,
                 std::string_view column) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
      !std::isfinite(v)) {
    fail_at(origin, line,
            "non-numeric value '" + std::string(cell) + "' in column " + std::string(column));
  }
  return v;
}

int to_int(std::string_view cell, const std::string& origin, int line,
           std::string_view column) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    fail_at(origin, line,
            "non-integer value '" + std::string(cell) + "' in column " + std::string(column));
  }
  return v;
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

// Header columns plus the data rows that follow.
struct Table {
  std::vector<std::string> header;
  std::vector<std::pair<int, std::vector<std::string_view>>> rows;

  int column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  }
};

Table parse_table(std::string_view text, const std::string& origin) {
  Table t;
  bool have_header = false;
  for (const auto& ln : lines_of(text)) {
    if (skippable(ln.text)) continue;
    auto cells = split(ln.text, ',');
    if (!have_header) {
      for (auto c : cells) t.header.emplace_back(c);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      fail_at(origin, ln.number,
              "expected " + std::to_string(t.header.size()) + " cells, found " +
                  std::to_string(cells.size()));
    }
    t.rows.emplace_back(ln.number, std::move(cells));
  }
  if (!have_header) throw DataError(origin + ": missing header");
  return t;
}

void require_columns(const Table& t, std::initializer_list<std::string_view> names,
                     const std::string& origin) {
  for (auto n : names) {
    if (t.column(n) < 0) {
      throw DataError(origin + ": missing column '" + std::string(n) + "'");
    }
  }
}

void reject_unknown_columns(const Table& t, const std::set<std::string>& known,
                            const std::string& origin) {
  for (const auto& h : t.header) {
    if (!known.count(h)) throw DataError(origin + ": unknown column '" + h + "'");
  }
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  return p.is_absolute() ? p : base / p;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open '" + path.string() + "' for writing");
  return os;
}

void finish(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace

// --- config ---------------------------------------------------------------

void ScenarioConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  need(latitude_deg >= -90.0 && latitude_deg <= 90.0, "latitude_deg must lie in [-90, 90]");
  need(clay_pct >= 0.0 && clay_pct <= 100.0, "clay_pct must lie in [0, 100]");
  need(depth_cm > 0.0, "depth_cm must be positive");
  need(horizon_years >= 0, "horizon_years must be non-negative");
  need(dpm_rpm_ratio > 0.0 && std::isfinite(dpm_rpm_ratio),
       "dpm_rpm_ratio must be positive and finite");
  need(bare_months >= 0.0 && bare_months <= 12.0, "bare_months must lie in [0, 12]");
  need(eta >= 0.0 && eta <= 0.5, "eta must lie in [0, 0.5]");
  need(plant_input_t_per_ha >= 0.0, "plant_input_t_per_ha must be non-negative");
  need(manure_input_t_per_ha >= 0.0, "manure_input_t_per_ha must be non-negative");
  need(plant_input_t_per_ha + manure_input_t_per_ha > 0.0,
       "plant and manure inputs cannot both be zero");
  if (epsilon) need(*epsilon >= 0.0 && *epsilon <= 1.0, "epsilon must lie in [0, 1]");
  need(sensitivity_dt_months > 0.0 && sensitivity_dt_months <= 1.0,
       "sensitivity_dt_months must lie in (0, 1]");
  need(!climate_csv.empty(), "climate_csv is required");
  need(!npp_csv.empty(), "npp_csv is required");
  // A ratio sitting exactly on a class boundary may be claimed by either side.
  const double below = std::nextafter(dpm_rpm_ratio, 0.0);
  if (land_class && *land_class != land_class_for_ratio(dpm_rpm_ratio) &&
      *land_class != land_class_for_ratio(below)) {
    throw ConfigError(std::string("land_class '") + to_string(*land_class) +
                      "' does not match dpm_rpm_ratio " + format_double(dpm_rpm_ratio));
  }
}

ScenarioConfig parse_config(std::string_view text, const fs::path& base_dir,
                            const std::string& origin) {
  ScenarioConfig cfg;
  cfg.base_dir = base_dir;
  cfg.source = std::string(text);
  std::set<std::string> seen;
  const std::set<std::string> required = {"latitude_deg",  "clay_pct",      "depth_cm",
                                          "baseline_year", "horizon_years", "dpm_rpm_ratio",
                                          "climate_csv",   "npp_csv"};

  for (const auto& ln : lines_of(text)) {
    if (skippable(ln.text)) continue;
    const auto eq = ln.text.find('=');
    auto bad = [&](const std::string& what) -> ConfigError {
      return ConfigError(origin + ":" + std::to_string(ln.number) + ": " + what);
    };
    if (eq == std::string_view::npos) throw bad("expected key = value");
    const std::string key(trim(ln.text.substr(0, eq)));
    auto value = trim(ln.text.substr(eq + 1));
    if (const auto hash = value.find('#'); hash != std::string_view::npos) {
      value = trim(value.substr(0, hash));
    }
    if (!seen.insert(key).second) throw bad("duplicate key '" + key + "'");

    auto num = [&]() {
      double v = 0;
      auto cell = value;
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw bad("'" + key + "' expects a number, got '" + std::string(value) + "'");
      }
      return v;
    };
    auto integer = [&]() {
      const double v = num();
      if (v != std::floor(v)) throw bad("'" + key + "' expects an integer");
      return static_cast<int>(v);
    };
    auto word = [&]() { return std::string(value); };

    try {
      if (key == "latitude_deg") cfg.latitude_deg = num();
      else if (key == "clay_pct") cfg.clay_pct = num();
      else if (key == "depth_cm") cfg.depth_cm = num();
      else if (key == "baseline_year") cfg.baseline_year = integer();
      else if (key == "horizon_years") cfg.horizon_years = integer();
      else if (key == "land_class") cfg.land_class = parse_land_class(word());
      else if (key == "dpm_rpm_ratio") cfg.dpm_rpm_ratio = num();
      else if (key == "bare_months") cfg.bare_months = num();
      else if (key == "eta") cfg.eta = num();
      else if (key == "plant_input_t_per_ha") cfg.plant_input_t_per_ha = num();
      else if (key == "manure_input_t_per_ha") cfg.manure_input_t_per_ha = num();
      else if (key == "epsilon") cfg.epsilon = num();
      else if (key == "fym_mode") {
        const auto w = word();
        if (w == "none") cfg.fym_mode = FymPolicy::None;
        else if (w == "fixed") cfg.fym_mode = FymPolicy::Fixed;
        else if (w == "controlled") cfg.fym_mode = FymPolicy::Controlled;
        else throw bad("fym_mode must be none|fixed|controlled");
      } else if (key == "cover_mode") {
        const auto w = word();
        if (w == "timed") cfg.cover_mode = CoverMode::Timed;
        else if (w == "smooth") cfg.cover_mode = CoverMode::Smooth;
        else throw bad("cover_mode must be timed|smooth");
      } else if (key == "scheme") cfg.scheme = parse_scheme(word());
      else if (key == "sensitivity_dt_months") cfg.sensitivity_dt_months = num();
      else if (key == "climate_csv") cfg.climate_csv = word();
      else if (key == "npp_csv") cfg.npp_csv = word();
      else if (key == "density_csv") cfg.density_csv = fs::path(word());
      else throw bad("unknown key '" + key + "'");
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      if (msg.rfind(origin + ":", 0) == 0) throw;
      throw bad(msg);
    }
  }
  for (const auto& k : required) {
    if (!seen.count(k)) throw ConfigError(origin + ": missing key '" + k + "'");
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.parent_path(), path.string());
}

// --- loaders --------------------------------------------------------------

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ClimateSeries parse_climate(std::string_view text, const SiteMoisture& site,
                            double latitude_deg, const std::string& origin) {
  const auto t = parse_table(text, origin);
  require_columns(t, {"year", "month", "temp_c", "rain_mm"}, origin);
  reject_unknown_columns(t, {"year", "month", "temp_c", "rain_mm", "pet_mm", "daylength_h"},
                         origin);
  const int cy = t.column("year"), cm = t.column("month"), ct = t.column("temp_c"),
            cr = t.column("rain_mm"), cp = t.column("pet_mm"), cd = t.column("daylength_h");

  std::vector<ClimateRow> rows;
  rows.reserve(t.rows.size());
  for (const auto& [line, cells] : t.rows) {
    ClimateRow row;
    row.line = line;
    row.year = to_int(cells[cy], origin, line, "year");
    row.month = to_int(cells[cm], origin, line, "month");
    if (row.month < 1 || row.month > 12) fail_at(origin, line, "month must be in 1..12");
    row.temp = to_double(cells[ct], origin, line, "temp_c");
    row.rain = to_double(cells[cr], origin, line, "rain_mm");
    if (row.rain < 0.0) fail_at(origin, line, "rain_mm must be non-negative");
    if (cp >= 0) {
      row.pet = to_double(cells[cp], origin, line, "pet_mm");
      if (*row.pet < 0.0) fail_at(origin, line, "pet_mm must be non-negative");
    }
    if (cd >= 0) {
      row.day_length = to_double(cells[cd], origin, line, "daylength_h");
      if (*row.day_length < 0.0 || *row.day_length > 24.0) {
        fail_at(origin, line, "daylength_h must lie in [0, 24]");
      }
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw DataError(origin + ": no climate records");
  try {
    return ClimateSeries::build(std::move(rows), site, latitude_deg);
  } catch (const DataError& e) {
    throw DataError(origin + ": " + e.what());
  }
}

ClimateSeries load_climate(const fs::path& path, const SiteMoisture& site,
                           double latitude_deg) {
  return parse_climate(read_file(path), site, latitude_deg, path.string());
}

std::map<int, double> parse_npp(std::string_view text, int baseline_year,
                                const std::string& origin) {
  const auto t = parse_table(text, origin);
  require_columns(t, {"year", "npp"}, origin);
  reject_unknown_columns(t, {"year", "npp"}, origin);
  const int cy = t.column("year"), cn = t.column("npp");

  std::map<int, double> raw;
  for (const auto& [line, cells] : t.rows) {
    const int year = to_int(cells[cy], origin, line, "year");
    const double v = to_double(cells[cn], origin, line, "npp");
    if (v < 0.0) fail_at(origin, line, "npp must be non-negative");
    if (!raw.emplace(year, v).second) fail_at(origin, line, "duplicate year");
  }
  const auto base = raw.find(baseline_year);
  if (base == raw.end()) {
    throw DataError(origin + ": baseline year " + std::to_string(baseline_year) + " missing");
  }
  if (!(base->second > 0.0)) {
    throw DataError(origin + ": baseline NPP is zero, ratios undefined");
  }
  std::map<int, double> out;
  for (const auto& [year, v] : raw) out[year] = v / base->second;
  out[baseline_year] = 1.0;
  return out;
}

std::map<int, double> load_npp(const fs::path& path, int baseline_year) {
  return parse_npp(read_file(path), baseline_year, path.string());
}

DensityTable parse_density_table(std::string_view text, const std::string& origin) {
  const auto t = parse_table(text, origin);
  require_columns(t, {"month", "forest", "grassland", "arable"}, origin);
  reject_unknown_columns(t, {"month", "forest", "grassland", "arable", "arable_cover"},
                         origin);
  const int cm = t.column("month"), cf = t.column("forest"), cg = t.column("grassland"),
            ca = t.column("arable"), cc = t.column("arable_cover");

  DensityTable out;
  out.forest.land_class = LandClass::Forest;
  out.grassland.land_class = LandClass::Grassland;
  out.arable.land_class = LandClass::Arable;
  Monthly cover{};
  std::set<int> months;
  for (const auto& [line, cells] : t.rows) {
    const int m = to_int(cells[cm], origin, line, "month");
    if (m < 1 || m > 12) fail_at(origin, line, "month must be in 1..12");
    if (!months.insert(m).second) fail_at(origin, line, "duplicate month");
    const auto i = static_cast<std::size_t>(m - 1);
    out.forest.proportions[i] = to_double(cells[cf], origin, line, "forest");
    out.grassland.proportions[i] = to_double(cells[cg], origin, line, "grassland");
    out.arable.proportions[i] = to_double(cells[ca], origin, line, "arable");
    if (cc >= 0) cover[i] = to_double(cells[cc], origin, line, "arable_cover");
  }
  if (months.size() != 12) throw DataError(origin + ": expected 12 months");
  if (cc >= 0) out.arable_cover = cover;
  try {
    out.validate();
  } catch (const DataError& e) {
    throw DataError(origin + ": " + e.what());
  }
  return out;
}

DensityTable load_density_table(const fs::path& path) {
  return parse_density_table(read_file(path), path.string());
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Scenario s;
  s.params = SoilParams::make(cfg.clay_pct, cfg.depth_cm, cfg.dpm_rpm_ratio, cfg.eta);
  s.mats = build_matrices(s.params);
  const auto site = max_deficit(cfg.clay_pct, cfg.depth_cm);

  const auto climate_path = resolve(cfg.base_dir, cfg.climate_csv);
  const auto npp_path = resolve(cfg.base_dir, cfg.npp_csv);
  const auto climate_text = read_file(climate_path);
  const auto npp_text = read_file(npp_path);
  std::string density_text;

  s.climate = parse_climate(climate_text, site, cfg.latitude_deg, climate_path.string());
  const auto ratios = parse_npp(npp_text, cfg.baseline_year, npp_path.string());
  DensityTable table = standard_density_table();
  if (cfg.density_csv) {
    const auto density_path = resolve(cfg.base_dir, *cfg.density_csv);
    density_text = read_file(density_path);
    table = parse_density_table(density_text, density_path.string());
  }

  s.baseline_year = cfg.baseline_year;
  s.horizon_years = cfg.horizon_years;
  for (int n = 0; n <= cfg.horizon_years; ++n) {
    const auto it = ratios.find(cfg.baseline_year + n);
    if (it == ratios.end()) {
      throw DataError(npp_path.string() + ": missing NPP for year " +
                      std::to_string(cfg.baseline_year + n));
    }
    s.np_ratios.push_back(it->second);
  }
  s.reference = make_reference(s.climate, cfg.baseline_year, cfg.bare_months);
  s.cover = CoverModel{cfg.cover_mode, cfg.bare_months, table.arable_cover};
  s.density = table.for_class(cfg.land_class.value_or(land_class_for_ratio(cfg.dpm_rpm_ratio)));

  s.plant_input = cfg.plant_input_t_per_ha;
  s.manure_input = cfg.manure_input_t_per_ha;
  if (cfg.epsilon) {
    const double total = s.plant_input + s.manure_input;
    s.plant_input = *cfg.epsilon * total;
    s.manure_input = (1.0 - *cfg.epsilon) * total;
  }
  s.fym = cfg.fym_mode;

  std::uint64_t h = fnv1a(cfg.source);
  h = fnv1a(climate_text, h);
  h = fnv1a(npp_text, h);
  h = fnv1a(density_text, h);
  s.hash = h;
  s.validate();
  return s;
}

// --- hashing and formatting -----------------------------------------------

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, h, 16);
  std::string s(buf, ptr);
  return std::string(16 - s.size(), '0') + s;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// --- writers --------------------------------------------------------------

void write_trajectory(std::ostream& os, const Trajectory& traj) {
  const bool pools = !traj.samples.empty() && traj.samples.front().pools.has_value();
  os << "# socindex " << kVersion << " scheme=" << traj.scheme << " mode=" << traj.mode
     << " scenario=" << hash_hex(traj.scenario_hash) << '\n';
  os << "t,year,month,dc_dpm,dc_rpm,dc_bio,dc_hum,delta_soc";
  if (pools) os << ",c_dpm,c_rpm,c_bio,c_hum";
  os << '\n';
  for (const auto& s : traj.samples) {
    os << format_double(s.t) << ',' << s.year << ',' << s.month;
    for (int i = 0; i < kPools; ++i) os << ',' << format_double(s.delta_c[i]);
    os << ',' << format_double(s.delta_soc);
    if (pools) {
      const Vec4 c = s.pools.value_or(Vec4::Zero());
      for (int i = 0; i < kPools; ++i) os << ',' << format_double(c[i]);
    }
    os << '\n';
  }
}

void write_trajectory(const fs::path& path, const Trajectory& traj) {
  auto os = open_out(path);
  write_trajectory(os, traj);
  finish(os, path);
}

Trajectory parse_trajectory(std::string_view text, const std::string& origin) {
  Trajectory traj;
  for (const auto& ln : lines_of(text)) {
    const auto t = trim(ln.text);
    if (t.rfind("# socindex", 0) != 0) continue;
    for (auto field : split(t, ' ')) {
      const auto eq = field.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = field.substr(0, eq);
      const auto val = field.substr(eq + 1);
      if (key == "scheme") traj.scheme = std::string(val);
      else if (key == "mode") traj.mode = std::string(val);
      else if (key == "scenario") {
        std::uint64_t h = 0;
        const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), h, 16);
        if (ec != std::errc() || ptr != val.data() + val.size()) {
          fail_at(origin, ln.number, "bad scenario hash");
        }
        traj.scenario_hash = h;
      }
    }
    break;
  }
  const auto table = parse_table(text, origin);
  require_columns(table, {"t", "year", "month", "dc_dpm", "dc_rpm", "dc_bio", "dc_hum",
                          "delta_soc"},
                  origin);
  const bool pools = table.column("c_dpm") >= 0;
  for (const auto& [line, cells] : table.rows) {
    TrajectorySample s;
    s.t = to_double(cells[0], origin, line, "t");
    s.year = to_int(cells[1], origin, line, "year");
    s.month = to_int(cells[2], origin, line, "month");
    for (int i = 0; i < kPools; ++i) {
      s.delta_c[i] = to_double(cells[static_cast<std::size_t>(3 + i)], origin, line, "dc");
    }
    s.delta_soc = to_double(cells[7], origin, line, "delta_soc");
    if (pools) {
      Vec4 c;
      for (int i = 0; i < kPools; ++i) {
        c[i] = to_double(cells[static_cast<std::size_t>(8 + i)], origin, line, "c");
      }
      s.pools = c;
    }
    traj.samples.push_back(s);
  }
  return traj;
}

Trajectory read_trajectory(const fs::path& path) {
  return parse_trajectory(read_file(path), path.string());
}

void write_sensitivity(std::ostream& os, const SensitivitySeries& series, std::uint64_t hash) {
  os << "# socindex " << kVersion << " scheme=nonstandard param=" << to_string(series.param)
     << " dt=" << format_double(series.dt) << " scenario=" << hash_hex(hash) << '\n';
  os << "t,s_dpm,s_rpm,s_bio,s_hum,s_dsoc,delta_soc\n";
  for (const auto& s : series.samples) {
    os << format_double(s.t);
    for (int i = 0; i < kPools; ++i) os << ',' << format_double(s.s[i]);
    os << ',' << format_double(s.s_dsoc) << ',' << format_double(s.delta_c.sum()) << '\n';
  }
}

void write_sensitivity(const fs::path& path, const SensitivitySeries& series,
                       std::uint64_t hash) {
  auto os = open_out(path);
  write_sensitivity(os, series, hash);
  finish(os, path);
}

void write_control(std::ostream& os, const ControlSchedule& schedule, std::uint64_t hash,
                   const std::string& scheme) {
  os << "# socindex " << kVersion << " scheme=" << scheme
     << " epsilon=" << format_double(schedule.epsilon)
     << " manure_t_per_ha=" << format_double(schedule.manure_input)
     << " hold=monthly scenario=" << hash_hex(hash) << '\n';
  os << "year,month,t,r0,f0,manure_rate,cumulative\n";
  for (const auto& s : schedule.samples) {
    os << s.year << ',' << s.month << ',' << format_double(s.t) << ',' << format_double(s.r0)
       << ',' << format_double(s.f0) << ',' << format_double(s.manure_rate) << ','
       << format_double(s.cumulative) << '\n';
  }
}

void write_control(const fs::path& path, const ControlSchedule& schedule, std::uint64_t hash,
                   const std::string& scheme) {
  auto os = open_out(path);
  write_control(os, schedule, hash, scheme);
  finish(os, path);
}

}  // namespace socindex
