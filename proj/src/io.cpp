#include "innerbox/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

#include <json.hpp>

namespace innerbox {

using nlohmann::json;

namespace {

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_boxes(std::string& out, const BoxSet& boxes) {
  out += '[';
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (i) out += ',';
    out += '[';
    const auto& doms = boxes[i].domains();
    for (std::size_t k = 0; k < doms.size(); ++k) {
      const Interval& d = doms[k];
      if (!std::isfinite(d.lo()) || !std::isfinite(d.hi()))
        throw std::invalid_argument("paving.json: non-finite bound in " + to_string(d));
      if (k) out += ',';
      out += '[' + shortest(d.lo()) + ',' + shortest(d.hi()) + ']';
    }
    out += ']';
  }
  out += ']';
}

double number_at(const json& j) {
  if (!j.is_number()) throw std::runtime_error("paving.json: expected a number, got " + j.dump());
  return j.get<double>();
}

BoxSet read_boxes(const json& j, const std::shared_ptr<const VarNames>& names) {
  if (!j.is_array()) throw std::runtime_error("paving.json: box list must be an array");
  BoxSet out;
  out.reserve(j.size());
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != names->size())
      throw std::runtime_error("paving.json: box of the wrong dimension");
    std::vector<Interval> doms;
    doms.reserve(row.size());
    for (const auto& pair : row) {
      if (!pair.is_array() || pair.size() != 2) throw std::runtime_error("paving.json: bounds must be [lo, hi]");
      double lo = number_at(pair[0]), hi = number_at(pair[1]);
      if (!(lo <= hi)) throw std::runtime_error("paving.json: lo > hi");
      doms.emplace_back(lo, hi);
    }
    out.emplace_back(names, std::move(doms));
  }
  return out;
}

}  // namespace

std::string to_json(const PavingFile& f) {
  std::string out = "{\"vars\":" + json(f.vars).dump() + ",\"quantifier\":";
  if (f.quantifier)
    out += "{\"var\":" + json(f.quantifier->var).dump() + ",\"lo\":" + shortest(f.quantifier->lo) +
           ",\"hi\":" + shortest(f.quantifier->hi) + "}";
  else
    out += "null";
  out += ",\"inner\":";
  write_boxes(out, f.paving.inner);
  out += ",\"outer\":";
  write_boxes(out, f.paving.outer);
  out += ",\"undecided\":";
  write_boxes(out, f.paving.undecided);
  out += ",\"config\":" + json::parse(f.config).dump() + "}\n";
  return out;
}

PavingFile paving_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("paving.json: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("paving.json: top level must be an object");
  for (const char* key : {"vars", "quantifier", "inner", "outer", "undecided", "config"})
    if (!j.contains(key)) throw std::runtime_error(std::string("paving.json: missing key '") + key + "'");

  PavingFile f;
  try {
    f.vars = j["vars"].get<VarNames>();
  } catch (const json::exception&) {
    throw std::runtime_error("paving.json: vars must be a list of names");
  }
  const auto& q = j["quantifier"];
  if (!q.is_null()) {
    if (!q.is_object() || !q.contains("var") || !q["var"].is_string())
      throw std::runtime_error("paving.json: malformed quantifier");
    f.quantifier = QuantifierRange{q["var"].get<std::string>(), number_at(q["lo"]), number_at(q["hi"])};
  }
  auto names = std::make_shared<const VarNames>(f.vars);
  f.paving.inner = read_boxes(j["inner"], names);
  f.paving.outer = read_boxes(j["outer"], names);
  f.paving.undecided = read_boxes(j["undecided"], names);
  if (!j["config"].is_object()) throw std::runtime_error("paving.json: config must be an object");
  f.config = j["config"].dump();
  return f;
}

PavingFile make_paving_file(const Problem& p, const Paving& paving, const std::string& config) {
  PavingFile f;
  f.vars = *p.variables;
  if (p.quantifier) f.quantifier = QuantifierRange{p.quantifier->var, p.quantifier->domain.lo(), p.quantifier->domain.hi()};
  f.paving = paving;
  f.config = json::parse(config).dump();
  return f;
}

std::string config_json(const std::string& source, Algorithm algo, const SolverConfig& cfg) {
  json j = {{"source", source},
            {"algo", to_string(algo)},
            {"eps", cfg.epsilon},
            {"omega", cfg.omega},
            {"contractor", to_string(cfg.contractor)},
            {"strategy", to_string(cfg.strategy)},
            {"schedule", to_string(cfg.schedule)},
            {"bc3_tolerance", cfg.bc3_tolerance},
            {"first_only", cfg.first_only},
            {"timeout_s", cfg.timeout_s},
            {"seed", cfg.seed}};
  return j.dump();
}

RunReport make_report(const std::string& bench, Algorithm algo, const SolverConfig& cfg, const SolveStats& stats) {
  return RunReport{bench, to_string(algo), cfg, stats};
}

std::string csv_header(bool ratio) {
  std::string h =
      "bench,algo,eps,omega,contractor,strategy,schedule,n_inner,n_outer,n_undecided,inner_volume,t_first_s,"
      "t_total_s,contractor_calls,globsat_calls";
  if (ratio) h += ",jla_ipabc_ratio";
  return h;
}

std::vector<std::string> csv_rows(const std::vector<RunReport>& reports, bool ratio) {
  auto time_of = [](const RunReport& r) -> std::optional<double> {
    if (r.stats.timed_out) return std::nullopt;
    return r.stats.t_total_s;
  };
  std::vector<std::string> rows;
  for (const auto& r : reports) {
    const auto& s = r.stats;
    std::ostringstream os;
    os << r.bench << ',' << r.algo << ',' << shortest(r.config.epsilon) << ',' << shortest(r.config.omega) << ','
       << to_string(r.config.contractor) << ',' << to_string(r.config.strategy) << ','
       << to_string(r.config.schedule) << ',' << s.n_inner << ',' << s.n_outer << ',' << s.n_undecided << ','
       << shortest(s.inner_volume) << ',';
    if (s.timed_out && s.t_first_s < 0)
      os << "TIMEOUT";
    else
      os << shortest(s.t_first_s);
    os << ',' << (s.timed_out ? std::string("TIMEOUT") : shortest(s.t_total_s)) << ',' << s.contractor_calls << ','
       << s.globsat_calls;
    if (ratio) {
      os << ',';
      const RunReport* jla_run = nullptr;
      const RunReport* ipa_run = nullptr;
      for (const auto& o : reports) {
        if (o.bench != r.bench || o.config.epsilon != r.config.epsilon) continue;
        if (o.algo == "jla" && !jla_run) jla_run = &o;
        if (o.algo == "ipabc" && !ipa_run) ipa_run = &o;
      }
      if (jla_run && ipa_run && (&r == jla_run || &r == ipa_run)) {
        auto tj = time_of(*jla_run), ti = time_of(*ipa_run);
        if (!tj || !ti)
          os << "TIMEOUT";
        else if (*ti > 0)
          os << shortest(*tj / *ti);
      }
    }
    rows.push_back(os.str());
  }
  return rows;
}

std::string to_csv(const std::vector<RunReport>& reports, bool ratio) {
  std::string out = csv_header(ratio) + "\n";
  for (const auto& row : csv_rows(reports, ratio)) out += row + "\n";
  return out;
}

std::string to_svg(const Paving& p, const Box& frame, std::size_t x, std::size_t y) {
  if (x >= frame.size() || y >= frame.size()) throw std::out_of_range("svg: dimension out of range");
  const double size = 800.0, margin = 20.0;
  const Interval fx = frame[x], fy = frame[y];
  const double sx = fx.width() > 0 ? size / fx.width() : 1.0;
  const double sy = fy.width() > 0 ? size / fy.width() : 1.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin << "\" height=\""
     << size + 2 * margin << "\">\n";
  os << "<text x=\"" << margin << "\" y=\"14\" font-size=\"12\">" << frame.names()[x] << " vs "
     << frame.names()[y] << "</text>\n";
  auto rect = [&](const Box& b, const char* style) {
    double x0 = margin + (b[x].lo() - fx.lo()) * sx;
    double w = b[x].width() * sx;
    // SVG y grows downwards.
    double y0 = margin + (fy.hi() - b[y].hi()) * sy;
    double h = b[y].width() * sy;
    os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << w << "\" height=\"" << h << "\" " << style
       << "/>\n";
  };
  for (const auto& b : p.outer) rect(b, "class=\"outer\" fill=\"#dde6f0\" stroke=\"none\"");
  for (const auto& b : p.undecided) rect(b, "class=\"undecided\" fill=\"none\" stroke=\"#c08020\" stroke-width=\"0.5\"");
  for (const auto& b : p.inner) rect(b, "class=\"inner\" fill=\"#2a7f3f\" stroke=\"none\"");
  rect(frame, "class=\"frame\" fill=\"none\" stroke=\"black\"");
  os << "</svg>\n";
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace innerbox
