#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "stats.hpp"

namespace gg {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

// Character iterator that publishes how far the lexer has read.
struct TrackingIt {
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* p = nullptr;
  const char** cursor = nullptr;

  reference operator*() const { return *p; }
  TrackingIt& operator++() {
    ++p;
    *cursor = p;
    return *this;
  }
  bool operator==(const TrackingIt& o) const { return p == o.p; }
  bool operator!=(const TrackingIt& o) const { return p != o.p; }
};

// DOM builder that also records the source line of every value, keyed by JSON pointer.
class LineSax {
 public:
  LineSax(json& root, const std::string& text, const char** cursor)
      : dom_(root, false), text_(text), cursor_(cursor) {}

  std::map<std::string, int> lines;
  std::string error;

  bool null() { return value(), dom_.null(); }
  bool boolean(bool v) { return value(), dom_.boolean(v); }
  bool number_integer(json::number_integer_t v) { return value(), dom_.number_integer(v); }
  bool number_unsigned(json::number_unsigned_t v) { return value(), dom_.number_unsigned(v); }
  bool number_float(json::number_float_t v, const std::string& s) { return value(), dom_.number_float(v, s); }
  bool string(std::string& v) { return value(), dom_.string(v); }
  bool binary(json::binary_t& v) { return value(), dom_.binary(v); }
  bool start_object(std::size_t n) {
    open(false);
    return dom_.start_object(n);
  }
  bool key(std::string& k) {
    stack_.back().key = k;
    return dom_.key(k);
  }
  bool end_object() {
    close();
    return dom_.end_object();
  }
  bool start_array(std::size_t n) {
    open(true);
    return dom_.start_array(n);
  }
  bool end_array() {
    close();
    return dom_.end_array();
  }
  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) {
    std::string msg = ex.what();
    auto cut = msg.find("] ");
    if (cut != std::string::npos) msg = msg.substr(cut + 2);
    error = "line " + std::to_string(line_at(pos == 0 ? 0 : pos - 1)) + ": " + msg;
    return false;
  }

 private:
  struct Frame {
    bool array = false;
    size_t index = 0;
    std::string key;
  };

  int line_at(size_t pos) const {
    pos = std::min(pos, text_.size());
    // last non-blank character read, so lookahead past a newline does not shift the line
    while (pos > 0 && std::isspace(static_cast<unsigned char>(text_[pos - 1]))) --pos;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }
  int current_line() const { return line_at(static_cast<size_t>(*cursor_ - text_.data())); }

  std::string path() const {
    std::string s;
    for (const auto& f : stack_) s += "/" + (f.array ? std::to_string(f.index) : f.key);
    return s;
  }
  void value() {
    lines[path()] = current_line();
    advance();
  }
  void open(bool array) {
    lines[path()] = current_line();
    stack_.push_back({array, 0, {}});
  }
  void close() {
    stack_.pop_back();
    advance();
  }
  void advance() {
    if (!stack_.empty() && stack_.back().array) ++stack_.back().index;
  }

  nlohmann::detail::json_sax_dom_parser<json> dom_;
  const std::string& text_;
  const char** cursor_;
  std::vector<Frame> stack_;
};

class Reader {
 public:
  Reader(std::string origin, std::map<std::string, int> lines) : origin_(std::move(origin)), lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    std::string p = ptr;
    int line = 0;
    while (true) {
      auto it = lines_.find(p);
      if (it != lines_.end()) {
        line = it->second;
        break;
      }
      if (p.empty()) break;
      p = p.substr(0, p.rfind('/'));
    }
    throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + (ptr.empty() ? "/" : ptr) + ": " + msg);
  }

  void only_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) fail(ptr, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) fail(ptr + "/" + it.key(), "unknown key \"" + it.key() + "\"");
    }
  }

  Q rational(const json& j, const std::string& ptr) const {
    if (j.is_number_integer()) return Q(std::to_string(j.get<long long>()), 10);
    if (!j.is_string()) fail(ptr, "expected a rational as \"p/q\" or an integer");
    try {
      return parse_rational(j.get<std::string>());
    } catch (const FieldError& e) {
      fail(ptr, e.what());
    }
  }

  Num number(const FieldPtr& f, const json& j, const std::string& ptr) const {
    if (!j.is_array()) return Num(f, rational(j, ptr));
    if (j.empty() || static_cast<int>(j.size()) > f->degree())
      fail(ptr, "expected 1 to " + std::to_string(f->degree()) + " coefficients");
    QVec c(f->degree(), Q(0));
    for (size_t t = 0; t < j.size(); ++t) c[t] = rational(j[t], ptr + "/" + std::to_string(t));
    return Num(f, c);
  }

  NVec vec(const FieldPtr& f, const json& j, const std::string& ptr, int d) const {
    if (!j.is_array() || static_cast<int>(j.size()) != d) fail(ptr, "expected a vector of length " + std::to_string(d));
    NVec v;
    for (int k = 0; k < d; ++k) v.push_back(number(f, j[k], ptr + "/" + std::to_string(k)));
    return v;
  }

  NMat mat(const FieldPtr& f, const json& j, const std::string& ptr, int d) const {
    if (!j.is_array() || static_cast<int>(j.size()) != d) fail(ptr, "expected " + std::to_string(d) + " rows");
    NMat m;
    for (int k = 0; k < d; ++k) m.push_back(vec(f, j[k], ptr + "/" + std::to_string(k), d));
    return m;
  }

  double real(const json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    return j.get<double>();
  }
  double positive(const json& j, const std::string& ptr) const {
    double x = real(j, ptr);
    if (!(x > 0)) fail(ptr, "expected a positive number");
    return x;
  }
  double count(const json& j, const std::string& ptr) const {
    double x = positive(j, ptr);
    if (x != std::floor(x) || x > 1e12) fail(ptr, "expected a whole number");
    return x;
  }
  std::string str(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed = {}) const {
    if (!j.is_string()) fail(ptr, "expected a string");
    std::string s = j.get<std::string>();
    if (allowed.size() == 0) return s;
    for (const char* a : allowed)
      if (s == a) return s;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    fail(ptr, "expected one of " + list);
  }

 private:
  std::string origin_;
  std::map<std::string, int> lines_;
};

FieldPtr read_field(const Reader& rd, const json& j, const std::string& ptr) {
  rd.only_keys(j, ptr, {"minpoly", "root_interval"});
  if (!j.contains("minpoly") || !j.contains("root_interval")) rd.fail(ptr, "field needs minpoly and root_interval");
  const json& mp = j["minpoly"];
  if (!mp.is_array() || mp.size() < 2) rd.fail(ptr + "/minpoly", "expected at least two coefficients");
  QVec f;
  for (size_t k = 0; k < mp.size(); ++k) f.push_back(rd.rational(mp[k], ptr + "/minpoly/" + std::to_string(k)));
  const json& ri = j["root_interval"];
  if (!ri.is_array() || ri.size() != 2) rd.fail(ptr + "/root_interval", "expected [lo, hi]");
  Q lo = rd.rational(ri[0], ptr + "/root_interval/0"), hi = rd.rational(ri[1], ptr + "/root_interval/1");
  if (f.size() == 2 && f[1] == 1) return Field::rationals();
  try {
    return Field::make(f, lo, hi);
  } catch (const FieldError& e) {
    rd.fail(ptr, e.what());
  }
}

XiGrid read_xi(const Reader& rd, const json& j, const std::string& ptr) {
  if (j.is_string()) {
    try {
      return parse_xi_grid(j.get<std::string>());
    } catch (const ConfigError& e) {
      rd.fail(ptr, e.what());
    }
  }
  rd.only_keys(j, ptr, {"lo", "hi", "n", "spacing"});
  XiGrid g;
  if (j.contains("lo")) g.lo = rd.positive(j["lo"], ptr + "/lo");
  if (j.contains("hi")) g.hi = rd.positive(j["hi"], ptr + "/hi");
  if (j.contains("n")) g.n = static_cast<int>(rd.count(j["n"], ptr + "/n"));
  if (j.contains("spacing")) g.log = rd.str(j["spacing"], ptr + "/spacing", {"log", "lin"}) == "log";
  if (!(g.hi > g.lo)) rd.fail(ptr, "need lo < hi");
  return g;
}

RunSettings read_run(const Reader& rd, const json& j, const std::string& ptr) {
  rd.only_keys(j, ptr,
               {"seed", "workers", "samples", "rho", "xi", "xi_max", "mode", "psi", "shift", "events", "trajectories",
                "region", "start", "start_point", "directions", "orbit_cap", "scope", "merged", "compare_xi"});
  RunSettings r;
  auto has = [&](const char* k) { return j.contains(k); };
  auto at = [&](const char* k) { return ptr + "/" + k; };
  if (has("seed")) {
    if (!j["seed"].is_number_unsigned()) rd.fail(at("seed"), "expected a nonnegative integer");
    r.seed = j["seed"].get<uint64_t>();
  }
  if (has("workers")) r.workers = static_cast<int>(rd.count(j["workers"], at("workers")));
  if (has("samples")) r.samples = rd.count(j["samples"], at("samples"));
  if (has("events")) r.events = rd.count(j["events"], at("events"));
  if (has("trajectories")) r.trajectories = rd.count(j["trajectories"], at("trajectories"));
  if (has("orbit_cap")) r.orbit_cap = static_cast<size_t>(rd.count(j["orbit_cap"], at("orbit_cap")));
  if (has("scope")) {
    if (!j["scope"].is_number_unsigned()) rd.fail(at("scope"), "expected a class index");
    r.scope = j["scope"].get<int>();
  }
  if (has("merged")) {
    if (!j["merged"].is_boolean()) rd.fail(at("merged"), "expected true or false");
    r.merged = j["merged"].get<bool>();
  }
  if (has("compare_xi")) {
    const json& v = j["compare_xi"];
    if (!v.is_array() || v.empty()) rd.fail(at("compare_xi"), "expected a nonempty list");
    for (size_t k = 0; k < v.size(); ++k)
      r.compare_xi.push_back(rd.positive(v[k], at("compare_xi") + "/" + std::to_string(k)));
  }
  if (has("rho")) {
    const json& v = j["rho"];
    if (v.is_array()) {
      for (size_t k = 0; k < v.size(); ++k) r.rho.push_back(rd.positive(v[k], at("rho") + "/" + std::to_string(k)));
      if (r.rho.empty()) rd.fail(at("rho"), "empty list");
    } else {
      r.rho.push_back(rd.positive(v, at("rho")));
    }
  }
  if (has("xi")) r.xi = read_xi(rd, j["xi"], at("xi"));
  if (has("xi_max")) r.xi_max = rd.positive(j["xi_max"], at("xi_max"));
  if (has("mode")) r.mode = rd.str(j["mode"], at("mode"), {"generic", "mark", "mark_averaged"});
  if (has("psi")) {
    const json& v = j["psi"];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() || !v[1].is_number_unsigned())
      rd.fail(at("psi"), "expected [class, member] (zero-based)");
    r.psi = Mark{v[0].get<int>(), v[1].get<int>()};
  }
  if (has("shift")) {
    r.shift = rd.real(j["shift"], at("shift"));
    if (!(std::abs(*r.shift) < 1)) rd.fail(at("shift"), "expected |shift| < 1");
  }
  if (has("region")) {
    const json& v = j["region"];
    if (!v.is_array() || v.size() != 2) rd.fail(at("region"), "expected [[x0, x1], [y0, y1]]");
    std::vector<std::pair<double, double>> box;
    for (size_t k = 0; k < 2; ++k) {
      std::string p = at("region") + "/" + std::to_string(k);
      if (!v[k].is_array() || v[k].size() != 2) rd.fail(p, "expected [lo, hi]");
      double a = rd.real(v[k][0], p + "/0"), b = rd.real(v[k][1], p + "/1");
      if (!(a < b)) rd.fail(p, "need lo < hi");
      box.emplace_back(a, b);
    }
    r.region = box;
  }
  if (has("start")) r.start = rd.str(j["start"], at("start"), {"cell", "fixed", "mark"});
  if (has("start_point")) {
    const json& v = j["start_point"];
    if (!v.is_array() || v.size() != 2) rd.fail(at("start_point"), "expected [x, y]");
    r.start_point = std::vector<double>{rd.real(v[0], at("start_point") + "/0"), rd.real(v[1], at("start_point") + "/1")};
  }
  if (has("directions")) {
    const json& v = j["directions"];
    if (!v.is_array() || v.empty()) rd.fail(at("directions"), "expected a nonempty density table");
    double total = 0;
    for (size_t k = 0; k < v.size(); ++k) {
      double x = rd.real(v[k], at("directions") + "/" + std::to_string(k));
      if (x < 0) rd.fail(at("directions") + "/" + std::to_string(k), "densities must be nonnegative");
      r.directions.push_back(x);
      total += x;
    }
    if (!(total > 0)) rd.fail(at("directions"), "density table has zero mass");
  }
  return r;
}

}  // namespace

std::vector<double> XiGrid::points() const {
  int m = n;
  if (m == 0) m = log ? std::max(2, static_cast<int>(std::lround(16 * std::log10(hi / lo))) + 1) : 33;
  return log ? log_grid(lo, hi, m) : lin_grid(lo, hi, m);
}

XiGrid parse_xi_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4) throw ConfigError("xi grid must look like lo:hi:log or lo:hi:n:lin");
  XiGrid g;
  try {
    size_t used = 0;
    g.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    g.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    if (parts.size() == 4) {
      g.n = std::stoi(parts[2], &used);
      if (used != parts[2].size() || g.n < 2) throw std::invalid_argument("n");
    }
  } catch (const std::logic_error&) {
    throw ConfigError("malformed xi grid \"" + s + "\"");
  }
  const std::string& sp = parts.back();
  if (sp != "log" && sp != "lin") throw ConfigError("xi grid spacing must be log or lin");
  g.log = sp == "log";
  if (!(g.lo > 0 && g.hi > g.lo)) throw ConfigError("xi grid needs 0 < lo < hi");
  return g;
}

namespace {

std::pair<json, Reader> parse_tracked(const std::string& text, const std::string& origin) {
  json root;
  const char* cursor = text.data();
  LineSax sax(root, text, &cursor);
  TrackingIt first{text.data(), &cursor}, last{text.data() + text.size(), &cursor};
  bool ok = json::sax_parse(first, last, &sax, nlohmann::detail::input_format_t::json, true, true);
  if (!ok) throw ConfigError(origin + ":" + (sax.error.empty() ? "invalid JSON" : sax.error.substr(5)));
  return {std::move(root), Reader(origin, std::move(sax.lines))};
}

}  // namespace

RunSettings parse_run_text(const std::string& text, const std::string& origin) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  auto [root, rd] = parse_tracked(text, origin);
  return read_run(rd, root, "");
}

RunSettings merge_run(const RunSettings& base, const RunSettings& over) {
  RunSettings r = base;
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(r.seed, over.seed);
  take(r.workers, over.workers);
  take(r.samples, over.samples);
  take(r.xi, over.xi);
  take(r.xi_max, over.xi_max);
  take(r.mode, over.mode);
  take(r.psi, over.psi);
  take(r.shift, over.shift);
  take(r.events, over.events);
  take(r.trajectories, over.trajectories);
  take(r.region, over.region);
  take(r.start, over.start);
  take(r.start_point, over.start_point);
  take(r.orbit_cap, over.orbit_cap);
  take(r.scope, over.scope);
  take(r.merged, over.merged);
  if (!over.rho.empty()) r.rho = over.rho;
  if (!over.directions.empty()) r.directions = over.directions;
  if (!over.compare_xi.empty()) r.compare_xi = over.compare_xi;
  return r;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  auto [root, rd] = parse_tracked(text, origin);

  rd.only_keys(root, "", {"schema", "description", "dim", "field", "grids", "classes", "run"});
  if (root.contains("schema")) {
    if (!root["schema"].is_number_integer() || root["schema"].get<int>() != kSchemaVersion)
      rd.fail("/schema", "unsupported schema version (this build reads " + std::to_string(kSchemaVersion) + ")");
  }
  if (root.contains("description")) rd.str(root["description"], "/description");
  if (!root.contains("dim")) rd.fail("", "missing \"dim\"");
  if (!root["dim"].is_number_unsigned()) rd.fail("/dim", "expected 2 or 3");
  int d = root["dim"].get<int>();
  if (d != 2 && d != 3) rd.fail("/dim", "expected 2 or 3");
  FieldPtr f = root.contains("field") ? read_field(rd, root["field"], "/field") : Field::rationals();

  if (root.contains("grids") == root.contains("classes")) rd.fail("", "give exactly one of \"grids\" or \"classes\"");
  std::vector<Grid> grids;
  std::vector<std::string> where;
  auto add_grid = [&](const json& g, const std::string& ptr, const std::optional<NMat>& Mclass) {
    rd.only_keys(g, ptr, Mclass ? std::initializer_list<const char*>{"c", "w"}
                                : std::initializer_list<const char*>{"c", "w", "M"});
    Num c = g.contains("c") ? rd.number(f, g["c"], ptr + "/c") : Num(f, Q(1));
    NVec w = g.contains("w") ? rd.vec(f, g["w"], ptr + "/w", d) : nvec_zero(f, d);
    NMat M = Mclass ? *Mclass : g.contains("M") ? rd.mat(f, g["M"], ptr + "/M", d) : nmat_identity(f, d);
    Grid gr{c, w, M};
    try {
      validate_grid(gr);
    } catch (const std::exception& e) {
      rd.fail(ptr, e.what());
    }
    grids.push_back(gr);
    where.push_back(ptr);
  };
  if (root.contains("grids")) {
    const json& gs = root["grids"];
    if (!gs.is_array() || gs.empty()) rd.fail("/grids", "expected a nonempty list");
    for (size_t k = 0; k < gs.size(); ++k) add_grid(gs[k], "/grids/" + std::to_string(k), std::nullopt);
  } else {
    const json& cs = root["classes"];
    if (!cs.is_array() || cs.empty()) rd.fail("/classes", "expected a nonempty list");
    for (size_t k = 0; k < cs.size(); ++k) {
      std::string ptr = "/classes/" + std::to_string(k);
      rd.only_keys(cs[k], ptr, {"M", "members"});
      NMat M = cs[k].contains("M") ? rd.mat(f, cs[k]["M"], ptr + "/M", d) : nmat_identity(f, d);
      if (!cs[k].contains("members") || !cs[k]["members"].is_array() || cs[k]["members"].empty())
        rd.fail(ptr, "expected a nonempty \"members\" list");
      const json& ms = cs[k]["members"];
      for (size_t i = 0; i < ms.size(); ++i) add_grid(ms[i], ptr + "/members/" + std::to_string(i), M);
    }
  }

  ExperimentConfig cfg;
  try {
    cfg.presentation = canonical_presentation(f, d, grids);
  } catch (const std::exception& e) {
    rd.fail(root.contains("grids") ? "/grids" : "/classes", e.what());
  }
  if (root.contains("run")) cfg.run = read_run(rd, root["run"], "/run");
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text, path);
}

ojson num_to_json(const Num& x) {
  ojson a = ojson::array();
  for (const Q& q : x.coeffs()) a.push_back(format_rational(q));
  return a;
}

ojson field_to_json(const FieldPtr& f) {
  ojson mp = ojson::array();
  for (const Q& q : f->minpoly()) mp.push_back(format_rational(q));
  return {{"minpoly", mp}, {"root_interval", {format_rational(f->lo()), format_rational(f->hi())}}};
}

ojson presentation_to_json(const Presentation& p) {
  ojson cls = ojson::array();
  for (const auto& c : p.classes) {
    ojson M = ojson::array();
    for (const auto& row : c.M) {
      ojson r = ojson::array();
      for (const auto& x : row) r.push_back(num_to_json(x));
      M.push_back(r);
    }
    ojson members = ojson::array();
    for (const auto& m : c.members) {
      ojson w = ojson::array();
      for (const auto& x : m.w) w.push_back(num_to_json(x));
      members.push_back({{"c", num_to_json(m.c)}, {"w", w}});
    }
    cls.push_back({{"M", M}, {"members", members}});
  }
  return {{"schema", kSchemaVersion}, {"dim", p.dim}, {"field", field_to_json(p.field)}, {"classes", cls}};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace gg
