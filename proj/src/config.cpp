// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "platelab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "platelab/error.hpp"

namespace platelab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool bare_key(std::string_view k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

class ValueParser {
 public:
  ValueParser(std::string_view text, int line) : text_(text), line_(line) {}

  TomlValue parse() {
    TomlValue v = value();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  TomlValue value() {
    skip_space();
    if (pos_ >= text_.size()) fail("missing value");
    const char c = text_[pos_];
    if (c == '[') return array();
    if (c == '"') return string();
    return scalar();
  }

  TomlValue array() {
    ++pos_;
    TomlArray items;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) fail("unterminated array");
      if (text_[pos_] == ']') {
        ++pos_;
        break;
      }
      items.push_back(value());
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        break;
      }
      fail("expected ',' or ']' in array");
    }
    TomlValue v;
    v.data = std::move(items);
    v.line = line_;
    return v;
  }

  TomlValue string() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        ++pos_;
        if (pos_ >= text_.size()) break;
        const char e = text_[pos_];
        if (e == 'n') out += '\n';
        else if (e == 't') out += '\t';
        else if (e == '"' || e == '\\') out += e;
        else fail("unsupported escape sequence");
      } else {
        out += text_[pos_];
      }
      ++pos_;
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    TomlValue v;
    v.data = std::move(out);
    v.line = line_;
    return v;
  }

  TomlValue scalar() {
    const auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
           text_[pos_] != ' ' && text_[pos_] != '\t')
      ++pos_;
    std::string token(text_.substr(start, pos_ - start));
    TomlValue v;
    v.line = line_;
    if (token == "true" || token == "false") {
      v.data = token == "true";
      return v;
    }
    std::string digits;
    for (char c : token)
      if (c != '_') digits += c;
    if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
    if (digits == "inf" || digits == "-inf" || digits == "nan" || digits == "-nan")
      fail("non-finite number '" + token + "'");
    double x = 0.0;
    const auto* first = digits.data();
    const auto* last = digits.data() + digits.size();
    const auto res = std::from_chars(first, last, x);
    if (digits.empty() || res.ec != std::errc() || res.ptr != last)
      fail("cannot parse value '" + token + "'");
    v.data = x;
    v.integral = digits.find_first_of(".eE") == std::string::npos;
    return v;
  }

  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

std::string strip_comment(std::string_view line) {
  std::string out;
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) break;
    out += c;
  }
  return out;
}

// Typed access with error collection.
class Reader {
 public:
  Reader(const TomlDocument& doc, std::vector<std::string>& issues)
      : doc_(doc), issues_(issues) {}

  bool has_table(const std::string& t) const { return doc_.count(t) > 0; }

  const TomlValue* find(const std::string& table, const std::string& key) {
    used_.insert(table + "." + key);
    const auto t = doc_.find(table);
    if (t == doc_.end()) return nullptr;
    const auto k = t->second.find(key);
    return k == t->second.end() ? nullptr : &k->second;
  }

  std::optional<double> number(const std::string& table, const std::string& key) {
    const TomlValue* v = find(table, key);
    if (!v) return std::nullopt;
    if (const auto* d = std::get_if<double>(&v->data)) return *d;
    issue(table, key, *v, "must be a number");
    return std::nullopt;
  }

  std::optional<long long> integer(const std::string& table, const std::string& key) {
    const TomlValue* v = find(table, key);
    if (!v) return std::nullopt;
    const auto* d = std::get_if<double>(&v->data);
    if (!d || !v->integral || std::abs(*d) > 9.0e15) {
      issue(table, key, *v, "must be an integer");
      return std::nullopt;
    }
    return static_cast<long long>(*d);
  }

  std::optional<std::string> string(const std::string& table, const std::string& key) {
    const TomlValue* v = find(table, key);
    if (!v) return std::nullopt;
    if (const auto* s = std::get_if<std::string>(&v->data)) return *s;
    issue(table, key, *v, "must be a string");
    return std::nullopt;
  }

  std::optional<std::vector<double>> numbers(const std::string& table,
                                             const std::string& key,
                                             bool integers = false) {
    const TomlValue* v = find(table, key);
    if (!v) return std::nullopt;
    const auto* arr = std::get_if<TomlArray>(&v->data);
    if (!arr) {
      issue(table, key, *v, "must be an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& item : *arr) {
      const auto* d = std::get_if<double>(&item.data);
      if (!d || (integers && !item.integral)) {
        issue(table, key, *v,
              integers ? "must be an array of integers" : "must be an array of numbers");
        return std::nullopt;
      }
      out.push_back(*d);
    }
    return out;
  }

  void issue(const std::string& table, const std::string& key, const TomlValue& v,
             const std::string& what) {
    issues_.push_back(table + "." + key + " (line " + std::to_string(v.line) + ") " + what);
  }

  void issue(const std::string& table, const std::string& key, const std::string& what) {
    issues_.push_back(table + "." + key + " " + what);
  }

  void report_unknown() {
    static const std::set<std::string> known{"",         "geometry", "damping",
                                             "discretization", "simulate", "sweep",
                                             "resolvent_case", "carleman"};
    for (const auto& [table, keys] : doc_) {
      if (!known.count(table)) {
        issues_.push_back("[" + table + "] is not a recognised table");
        continue;
      }
      for (const auto& [key, value] : keys) {
        if (!used_.count(table + "." + key))
          issues_.push_back((table.empty() ? key : table + "." + key) + " (line " +
                            std::to_string(value.line) + ") is not a recognised key");
      }
    }
  }

 private:
  const TomlDocument& doc_;
  std::vector<std::string>& issues_;
  std::set<std::string> used_;
};

void require_positive(Reader& r, const std::string& table, const std::string& key,
                      double value) {
  if (!(value > 0.0)) r.issue(table, key, "must be positive");
}

template <class T>
void read_count(Reader& r, const std::string& table, const std::string& key, T& out,
                long long min_value) {
  if (const auto v = r.integer(table, key)) {
    if (*v < min_value)
      r.issue(table, key, "must be >= " + std::to_string(min_value));
    else
      out = static_cast<T>(*v);
  }
}

void read_seed(Reader& r, const std::string& table, std::uint64_t& out) {
  if (const auto v = r.integer(table, "seed")) {
    if (*v < 0)
      r.issue(table, "seed", "must be non-negative");
    else
      out = static_cast<std::uint64_t>(*v);
  }
}

QuadraticProfile read_profile(Reader& r, const std::string& prefix, int dim,
                              const QuadraticProfile& fallback) {
  QuadraticProfile p = fallback;
  p.dim = dim;
  const std::string t = "carleman";
  if (const auto c = r.number(t, prefix + "_constant")) p.constant = *c;
  if (const auto g = r.numbers(t, prefix + "_linear")) {
    if (g->size() != static_cast<std::size_t>(dim))
      r.issue(t, prefix + "_linear", "must have " + std::to_string(dim) + " entries");
    else
      p.linear = {(*g)[0], dim == 2 ? (*g)[1] : 0.0};
  }
  if (const auto h = r.numbers(t, prefix + "_hessian")) {
    const std::size_t want = dim == 2 ? 3 : 1;
    if (h->size() != want) {
      r.issue(t, prefix + "_hessian",
              dim == 2 ? "must be [hxx, hxy, hyy]" : "must be [hxx]");
    } else {
      p.quadratic.setZero();
      p.quadratic(0, 0) = (*h)[0];
      if (dim == 2) {
        p.quadratic(0, 1) = p.quadratic(1, 0) = (*h)[1];
        p.quadratic(1, 1) = (*h)[2];
      }
    }
  }
  return p;
}

}  // namespace

TomlDocument parse_toml(std::string_view text) {
  TomlDocument doc;
  doc[""];
  std::vector<std::string> issues;
  std::string table;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string stripped = strip_comment(raw);
    const std::string_view line = trim(stripped);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        issues.push_back(where + "malformed table header");
        continue;
      }
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!bare_key(name)) {
        issues.push_back(where + "unsupported table name '" + std::string(name) + "'");
        continue;
      }
      table = std::string(name);
      if (doc.count(table) && !doc[table].empty())
        issues.push_back(where + "table [" + table + "] defined twice");
      doc[table];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back(where + "expected key = value");
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!bare_key(key)) {
      issues.push_back(where + "invalid key '" + key + "'");
      continue;
    }
    if (doc[table].count(key)) {
      issues.push_back(where + "duplicate key '" + key + "'");
      continue;
    }
    try {
      doc[table][key] = ValueParser(trim(line.substr(eq + 1)), line_no).parse();
    } catch (const ConfigError& e) {
      issues.push_back(e.what());
    }
  }
  if (!issues.empty()) throw ConfigError(issues);
  return doc;
}

PlateModel RunConfig::make_model() const {
  if (!has_plate) throw ConfigError("configuration has no [geometry]/[damping]/[discretization]");
  return PlateModel(geometry, region, n_modes);
}

bool is_known_command(std::string_view command) {
  return std::find(std::begin(kCommands), std::end(kCommands), command) != std::end(kCommands);
}

bool needs_plate(std::string_view command) {
  return command != "carleman" && command != "verify";
}

RunConfig config_from_toml(const TomlDocument& doc, bool require_plate) {
  std::vector<std::string> issues;
  Reader r(doc, issues);
  RunConfig cfg;

  const bool plate_given = r.has_table("geometry") || r.has_table("damping") ||
                           r.has_table("discretization");
  if (require_plate || plate_given) {
    auto missing = [&](const std::string& table, const std::string& key) {
      issues.push_back(table + "." + key + " is required");
    };
    const auto dim = r.integer("geometry", "dim");
    const auto lengths = r.numbers("geometry", "lengths");
    const auto d = r.number("damping", "d");
    const auto ell = r.number("damping", "ell");
    const auto n = r.integer("discretization", "n_modes");
    if (!dim) missing("geometry", "dim");
    if (!lengths) missing("geometry", "lengths");
    if (!d) missing("damping", "d");
    if (!ell) missing("damping", "ell");
    if (!n) missing("discretization", "n_modes");

    if (dim && *dim != 1 && *dim != 2) r.issue("geometry", "dim", "must be 1 or 2");
    if (dim && lengths && (*dim == 1 || *dim == 2)) {
      if (lengths->size() != static_cast<std::size_t>(*dim)) {
        r.issue("geometry", "lengths", "must have " + std::to_string(*dim) + " entries");
      } else {
        for (double l : *lengths)
          if (!(l > 0.0)) r.issue("geometry", "lengths", "entries must be positive");
        cfg.geometry = *dim == 1 ? Geometry::interval((*lengths)[0])
                                 : Geometry::rectangle((*lengths)[0], (*lengths)[1]);
      }
    }
    if (d) {
      if (!(*d >= 0.0)) r.issue("damping", "d", "must be non-negative");
      cfg.region.d = *d;
    }
    if (ell) {
      if (!(*ell >= 0.0))
        r.issue("damping", "ell", "must be non-negative");
      else if (lengths && !lengths->empty() && *ell > (*lengths)[0])
        r.issue("damping", "ell", "= " + std::to_string(*ell) +
                                      " lies outside the domain (length " +
                                      std::to_string((*lengths)[0]) + ")");
      cfg.region.extent = *ell;
    }
    if (n) {
      if (*n < 1)
        r.issue("discretization", "n_modes", "must be >= 1");
      else if (*n > 4096)
        r.issue("discretization", "n_modes", "must be <= 4096");
      else
        cfg.n_modes = static_cast<int>(*n);
    }
    cfg.has_plate = true;
  }
  read_count(r, "discretization", "grid_points", cfg.grid_points, 1);
  read_count(r, "discretization", "interface_points", cfg.interface_points, 1);

  {
    const std::string t = "simulate";
    auto& s = cfg.simulate;
    if (const auto m = r.string(t, "method")) {
      if (*m == "exact")
        s.method = Integrator::Exact;
      else if (*m == "midpoint")
        s.method = Integrator::Midpoint;
      else
        r.issue(t, "method", "must be \"exact\" or \"midpoint\"");
    }
    if (const auto v = r.number(t, "dt")) {
      require_positive(r, t, "dt", *v);
      s.dt = *v;
    }
    if (const auto v = r.number(t, "t_final")) {
      require_positive(r, t, "t_final", *v);
      s.t_final = *v;
    }
    read_count(r, t, "k", s.k, 1);
    read_seed(r, t, s.seed);
    read_count(r, t, "samples", s.samples, 1);
    if (const auto w = r.numbers(t, "window")) {
      if (w->size() != 2 || !((*w)[0] > 0.0) || !((*w)[0] < (*w)[1]))
        r.issue(t, "window", "must be [t_min, t_max] with 0 < t_min < t_max");
      else {
        s.window_min = (*w)[0];
        s.window_max = (*w)[1];
      }
    }
    if (s.method == Integrator::Midpoint && s.dt > s.t_final)
      r.issue(t, "dt", "must not exceed t_final");
  }

  {
    const std::string t = "sweep";
    auto& s = cfg.sweep;
    if (const auto v = r.number(t, "mu_min")) s.mu_min = *v;
    if (const auto v = r.number(t, "mu_max")) s.mu_max = *v;
    read_count(r, t, "n_points", s.n_points, 2);
    if (!(s.mu_min < s.mu_max)) r.issue(t, "mu_max", "must exceed mu_min");
  }

  {
    const std::string t = "resolvent_case";
    auto& s = cfg.resolvent_case;
    if (const auto v = r.numbers(t, "mu")) {
      if (v->empty()) r.issue(t, "mu", "must not be empty");
      s.mu = *v;
    }
    read_seed(r, t, s.seed);
    read_count(r, t, "n_cases", s.n_cases, 1);
    if (const auto v = r.numbers(t, "ladder", true)) {
      s.ladder.clear();
      for (double x : *v) {
        if (x < 1.0 || x > 4096.0) {
          r.issue(t, "ladder", "entries must lie in [1, 4096]");
          break;
        }
        s.ladder.push_back(static_cast<int>(x));
      }
    }
  }

  {
    const std::string t = "carleman";
    cfg.has_carleman = r.has_table(t);
    int dim = 2;
    if (const auto v = r.integer(t, "dim")) {
      if (*v != 1 && *v != 2)
        r.issue(t, "dim", "must be 1 or 2");
      else
        dim = static_cast<int>(*v);
    }
    auto& c = cfg.carleman;
    c = default_carleman_setup(dim);
    if (const auto v = r.number(t, "a")) c.geometry.a = *v;
    if (const auto v = r.number(t, "ell")) c.geometry.ell = *v;
    if (const auto v = r.number(t, "b")) c.geometry.b = *v;
    if (const auto v = r.number(t, "ly")) c.geometry.ly = *v;
    if (!(c.geometry.a < c.geometry.ell && c.geometry.ell < c.geometry.b))
      r.issue(t, "ell", "must satisfy a < ell < b");
    if (dim == 2 && !(c.geometry.ly > 0.0)) r.issue(t, "ly", "must be positive");
    c.psi1 = read_profile(r, "psi1", dim, c.psi1);
    c.psi2 = read_profile(r, "psi2", dim, c.psi2);
    if (const auto v = r.numbers(t, "beta")) {
      if (v->empty()) r.issue(t, "beta", "must not be empty");
      for (double b : *v)
        if (!(b > 0.0)) r.issue(t, "beta", "entries must be positive");
      c.betas = *v;
    }
    if (const auto v = r.numbers(t, "tau")) {
      if (v->empty()) r.issue(t, "tau", "must not be empty");
      for (double x : *v)
        if (!(x > 0.0)) r.issue(t, "tau", "entries must be positive");
      c.taus = *v;
    }
    read_count(r, t, "region_points", c.region_points, 1);
    read_count(r, t, "boundary_points", c.boundary_points, 1);
    read_count(r, t, "directions", c.directions, 1);
    if (const auto v = r.number(t, "threshold")) {
      require_positive(r, t, "threshold", *v);
      c.threshold = *v;
    }
  }

  r.report_unknown();
  if (!issues.empty()) throw ConfigError(issues);
  return cfg;
}

RunConfig parse_config_text(std::string_view text, bool require_plate) {
  return config_from_toml(parse_toml(text), require_plate);
}

RunConfig parse_config(const std::string& path, bool require_plate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), require_plate);
}

}  // namespace platelab
