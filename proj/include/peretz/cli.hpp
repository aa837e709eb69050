#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "peretz/assertions.hpp"
#include "peretz/balance.hpp"
#include "peretz/fixtures.hpp"
#include "peretz/json.hpp"
#include "peretz/numeric.hpp"
#include "peretz/parse.hpp"
#include "peretz/pipeline.hpp"
#include "peretz/roots.hpp"
#include "peretz/svg.hpp"

namespace peretz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Bad flag values, unreadable files and malformed polynomial text.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Input {
  std::string poly;
  std::string file;
  std::string fixture;
};

inline void add_input(CLI::App* sub, Input& in) {
  sub->add_option("--poly", in.poly, "polynomial text");
  sub->add_option("--file", in.file, "file holding polynomial text");
  sub->add_option("--fixture", in.fixture, "built-in fixture key");
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Poly parse_text(const std::string& text, const std::string& where) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw UsageError(where + ": " + e.what());
  }
}

inline Poly resolve(const Input& in) {
  int given = !in.poly.empty() + !in.file.empty() + !in.fixture.empty();
  if (given != 1) throw UsageError("exactly one of --poly, --file, --fixture is required");
  if (!in.poly.empty()) return parse_text(in.poly, "--poly");
  if (!in.file.empty()) return parse_text(read_file(in.file), "--file " + in.file);
  Fixture f = load_builtin(in.fixture);
  if (f.kind != FixtureKind::Poly) throw UsageError("fixture '" + in.fixture + "' is not a single polynomial");
  return f.poly();
}

inline Var parse_var(const std::string& v) {
  if (v != "x" && v != "y") throw UsageError("--var must be x or y, got '" + v + "'");
  return Var(v);
}

inline Mode parse_mode(const std::string& m) {
  if (m == "y-finite") return Mode::YFinite;
  if (m == "x-finite") return Mode::XFinite;
  throw UsageError("--mode must be y-finite or x-finite, got '" + m + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// Exact value of "-1", "3/4" or "2.25".
inline Rational parse_number(const std::string& text, const std::string& flag) {
  auto bad = [&] { return UsageError(flag + ": '" + text + "' is not a number"); };
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) throw bad();
  auto digits = [](const std::string& d) { return !d.empty() && std::all_of(d.begin(), d.end(), ::isdigit); };
  Rational out;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!digits(n) || !digits(d) || mpz_class(d) == 0) throw bad();
    out = make_rational(mpz_class(n), mpz_class(d));
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string i = s.substr(0, dot), f = s.substr(dot + 1);
    if ((!i.empty() && !digits(i)) || !digits(f)) throw bad();
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, f.size());
    out = make_rational(mpz_class(i.empty() ? "0" : i) * den + mpz_class(f), den);
  } else {
    if (!digits(s)) throw bad();
    out = Rational(mpz_class(s));
  }
  return neg ? Rational(-out) : out;
}

inline std::uint64_t parse_count(const std::string& text, const std::string& flag) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v == 0)
    throw UsageError(flag + ": '" + text + "' is not a positive integer");
  return v;
}

inline double parse_double(const std::string& text, const std::string& flag) {
  double v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || !std::isfinite(v))
    throw UsageError(flag + ": '" + text + "' is not a finite number");
  return v;
}

inline GridSpec parse_grid(const std::string& text, const std::string& flag) {
  auto parts = split(text, ',');
  if (parts.size() != 6) throw UsageError(flag + " expects x0,x1,y0,y1,nx,ny");
  GridSpec g{parse_number(parts[0], flag), parse_number(parts[1], flag), parse_number(parts[2], flag),
             parse_number(parts[3], flag), parse_count(parts[4], flag), parse_count(parts[5], flag)};
  try {
    g.validate();
  } catch (const Error& e) {
    throw UsageError(flag + ": " + e.what());
  }
  return g;
}

inline std::array<double, 2> parse_target(const std::string& text) {
  auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("--target expects u,v");
  return {parse_double(parts[0], "--target"), parse_double(parts[1], "--target")};
}

inline void require_format(const std::string& format, std::initializer_list<const char*> allowed, const std::string& cmd) {
  for (const char* a : allowed)
    if (format == a) return;
  throw UsageError("--format " + format + " is not available for " + cmd);
}

inline std::string csv(const std::vector<SampleRow>& rows) {
  std::string out = "x,y,u,v,det_sign\n";
  for (const auto& r : rows)
    out += svg::num(r.x) + "," + svg::num(r.y) + "," + svg::num(r.u) + "," + svg::num(r.v) + "," + std::to_string(r.det_sign) + "\n";
  return out;
}

inline json::Json grid_json(const GridSpec& g) {
  return json::Json{{"x0", json::rational(g.x0)}, {"x1", json::rational(g.x1)}, {"y0", json::rational(g.y0)},
                    {"y1", json::rational(g.y1)}, {"nx", g.nx},                  {"ny", g.ny}};
}

inline json::Json fixture_json(const Fixture& f) {
  static const char* kinds[] = {"poly", "poly_list", "assertions", "identity"};
  json::Json out{{"name", f.name}, {"kind", kinds[static_cast<int>(f.kind)]}, {"description", f.description}};
  if (f.assertions) {
    out["assertions"] = json::assertions(*f.assertions);
  } else if (f.identity) {
    out["identity"] = json::identity(*f.identity);
  } else {
    out["polys"] = json::array(f.polys, json::poly);
  }
  return out;
}

struct Options {
  Input in;
  std::string var = "x";
  std::string mode = "y-finite";
  std::string q_file;
  std::string grid;
  std::string window;
  std::string target = "0,0";
  double tol = 1e-10;
  unsigned rounds = 2;
  std::string format = "json";
  std::string stroke = "black";
  std::string what = "image";
  std::string export_dir;
  long level = -1;
  unsigned long seed = 0;
  unsigned long samples = 10000;
};

inline PairMap pair(const Options& o) {
  if (o.q_file.empty()) throw UsageError("--q-file is required for pair commands");
  return PairMap(resolve(o.in), parse_text(read_file(o.q_file), "--q-file " + o.q_file));
}

}  // namespace detail

/// Runs one command; args excludes the program name. Returns the exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::Options;
  Options o;
  CLI::App app{"Exact asymptotic values of real bivariate polynomials, plus numeric tools for pair maps", "peretz"};
  app.set_config("--config", "", "TOML file with default flag values (flags take precedence)");
  app.require_subcommand(1);
  app.fallthrough(false);

  auto* decompose = app.add_subcommand("decompose", "coefficients of p along --var");
  auto* assert_cmd = app.add_subcommand("assert", "assertion list of p decomposed along --var");
  auto* balance = app.add_subcommand("balance", "dominant balance of one assertion level");
  auto* branches = app.add_subcommand("branches", "asymptotic branches found by the pipeline");
  auto* identity = app.add_subcommand("identity", "asymptotic identities (or verify an identity fixture)");
  auto* av = app.add_subcommand("av", "full pipeline report with the asymptotic value set");
  auto* fixtures = app.add_subcommand("fixtures", "list, show or export built-in fixtures");
  auto* jacobian = app.add_subcommand("jacobian", "Jacobian determinant of (p, q) with a sampled sign report");
  auto* sample = app.add_subcommand("sample", "image of a grid under (p, q)");
  auto* preimage = app.add_subcommand("preimage", "multistart Newton preimages of --target");
  auto* complement = app.add_subcommand("complement", "raster scan for image-complement candidates");
  auto* plot = app.add_subcommand("plot", "SVG of sampled image points or complement candidates");

  for (auto* s : {decompose, assert_cmd, balance, branches, identity, av, jacobian, sample, preimage, complement, plot})
    detail::add_input(s, o.in);
  fixtures->add_option("--fixture", o.in.fixture, "fixture key to show");
  fixtures->add_option("--export", o.export_dir, "write every fixture as canonical text into this directory");
  for (auto* s : {decompose, assert_cmd, balance}) s->add_option("--var", o.var, "decomposition variable x|y")->capture_default_str();
  balance->add_option("--level", o.level, "assertion level (default: first active level)");
  for (auto* s : {branches, identity, av}) s->add_option("--mode", o.mode, "y-finite|x-finite")->capture_default_str();
  for (auto* s : {jacobian, sample, preimage, complement, plot}) {
    s->add_option("--q-file", o.q_file, "file holding the second component q");
    s->add_option("--grid", o.grid, "x0,x1,y0,y1,nx,ny");
  }
  jacobian->add_option("--seed", o.seed, "seed for the sign sampling")->capture_default_str();
  jacobian->add_option("--samples", o.samples, "number of sign samples")->capture_default_str();
  preimage->add_option("--target", o.target, "u,v")->capture_default_str();
  preimage->add_option("--tol", o.tol, "Newton residual tolerance")->capture_default_str();
  for (auto* s : {complement, plot}) {
    s->add_option("--window", o.window, "image raster x0,x1,y0,y1,nx,ny");
    s->add_option("--rounds", o.rounds, "refinement rounds (at most 6)")->capture_default_str();
  }
  plot->add_option("--stroke", o.stroke, "stroke and fill color")->capture_default_str();
  plot->add_option("--what", o.what, "image|complement")->capture_default_str();
  for (auto* s : {decompose, assert_cmd, balance, branches, identity, av, fixtures, jacobian, sample, preimage, complement, plot})
    s->add_option("--format", o.format, "json|csv|svg where defined")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    auto emit = [&](const json::Json& j) { out << json::dump(j); };
    auto grid_or = [&](const std::string& fallback) { return detail::parse_grid(o.grid.empty() ? fallback : o.grid, "--grid"); };

    if (decompose->parsed()) {
      detail::require_format(o.format, {"json"}, "decompose");
      Poly p = detail::resolve(o.in);
      Var v = detail::parse_var(o.var);
      emit({{"input", json::poly(p)}, {"var", v.name()}, {"terms", json::decomposition(peretz::decompose(p, v))}});
    } else if (assert_cmd->parsed()) {
      detail::require_format(o.format, {"json"}, "assert");
      Poly p = detail::resolve(o.in);
      AssertionList list = build_assertions(p, detail::parse_var(o.var));
      json::Json active = nullptr;
      try {
        active = first_active_level(list);
      } catch (const Error&) {
      }
      emit({{"input", json::poly(p)},
            {"decomposition_var", list.decomposition_var.name()},
            {"coefficient_var", list.coefficient_var.name()},
            {"assertions", json::assertions(list)},
            {"first_active_level", active}});
    } else if (balance->parsed()) {
      detail::require_format(o.format, {"json"}, "balance");
      Poly p = detail::resolve(o.in);
      AssertionList list = build_assertions(p, detail::parse_var(o.var));
      unsigned level = o.level < 0 ? first_active_level(list) : static_cast<unsigned>(o.level);
      if (level >= list.size()) throw UsageError("--level " + std::to_string(level) + " exceeds the degree");
      BalanceResult b = dominant_balance(list[level], list.decomposition_var, list.coefficient_var);
      json::Json roots = nullptr;
      if (b.limit_poly && !b.limit_poly->contains(kLimitSymbol)) roots = json::root_report(real_roots(*b.limit_poly, kRootSymbol));
      emit({{"input", json::poly(p)}, {"level", level}, {"assertion", json::assertion(list[level])}, {"balance", json::balance(b)},
            {"roots", roots}});
    } else if (branches->parsed() || identity->parsed() || av->parsed()) {
      detail::require_format(o.format, {"json"}, "pipeline commands");
      Mode mode = detail::parse_mode(o.mode);
      if (identity->parsed() && !o.in.fixture.empty() && load_builtin(o.in.fixture).kind == FixtureKind::Identity) {
        Fixture f = load_builtin(o.in.fixture);
        AsymptoticIdentity id = *f.identity;
        auto [ok, rhs] = verify_identity(load_builtin("pinchuk-p").poly(), id);
        id.verified = ok;
        emit({{"fixture", f.name}, {"identity", json::identity(id)}, {"computed_rhs", json::poly(rhs)},
              {"values", json::poly(asymptotic_values(id))}});
        return ok ? kExitOk : kExitComputation;
      }
      Poly p = detail::resolve(o.in);
      PipelineReport r = run_pipeline(p, mode);
      json::Json j = json::report(r);
      if (branches->parsed()) {
        emit({{"input", j["input"]}, {"mode", j["mode"]}, {"normalization", j["normalization"]}, {"failure", j["failure"]},
              {"branches", j["branches"]}, {"rejections", j["rejections"]}});
      } else if (identity->parsed()) {
        emit({{"input", j["input"]}, {"mode", j["mode"]}, {"normalization", j["normalization"]}, {"failure", j["failure"]},
              {"identities", j["identities"]}});
      } else {
        emit(j);
      }
      if (r.failure) {
        err << "error: " << to_string(*r.failure) << ": deg(p) != deg_x(p) + deg_y(p)\n";
        return kExitComputation;
      }
    } else if (fixtures->parsed()) {
      detail::require_format(o.format, {"json"}, "fixtures");
      if (!o.export_dir.empty()) {
        std::filesystem::create_directories(o.export_dir);
        json::Json written = json::Json::array();
        for (const auto& name : fixture_names()) {
          Fixture f = load_builtin(name);
          std::string path = (std::filesystem::path(o.export_dir) / (name + ".txt")).string();
          std::ofstream file(path, std::ios::binary);
          for (const auto& p : f.polys) file << p.to_string() << "\n";
          if (!file) throw UsageError("cannot write '" + path + "'");
          written.push_back(path);
        }
        emit({{"exported", written}});
      } else if (!o.in.fixture.empty()) {
        emit(detail::fixture_json(load_builtin(o.in.fixture)));
      } else {
        json::Json list = json::Json::array();
        for (const auto& name : fixture_names()) {
          Fixture f = load_builtin(name);
          list.push_back({{"name", f.name}, {"description", f.description}});
        }
        emit({{"fixtures", list}});
      }
    } else if (jacobian->parsed()) {
      detail::require_format(o.format, {"json"}, "jacobian");
      PairMap m = detail::pair(o);
      Poly det = jacobian_det(m);
      GridSpec box = grid_or("-10,10,-10,10,1,1");
      std::mt19937_64 rng(o.seed);
      std::uniform_real_distribution<double> ux(to_double(box.x0), to_double(box.x1));
      std::uniform_real_distribution<double> uy(to_double(box.y0), to_double(box.y1));
      CompiledPoly f(det, {kX, kY});
      std::uint64_t pos = 0, neg = 0, zero = 0;
      for (unsigned long i = 0; i < o.samples; ++i) {
        double x = ux(rng), y = uy(rng);
        double v = f({x, y});
        (v > 0 ? pos : v < 0 ? neg : zero)++;
      }
      emit({{"p", json::poly(m.p)},
            {"q", json::poly(m.q)},
            {"det", json::poly(det)},
            {"sign_report", {{"samples", o.samples}, {"seed", o.seed}, {"positive", pos}, {"negative", neg}, {"zero", zero}}}});
    } else if (sample->parsed()) {
      detail::require_format(o.format, {"json", "csv"}, "sample");
      PairMap m = detail::pair(o);
      GridSpec g = grid_or("-1,1,-1,1,11,11");
      auto rows = sample_image(m, g);
      if (o.format == "csv") {
        out << detail::csv(rows);
      } else {
        json::Json list = json::Json::array();
        for (const auto& r : rows)
          list.push_back({{"x", r.x}, {"y", r.y}, {"u", r.u}, {"v", r.v}, {"det_sign", r.det_sign}});
        emit({{"grid", detail::grid_json(g)}, {"rows", list}});
      }
    } else if (preimage->parsed()) {
      detail::require_format(o.format, {"json"}, "preimage");
      PairMap m = detail::pair(o);
      GridSpec g = grid_or("-2,2,-2,2,9,9");
      if (!(o.tol > 0)) throw UsageError("--tol must be positive");
      PreimageReport r = preimage_count(m, detail::parse_target(o.target), g, o.tol);
      json::Json pts = json::Json::array();
      for (const auto& p : r.points) pts.push_back({p[0], p[1]});
      json::Json failures = json::Json::array();
      for (const auto& s : r.seeds)
        if (s.status != SeedStatus::Converged)
          failures.push_back({{"seed", {s.seed_x, s.seed_y}}, {"status", to_string(s.status)}, {"iterations", s.iterations}});
      emit({{"target", {r.target[0], r.target[1]}}, {"tol", r.tol}, {"count", r.count()}, {"points", pts},
            {"seed_failures", failures}});
    } else if (complement->parsed() || plot->parsed()) {
      PairMap m = detail::pair(o);
      GridSpec domain = grid_or("-2,2,-2,2,41,41");
      GridSpec window = detail::parse_grid(o.window.empty() ? "-1,1,-1,1,20,20" : o.window, "--window");
      if (o.rounds > kMaxComplementRounds) throw UsageError("--rounds must be at most 6");
      svg::Box box{to_double(window.x0), to_double(window.x1), to_double(window.y0), to_double(window.y1)};
      if (plot->parsed()) {
        if (o.format == "json") o.format = "svg";
        detail::require_format(o.format, {"svg"}, "plot");
        if (o.what == "image") {
          out << svg::scatter(sample_image(m, domain), box, o.stroke);
        } else if (o.what == "complement") {
          out << svg::heatmap(complement_scan(m, domain, window, o.rounds), box, o.stroke);
        } else {
          throw UsageError("--what must be image or complement");
        }
      } else {
        detail::require_format(o.format, {"json", "svg"}, "complement");
        ComplementReport r = complement_scan(m, domain, window, o.rounds);
        if (o.format == "svg") {
          out << svg::heatmap(r, box, o.stroke);
        } else {
          json::Json cells = json::Json::array();
          for (const auto& c : r.uncovered)
            cells.push_back({{"i", c.i}, {"j", c.j}, {"u", c.u}, {"v", c.v}, {"depth", c.depth}});
          emit({{"domain", detail::grid_json(domain)},
                {"window", detail::grid_json(window)},
                {"rounds", r.rounds},
                {"covered", r.covered},
                {"uncovered_per_round", r.uncovered_per_round},
                {"uncovered", cells}});
        }
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::UnknownFixture ? kExitUsage : kExitComputation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitOk;
}

}  // namespace peretz::cli
