#pragma once

// Command-line front end. Kept in a header so the tests can drive it
// in-process with their own streams.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "schwarz/cardioid.hpp"
#include "schwarz/cnc.hpp"
#include "schwarz/config.hpp"
#include "schwarz/core.hpp"
#include "schwarz/png.hpp"
#include "schwarz/raster.hpp"
#include "schwarz/rays.hpp"
#include "schwarz/symbolic.hpp"

namespace schwarz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

using json = nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
      throw UsageError("malformed complex number '" + text + "' (expected RE,IM)");
    return v;
  };
  if (comma == std::string::npos) return {num(text), 0.0};
  return {num(text.substr(0, comma)), num(text.substr(comma + 1))};
}

inline Point parse_point(const std::string& text) {
  if (text == "inf" || text == "infinity") return Point::infinity();
  return Point(parse_complex(text));
}

inline std::pair<int, int> parse_px(const std::string& text) {
  const auto x = text.find('x');
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("malformed pixel size '" + text + "' (expected N or WxH)");
    return v;
  };
  if (x == std::string::npos) return {num(text), num(text)};
  return {num(text.substr(0, x)), num(text.substr(x + 1))};
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Point& p) {
  if (p.is_infinite()) return "inf";
  return to_json(p.value());
}

inline json verdict_json(const cnc::OrbitVerdict& v) {
  json j{{"tag", std::string(cnc::to_string(v.tag))}, {"iterations", v.iterations}};
  if (v.tag == cnc::VerdictTag::Escaped) {
    j["rank"] = v.rank;
    j["word"] = v.word.str();
  }
  if (v.cycle) {
    j["period"] = v.cycle->period;
    j["cycle"] = {{"period", v.cycle->period},
                  {"representative", to_json(v.cycle->representative)},
                  {"multiplier", v.cycle->multiplier_magnitude},
                  {"kind", std::string(cnc::to_string(v.cycle->kind))}};
  }
  return j;
}

struct Shared {
  std::optional<std::string> center, px, out, config_path;
  std::optional<double> width;
  std::optional<int> max_iter;
  std::optional<std::string> palette;
  std::string format;
};

inline void add_shared(CLI::App* sub, Shared& s, const std::string& default_format) {
  s.format = default_format;
  sub->add_option("--center", s.center, "view center RE,IM");
  sub->add_option("--width", s.width, "view width");
  sub->add_option("--px", s.px, "pixels, N or WxH");
  sub->add_option("--max-iter", s.max_iter, "iteration budget");
  sub->add_option("--out", s.out, "output path (stdout if omitted)");
  sub->add_option("--format", s.format, "ppm, png, json or csv")
      ->check(CLI::IsMember({"ppm", "png", "json", "csv"}));
  sub->add_option("--palette", s.palette, "palette: classic or gray");
  sub->add_option("--config", s.config_path, "flat key=value render recipe");
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Schwarz reflection dynamics: renders, orbits, rays and symbolic tables"};
    app.require_subcommand(1);

    std::string a_text = "0,0", z_text, angle_text, rational_text, point_text;
    int depth = 0, table = 0;
    double land_tol = rays::kDefaultLandTol;

    auto* deltoid_cmd = app.add_subcommand("deltoid", "render the deltoid reflection plane");
    add_shared(deltoid_cmd, shared_["deltoid"], "ppm");

    auto* dyn_cmd = app.add_subcommand("dyn", "render the dynamical plane of F_a");
    add_shared(dyn_cmd, shared_["dyn"], "ppm");
    dyn_cmd->add_option("--a", a_text, "parameter RE,IM")->required();

    auto* param_cmd = app.add_subcommand("param", "render the parameter plane");
    add_shared(param_cmd, shared_["param"], "ppm");

    auto* orbit_cmd = app.add_subcommand("orbit", "iterate F_a and classify the orbit");
    add_shared(orbit_cmd, shared_["orbit"], "json");
    orbit_cmd->add_option("--a", a_text, "parameter RE,IM")->required();
    orbit_cmd->add_option("--z", z_text, "start point RE,IM or inf")->required();

    auto* ray_cmd = app.add_subcommand("ray", "trace a dynamical ray of F_a");
    add_shared(ray_cmd, shared_["ray"], "json");
    ray_cmd->add_option("--a", a_text, "parameter RE,IM")->required();
    ray_cmd->add_option("--angle", angle_text, "rational angle P/Q")->required();
    ray_cmd->add_option("--depth", depth, "period blocks to record");
    ray_cmd->add_option("--land-tol", land_tol, "landing tolerance");

    auto* qmark_cmd = app.add_subcommand("qmark", "Minkowski question-mark function");
    add_shared(qmark_cmd, shared_["qmark"], "csv");
    auto* q_rational = qmark_cmd->add_option("--rational", rational_text, "rational P/Q in [0,1]");
    auto* q_table = qmark_cmd->add_option("--table", table, "all reduced fractions with denominator <= N");
    q_rational->excludes(q_table);

    auto* conj_cmd = app.add_subcommand("conj-e", "circle conjugacy E and its inverse");
    add_shared(conj_cmd, shared_["conj-e"], "csv");
    auto* e_angle = conj_cmd->add_option("--angle", angle_text, "angle P/Q, evaluates E^-1");
    auto* e_point = conj_cmd->add_option("--point", point_text, "unit-circle point RE,IM, evaluates E");
    auto* e_table = conj_cmd->add_option("--table", table, "E on N equally spaced circle points");
    e_angle->excludes(e_point)->excludes(e_table);
    e_point->excludes(e_table);
    conj_cmd->add_option("--depth", depth, "symbols of the coding (default 24)");

    auto* circum_cmd = app.add_subcommand("circum", "circumcircle r_a and tangency point alpha_a");
    add_shared(circum_cmd, shared_["circum"], "json");
    circum_cmd->add_option("--a", a_text, "parameter RE,IM")->required();

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out_ << app.help();
        return kExitOk;
      }
      err_ << "error[USAGE]: " << e.what() << "\n";
      return kExitUsage;
    }

    try {
      if (deltoid_cmd->parsed()) return render_cmd(raster::Kind::DeltoidPlane, shared_["deltoid"], {});
      if (dyn_cmd->parsed()) return render_cmd(raster::Kind::CncDynamical, shared_["dyn"], parse_complex(a_text));
      if (param_cmd->parsed()) return render_cmd(raster::Kind::CncParameter, shared_["param"], {});
      if (orbit_cmd->parsed()) return orbit(shared_["orbit"], parse_complex(a_text), parse_point(z_text));
      if (ray_cmd->parsed())
        return ray(shared_["ray"], parse_complex(a_text), angle_text, depth ? depth : rays::kDefaultDepth, land_tol);
      if (qmark_cmd->parsed()) {
        if (rational_text.empty() && table == 0) throw UsageError("qmark needs --rational or --table");
        return qmark(shared_["qmark"], rational_text, table);
      }
      if (conj_cmd->parsed()) {
        if (angle_text.empty() && point_text.empty() && table == 0)
          throw UsageError("conj-e needs --angle, --point or --table");
        return conj_e(shared_["conj-e"], angle_text, point_text, table, depth ? depth : 24);
      }
      if (circum_cmd->parsed()) return circum(shared_["circum"], parse_complex(a_text));
    } catch (const UsageError& e) {
      err_ << "error[USAGE]: " << e.what() << "\n";
      return kExitUsage;
    } catch (const Error& e) {
      err_ << "error[" << to_string(e.code()) << "]: " << e.what() << "\n";
      return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitDomain;
    }
    return kExitUsage;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  std::map<std::string, Shared> shared_;

  // Writes text output to --out or stdout.
  void emit(const Shared& s, const std::string& text) {
    if (s.out) {
      std::ofstream f(*s.out, std::ios::binary);
      if (!f) throw UsageError("cannot open '" + *s.out + "' for writing");
      f << text;
    } else {
      out_ << text;
    }
  }

  int render_cmd(raster::Kind kind, const Shared& s, cplx a) {
    config::RenderConfig cfg;
    if (s.config_path) {
      std::ifstream f(*s.config_path);
      if (!f) throw UsageError("cannot read config '" + *s.config_path + "'");
      cfg = config::parse(f);
    }
    raster::RenderJob job;
    job.kind = kind;
    job.a = a;
    // Defaults per plane, then config, then flags.
    switch (kind) {
      case raster::Kind::DeltoidPlane: job.grid.center = {0.0, 0.0}; job.grid.width = 6.0; break;
      case raster::Kind::CncParameter: job.grid.center = {0.1, 0.0}; job.grid.width = 1.2; break;
      case raster::Kind::CncDynamical: {
        const cnc::CncMap m = cnc::build_cnc(a);
        job.grid.center = m.a;
        job.grid.width = 2.5 * m.r;
        break;
      }
    }
    if (cfg.center_re) job.grid.center.real(*cfg.center_re);
    if (cfg.center_im) job.grid.center.imag(*cfg.center_im);
    if (cfg.width) job.grid.width = *cfg.width;
    if (cfg.px) std::tie(job.grid.pixels_x, job.grid.pixels_y) = parse_px(*cfg.px);
    if (cfg.max_iter) job.max_iter = *cfg.max_iter;
    if (cfg.palette) job.palette = *cfg.palette;
    if (s.center) job.grid.center = parse_complex(*s.center);
    if (s.width) job.grid.width = *s.width;
    if (s.px) std::tie(job.grid.pixels_x, job.grid.pixels_y) = parse_px(*s.px);
    if (s.max_iter) job.max_iter = *s.max_iter;
    if (s.palette) job.palette = *s.palette;

    const raster::RenderResult r = raster::render(job);
    if (s.format == "png") {
      if (!s.out) throw UsageError("--format png needs --out");
      raster::write_png(*s.out, r.image);
    } else if (s.format == "ppm") {
      std::ostringstream os;
      raster::write_ppm(os, r.image);
      emit(s, os.str());
    } else if (s.format == "json") {
      json j{{"width", r.image.width}, {"height", r.image.height}, {"counts", r.stats.counts},
             {"undetermined_fraction", r.stats.undetermined_fraction}};
      emit(s, j.dump(2) + "\n");
      return kExitOk;
    } else {
      std::ostringstream os;
      os << std::setprecision(17) << "i,j,re,im,class,rank\n";
      for (int jj = 0; jj < r.image.height; ++jj)
        for (int ii = 0; ii < r.image.width; ++ii) {
          const cplx z = job.grid.pixel_center(ii, jj);
          const raster::Pixel& p = r.at(ii, jj);
          os << ii << ',' << jj << ',' << z.real() << ',' << z.imag() << ',' << raster::to_string(p.cls) << ','
             << p.rank << '\n';
        }
      emit(s, os.str());
      return kExitOk;
    }
    // Image formats: a one-line summary unless the image went to stdout.
    if (s.out) {
      out_ << "wrote " << *s.out << " (" << r.image.width << "x" << r.image.height << ")";
      for (const auto& [k, v] : r.stats.counts) out_ << ' ' << k << '=' << v;
      out_ << "\n";
    }
    return kExitOk;
  }

  int orbit(const Shared& s, cplx a, const Point& z0) {
    const cnc::CncMap m = cnc::build_cnc(a);
    std::vector<Point> pts;
    const cnc::OrbitVerdict v = cnc::classify_orbit(m, z0, s.max_iter.value_or(256), &pts);
    if (s.format == "csv") {
      std::ostringstream os;
      os << std::setprecision(17) << "k,re,im\n";
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (pts[k].is_infinite())
          os << k << ",inf,inf\n";
        else
          os << k << ',' << pts[k].value().real() << ',' << pts[k].value().imag() << '\n';
      }
      emit(s, os.str());
      return kExitOk;
    }
    if (s.format != "json") throw UsageError("orbit supports --format json or csv");
    json orbit_json = json::array();
    for (const Point& p : pts) orbit_json.push_back(to_json(p));
    json j{{"a", to_json(a)}, {"z0", to_json(z0)}, {"orbit", orbit_json}, {"verdict", verdict_json(v)}};
    emit(s, j.dump() + "\n");
    return kExitOk;
  }

  int ray(const Shared& s, cplx a, const std::string& angle_text, int depth, double land_tol) {
    const cnc::CncMap m = cnc::build_cnc(a);
    const auto theta = symbolic::RationalAngle::parse(angle_text);
    const rays::RayApprox r = rays::trace_ray(m, theta, depth, land_tol);
    if (s.format == "csv") {
      std::ostringstream os;
      os << std::setprecision(17) << "block,re,im\n";
      for (std::size_t k = 0; k < r.points.size(); ++k)
        os << k << ',' << r.points[k].real() << ',' << r.points[k].imag() << '\n';
      emit(s, os.str());
      return kExitOk;
    }
    if (s.format != "json") throw UsageError("ray supports --format json or csv");
    json pts = json::array();
    for (const cplx& p : r.points) pts.push_back(to_json(p));
    json j{{"a", to_json(a)},
           {"angle", theta.str()},
           {"word", {{"preperiod", r.word.preperiod.str()}, {"period", r.word.period.str()}}},
           {"points", pts},
           {"landing", r.landing ? to_json(*r.landing) : json(nullptr)},
           {"converged", r.converged},
           {"landing_error", r.landing_error},
           {"blocks", r.blocks_used}};
    emit(s, j.dump() + "\n");
    return kExitOk;
  }

  int qmark(const Shared& s, const std::string& rational_text, int table) {
    if (!rational_text.empty()) {
      const auto slash = rational_text.find('/');
      if (slash == std::string::npos) throw UsageError("--rational expects P/Q");
      std::int64_t p = 0, q = 0;
      try {
        p = std::stoll(rational_text.substr(0, slash));
        q = std::stoll(rational_text.substr(slash + 1));
      } catch (const std::exception&) {
        throw UsageError("--rational expects P/Q");
      }
      emit(s, symbolic::question_mark(p, q).str() + "\n");
      return kExitOk;
    }
    if (table < 1) throw UsageError("--table must be >= 1");
    std::ostringstream os;
    os << "input,output,error_bound\n";
    for (std::int64_t q = 1; q <= table; ++q)
      for (std::int64_t p = 0; p <= q; ++p)
        if (std::gcd(p, q) == 1) os << p << '/' << q << ',' << symbolic::question_mark(p, q).str() << ",0\n";
    emit(s, os.str());
    return kExitOk;
  }

  int conj_e(const Shared& s, const std::string& angle_text, const std::string& point_text, int table, int depth) {
    std::ostringstream os;
    os << std::setprecision(17);
    const bool as_json = s.format == "json";
    json rows = json::array();
    auto row = [&](const std::string& input, const std::string& output, double bound) {
      if (as_json)
        rows.push_back({{"input", input}, {"output", output}, {"error_bound", bound}});
      else
        os << input << ',' << output << ',' << bound << '\n';
    };
    auto fmt = [](double x) {
      std::ostringstream o;
      o << std::setprecision(17) << x;
      return o.str();
    };
    if (!as_json) os << "input,output,error_bound\n";
    if (!angle_text.empty()) {
      const auto theta = symbolic::RationalAngle::parse(angle_text);
      const auto v = symbolic::conjugacy_E_inverse(theta, depth);
      row(theta.str(), fmt(v.point.real()) + (v.point.imag() < 0 ? "" : "+") + fmt(v.point.imag()) + "i",
          v.error_bound);
    } else if (!point_text.empty()) {
      const cplx zeta = parse_complex(point_text);
      const auto v = symbolic::conjugacy_E(zeta, depth);
      row(point_text, v.exact ? v.exact->str() : fmt(v.angle), v.error_bound);
    } else {
      if (table < 1) throw UsageError("--table must be >= 1");
      for (int k = 0; k < table; ++k) {
        const double t = static_cast<double>(k) / table;
        const auto v = symbolic::conjugacy_E(std::polar(1.0, 2.0 * std::numbers::pi * t), depth);
        row(fmt(t), v.exact ? v.exact->str() : fmt(v.angle), v.error_bound);
      }
    }
    emit(s, as_json ? rows.dump(2) + "\n" : os.str());
    return kExitOk;
  }

  int circum(const Shared& s, cplx a) {
    const cnc::CncMap m = cnc::build_cnc(a);
    if (s.format == "json") {
      json j{{"a", to_json(m.a)}, {"r", m.r}, {"alpha", to_json(m.alpha)}, {"tangency_angle", m.tangency_angle}};
      emit(s, j.dump() + "\n");
    } else {
      std::ostringstream os;
      os << std::setprecision(17) << "a_re,a_im,r,alpha_re,alpha_im,tangency_angle\n"
         << m.a.real() << ',' << m.a.imag() << ',' << m.r << ',' << m.alpha.real() << ',' << m.alpha.imag() << ','
         << m.tangency_angle << '\n';
      emit(s, os.str());
    }
    return kExitOk;
  }
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(argc, argv);
}

}  // namespace schwarz::cli
