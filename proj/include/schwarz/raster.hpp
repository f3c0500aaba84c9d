#pragma once

// Escape-time rendering of the deltoid plane, C&C dynamical planes and the
// C&C parameter plane, plus the PPM writer. Rows are split into bands that
// worker threads fill independently; the result does not depend on the
// thread count.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "schwarz/cnc.hpp"
#include "schwarz/core.hpp"
#include "schwarz/deltoid.hpp"

namespace schwarz::raster {

inline constexpr int kMinPixels = 16;

struct GridSpec {
  cplx center{0.0, 0.0};
  double width = 4.0;
  int pixels_x = 256;
  int pixels_y = 256;

  void validate() const {
    if (!(width > 0.0) || !std::isfinite(width)) throw Error(ErrorCode::InvalidArgument, "grid width must be positive");
    if (pixels_x < kMinPixels || pixels_y < kMinPixels)
      throw Error(ErrorCode::InvalidArgument, "grid needs at least 16 pixels per side");
  }
  double pixel_size() const { return width / pixels_x; }
  double height() const { return pixel_size() * pixels_y; }

  /// Center of pixel (i, j); row 0 is the top.
  cplx pixel_center(int i, int j) const {
    const double h = pixel_size();
    return {center.real() - width / 2.0 + (i + 0.5) * h, center.imag() + height() / 2.0 - (j + 0.5) * h};
  }
};

enum class Kind { DeltoidPlane, CncDynamical, CncParameter };

struct RenderJob {
  Kind kind = Kind::DeltoidPlane;
  cplx a{0.0, 0.0};  // CncDynamical only
  GridSpec grid;
  int max_iter = 256;
  std::string palette = "classic";
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Per-pixel outcome. Escaped covers deltoid tiling, C&C escape and
/// parameters outside the locus (rank = tile rank or depth); Bounded covers
/// C&C non-escaping orbits and parameters in the locus.
enum class PixelClass : std::uint8_t { Escaped, Bounded, Undetermined, Basin, Slit };

inline constexpr std::string_view to_string(PixelClass c) {
  switch (c) {
    case PixelClass::Escaped: return "escaped";
    case PixelClass::Bounded: return "bounded";
    case PixelClass::Undetermined: return "undetermined";
    case PixelClass::Basin: return "basin";
    case PixelClass::Slit: return "slit";
  }
  return "unknown";
}

struct Pixel {
  PixelClass cls = PixelClass::Undetermined;
  int rank = 0;
};

struct RenderStats {
  std::map<std::string, long> counts;
  long total = 0;
  double undetermined_fraction = 0.0;
};

struct Image {
  int width = 0, height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

struct RenderResult {
  std::vector<Pixel> pixels;  // row-major
  RenderStats stats;
  Image image;

  const Pixel& at(int i, int j) const { return pixels[static_cast<std::size_t>(j) * image.width + i]; }
};

// ---------------------------------------------------------------------------
// Pixel evaluation.

inline Pixel classify_deltoid_pixel(cplx z, int max_iter) {
  const deltoid::Verdict v = deltoid::classify_deltoid_orbit(z, max_iter);
  switch (v.tag) {
    case deltoid::VerdictTag::Tiling: return {PixelClass::Escaped, v.iterations};
    case deltoid::VerdictTag::BasinInfinity: return {PixelClass::Basin, v.iterations};
    case deltoid::VerdictTag::Undetermined: break;
  }
  return {PixelClass::Undetermined, 0};
}

inline Pixel classify_dynamical_pixel(const cnc::CncMap& m, cplx z, int max_iter) {
  const cnc::OrbitVerdict v = cnc::classify_orbit(m, Point(z), max_iter);
  switch (v.tag) {
    case cnc::VerdictTag::Escaped: return {PixelClass::Escaped, v.rank};
    case cnc::VerdictTag::NonEscaping: return {PixelClass::Bounded, v.cycle ? v.cycle->period : 0};
    case cnc::VerdictTag::Undetermined: break;
  }
  return {PixelClass::Undetermined, 0};
}

inline Pixel classify_parameter_pixel(cplx a, int max_iter) {
  if (cnc::on_slit(a)) return {PixelClass::Slit, 0};
  try {
    const cnc::LocusVerdict v = cnc::in_connectedness_locus(cnc::build_cnc(a), max_iter);
    switch (v.tag) {
      case cnc::Connectedness::Out: return {PixelClass::Escaped, v.depth};
      case cnc::Connectedness::In: return {PixelClass::Bounded, 0};
      case cnc::Connectedness::Undetermined: break;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SlitError) return {PixelClass::Slit, 0};
    throw;
  }
  return {PixelClass::Undetermined, 0};
}

// ---------------------------------------------------------------------------
// Palettes.

using Rgb = std::array<std::uint8_t, 3>;

inline const std::vector<std::string>& palette_names() {
  static const std::vector<std::string> names{"classic", "gray"};
  return names;
}

inline Rgb color_of(const Pixel& p, std::string_view palette) {
  const bool gray = palette == "gray";
  switch (p.cls) {
    case PixelClass::Bounded: return {0, 0, 0};
    case PixelClass::Undetermined: return gray ? Rgb{96, 96, 96} : Rgb{128, 128, 128};
    case PixelClass::Slit: return gray ? Rgb{255, 255, 255} : Rgb{255, 0, 255};
    case PixelClass::Basin: {
      if (gray) return {40, 40, 40};
      const auto shade = static_cast<std::uint8_t>(std::max(40, 160 - 12 * std::min(p.rank, 10)));
      return {0, 0, shade};
    }
    case PixelClass::Escaped: {
      if (gray) {
        const auto v = static_cast<std::uint8_t>(255 - (p.rank * 23) % 180);
        return {v, v, v};
      }
      static const std::array<Rgb, 8> cycle{{{255, 236, 179},
                                             {255, 183, 77},
                                             {239, 108, 0},
                                             {191, 54, 12},
                                             {129, 199, 132},
                                             {56, 142, 60},
                                             {100, 181, 246},
                                             {25, 118, 210}}};
      return cycle[static_cast<std::size_t>(p.rank) % cycle.size()];
    }
  }
  return {0, 0, 0};
}

// ---------------------------------------------------------------------------
// Rendering.

inline RenderResult render(const RenderJob& job) {
  job.grid.validate();
  if (job.max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (std::find(palette_names().begin(), palette_names().end(), job.palette) == palette_names().end())
    throw Error(ErrorCode::InvalidArgument, "unknown palette '" + job.palette + "'");

  // Build the map up front so a slit parameter fails the whole job.
  std::optional<cnc::CncMap> map;
  if (job.kind == Kind::CncDynamical) map = cnc::build_cnc(job.a);

  const int w = job.grid.pixels_x, h = job.grid.pixels_y;
  RenderResult out;
  out.pixels.resize(static_cast<std::size_t>(w) * h);
  out.image = {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3)};

  auto fill_row = [&](int j) {
    for (int i = 0; i < w; ++i) {
      const cplx z = job.grid.pixel_center(i, j);
      Pixel p;
      switch (job.kind) {
        case Kind::DeltoidPlane: p = classify_deltoid_pixel(z, job.max_iter); break;
        case Kind::CncDynamical: p = classify_dynamical_pixel(*map, z, job.max_iter); break;
        case Kind::CncParameter: p = classify_parameter_pixel(z, job.max_iter); break;
      }
      out.pixels[static_cast<std::size_t>(j) * w + i] = p;
    }
  };

  unsigned n_threads = job.threads ? job.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(h));
  if (n_threads <= 1) {
    for (int j = 0; j < h; ++j) fill_row(j);
  } else {
    // Contiguous bands; every thread writes only its own rows.
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
      const int j0 = static_cast<int>(static_cast<long>(h) * t / n_threads);
      const int j1 = static_cast<int>(static_cast<long>(h) * (t + 1) / n_threads);
      workers.emplace_back([&, t, j0, j1] {
        try {
          for (int j = j0; j < j1; ++j) fill_row(j);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : workers) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (std::size_t k = 0; k < out.pixels.size(); ++k) {
    const Rgb c = color_of(out.pixels[k], job.palette);
    std::copy(c.begin(), c.end(), out.image.rgb.begin() + static_cast<std::ptrdiff_t>(3 * k));
    ++out.stats.counts[std::string(to_string(out.pixels[k].cls))];
  }
  out.stats.total = static_cast<long>(out.pixels.size());
  const auto und = out.stats.counts.find("undetermined");
  out.stats.undetermined_fraction =
      und == out.stats.counts.end() ? 0.0 : static_cast<double>(und->second) / out.stats.total;
  return out;
}

/// Binary 8-bit P6.
inline void write_ppm(std::ostream& os, const Image& img) {
  os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

}  // namespace schwarz::raster
