#include "wavefuse/app/commands.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "wavefuse/app/padding.hpp"
#include "wavefuse/cluster.hpp"
#include "wavefuse/fusion.hpp"
#include "wavefuse/imageio.hpp"
#include "wavefuse/log.hpp"
#include "wavefuse/tiling.hpp"

namespace wavefuse::app {

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return kUsage;
    case ErrorCode::Io:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::Truncated:
    case ErrorCode::MalformedHeader:
      return kIoError;
    default:
      return kComputeError;
  }
}

namespace {

int report_error(const Error& e, std::ostream& err) {
  err << "wavefuse: " << e.what() << '\n';
  return exit_code_for(e.code());
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::bad_alloc&) {
    err << "wavefuse: out of memory\n";
    return kComputeError;
  } catch (const std::exception& e) {
    err << "wavefuse: " << e.what() << '\n';
    return kComputeError;
  }
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

MultibandImage load_bands(const std::vector<std::filesystem::path>& paths) {
  if (paths.empty()) fail(ErrorCode::InvalidArgument, "at least one MS file is required");
  std::vector<Plane> bands;
  if (paths.size() == 1) {
    const Raster8 r = imageio::load_pnm(paths.front());
    for (int c = 0; c < r.channels(); ++c) bands.push_back(imageio::to_plane(r, c));
    return MultibandImage(std::move(bands));
  }
  for (const auto& p : paths) {
    const Raster8 r = imageio::load_pnm(p);
    if (r.channels() != 1) {
      fail(ErrorCode::InvalidArgument, "multi-file MS input must be gray images: " + p.string());
    }
    Plane band = imageio::to_plane(r, 0);
    if (!bands.empty() && !band.same_shape(bands.front())) {
      fail(ErrorCode::DimensionMismatch, "MS band sizes differ: " + p.string());
    }
    bands.push_back(std::move(band));
  }
  return MultibandImage(std::move(bands));
}

std::vector<std::filesystem::path> write_bands(const std::filesystem::path& out,
                                               const MultibandImage& image) {
  if (image.band_count() == 3) {
    imageio::save_pnm(out, imageio::quantize_rgb(image.band(0), image.band(1), image.band(2)));
    return {out};
  }
  if (image.band_count() == 1) {
    imageio::save_pnm(out, imageio::quantize(image.band(0)));
    return {out};
  }
  std::vector<std::filesystem::path> written;
  for (std::size_t k = 0; k < image.band_count(); ++k) {
    std::filesystem::path p = out.parent_path() / (out.stem().string() + "_b" + std::to_string(k) +
                                                   out.extension().string());
    imageio::save_pnm(p, imageio::quantize(image.band(k)));
    written.push_back(std::move(p));
  }
  return written;
}

MultibandImage fuse_job(const Plane& pan, const MultibandImage& ms, const JobSpec& spec) {
  const FusionMethod method = parse_method(spec.method, spec.weight);
  if (std::holds_alternative<Ihs>(method) && ms.band_count() != 3) {
    fail(ErrorCode::BandCountMismatch,
         "IHS requires 3 bands, got " + std::to_string(ms.band_count()));
  }
  if (ms.width() > pan.width() || ms.height() > pan.height()) {
    fail(ErrorCode::DimensionMismatch, "MS is larger than PAN");
  }
  const PaddedJob job = pad_for_grid(pan, ms, spec.grid_w, spec.grid_h);
  if (job.padded) {
    log::info("padded " + std::to_string(pan.width()) + "x" + std::to_string(pan.height()) +
              " to " + std::to_string(job.pan.width()) + "x" + std::to_string(job.pan.height()));
  }

  MultibandImage fused;
  if (spec.nodes.empty()) {
    if (spec.workers < 1) fail(ErrorCode::InvalidArgument, "--workers must be at least 1");
    fused = tiling::fuse_tiled(job.pan, job.ms, method, job.grid, spec.workers);
  } else {
    cluster::MasterOptions options;
    options.exact_transfer = spec.exact_transfer;
    options.cancel = spec.cancel;
    fused = cluster::run_master(job.pan, job.ms, method, job.grid, spec.nodes, options);
  }
  return crop_bands(fused, job.original_w, job.original_h);
}

int cmd_fuse(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (spec.out.empty()) fail(ErrorCode::InvalidArgument, "--out is required");
    const Plane pan = imageio::to_plane(imageio::load_pnm(spec.pan), 0);
    const MultibandImage ms = load_bands(spec.ms);
    const MultibandImage fused = fuse_job(pan, ms, spec);
    for (const auto& p : write_bands(spec.out, fused)) out << p.string() << '\n';
    return int{kOk};
  });
}

std::string format_report(const metrics::QualityReport& report) {
  std::ostringstream s;
  s << "ergas=" << fixed6(report.ergas) << '\n';
  for (std::size_t k = 0; k < report.q_per_band.size(); ++k) {
    s << "q_band_" << k << '=' << fixed6(report.q_per_band[k]) << '\n';
  }
  s << "d_lambda=" << fixed6(report.d_lambda) << '\n';
  s << "d_s=" << fixed6(report.d_s) << '\n';
  s << "qnr=" << fixed6(report.qnr) << '\n';
  return s.str();
}

std::string report_json(const metrics::QualityReport& report, int ratio) {
  nlohmann::json j;
  j["ratio"] = ratio;
  j["ergas"] = report.ergas;
  j["q_per_band"] = report.q_per_band;
  j["d_lambda"] = report.d_lambda;
  j["d_s"] = report.d_s;
  j["qnr"] = report.qnr;
  return j.dump(2) + "\n";
}

int cmd_metrics(const MetricsSpec& spec, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MultibandImage fused = load_bands(spec.fused);
    const MultibandImage ms = load_bands(spec.ms);
    const Plane pan = imageio::to_plane(imageio::load_pnm(spec.pan), 0);
    if (!(pan.width() == fused.width() && pan.height() == fused.height())) {
      fail(ErrorCode::DimensionMismatch, "fused and PAN sizes differ");
    }
    metrics::QualityReport report = metrics::qnr(fused, ms, pan);
    int ratio = metrics::resolution_ratio(fused.width(), fused.height(), ms.width(), ms.height());
    if (spec.ratio != 0 && spec.ratio != ratio) {
      fail(ErrorCode::DimensionMismatch, "--ratio " + std::to_string(spec.ratio) +
                                             " disagrees with the image sizes (ratio " +
                                             std::to_string(ratio) + ")");
    }
    out << format_report(report);
    if (!spec.out.empty()) {
      std::ofstream f(spec.out);
      if (!f) fail(ErrorCode::Io, "cannot write " + spec.out.string());
      f << report_json(report, ratio);
      if (!f) fail(ErrorCode::Io, "write failed: " + spec.out.string());
    }
    return int{kOk};
  });
}

int cmd_worker(const std::string& listen, const std::atomic<bool>* interrupt, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    cluster::WorkerOptions options;
    options.interrupt = interrupt;
    cluster::Worker worker(listen, options);
    out << "listening " << worker.endpoint() << std::endl;
    worker.serve();
    if (interrupt != nullptr && interrupt->load()) {
      err << "wavefuse: worker interrupted\n";
      return int{kComputeError};
    }
    return int{kOk};
  });
}

}  // namespace wavefuse::app
