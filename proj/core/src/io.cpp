#include "uwd/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "uwd/error.hpp"

namespace fs = std::filesystem;

namespace uwd {
namespace {

std::string lower_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

bool is_tiff(const fs::path& p) {
  const auto ext = lower_extension(p);
  return ext == ".tif" || ext == ".tiff";
}

cv::Mat load(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
  cv::Mat m;
  try {
    m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw IoError("cannot decode " + path.string() + ": " + e.what());
  }
  if (m.empty()) throw IoError("cannot decode " + path.string());
  return m;
}

void store(const fs::path& path, const cv::Mat& m) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  // OpenCV defaults to lossy LogLuv compression for float colour TIFFs.
  std::vector<int> params;
  if (is_tiff(path)) params = {cv::IMWRITE_TIFF_COMPRESSION, 1};
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), m, params);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write " + path.string());
}

double scale_for(int depth) {
  switch (depth) {
    case CV_8U: return 1.0 / 255.0;
    case CV_16U: return 1.0 / 65535.0;
    case CV_32F:
    case CV_64F: return 1.0;
    default: throw IoError("unsupported pixel depth");
  }
}

}  // namespace

Image read_image(const fs::path& path) {
  cv::Mat m = load(path);
  const double scale = scale_for(m.depth());
  if (m.channels() == 4) {
    cv::cvtColor(m, m, cv::COLOR_BGRA2BGR);
  } else if (m.channels() == 2) {
    throw IoError("two-channel images are not supported: " + path.string());
  }
  cv::Mat f;
  m.convertTo(f, CV_64F, scale);
  const int ch = f.channels();
  Image img(f.rows, f.cols, ch);
  for (int y = 0; y < f.rows; ++y) {
    const double* row = f.ptr<double>(y);
    for (int x = 0; x < f.cols; ++x) {
      for (int c = 0; c < ch; ++c) {
        // OpenCV stores BGR.
        const double v = row[x * ch + (ch == 3 ? 2 - c : c)];
        if (!std::isfinite(v)) throw IoError("non-finite pixel in " + path.string());
        img.at(y, x, c) = v;
      }
    }
  }
  return img;
}

void write_image(const fs::path& path, const Image& img, PngDepth png_depth) {
  const int ch = img.channels();
  const bool tiff = is_tiff(path);
  cv::Mat f(img.height(), img.width(), CV_MAKETYPE(CV_64F, ch));
  for (int y = 0; y < img.height(); ++y) {
    double* row = f.ptr<double>(y);
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < ch; ++c) {
        const double v = img.at(y, x, c);
        row[x * ch + (ch == 3 ? 2 - c : c)] = tiff ? v : std::clamp(v, 0.0, 1.0);
      }
    }
  }
  cv::Mat out;
  if (tiff) {
    f.convertTo(out, CV_MAKETYPE(CV_32F, ch));
  } else if (png_depth == PngDepth::k16) {
    f.convertTo(out, CV_MAKETYPE(CV_16U, ch), 65535.0);
  } else {
    f.convertTo(out, CV_MAKETYPE(CV_8U, ch), 255.0);
  }
  store(path, out);
}

DepthMap read_depth(const fs::path& path) {
  cv::Mat m = load(path);
  if (m.channels() != 1) {
    cv::Mat first;
    cv::extractChannel(m, first, 0);
    m = first;
  }
  cv::Mat f;
  m.convertTo(f, CV_64F);
  std::vector<double> values(static_cast<std::size_t>(f.rows) * f.cols);
  for (int y = 0; y < f.rows; ++y) {
    const double* row = f.ptr<double>(y);
    std::copy(row, row + f.cols, values.begin() + static_cast<long>(y) * f.cols);
  }
  return DepthMap(f.rows, f.cols, values);
}

void write_depth(const fs::path& path, const DepthMap& depth) {
  const auto ext = lower_extension(path);
  if (!is_tiff(path) && ext != ".pfm") {
    throw IoError("depth maps are written as .tif/.tiff or .pfm, got " + path.string());
  }
  cv::Mat m(depth.height(), depth.width(), CV_32F);
  for (int y = 0; y < depth.height(); ++y) {
    float* row = m.ptr<float>(y);
    for (int x = 0; x < depth.width(); ++x) {
      row[x] = depth.valid(y, x) ? static_cast<float>(depth.at(y, x)) : 0.0f;
    }
  }
  store(path, m);
}

void write_mask(const fs::path& path, const Mask& mask) {
  cv::Mat m(mask.height(), mask.width(), CV_8U);
  for (int y = 0; y < mask.height(); ++y) {
    auto* row = m.ptr<unsigned char>(y);
    for (int x = 0; x < mask.width(); ++x) row[x] = mask.at(y, x) ? 255 : 0;
  }
  store(path, m);
}

Mask read_mask(const fs::path& path) {
  cv::Mat m = load(path);
  if (m.channels() != 1 || m.depth() != CV_8U) throw IoError("mask must be an 8-bit gray PNG");
  Mask out(m.rows, m.cols, false);
  for (int y = 0; y < m.rows; ++y) {
    const auto* row = m.ptr<unsigned char>(y);
    for (int x = 0; x < m.cols; ++x) out.set(y, x, row[x] >= 128);
  }
  return out;
}

void write_loss_map(const fs::path& path, const LossMap& loss) {
  if (!is_tiff(path)) throw IoError("loss maps are written as .tif/.tiff, got " + path.string());
  cv::Mat m(loss.height, loss.width, CV_32F);
  for (int y = 0; y < loss.height; ++y) {
    float* row = m.ptr<float>(y);
    for (int x = 0; x < loss.width; ++x) {
      const auto i = static_cast<std::size_t>(y) * loss.width + x;
      row[x] = loss.valid[i] ? static_cast<float>(loss.value[i])
                             : std::numeric_limits<float>::quiet_NaN();
    }
  }
  store(path, m);
}

LossMap read_loss_map(const fs::path& path) {
  cv::Mat m = load(path);
  if (m.channels() != 1) throw IoError("loss map must have one channel: " + path.string());
  cv::Mat f;
  m.convertTo(f, CV_64F);
  LossMap out(f.rows, f.cols);
  for (int y = 0; y < f.rows; ++y) {
    const double* row = f.ptr<double>(y);
    for (int x = 0; x < f.cols; ++x) {
      const auto i = static_cast<std::size_t>(y) * f.cols + x;
      out.valid[i] = std::isfinite(row[x]) ? 1 : 0;
      out.value[i] = out.valid[i] ? row[x] : 0.0;
    }
  }
  return out;
}

}  // namespace uwd
