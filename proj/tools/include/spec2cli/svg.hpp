// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spec2/linalg.hpp"

namespace spec2::cli {

/// Minimal complex-plane plot: markers and polylines in data coordinates.
class SvgPlot {
 public:
  explicit SvgPlot(std::string title, int width = 640, int height = 640);

  void add_points(const std::vector<Complex>& pts, const std::string& color, double radius, const std::string& label);
  void add_polyline(const std::vector<Complex>& pts, const std::string& color, const std::string& label = {});

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  struct Layer {
    std::vector<Complex> pts;
    std::string color;
    double radius = 0.0;  // 0 for polylines
    std::string label;
  };
  std::string title_;
  int width_;
  int height_;
  std::vector<Layer> layers_;
};

}  // namespace spec2::cli
