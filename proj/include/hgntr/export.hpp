#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hgntr/solver.hpp"
#include "hgntr/tensor.hpp"
#include "hgntr/tensor_ring.hpp"

namespace hgntr {

/// Basis images from the non-sample cores: the chain G_0 x ... x G_{N-2} has
/// shape (R_0, P, R_{N-1}); every (r_0, r_{N-1}) column of length P is
/// reshaped row-major into a height x width image. Requires height*width == P.
std::vector<Matrix> basis_images(const TRCores& cores, std::size_t height, std::size_t width);

/// Binary PGM (P5, maxval 255), min-max normalized; a constant image maps to 0.
std::string encode_pgm(const Matrix& image);
void write_pgm(const std::filesystem::path& path, const Matrix& image);

/// Columns: sweep, objective, relative_fit, elapsed_seconds.
void write_trace_csv(const std::filesystem::path& path, const SolveResult& result);

/// Single-series polyline chart.
std::string render_svg_line_chart(const std::vector<double>& values, const std::string& title,
                                  const std::string& y_label);

} // namespace hgntr
