#include "hgntr/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hgntr {

std::vector<Matrix> basis_images(const TRCores& cores, std::size_t height, std::size_t width)
{
    const std::size_t order = cores.order();
    if (order < 2) throw std::invalid_argument("basis export needs at least two cores");
    DenseTensor chain = cores.core(0);
    for (std::size_t m = 1; m + 1 < order; ++m) chain = multilinear_product(chain, cores.core(m));

    const std::size_t pixels = chain.extent(1);
    if (height * width != pixels)
        throw std::invalid_argument("image geometry " + std::to_string(width) + "x"
                                    + std::to_string(height) + " does not cover "
                                    + std::to_string(pixels) + " basis entries");
    const std::size_t r_first = chain.extent(0), r_last = chain.extent(2);
    std::vector<Matrix> images;
    const auto src = chain.data();
    for (std::size_t a = 0; a < r_first; ++a)
        for (std::size_t b = 0; b < r_last; ++b) {
            Matrix img(static_cast<Eigen::Index>(height), static_cast<Eigen::Index>(width));
            for (std::size_t p = 0; p < pixels; ++p)
                img(static_cast<Eigen::Index>(p / width), static_cast<Eigen::Index>(p % width)) =
                    src[(a * pixels + p) * r_last + b];
            images.push_back(std::move(img));
        }
    return images;
}

std::string encode_pgm(const Matrix& image)
{
    if (image.size() == 0) throw std::invalid_argument("empty image");
    const double lo = image.minCoeff(), hi = image.maxCoeff();
    std::string out = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows())
                      + "\n255\n";
    for (Eigen::Index r = 0; r < image.rows(); ++r)
        for (Eigen::Index c = 0; c < image.cols(); ++c) {
            const double t = hi > lo ? (image(r, c) - lo) / (hi - lo) : 0.0;
            out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(t * 255.0))));
        }
    return out;
}

void write_pgm(const std::filesystem::path& path, const Matrix& image)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const auto bytes = encode_pgm(image);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_trace_csv(const std::filesystem::path& path, const SolveResult& result)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "sweep,objective,relative_fit,elapsed_seconds\n";
    char buf[160];
    for (std::size_t s = 0; s < result.objective_trace.size(); ++s) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.9f\n", s, result.objective_trace[s],
                      result.fit_trace[s], result.elapsed_seconds[s]);
        out << buf;
    }
}

std::string render_svg_line_chart(const std::vector<double>& values, const std::string& title,
                                  const std::string& y_label)
{
    constexpr double width = 640, height = 400, left = 70, right = 20, top = 40, bottom = 50;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << title << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right
        << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << height - bottom << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">sweep</text>\n";
    svg << "<text x=\"16\" y=\"" << height / 2 << "\" transform=\"rotate(-90 16 " << height / 2
        << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << y_label
        << "</text>\n";
    if (!values.empty()) {
        const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
        const double lo = *lo_it, hi = *hi_it;
        const double span = hi > lo ? hi - lo : 1.0;
        const double steps = values.size() > 1 ? static_cast<double>(values.size() - 1) : 1.0;
        svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double px = left + (width - left - right) * static_cast<double>(i) / steps;
            const double py = height - bottom - (height - top - bottom) * (values[i] - lo) / span;
            svg << px << ',' << py << ' ';
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << top + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << hi
            << "</text>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << height - bottom
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << lo
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace hgntr
