#include "hgntr/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace hgntr {

namespace {

constexpr char kMagic[4] = {'N', 'T', 'F', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v)
{
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::uint64_t take(std::size_t width)
    {
        if (pos_ + width > bytes_.size()) throw FormatError("truncated tensor file");
        std::uint64_t v = 0;
        for (std::size_t b = 0; b < width; ++b)
            v |= static_cast<std::uint64_t>(bytes_[pos_ + b]) << (8 * b);
        pos_ += width;
        return v;
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<std::uint8_t> encode_tensor(const DenseTensor& x)
{
    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    out.reserve(4 + 4 + 8 * x.order() + 8 * x.size());
    put_u32(out, static_cast<std::uint32_t>(x.order()));
    for (auto e : x.shape()) put_u64(out, e);
    for (double v : x.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

DenseTensor decode_tensor(const std::vector<std::uint8_t>& bytes)
{
    if (bytes.size() < 8 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin()))
        throw FormatError("not a tensor file (bad magic)");
    Reader in(bytes);
    in.take(4);
    const auto ndims = static_cast<std::size_t>(in.take(4));
    if (ndims == 0) throw FormatError("tensor file declares zero dimensions");
    if (in.remaining() < 8 * ndims) throw FormatError("truncated tensor header");
    Shape shape(ndims);
    std::size_t count = 1;
    for (auto& e : shape) {
        e = static_cast<std::size_t>(in.take(8));
        if (e == 0) throw FormatError("tensor file has a zero extent");
        if (count > in.remaining() / e) throw FormatError("payload shorter than header implies");
        count *= e;
    }
    if (in.remaining() != 8 * count)
        throw FormatError("payload length " + std::to_string(in.remaining())
                          + " does not match header (" + std::to_string(8 * count) + " bytes)");
    std::vector<double> data(count);
    for (auto& v : data) {
        v = std::bit_cast<double>(in.take(8));
        if (!std::isfinite(v)) throw FormatError("tensor file contains non-finite values");
    }
    return DenseTensor(std::move(shape), std::move(data));
}

void write_tensor_file(const std::filesystem::path& path, const DenseTensor& x)
{
    const auto bytes = encode_tensor(x);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

DenseTensor read_tensor_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_tensor(bytes);
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (int l : labels) out << l << '\n';
}

std::vector<int> read_labels(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        int v = 0;
        std::string rest;
        if (!(ss >> v) || (ss >> rest))
            throw FormatError("bad label on line " + std::to_string(line_no) + " of "
                              + path.string());
        labels.push_back(v);
    }
    return labels;
}

} // namespace hgntr
