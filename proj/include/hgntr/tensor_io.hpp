#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgntr/tensor.hpp"

namespace hgntr {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// TensorFile layout, all little-endian:
//   "NTF1" | u32 ndims | ndims x u64 extents | prod(extents) x binary64, row-major
std::vector<std::uint8_t> encode_tensor(const DenseTensor& x);
DenseTensor decode_tensor(const std::vector<std::uint8_t>& bytes);

void write_tensor_file(const std::filesystem::path& path, const DenseTensor& x);
DenseTensor read_tensor_file(const std::filesystem::path& path);

// UTF-8 text, one integer label per line.
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);
std::vector<int> read_labels(const std::filesystem::path& path);

} // namespace hgntr
