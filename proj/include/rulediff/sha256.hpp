#pragma once

#include <string>

namespace rulediff {

// Hex SHA-256 digest, used for the run manifest's artifact hashes.
std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);

}  // namespace rulediff
