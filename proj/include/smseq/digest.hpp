#pragma once

#include <openssl/evp.h>

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smseq {

/// SHA-256 of the bytes, as lowercase hexadecimal.
inline std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> raw{};
    unsigned int raw_len = 0;
    if (EVP_Digest(data.data(), data.size(), raw.data(), &raw_len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(raw_len * 2, '\0');
    for (unsigned int i = 0; i < raw_len; ++i) {
        out[2 * i] = hex[raw[i] >> 4];
        out[2 * i + 1] = hex[raw[i] & 0xf];
    }
    return out;
}

}  // namespace smseq
