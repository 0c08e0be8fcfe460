#include "repofix/util/sha256.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"

namespace repofix::util {

static std::string to_hex(const unsigned char* digest, unsigned len) {
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned len = 0;
    if (!EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr))
        throw Error("sha256 digest failed");
    return to_hex(digest.data(), len);
}

std::string sha256_file(const std::filesystem::path& path) {
    return sha256_hex(read_file(path));
}

std::map<std::string, std::string> hash_tree(const std::filesystem::path& root) {
    std::map<std::string, std::string> hashes;
    for (const auto& rel : list_files(root))
        hashes[rel] = sha256_file(root / rel);
    return hashes;
}

}  // namespace repofix::util
