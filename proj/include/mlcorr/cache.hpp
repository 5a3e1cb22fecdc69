// cache.hpp
// Persistent binary cache for sieved sequences.
//
// Layout (all integers little-endian):
//   "MBLB"            4 bytes magic
//   version           u16 (currently 1)
//   kind              u8  (0 mobius, 1 liouville, 2 omega)
//   n_max             u64
//   values            n_max signed bytes, A(1) first
//   crc32             u32 over the value block (IEEE, as zlib computes it)

#pragma once
#include <zlib.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mlcorr/error.hpp"
#include "mlcorr/sequence.hpp"

namespace mlcorr {

inline constexpr std::array<char, 4> kCacheMagic = {'M', 'B', 'L', 'B'};
inline constexpr std::uint16_t kCacheVersion = 1;
inline constexpr std::size_t kCacheHeaderSize = 4 + 2 + 1 + 8;

inline std::uint32_t crc32_of(const std::int8_t* data, std::size_t len) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks
    constexpr std::size_t kChunk = std::size_t{1} << 30;
    const auto* bytes = reinterpret_cast<const Bytef*>(data);
    while (len > 0) {
        const std::size_t n = std::min(len, kChunk);
        crc = ::crc32(crc, bytes, static_cast<uInt>(n));
        bytes += n;
        len -= n;
    }
    return static_cast<std::uint32_t>(crc);
}

inline std::uint32_t cache_checksum(const ArithSequence& seq) {
    return crc32_of(seq.raw().data(), seq.raw().size());
}

namespace detail {

template <class T>
void put_le(std::string& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <class T>
T get_le(const unsigned char* p) {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
    return v;
}

// Write to a sibling temp file and rename over the target.
inline void write_atomically(const std::filesystem::path& path, const std::string& header,
                             const char* body, std::size_t body_len, const std::string& trailer) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cannot open " + tmp.string() + " for writing");
        out.write(header.data(), static_cast<std::streamsize>(header.size()));
        out.write(body, static_cast<std::streamsize>(body_len));
        out.write(trailer.data(), static_cast<std::streamsize>(trailer.size()));
        if (!out) throw CacheError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline void save_cache(const ArithSequence& seq, const std::filesystem::path& path) {
    if (seq.kind() == SequenceKind::custom) throw CacheFormatError("custom sequences are not cacheable");
    std::string header(kCacheMagic.begin(), kCacheMagic.end());
    detail::put_le<std::uint16_t>(header, kCacheVersion);
    header.push_back(static_cast<char>(seq.kind()));
    detail::put_le<std::uint64_t>(header, seq.n_max());
    std::string trailer;
    detail::put_le<std::uint32_t>(trailer, cache_checksum(seq));
    detail::write_atomically(path, header, reinterpret_cast<const char*>(seq.raw().data()),
                             seq.raw().size(), trailer);
}

inline ArithSequence load_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cannot open cache " + path.string());

    std::array<unsigned char, kCacheHeaderSize> header{};
    in.read(reinterpret_cast<char*>(header.data()), header.size());
    if (in.gcount() < 4) throw CacheTruncatedError("cache truncated inside header: " + path.string());
    if (!std::equal(kCacheMagic.begin(), kCacheMagic.end(), header.begin(),
                    [](char a, unsigned char b) { return static_cast<unsigned char>(a) == b; }))
        throw CacheFormatError("bad magic in " + path.string());
    if (in.gcount() < static_cast<std::streamsize>(header.size()))
        throw CacheTruncatedError("cache truncated inside header: " + path.string());

    const auto version = detail::get_le<std::uint16_t>(header.data() + 4);
    if (version != kCacheVersion)
        throw CacheVersionError("cache version " + std::to_string(version) + ", expected " +
                                std::to_string(kCacheVersion));
    const auto kind_byte = header[6];
    if (kind_byte > 2) throw CacheFormatError("unknown kind byte " + std::to_string(kind_byte));
    const auto n_max = detail::get_le<std::uint64_t>(header.data() + 7);

    std::error_code ec;
    const auto file_size = std::filesystem::file_size(path, ec);
    if (!ec && file_size < kCacheHeaderSize + n_max + 4)
        throw CacheTruncatedError("cache truncated: expected " + std::to_string(n_max) +
                                  " values plus checksum");

    std::vector<std::int8_t> values(n_max);
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n_max));
    if (static_cast<std::uint64_t>(in.gcount()) != n_max)
        throw CacheTruncatedError("cache truncated inside value block");
    std::array<unsigned char, 4> crc_bytes{};
    in.read(reinterpret_cast<char*>(crc_bytes.data()), 4);
    if (in.gcount() != 4) throw CacheTruncatedError("cache truncated: missing checksum");

    const auto stored = detail::get_le<std::uint32_t>(crc_bytes.data());
    const auto actual = crc32_of(values.data(), values.size());
    if (stored != actual) throw CacheChecksumError("cache checksum mismatch in " + path.string());
    return ArithSequence(static_cast<SequenceKind>(kind_byte), std::move(values));
}

}  // namespace mlcorr
