#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "mlcorr/cache.hpp"
#include "mlcorr/io.hpp"
#include "mlcorr/sieve.hpp"

using namespace mlcorr;
namespace fs = std::filesystem;

class CacheTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("mlcorr_cache_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    static void patch(const fs::path& p, std::size_t offset, char byte) {
        std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(static_cast<std::streamoff>(offset));
        f.put(byte);
    }

    fs::path dir_;
};

TEST(Crc32, StandardCheckValue) {
    const std::string s = "123456789";
    EXPECT_EQ(crc32_of(reinterpret_cast<const std::int8_t*>(s.data()), s.size()), 0xCBF43926u);
}

TEST_F(CacheTest, RoundTripMobiusMillion) {
    const auto mu = sieve_mobius(1'000'000);
    save_cache(mu, path("mu.cache"));
    EXPECT_EQ(fs::file_size(path("mu.cache")), kCacheHeaderSize + 1'000'000 + 4);
    const auto back = load_cache(path("mu.cache"));
    EXPECT_EQ(back, mu);
    EXPECT_EQ(cache_checksum(back), cache_checksum(mu));
}

TEST_F(CacheTest, HeaderLayout) {
    save_cache(sieve_liouville(5), path("l.cache"));
    const auto bytes = io::read_file(path("l.cache"));
    ASSERT_EQ(bytes.size(), 15u + 5u + 4u);
    EXPECT_EQ(bytes.substr(0, 4), "MBLB");
    EXPECT_EQ(bytes[4], 1);  // version, little-endian
    EXPECT_EQ(bytes[5], 0);
    EXPECT_EQ(bytes[6], 1);  // liouville
    EXPECT_EQ(bytes[7], 5);  // n_max
    for (int i = 8; i < 15; ++i) EXPECT_EQ(bytes[i], 0);
    // lambda(1..5) = +1, -1, -1, +1, -1
    EXPECT_EQ(bytes[15], 1);
    EXPECT_EQ(bytes[16], -1);
    EXPECT_EQ(bytes[19], -1);
}

TEST_F(CacheTest, CorruptedValueIsChecksumError) {
    save_cache(sieve_mobius(1000), path("mu.cache"));
    patch(path("mu.cache"), kCacheHeaderSize + 100, 7);
    EXPECT_THROW(load_cache(path("mu.cache")), CacheChecksumError);
}

TEST_F(CacheTest, WrongMagicIsFormatError) {
    save_cache(sieve_mobius(1000), path("mu.cache"));
    patch(path("mu.cache"), 0, 'X');
    EXPECT_THROW(load_cache(path("mu.cache")), CacheFormatError);
}

TEST_F(CacheTest, UnknownVersionIsVersionError) {
    save_cache(sieve_mobius(1000), path("mu.cache"));
    patch(path("mu.cache"), 4, 2);
    EXPECT_THROW(load_cache(path("mu.cache")), CacheVersionError);
}

TEST_F(CacheTest, TruncationIsTruncatedError) {
    save_cache(sieve_mobius(1000), path("mu.cache"));
    fs::resize_file(path("mu.cache"), kCacheHeaderSize + 500);
    EXPECT_THROW(load_cache(path("mu.cache")), CacheTruncatedError);
    fs::resize_file(path("mu.cache"), 6);
    EXPECT_THROW(load_cache(path("mu.cache")), CacheTruncatedError);
}

TEST_F(CacheTest, ErrorsAreDistinctTypes) {
    // each specific error is still a CacheError, but none is another
    save_cache(sieve_mobius(100), path("mu.cache"));
    patch(path("mu.cache"), kCacheHeaderSize + 3, 9);
    try {
        load_cache(path("mu.cache"));
        FAIL();
    } catch (const CacheVersionError&) {
        FAIL();
    } catch (const CacheChecksumError& e) {
        SUCCEED();
    }
}

TEST_F(CacheTest, MissingFile) { EXPECT_THROW(load_cache(path("none.cache")), CacheError); }
