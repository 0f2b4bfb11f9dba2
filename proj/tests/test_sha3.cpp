#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ledakem/io.hpp"
#include "ledakem/sha3.hpp"

using namespace ledakem;

namespace {

std::vector<uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("sha3-256 standard vectors") {
    CHECK(hex_encode(sha3_256({})) ==
          "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a");
    CHECK(hex_encode(sha3_256(bytes_of("abc"))) ==
          "3a985da74fe225b2045c172d6bd390bd855f086e3e9d525b46bfe24511431532");
}

TEST_CASE("sha3-384 standard vectors") {
    CHECK(hex_encode(sha3_384({})) ==
          "0c63a75b845e4f7d01107d852e4c2485c51a50aaaa94fc61995e71bbee983a2a"
          "c3713831264adb47fb6bd1e058d5f004");
    CHECK(hex_encode(sha3_384(bytes_of("abc"))) ==
          "ec01498288516fc926459f58e2c6ad8df9b473cb0fc08c2596da7cf0e49be4b2"
          "98d88cea927ac7f539f1edf228376d25");
}

TEST_CASE("sha3-512 standard vectors") {
    CHECK(hex_encode(sha3_512({})) ==
          "a69f73cca23a9ac5c8b567dc185a756e97c982164fe25859e0d1dcc1475c80a6"
          "15b2123af1f5f94c11e3e9402c3ac558f500199d95b6d3e301758586281dcd26");
    CHECK(hex_encode(sha3_512(bytes_of("abc"))) ==
          "b751850b1a57168a5693cd924b6b096e08f621827444f70d884f5d0240d2712e"
          "10e116e9192af3c91a7ec57647e3934057340b4cf408d5a56592f8274eec53f0");
}

TEST_CASE("shake256 standard vectors") {
    CHECK(hex_encode(shake256({}, 32)) ==
          "46b9dd2b0ba88d13233b3feb743eeb243fcd52ea62b81b82b50c27646ed5762f");
    CHECK(hex_encode(shake256(bytes_of("abc"), 32)) ==
          "483366601360a8771c6863080cc4114d8db44530f8f1e1ee4f94ea37e78b5739");
}

TEST_CASE("shake256 incremental squeeze matches one-shot") {
    auto oneshot = shake256(bytes_of("stream me"), 500);
    Shake256 xof;
    auto input = bytes_of("stream me");
    xof.absorb(std::span(input).first(3));
    xof.absorb(std::span(input).subspan(3));
    xof.finalize();
    std::vector<uint8_t> chunked(500);
    xof.squeeze(std::span(chunked).first(1));
    xof.squeeze(std::span(chunked).subspan(1, 135));
    xof.squeeze(std::span(chunked).subspan(136));
    CHECK(chunked == oneshot);
}

TEST_CASE("sponge misuse is rejected") {
    Shake256 xof;
    std::array<uint8_t, 4> buf{};
    CHECK_THROWS_AS(xof.squeeze(buf), std::logic_error);
    xof.finalize();
    CHECK_THROWS_AS(xof.absorb(buf), std::logic_error);
    CHECK_THROWS_AS(xof.finalize(), std::logic_error);
}
