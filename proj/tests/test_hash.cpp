#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <string>

#include "pasteup/hash.hpp"

using namespace pasteup;

TEST_CASE("fnv64 matches the published reference vectors") {
    CHECK(fnv64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("fnv64 is incremental") {
    Fnv64 h;
    h.update("foo").update("bar");
    CHECK(h.digest() == fnv64("foobar"));
}

TEST_CASE("update_value hashes the raw object bytes") {
    const std::uint32_t v = 0x61626364;  // "dcba" on little-endian
    Fnv64 a;
    a.update_value(v);
    Fnv64 b;
    b.update(&v, sizeof(v));
    CHECK(a.digest() == b.digest());
}

TEST_CASE("hash_unit_interval lands in [0,1) and separates keys") {
    int distinct = 0;
    double prev = -1.0;
    for (int i = 0; i < 1000; ++i) {
        const double u = hash_unit_interval("key-" + std::to_string(i));
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        if (u != prev) ++distinct;
        prev = u;
    }
    CHECK(distinct > 990);
    CHECK(hash_unit_interval("stable") == hash_unit_interval("stable"));
}

TEST_CASE("to_hex is fixed-width lowercase") {
    CHECK(to_hex(0) == "0000000000000000");
    CHECK(to_hex(0xdeadbeefULL) == "00000000deadbeef");
    CHECK(to_hex(0xffffffffffffffffULL) == "ffffffffffffffff");
    CHECK(std::stoull(to_hex(0x123456789abcdef0ULL), nullptr, 16) == 0x123456789abcdef0ULL);
}
