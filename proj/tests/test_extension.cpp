#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "pcsilab/extension.hpp"
#include "pcsilab/gf.hpp"

using namespace pcsilab;

TEST_CASE("prime-base codec is the digit map") {
    Field f2(2, 1);
    ExtField e(f2, 3);
    CHECK(e.ext().q() == 8);
    std::vector<Fe> chunk{1, 0, 1};
    CHECK(e.pack(chunk) == 5);
    CHECK(e.unpack(5) == chunk);
    for (Fe v = 0; v < 8; ++v) CHECK(e.pack(e.unpack(v)) == v);
    CHECK(e.embed(1) == 1);
    CHECK(e.embed(0) == 0);
}

TEST_CASE("packing is linear over the base field") {
    Field f3(3, 1);
    ExtField e(f3, 2);
    const Field& x = e.ext();
    for (Fe a0 = 0; a0 < 3; ++a0)
        for (Fe a1 = 0; a1 < 3; ++a1)
            for (Fe b0 = 0; b0 < 3; ++b0)
                for (Fe b1 = 0; b1 < 3; ++b1)
                    for (Fe c = 0; c < 3; ++c) {
                        std::vector<Fe> sum{f3.add(f3.mul(c, a0), b0), f3.add(f3.mul(c, a1), b1)};
                        Fe lhs = e.pack(sum);
                        Fe rhs = x.add(x.mul(e.embed(c), e.pack(std::vector<Fe>{a0, a1})),
                                       e.pack(std::vector<Fe>{b0, b1}));
                        REQUIRE(lhs == rhs);
                    }
}

TEST_CASE("non-prime base embeds as a field homomorphism") {
    Field f4(2, 2);
    ExtField e(f4, 2);  // F_16 over F_4
    const Field& x = e.ext();
    CHECK(x.q() == 16);
    std::set<Fe> images;
    for (Fe a = 0; a < 4; ++a) {
        images.insert(e.embed(a));
        for (Fe b = 0; b < 4; ++b) {
            REQUIRE(e.embed(f4.add(a, b)) == x.add(e.embed(a), e.embed(b)));
            REQUIRE(e.embed(f4.mul(a, b)) == x.mul(e.embed(a), e.embed(b)));
        }
    }
    CHECK(images.size() == 4);
    CHECK(e.embed(1) == x.one());
}

TEST_CASE("non-prime base codec is a linear bijection") {
    Field f4(2, 2);
    ExtField e(f4, 2);
    const Field& x = e.ext();
    std::set<Fe> seen;
    for (Fe c0 = 0; c0 < 4; ++c0)
        for (Fe c1 = 0; c1 < 4; ++c1) {
            std::vector<Fe> chunk{c0, c1};
            Fe packed = e.pack(chunk);
            seen.insert(packed);
            REQUIRE(e.unpack(packed) == chunk);
        }
    CHECK(seen.size() == 16);
    // F_4-linearity.
    for (Fe c = 0; c < 4; ++c)
        for (Fe a0 = 0; a0 < 4; ++a0)
            for (Fe a1 = 0; a1 < 4; ++a1) {
                std::vector<Fe> scaled{f4.mul(c, a0), f4.mul(c, a1)};
                REQUIRE(e.pack(scaled) ==
                        x.mul(e.embed(c), e.pack(std::vector<Fe>{a0, a1})));
            }
}

TEST_CASE("message packing splits into chunks") {
    Field f2(2, 1);
    ExtField e(f2, 3);
    std::vector<Fe> msg{1, 1, 0, 0, 1, 1};  // two chunks of three bits
    auto packed = pack_message(e, msg, 2);
    REQUIRE(packed.size() == 2);
    CHECK(packed[0] == 3);
    CHECK(packed[1] == 6);
    CHECK(unpack_message(e, packed) == msg);
}
