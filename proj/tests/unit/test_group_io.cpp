#include <gtest/gtest.h>

#include "carnot/error.hpp"
#include "carnot/group_io.hpp"

using namespace carnot;

TEST(GroupIo, ParsesHeisenbergAndCompletesPartners) {
  auto g = parse_group_spec(R"({"step": 2, "layer_dims": [2, 1], "brackets": [[1, 2, 3, 1.0]]})", "h");
  EXPECT_EQ(g.dimension(), 3);
  EXPECT_EQ(g.homogeneous_dimension(), 4);
  EXPECT_TRUE(validate_group_spec(g).empty());
  EXPECT_EQ(g.brackets().size(), 2u);
}

TEST(GroupIo, RoundTripPreservesFingerprint) {
  for (const char* name : {"R2", "H1", "H2", "free2-3"}) {
    auto g = groups::builtin(name);
    auto back = parse_group_spec(dump_group_spec(g));
    EXPECT_EQ(back.fingerprint(), g.fingerprint()) << name;
  }
  auto e = load_group_spec(CARNOT_DATA_DIR "/groups/engel.json");
  EXPECT_EQ(parse_group_spec(dump_group_spec(e)).fingerprint(), e.fingerprint());
}

TEST(GroupIo, MalformedInput) {
  EXPECT_THROW(parse_group_spec("{not json"), Error);
  EXPECT_THROW(parse_group_spec(R"({"step": 2})"), Error);
  EXPECT_THROW(parse_group_spec(R"({"step": 2, "layer_dims": [2, 1], "brackets": [[1, 2]]})"), Error);
  EXPECT_THROW(parse_group_spec(R"({"step": 2, "layer_dims": [2, 1], "brackets": [[1, 2, 9, 1.0]]})"), Error);
  EXPECT_THROW(load_group_spec("/nonexistent/group.json"), Error);
}

TEST(GroupIo, ResolveBuiltinOrFile) {
  EXPECT_EQ(resolve_group("H1").homogeneous_dimension(), 4);
  EXPECT_EQ(resolve_group(CARNOT_DATA_DIR "/groups/engel.json").homogeneous_dimension(), 7);
}
