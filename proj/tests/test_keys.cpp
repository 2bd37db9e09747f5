#include <gtest/gtest.h>

#include "npt/keys.hpp"

using namespace npt;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Unsupported;
}

}  // namespace

TEST(Keys, ParseSplitsFamilyAndParameters) {
  const ParsedKey k = parse_key("M:gamma=1,D=half:e1,R=inf");
  EXPECT_EQ(k.family, "M");
  ASSERT_EQ(k.params.size(), 3u);
  EXPECT_EQ(k.params[1].first, "D");
  EXPECT_EQ(k.params[1].second, "half:e1");
  EXPECT_FALSE(k.dual);
  EXPECT_TRUE(parse_key("pucci:1,2~").dual);
  EXPECT_FALSE(parse_key("P~").dual);
}

TEST(Keys, EveryFiberExampleRoundTrips) {
  int fibers = 0;
  for (const auto& e : catalog_entries()) {
    if (std::find(e.kinds.begin(), e.kinds.end(), EntryKind::Fiber) == e.kinds.end()) continue;
    const FiberOracle f = fiber_from_key(e.example);
    EXPECT_EQ(fiber_from_key(f.label()).label(), f.label()) << e.example;
    ++fibers;
  }
  EXPECT_GE(fibers, 12);
  EXPECT_GE(catalog_entries().size(), 14u);
}

TEST(Keys, CanonicalSpellings) {
  EXPECT_EQ(fiber_from_key("pucci:lam=1,Lam=2.50").label(), "pucci:1,2.5");
  EXPECT_EQ(fiber_from_key("M:R=2,gamma=0.5").label(), "M:gamma=0.5,D=full,R=2");
  EXPECT_EQ(fiber_from_key("M:gamma=1,D=orthant:2+1,R=inf").label(), "M:gamma=1,D=orthant:1+2,R=inf");
  EXPECT_EQ(fiber_from_key("branch:2").label(), "branch:k=2");
  EXPECT_EQ(fiber_from_key("pfold:p=2~").label(), "pfold:p=2~");
}

TEST(Keys, ClosedFormDualsAndNumericDuals) {
  const Jet2 j{0.0, Vec::Zero(2), SymMat::diag({1.0, -2.0})};
  EXPECT_LT(fiber_from_key("P").value(j), 0.0);
  EXPECT_GT(fiber_from_key("P~").value(j), 0.0);
  EXPECT_NEAR(fiber_from_key("P~~").value(j), fiber_from_key("P").value(j), 1e-12);
  const FiberOracle numeric = fiber_from_key("pfold:p=1~");
  EXPECT_NEAR(numeric.value(j), fiber_from_key("P~").value(j), 1e-12);
}

TEST(Keys, OperatorsAndSchemes) {
  EXPECT_EQ(garding_from_key("det", 3).label(), "det");
  EXPECT_EQ(garding_from_key("delta-elliptic:0.5", 2).label(), "delta-elliptic:0.5");
  EXPECT_EQ(garding_from_key("pucci-garding:1,2", 2).label(), "pucci-garding:1,2");
  EXPECT_EQ(scheme_from_key("branch:k=1", 2).label, "branch:k=1");
  EXPECT_EQ(scheme_from_key("pucci:1,3", 2).label, "pucci:1,3");
  EXPECT_EQ(scheme_from_key("slag", 2).label, "slag");
}

TEST(Keys, UnknownKeysAreRejected) {
  EXPECT_EQ(code_of([] { fiber_from_key("nonsense"); }), ErrorCode::UnknownKey);
  EXPECT_EQ(code_of([] { fiber_from_key("branch:j=2"); }), ErrorCode::UnknownKey);
  EXPECT_EQ(code_of([] { fiber_from_key("branch"); }), ErrorCode::UnknownKey);
  EXPECT_EQ(code_of([] { fiber_from_key("pfold:p=x"); }), ErrorCode::UnknownKey);
  EXPECT_EQ(code_of([] { fiber_from_key("P:1"); }), ErrorCode::UnknownKey);
  EXPECT_EQ(code_of([] { fiber_from_key("M:D=cone"); }), ErrorCode::UnknownKey);
  EXPECT_EQ(code_of([] { scheme_from_key("Q", 2); }), ErrorCode::UnknownKey);
  EXPECT_EQ(code_of([] { garding_from_key("P", 2); }), ErrorCode::UnknownKey);
  EXPECT_EQ(code_of([] { describe_key(""); }), ErrorCode::UnknownKey);
}

TEST(Keys, DescribeReportsTheDefiningInequality) {
  const KeyDescription d = describe_key("quasiconvex:lambda=1");
  EXPECT_EQ(d.key, "quasiconvex:lambda=1");
  EXPECT_NE(d.inequality.find("lambda_min"), std::string::npos);
  EXPECT_EQ(describe_key("det").key, "det");
  EXPECT_EQ(describe_key("optimal-transport").kinds.front(), EntryKind::VariableFiber);
  EXPECT_EQ(describe_key("pucci:1,2~").key, "pucci:1,2~");
}
