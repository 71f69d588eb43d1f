#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "conrel/error.hpp"
#include "conrel/expr.hpp"
#include "oracles.hpp"

namespace expr = conrel::expr;

namespace {

double eval_at(const expr::Expr& e, double x1, double x2) {
  return expr::evaluate(e, expr::Assignment{{"x1", x1}, {"x2", x2}});
}

}  // namespace

TEST(ExprParse, ConflictFormula) {
  const auto e = expr::parse("x1*exp(-x1^2-x2^2)");
  EXPECT_EQ(expr::syntactic_support(e), (std::set<std::string>{"x1", "x2"}));
  EXPECT_EQ(e.op(), expr::Op::Mul);
}

TEST(ExprParse, SingleVariable) {
  const auto e = expr::parse("x1");
  EXPECT_EQ(e.op(), expr::Op::Variable);
  EXPECT_EQ(e.name(), "x1");
}

TEST(ExprParse, RoundTripIsStructurallyEqual) {
  for (const char* src : {"2*sin(x1)-1", "x1*exp(-x1^2-x2^2)", "-0.1-x1*exp(-x1^2-x2^2)", "-x1+x2+1",
                          "x2^2-1", "(x1-x2)*(x1+x2)", "x1/(x2/3)", "2^3^2", "-(x1^2)", "abs(x1)*tanh(x2)",
                          "sqrt(x1^2+1)/log(x2+10)", "x1 - (x2 - 1)", "1e-3*x1", "-(-x1)", "x1^-2",
                          "cos(tan(x1))", "(-2)^x1"}) {
    const auto a = expr::parse(src);
    const auto text = expr::to_string(a);
    const auto b = expr::parse(text);
    EXPECT_EQ(a, b) << src << " printed as " << text;
    EXPECT_EQ(expr::to_string(b), text);
  }
}

TEST(ExprParse, PowerBindsTighterThanUnaryMinus) {
  EXPECT_DOUBLE_EQ(eval_at(expr::parse("-x1^2"), 3, 0), -9.0);
  EXPECT_DOUBLE_EQ(eval_at(expr::parse("(-x1)^2"), 3, 0), 9.0);
}

TEST(ExprParse, PowerIsRightAssociative) {
  EXPECT_DOUBLE_EQ(eval_at(expr::parse("2^3^2"), 0, 0), 512.0);
}

TEST(ExprParse, SubtractionIsLeftAssociative) {
  EXPECT_DOUBLE_EQ(eval_at(expr::parse("10-4-3"), 0, 0), 3.0);
  EXPECT_DOUBLE_EQ(eval_at(expr::parse("24/4/3"), 0, 0), 2.0);
}

TEST(ExprParse, ErrorsCarryPosition) {
  try {
    (void)expr::parse("x1 + * 2");
    FAIL() << "expected ParseError";
  } catch (const conrel::ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  EXPECT_THROW((void)expr::parse(""), conrel::ParseError);
  EXPECT_THROW((void)expr::parse("(x1 + 2"), conrel::ParseError);
  EXPECT_THROW((void)expr::parse("x1 $ 2"), conrel::ParseError);
  EXPECT_THROW((void)expr::parse("1.2.3"), conrel::ParseError);
  EXPECT_THROW((void)expr::parse("1e"), conrel::ParseError);
  EXPECT_THROW((void)expr::parse("x1 2"), conrel::ParseError);
}

TEST(ExprParse, UnknownFunctionIsRejected) {
  EXPECT_THROW((void)expr::parse("foo(x1)"), conrel::ParseError);
  EXPECT_THROW((void)expr::parse("sin(x1, x2)"), conrel::ParseError);
  EXPECT_THROW((void)expr::parse("sin"), conrel::ParseError);
}

TEST(ExprBind, UndeclaredVariableIsAnInputError) {
  const std::vector<std::string> vars{"x1"};
  EXPECT_THROW((void)expr::bind(expr::parse("x1 + y"), vars), conrel::InputError);
  const auto bound = expr::bind(expr::parse("x1*2"), vars);
  const std::vector<double> point{4.0};
  EXPECT_DOUBLE_EQ(expr::evaluate(bound, std::span<const double>(point)), 8.0);
}

TEST(ExprEvaluate, ReferenceExamples) {
  EXPECT_EQ(eval_at(expr::parse("x1*exp(-x1^2-x2^2)"), 0, 5), 0.0);
  EXPECT_EQ(eval_at(expr::parse("-x1+x2+1"), 2, 0), -1.0);
  EXPECT_EQ(eval_at(expr::parse("x2^2-1"), 0, 1), 0.0);
}

TEST(ExprEvaluate, MissingVariableInAssignment) {
  EXPECT_THROW((void)expr::evaluate(expr::parse("x3"), expr::Assignment{{"x1", 1.0}}), conrel::InputError);
}

TEST(ExprEvaluate, NonFiniteResultsAreErrors) {
  EXPECT_THROW((void)eval_at(expr::parse("1/x1"), 0, 0), conrel::NumericalError);
  EXPECT_THROW((void)eval_at(expr::parse("log(x1)"), -1, 0), conrel::NumericalError);
  EXPECT_THROW((void)eval_at(expr::parse("log(x1)"), 0, 0), conrel::NumericalError);
  EXPECT_THROW((void)eval_at(expr::parse("sqrt(x1)"), -1, 0), conrel::NumericalError);
  EXPECT_THROW((void)eval_at(expr::parse("exp(x1)"), 1000, 0), conrel::NumericalError);
}

TEST(ExprEvaluate, IsBitwiseRepeatable) {
  const auto e = expr::parse("x1*exp(-x1^2-x2^2) + sin(x2)/3");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 100; ++k) {
    const double a = u(rng), b = u(rng);
    const double first = eval_at(e, a, b);
    const double second = eval_at(e, a, b);
    EXPECT_EQ(std::memcmp(&first, &second, sizeof first), 0);
  }
}

TEST(ExprDifferentiate, ReferenceExamples) {
  const auto d = expr::differentiate(expr::parse("x2^2-1"), "x2");
  for (const double x2 : {-2.5, -1.0, 0.0, 0.3, 2.0}) {
    EXPECT_NEAR(eval_at(d, 0.7, x2), 2 * x2, 1e-12);
  }
  const auto zero = expr::differentiate(expr::parse("2*sin(x1)-1"), "x2");
  EXPECT_TRUE(zero.is_constant(0.0)) << expr::to_string(zero);
  const auto g = expr::differentiate(expr::parse("x1*exp(-x1^2-x2^2)"), "x1");
  EXPECT_NEAR(eval_at(g, 0, 0), 1.0, 1e-12);
}

TEST(ExprDifferentiate, AbsUsesSignWithZeroAtOrigin) {
  const auto d = expr::differentiate(expr::parse("abs(x1)"), "x1");
  EXPECT_EQ(eval_at(d, 0, 0), 0.0);
  EXPECT_EQ(eval_at(d, -2, 0), -1.0);
  EXPECT_EQ(eval_at(d, 3, 0), 1.0);
  EXPECT_EQ(expr::parse(expr::to_string(d)), d);
}

struct FdCase {
  const char* source;
  // returns false where the point lies in a singularity band
  bool (*admissible)(double, double);
};

bool always(double, double) { return true; }
bool x1_away_from_zero(double x1, double) { return std::abs(x1) > 1e-1; }
bool x2_positive(double, double x2) { return x2 > 1e-1; }
bool tan_regular(double x1, double) { return std::abs(std::cos(x1)) > 1e-1; }

TEST(ExprDifferentiate, MatchesCentralDifferences) {
  const std::vector<FdCase> cases{
      {"x1*exp(-x1^2-x2^2)", always},
      {"-0.1-x1*exp(-x1^2-x2^2)", always},
      {"2*sin(x1)-1", always},
      {"x2^2-1", always},
      {"cos(x1*x2) - x2", always},
      {"tan(x1)", tan_regular},
      {"abs(x1) + x2", x1_away_from_zero},
      {"log(x2)*x1", x2_positive},
      {"sqrt(x2) + x1^3", x2_positive},
      {"x1/(x2^2+1)", always},
      {"tanh(x1 - 2*x2)", always},
      {"x2^x1", x2_positive},
      {"(x1^2+1)^(1/3)", always},
      {"1/x1", x1_away_from_zero},
      {"-(x1 - x2)^3", always},
  };
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (const auto& c : cases) {
    const auto e = expr::parse(c.source);
    const auto f = [&](const std::vector<double>& x) { return eval_at(e, x[0], x[1]); };
    const auto d1 = expr::differentiate(e, "x1");
    const auto d2 = expr::differentiate(e, "x2");
    int checked = 0;
    while (checked < 100) {
      const double a = u(rng), b = u(rng);
      if (!c.admissible(a, b) || !c.admissible(a + 1e-4, b + 1e-4) || !c.admissible(a - 1e-4, b - 1e-4)) {
        continue;
      }
      ++checked;
      const double fd1 = oracle::central_difference(f, {a, b}, 0);
      const double fd2 = oracle::central_difference(f, {a, b}, 1);
      EXPECT_TRUE(oracle::close_rel(eval_at(d1, a, b), fd1, 1e-6, 1e-8))
          << c.source << " d/dx1 at (" << a << ", " << b << "): " << eval_at(d1, a, b) << " vs " << fd1;
      EXPECT_TRUE(oracle::close_rel(eval_at(d2, a, b), fd2, 1e-6, 1e-8))
          << c.source << " d/dx2 at (" << a << ", " << b << "): " << eval_at(d2, a, b) << " vs " << fd2;
    }
  }
}

TEST(ExprDifferentiate, SupportNeverGrows) {
  for (const char* src : {"x1*exp(-x1^2-x2^2)", "2*sin(x1)-1", "x2 - x2 + x1", "x1^x2", "abs(x2)*3"}) {
    const auto e = expr::parse(src);
    const auto support = expr::syntactic_support(e);
    for (const char* v : {"x1", "x2", "x3"}) {
      for (const auto& name : expr::syntactic_support(expr::differentiate(e, v))) {
        EXPECT_TRUE(support.count(name)) << src << " d/d" << v << " mentions " << name;
      }
    }
  }
}

TEST(ExprSupport, Examples) {
  EXPECT_EQ(expr::syntactic_support(expr::parse("2*sin(x1)-1")), (std::set<std::string>{"x1"}));
  EXPECT_TRUE(expr::syntactic_support(expr::parse("3.5")).empty());
  EXPECT_EQ(expr::syntactic_support(expr::parse("x2 - x2 + x1")), (std::set<std::string>{"x1", "x2"}));
}
