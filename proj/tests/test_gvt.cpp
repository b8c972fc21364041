#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "avt/gvt.hpp"
#include "gen.hpp"

using namespace avt;

namespace {

const Interval kT(-1, 1);
constexpr double kPiT = std::numbers::pi;
constexpr double kPi2 = kPiT * kPiT;

ScalarFnD cosine_prior_d() {
  return [](const Eigen::VectorXd& t) {
    double v = 1.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) v *= std::pow(std::cos(0.5 * kPiT * t[i]), 2);
    return v;
  };
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an avt::Error";
  return ErrorCode::ConfigError;
}

}  // namespace

TEST(GammaMatrix, ScalarCosineIsClassical) {
  for (double c : {0.0, 1.0, 10.0}) {
    const auto g = gamma_matrix(MultiPath::isotropic({kT}, c), cosine_prior_d(), ApproxFn::identity(1),
                                AugmentationD::product_cosine({kT}));
    EXPECT_NEAR(g.gamma(0, 0), 1.0 / (c + kPi2), 1e-9);
  }
}

TEST(GammaMatrix, ConstantPhiGivesZero) {
  Eigen::VectorXd c(2);
  c << 0.3, -1.0;
  const auto g = gamma_matrix(MultiPath::isotropic({kT}, 2.0), cosine_prior_d(), ApproxFn::constant(c, 1),
                              AugmentationD::product_cosine({kT}));
  EXPECT_EQ(g.gamma.rows(), 2);
  EXPECT_DOUBLE_EQ(g.gamma.norm(), 0.0);
}

TEST(GammaMatrix, TwoDimensionalProductCosine) {
  const Box box{kT, kT};
  const double c = 3.0;
  GvtOptions opt;
  opt.nodes = 129;
  const auto g = gamma_matrix(MultiPath::isotropic(box, c), cosine_prior_d(), ApproxFn::identity(2),
                              AugmentationD::product_cosine(box), opt);
  EXPECT_NEAR(g.gamma(0, 0), 1.0 / (c + kPi2), 1e-8);
  EXPECT_NEAR(g.gamma(1, 1), 1.0 / (c + kPi2), 1e-8);
  EXPECT_NEAR(g.gamma(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(g.prior_mass, 1.0, 1e-10);
}

TEST(GammaMatrix, SymmetricPsdWithAnisotropicInformation) {
  const Box box{kT, Interval(0, 2)};
  const auto path = MultiPath::make(box, [](const Eigen::VectorXd& t) {
    Eigen::MatrixXd m(2, 2);
    m << 2.0 + t[0] * t[0], 0.5, 0.5, 1.0 + t[1];
    return m;
  });
  const auto phi = ApproxFn::finite_difference(box, 3, [](const Eigen::VectorXd& t) {
    Eigen::VectorXd v(3);
    v << t[0] + 0.2 * t[1] * t[1], std::sin(t[1]), t[0] * t[1];
    return v;
  });
  GvtOptions opt;
  opt.nodes = 65;
  const auto g = gamma_matrix(path, [](const Eigen::VectorXd&) { return 0.5 * 0.5; }, phi,
                              AugmentationD::product_cosine(box), opt);
  EXPECT_EQ(g.gamma.rows(), 3);
  EXPECT_LE((g.gamma - g.gamma.transpose()).norm(), 1e-14);
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g.gamma).eigenvalues()[0];
  EXPECT_GE(lmin, -1e-10 * g.gamma.trace());
}

TEST(GammaMatrix, DeterministicAcrossThreadCounts) {
  const Box box{kT, kT};
  GvtOptions one, three;
  one.nodes = three.nodes = 65;
  one.threads = 1;
  three.threads = 3;
  const auto a = gamma_matrix(MultiPath::isotropic(box, 1.0), cosine_prior_d(), ApproxFn::identity(2),
                              AugmentationD::product_cosine(box), one);
  const auto b = gamma_matrix(MultiPath::isotropic(box, 1.0), cosine_prior_d(), ApproxFn::identity(2),
                              AugmentationD::product_cosine(box), three);
  EXPECT_EQ(a.gamma, b.gamma);
}

TEST(GammaMatrix, SingularInformationThrows) {
  const auto zero = AugmentationD::make(
      {kT}, [](const Eigen::VectorXd&) { return 0.0; }, [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(1); });
  EXPECT_EQ(code_of([&] {
              gamma_matrix(MultiPath::isotropic({kT}, 0.0), cosine_prior_d(), ApproxFn::identity(1), zero);
            }),
            ErrorCode::SingularInformation);
}

TEST(GvtTypes, Validation) {
  EXPECT_EQ(code_of([] {
              AugmentationD::make(
                  {kT}, [](const Eigen::VectorXd&) { return 1.0; },
                  [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(1); });
            }),
            ErrorCode::BoundaryViolation);
  EXPECT_EQ(code_of([] { ApproxFn::scalar(kT, [](double t) { return t * t; }, [](double t) { return t; }); }),
            ErrorCode::DomainError);
  EXPECT_EQ(code_of([] {
              MultiPath::make({kT}, [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Constant(1, 1, -1.0); });
            }),
            ErrorCode::DomainError);
  EXPECT_EQ(code_of([] { MultiPath::isotropic({kT, kT, kT, kT}, 1.0); }), ErrorCode::DomainError);
}

TEST(GvtBound, RecoversScalarBound) {
  for (double c : {0.0, 1.0, 10.0}) {
    const auto r = gvt_minimax_bound(MultiPath::isotropic({kT}, c), ApproxFn::identity(1), ApproxFn::identity(1),
                                     cosine_prior_d(), AugmentationD::product_cosine({kT}));
    EXPECT_NEAR(r.value, 1.0 / (c + kPi2), 1e-9);
    EXPECT_DOUBLE_EQ(r.approx_error, 0.0);
  }
}

TEST(GvtBound, ApproximationErrorClampsToZero) {
  const auto far = ApproxFn::scalar(kT, [](double t) { return t + 5.0; }, [](double) { return 1.0; });
  const auto r = gvt_minimax_bound(MultiPath::isotropic({kT}, 1.0), ApproxFn::identity(1), far, cosine_prior_d(),
                                   AugmentationD::product_cosine({kT}));
  EXPECT_NEAR(r.approx_error, 5.0, 1e-9);
  EXPECT_EQ(r.value, 0.0);
}

TEST(GvtBound, PerturbedPhiNeverBeatsIdentity) {
  avt_test::Gen gen(2024);
  for (double c : {0.0, 1.0, 10.0}) {
    const double classical = 1.0 / (c + kPi2);
    const auto path = MultiPath::isotropic({kT}, c);
    for (int i = 0; i < 20; ++i) {
      const double eps = gen.uniform(-0.3, 0.3);
      const int j = gen.integer(1, 3);
      const auto phi = ApproxFn::scalar(
          kT, [eps, j](double t) { return t + eps * std::sin(j * kPiT * t); },
          [eps, j](double t) { return 1.0 + eps * j * kPiT * std::cos(j * kPiT * t); });
      const auto r = gvt_minimax_bound(path, ApproxFn::identity(1), phi, cosine_prior_d(),
                                       AugmentationD::product_cosine({kT}));
      EXPECT_LE(r.value, classical + 1e-6);
    }
  }
  const auto r = gvt_minimax_bound(
      MultiPath::isotropic({kT}, 1.0), ApproxFn::identity(1),
      ApproxFn::scalar(
          kT, [](double t) { return t + 0.1 * std::sin(kPiT * t); },
          [](double t) { return 1.0 + 0.1 * kPiT * std::cos(kPiT * t); }),
      cosine_prior_d(), AugmentationD::product_cosine({kT}));
  EXPECT_LE(r.value, 1.0 / (1.0 + kPi2) + 1e-6);
}

TEST(GvtBound, MonotoneInApproximationError) {
  const auto path = MultiPath::isotropic({kT}, 2.0);
  double prev = INFINITY;
  for (double shift : {0.0, 0.05, 0.1, 0.2, 0.4}) {
    const auto phi = ApproxFn::scalar(kT, [shift](double t) { return t + shift; }, [](double) { return 1.0; });
    const double v =
        gvt_minimax_bound(path, ApproxFn::identity(1), phi, cosine_prior_d(), AugmentationD::product_cosine({kT})).value;
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(RecoverScalar, MatchesMinimaxBound) {
  EXPECT_TRUE(recover_scalar_check(0.0, Augmentation::cosine()).matches);
  EXPECT_NEAR(recover_scalar_check(0.0, Augmentation::cosine()).gvt_value, 0.25, 1e-6);
  for (double c : {0.0, 1.0, 10.0}) {
    for (const auto& a : {Augmentation::cosine(), Augmentation::power(1.0), Augmentation::power(2.0)}) {
      const auto r = recover_scalar_check(c, a);
      EXPECT_TRUE(r.matches) << c << " diff " << r.abs_diff;
    }
  }
}

TEST(RecoverScalar, ConstantPhiReportsMismatch) {
  Eigen::VectorXd c(1);
  c << 0.0;
  const auto r = recover_scalar_check(0.0, Augmentation::cosine(), ApproxFn::constant(c, 1));
  EXPECT_EQ(r.gvt_value, 0.0);
  EXPECT_GT(r.bounds_value, 0.2);
  EXPECT_FALSE(r.matches);
}
