#include "ferro/algebra.hpp"
#include "ferro/constitutive.hpp"

#include <doctest.h>

#include <cstdlib>
#include <random>

using namespace ferro;

namespace {

std::mt19937& rng() {
  static std::mt19937 gen = [] {
    const char* s = std::getenv("FERRO_TEST_SEED");
    return std::mt19937(s ? std::stoul(s) : 12345u);
  }();
  return gen;
}

Eigen::MatrixXd random_sym(int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = u(rng());
  return 0.5 * (a + a.transpose());
}

}  // namespace

TEST_CASE("packed identity") {
  Eigen::VectorXd v = voigt_pack(Eigen::MatrixXd::Identity(3, 3));
  Eigen::VectorXd expect(6);
  expect << 1, 1, 1, 0, 0, 0;
  CHECK((v - expect).norm() == doctest::Approx(0.0));
}

TEST_CASE("pack round trip") {
  for (int dim : {2, 3}) {
    for (int t = 0; t < 20; ++t) {
      Eigen::MatrixXd a = random_sym(dim);
      Eigen::VectorXd v = voigt_pack(a);
      CHECK((voigt_unpack(v) - a).norm() <= 1e-15 * (1.0 + a.norm()));
      CHECK((voigt_pack(voigt_unpack(v)) - v).norm() <= 1e-15 * (1.0 + v.norm()));
    }
  }
}

TEST_CASE("double contraction of diagonal tensors") {
  Eigen::MatrixXd a = Eigen::Vector3d(1, 2, 3).asDiagonal();
  Eigen::MatrixXd b = Eigen::Vector3d(4, 5, 6).asDiagonal();
  CHECK(voigt_pack(a).dot(voigt_pack(b)) == doctest::Approx(32.0));
}

TEST_CASE("inner products preserved by the packing") {
  for (int dim : {2, 3}) {
    for (int t = 0; t < 100; ++t) {
      Eigen::MatrixXd a = random_sym(dim), b = random_sym(dim);
      const double direct = (a.transpose() * b).trace();
      const double packed = voigt_pack(a).dot(voigt_pack(b));
      CHECK(std::abs(direct - packed) <= 1e-13 * a.norm() * b.norm());
    }
  }
}

TEST_CASE("pack rejects bad input") {
  CHECK_THROWS_AS(voigt_pack(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = 1.0;  // not symmetric
  CHECK_THROWS_AS(voigt_pack(a), std::invalid_argument);
  CHECK_THROWS_AS(voigt_unpack(Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST_CASE("conversion in the uncoupled limit") {
  const double eps = 1.2e-8;
  for (int dim : {2, 3}) {
    const Stiffness ce = isotropic_stiffness(dim, 3e10, 0.3);
    const Piezo d{dim, Eigen::MatrixXd::Zero(dim, voigt_size(dim))};
    const Dielectric es{dim, eps * Eigen::MatrixXd::Identity(dim, dim)};
    const MaterialTensors mt = convert_material_tensors(ce, d, es);
    CHECK(mt.h.norm() == doctest::Approx(0.0));
    CHECK((mt.c - ce.m).norm() <= 1e-12 * ce.m.norm());
    CHECK((mt.beta - Eigen::MatrixXd::Identity(dim, dim) / eps).norm() <=
          1e-12 / eps);
  }
}

TEST_CASE("conversion fails on a singular permittivity") {
  const Stiffness ce = isotropic_stiffness(3, 3e10, 0.3);
  const Piezo d{3, Eigen::MatrixXd::Zero(3, 6)};
  const Dielectric es{3, Eigen::MatrixXd::Zero(3, 3)};
  CHECK_THROWS_AS(convert_material_tensors(ce, d, es), std::invalid_argument);
}

// Oracle for the conversion: evaluate the response of a random state through
// the field-form law T = cE S - e^T E, D = e S + eps E and through the
// converted set; the two routes must agree.
TEST_CASE("conversion round trip against the field-form law") {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MaterialParams mp;
  for (int dim : {2, 3}) {
    const int nv = voigt_size(dim);
    const Stiffness ce = isotropic_stiffness(dim, mp.E_Y, mp.nu);
    const Dielectric es{dim, mp.eps * Eigen::MatrixXd::Identity(dim, dim)};
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd pol(dim);
      for (int k = 0; k < dim; ++k) pol[k] = 0.3 * u(rng());
      const Piezo d = piezo_tensor(pol, mp);
      const MaterialTensors mt = convert_material_tensors(ce, d, es);

      Eigen::VectorXd s(nv), efield(dim);
      for (int a = 0; a < nv; ++a) s[a] = 1e-3 * u(rng());
      for (int k = 0; k < dim; ++k) efield[k] = 1e6 * u(rng());

      const Eigen::MatrixXd e = d.m * ce.m;
      const Eigen::VectorXd t_se = ce.m * s - e.transpose() * efield;
      const Eigen::VectorXd dvec = e * s + es.m * efield;

      const Eigen::VectorXd t_sd = mt.c * s - mt.h.transpose() * dvec;
      const Eigen::VectorXd e_sd = -mt.h * s + mt.beta * dvec;
      CHECK((t_sd - t_se).norm() <= 1e-12 * (1.0 + t_se.norm()));
      CHECK((e_sd - efield).norm() <= 1e-12 * (1.0 + efield.norm()));
    }
  }
}

TEST_CASE("smallest eigenvalue of symmetric matrices") {
  CHECK(spd_min_eigenvalue(Eigen::MatrixXd::Identity(9, 9)) ==
        doctest::Approx(1.0));
  Eigen::MatrixXd d2 = Eigen::Vector2d(2, 5).asDiagonal();
  CHECK(spd_min_eigenvalue(d2) == doctest::Approx(2.0));
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(spd_min_eigenvalue(bad), std::invalid_argument);
}

TEST_CASE("compound material matrix stays positive definite") {
  MaterialParams cube;  // electroded-cube constants
  MaterialParams beam = cube;
  beam.m = 1.1;
  beam.eps = 1.5e-8;
  beam.d31 = -2.74e-10;
  beam.d33 = 5.93e-10;
  beam.H0 = 1e6;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const MaterialParams& mp : {cube, beam}) {
    CHECK(spd_min_eigenvalue(compound_matrix(material_tensors_at(
              Eigen::Vector3d::Zero(), mp))) > 0.0);
    for (int t = 0; t < 50; ++t) {
      Eigen::Vector3d pol(u(rng()), u(rng()), u(rng()));
      pol *= 0.99 * mp.P0;
      CHECK(spd_min_eigenvalue(compound_matrix(material_tensors_at(pol, mp))) >
            0.0);
    }
  }
}
