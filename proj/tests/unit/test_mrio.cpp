#include "biovalent/mrio.hpp"
#include "biovalent/mrio_io.hpp"

#include "test_support.hpp"

using namespace biovalent;
using namespace biovalent::mrio;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using test::max_abs_diff;

namespace {

RegionSectorIndex one_region() { return RegionSectorIndex({"R"}, {"a", "b"}); }

MatrixXd mat2(double a, double b, double c, double d) {
  MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

// Attribution by explicit summation over (source sector, supplying region).
MatrixXd brute_attribution(const VectorXd& f, const MatrixXd& l, const MatrixXd& y, const VectorXd& x,
                           const RegionSectorIndex& idx) {
  const std::size_t R = idx.region_count(), S = idx.sector_count();
  MatrixXd out = MatrixXd::Zero(R, R * S);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < R; ++j)
      for (std::size_t k = 0; k < S; ++k) {
        double acc = 0;
        for (std::size_t sct = 0; sct < S; ++sct)
          for (std::size_t r = 0; r < R; ++r) {
            const auto src = idx.position(i, sct), dst = idx.position(r, k);
            acc += f(src) / x(src) * l(src, dst) * y(dst, j);
          }
        out(i, j * S + k) = acc;
      }
  return out;
}

MatrixXd neumann(const MatrixXd& a) {
  MatrixXd sum = MatrixXd::Identity(a.rows(), a.cols());
  MatrixXd term = sum;
  for (int p = 1; p < 10000; ++p) {
    term = term * a;
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-14) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("region-sector index is region-major") {
  RegionSectorIndex idx({"FIN", "BRA"}, {"AGR", "FOR", "SRV"});
  CHECK(idx.size() == 6);
  CHECK(idx.position("BRA", "AGR") == 3);
  CHECK(idx.region_of(4) == 1);
  CHECK(idx.sector_of(4) == 1);
  CHECK(idx.label(5) == "BRA:SRV");
  CHECK(idx.position_of_label("FIN:FOR") == 1);
  CHECK_THROWS_AS(RegionSectorIndex({"A", "A"}, {"x"}), StructuralError);
  CHECK_THROWS_AS(RegionSectorIndex({"A"}, {"x", "x"}), StructuralError);
  CHECK_THROWS(idx.position("SWE", "AGR"));
}

TEST_CASE("derive_output") {
  MatrixXd y(2, 1);
  y << 70, 130;
  CHECK(derive_output(mat2(10, 20, 30, 40), y) == VectorXd((VectorXd(2) << 100, 200).finished()));
  MatrixXd y2(2, 2);
  y2 << 2, 3, 3, 4;
  CHECK(derive_output(MatrixXd::Zero(2, 2), y2) == VectorXd((VectorXd(2) << 5, 7).finished()));
  CHECK(derive_output(mat2(1, 0, 0, 1), MatrixXd::Zero(2, 1)) == VectorXd::Ones(2));
  CHECK_THROWS_AS(derive_output(MatrixXd::Zero(2, 3), y), StructuralError);
  CHECK_THROWS_AS(derive_output(MatrixXd::Zero(2, 2), MatrixXd::Zero(3, 1)), StructuralError);
}

TEST_CASE("build_coefficients") {
  const VectorXd x = (VectorXd(2) << 100, 200).finished();
  CHECK(max_abs_diff(build_coefficients(mat2(10, 20, 30, 40), x), mat2(0.1, 0.1, 0.3, 0.2)) < 1e-15);
  CHECK(build_coefficients(MatrixXd::Zero(2, 2), VectorXd::Ones(2)).isZero(0));
  const auto idx = one_region();
  try {
    (void)build_coefficients(mat2(0, 5, 0, 5), (VectorXd(2) << 3, 0).finished(), &idx);
    FAIL("expected a degenerate-sector error");
  } catch (const DegenerateSectorError& e) {
    CHECK(e.position() == 1);
    CHECK(std::string(e.what()).find("(R, b)") != std::string::npos);
  }
  // A zero-output sector without inputs is simply empty.
  CHECK(build_coefficients(mat2(0, 0, 1, 0), (VectorXd(2) << 3, 0).finished()).col(1).isZero(0));
}

TEST_CASE("leontief_inverse examples") {
  CHECK(leontief_inverse(MatrixXd::Zero(2, 2)).isIdentity(1e-15));
  CHECK(leontief_inverse(MatrixXd::Constant(1, 1, 0.5))(0, 0) == doctest::Approx(2.0).epsilon(1e-15));

  // Closed-form 2x2 inverse of I - A with det 0.69.
  const MatrixXd expected = mat2(80, 10, 30, 90) / 69.0;
  const MatrixXd l = leontief_inverse(mat2(0.1, 0.1, 0.3, 0.2));
  CHECK(max_abs_diff(l, expected) < 1e-14);
  CHECK(l(0, 0) == doctest::Approx(1.15942).epsilon(1e-5));
  CHECK(l(1, 1) == doctest::Approx(1.30435).epsilon(1e-5));

  LeontiefOptions iterative;
  iterative.method = LeontiefMethod::iterative;
  CHECK(max_abs_diff(leontief_inverse(mat2(0.1, 0.1, 0.3, 0.2), iterative), expected) < 1e-10);
}

TEST_CASE("leontief_inverse errors") {
  CHECK_THROWS_AS(leontief_inverse(MatrixXd::Constant(1, 1, 1.0)), ProductivityError);
  CHECK_THROWS_AS(leontief_inverse(mat2(0.6, 0.6, 0.6, 0.6)), ProductivityError);
  CHECK_THROWS_AS(leontief_inverse(mat2(0.1, NAN, 0.3, 0.2)), InputError);
  CHECK_THROWS_AS(leontief_inverse(MatrixXd::Zero(2, 3)), StructuralError);
  // Column sums above one but a spectral radius below one is still productive.
  CHECK_NOTHROW(leontief_inverse(mat2(0.0, 1.5, 0.1, 0.0)));
}

TEST_CASE("leontief_inverse works for float scalars") {
  Eigen::MatrixXf a(2, 2);
  a << 0.1f, 0.1f, 0.3f, 0.2f;
  LeontiefOptions options;
  options.residual_tolerance = 1e-5;
  const Eigen::MatrixXf l = leontief_inverse(a, options);
  CHECK(l(0, 1) == doctest::Approx(10.0 / 69.0).epsilon(1e-5));
}

TEST_CASE("source_attribution single-region examples") {
  const auto idx = one_region();
  const VectorXd x = (VectorXd(2) << 100, 200).finished();
  const VectorXd f = (VectorXd(2) << 5, 10).finished();
  const MatrixXd y = (MatrixXd(2, 1) << 70, 130).finished();

  const auto identity = source_attribution<double>(f, MatrixXd::Identity(2, 2), y, x, idx);
  CHECK(identity.values(0, 0) == doctest::Approx(3.5));
  CHECK(identity.values(0, 1) == doctest::Approx(6.5));
  CHECK(identity.values.sum() == doctest::Approx(10.0));

  const MatrixXd l = mat2(80, 10, 30, 90) / 69.0;
  const auto t = source_attribution<double>(f, l, y, x, idx, "kg");
  CHECK(t.unit == "kg");
  CHECK(t.values(0, 0) == doctest::Approx(385.0 / 69.0).epsilon(1e-14));
  CHECK(t.values(0, 1) == doctest::Approx(650.0 / 69.0).epsilon(1e-14));
  CHECK(t.values(0, 0) == doctest::Approx(5.5797).epsilon(1e-4));
  CHECK(t.values.sum() == doctest::Approx(15.0).epsilon(1e-14));

  CHECK(source_attribution<double>(VectorXd::Zero(2), l, y, x, idx).values.isZero(0));
  CHECK_THROWS_AS(source_attribution<double>(f, l, y, (VectorXd(2) << 100, 0).finished(), idx),
                  DegenerateSectorError);
}

TEST_CASE("footprint_intensity examples") {
  const auto idx = one_region();
  const VectorXd x = (VectorXd(2) << 100, 200).finished();
  const VectorXd f = (VectorXd(2) << 5, 10).finished();
  const MatrixXd y = (MatrixXd(2, 1) << 70, 130).finished();
  const auto t = footprint_intensity<double>(f, mat2(80, 10, 30, 90) / 69.0, y, x, idx);
  CHECK(t.values(0) == doctest::Approx(5.5 / 69.0).epsilon(1e-14));
  CHECK(t.values(0) == doctest::Approx(0.07971).epsilon(1e-4));

  const auto ident = footprint_intensity<double>(f, MatrixXd::Identity(2, 2), y, x, idx);
  CHECK(ident.values(0) == doctest::Approx(0.05));
  CHECK(ident.values(1) == doctest::Approx(0.05));

  const MatrixXd y0 = (MatrixXd(2, 1) << 70, 0).finished();
  const auto z = footprint_intensity<double>(f, MatrixXd::Identity(2, 2), y0, x, idx);
  CHECK(z.values(1) == 0.0);
  CHECK(z.zero_demand[1]);
  CHECK_FALSE(z.zero_demand[0]);
}

TEST_CASE("demand_by_product follows the (j,k) column order") {
  RegionSectorIndex idx({"A", "B"}, {"x", "y"});
  MatrixXd y(4, 2);
  y << 1, 10, 2, 20, 3, 30, 4, 40;
  const VectorXd d = demand_by_product(y, idx);
  CHECK(d(0) == 4);   // A consumes x: 1 + 3
  CHECK(d(1) == 6);   // A consumes y: 2 + 4
  CHECK(d(2) == 40);  // B consumes x
  CHECK(d(3) == 60);
}

TEST_CASE("properties on random 3-region x 2-sector economies") {
  std::mt19937_64 rng(20240611);
  RegionSectorIndex idx({"R1", "R2", "R3"}, {"s1", "s2"});
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto e = test::random_economy(rng, 3, 2);
    const auto core = make_core<double>(idx, e.z, e.y);
    const auto sys = MrioSystem<double>::build(core);
    VectorXd f(6);
    for (int i = 0; i < 6; ++i) f(i) = u(rng);

    // Neumann equivalence.
    CHECK(max_abs_diff(sys.leontief(), neumann(sys.coefficients())) < 1e-8);

    // Brute-force attribution oracle.
    const auto t = source_attribution<double>(f, sys.leontief(), core.final_demand, core.output, idx);
    const MatrixXd brute = brute_attribution(f, sys.leontief(), core.final_demand, core.output, idx);
    CHECK(max_abs_diff(t.values, brute) < 1e-9 * brute.cwiseAbs().maxCoeff());

    // Y absorbs all net output, so all of f is attributed.
    CHECK(test::rel_err(t.values.sum(), f.sum()) < 1e-9);

    // Column totals against an independent QR solve of (I - A) q = y_(j,k).
    const Eigen::HouseholderQR<MatrixXd> qr(MatrixXd::Identity(6, 6) - sys.coefficients());
    const VectorXd s = f.cwiseQuotient(core.output);
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        VectorXd ycol = VectorXd::Zero(6);
        for (std::size_t r = 0; r < 3; ++r) ycol(idx.position(r, k)) = core.final_demand(idx.position(r, k), j);
        const double expected = s.dot(qr.solve(ycol));
        CHECK(test::rel_err(t.column_total(j * 2 + k), expected) < 1e-9);
      }

    // Scaling.
    const double alpha = 0.5 + u(rng);
    const auto scaled = source_attribution<double>(alpha * f, sys.leontief(), core.final_demand, core.output, idx);
    CHECK(max_abs_diff(scaled.values, alpha * t.values) <= 1e-12 * scaled.values.cwiseAbs().maxCoeff());

    CHECK((t.values.array() >= 0).all());
  }
}

TEST_CASE("permuting regions permutes attribution consistently") {
  std::mt19937_64 rng(99);
  RegionSectorIndex idx({"R1", "R2", "R3"}, {"s1", "s2"});
  RegionSectorIndex perm_idx({"R3", "R1", "R2"}, {"s1", "s2"});
  const std::vector<std::size_t> region_map{2, 0, 1};  // new region r is old region region_map[r]
  const auto e = test::random_economy(rng, 3, 2);
  VectorXd f = VectorXd::LinSpaced(6, 1, 6);

  Eigen::PermutationMatrix<Eigen::Dynamic> p(6);  // new position -> old position
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t s = 0; s < 2; ++s) p.indices()(static_cast<int>(perm_idx.position(r, s))) =
        static_cast<int>(idx.position(region_map[r], s));
  const MatrixXd pm = p.toDenseMatrix().cast<double>().transpose();  // (pm * v)(new) = v(old)
  MatrixXd y_perm(6, 3);
  for (std::size_t j = 0; j < 3; ++j) y_perm.col(static_cast<Eigen::Index>(j)) = pm * e.y.col(static_cast<Eigen::Index>(region_map[j]));

  const auto a = MrioSystem<double>::build(make_core<double>(idx, e.z, e.y));
  const auto b = MrioSystem<double>::build(make_core<double>(perm_idx, pm * e.z * pm.transpose(), y_perm));
  const auto ta = a.attribute({"f", "kg", f});
  const auto tb = b.attribute({"f", "kg", pm * f});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        CHECK(tb.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j * 2 + k)) ==
              doctest::Approx(ta.values(static_cast<Eigen::Index>(region_map[i]),
                                        static_cast<Eigen::Index>(region_map[j] * 2 + k)))
                  .epsilon(1e-10));
  CHECK(tb.values.sum() == doctest::Approx(ta.values.sum()).epsilon(1e-12));
}

TEST_CASE("make_core validation") {
  const auto idx = one_region();
  const MatrixXd y = (MatrixXd(2, 1) << 70, 130).finished();
  CHECK(make_core<double>(idx, mat2(10, 20, 30, 40), y).output == VectorXd((VectorXd(2) << 100, 200).finished()));
  CHECK_THROWS_AS(make_core<double>(idx, mat2(-1, 0, 0, 0), y), InputError);
  CHECK_THROWS_AS(make_core<double>(idx, mat2(10, 20, 30, 40), y, VectorXd((VectorXd(2) << 10, 200).finished())),
                  InputError);
  CHECK_THROWS_AS(make_core<double>(idx, MatrixXd::Zero(3, 3), y), StructuralError);
}

TEST_CASE("aggregate_stressor_rows") {
  const auto idx = one_region();
  SatelliteTable<double> table(idx, {{"Water Blue - Agriculture", "Mm3", (VectorXd(2) << 1, 2).finished()},
                                     {"CO2", "kg", (VectorXd(2) << 9, 9).finished()},
                                     {"Water Blue - Domestic", "Mm3", (VectorXd(2) << 3, 4).finished()}});
  Diagnostics d;
  const auto merged = aggregate_stressor_rows(table, "Water Blue - .*", "Water Blue - Total", &d);
  REQUIRE(merged.rows().size() == 2);
  CHECK(merged.rows()[0].name == "Water Blue - Total");
  CHECK(merged.rows()[0].values == VectorXd((VectorXd(2) << 4, 6).finished()));
  CHECK(merged.rows()[0].unit == "Mm3");
  CHECK(merged.rows()[1].name == "CO2");
  CHECK(d.warnings.empty());

  const auto same = aggregate_stressor_rows(table, "Nothing.*", "X", &d);
  CHECK(same.rows().size() == 3);
  CHECK(d.warnings.size() == 1);

  CHECK_THROWS_AS(aggregate_stressor_rows(table, "Water.*|CO2", "Mixed"), UnitError);
}

TEST_CASE("satellite table invariants") {
  const auto idx = one_region();
  CHECK_THROWS_AS(SatelliteTable<double>(idx, {{"a", "kg", VectorXd::Zero(3)}}), StructuralError);
  CHECK_THROWS_AS(SatelliteTable<double>(idx, {{"a", "", VectorXd::Zero(2)}}), InputError);
  CHECK_THROWS_AS(SatelliteTable<double>(idx, {{"a", "kg", VectorXd::Zero(2)}, {"a", "kg", VectorXd::Zero(2)}}),
                  InputError);
}

TEST_CASE("reading an economy from CSV") {
  const auto flows = CsvTable::parse(
      "label,FIN:AGR,FIN:SRV,BRA:AGR,BRA:SRV\n"
      "BRA:AGR,1,0,2,0\n"
      "FIN:AGR,3,1,0,0\n"
      "FIN:SRV,0,2,0,1\n"
      "BRA:SRV,0,0,1,4\n",
      "flows.csv");
  const auto demand = CsvTable::parse(
      "label,FIN,BRA\nFIN:AGR,5,1\nFIN:SRV,6,0\nBRA:AGR,2,7\nBRA:SRV,0,9\n", "fd.csv");
  const auto core = read_economic_core(flows, demand);
  CHECK(core.index.regions() == std::vector<std::string>{"FIN", "BRA"});
  CHECK(core.flows(2, 0) == 1);  // BRA:AGR row, FIN:AGR column
  CHECK(core.flows(0, 0) == 3);
  CHECK(core.output(0) == 4 + 6);

  const auto sat = read_satellite(
      CsvTable::parse("stressor,unit,FIN:AGR,FIN:SRV,BRA:AGR,BRA:SRV\nland,m2a,1,2,3,4\n", "sat.csv"), core.index);
  CHECK(sat.row("land").values(3) == 4);

  const auto gross = CsvTable::parse("label,output\nFIN:AGR,10\nFIN:SRV,9\nBRA:AGR,12\nBRA:SRV,14\n", "x.csv");
  CHECK(read_economic_core(flows, demand, &gross).output(1) == 9);

  const auto missing_row = CsvTable::parse(
      "label,FIN:AGR,FIN:SRV,BRA:AGR,BRA:SRV\nFIN:AGR,1,0,0,0\nFIN:SRV,0,1,0,0\nBRA:AGR,0,0,1,0\nBRA:AGR,0,0,1,0\n",
      "flows.csv");
  CHECK_THROWS_AS(read_economic_core(missing_row, demand), ParseError);
  const auto not_region_major = CsvTable::parse("label,FIN:AGR,BRA:AGR,FIN:SRV,BRA:SRV\n", "flows.csv");
  CHECK_THROWS_AS(read_economic_core(not_region_major, demand), ParseError);
  CHECK_THROWS_AS(read_satellite(CsvTable::parse("stressor,unit,FIN:AGR\nland,m2a,1\n", "sat.csv"), core.index),
                  ParseError);
}

TEST_CASE("stressor diagnostics report totals") {
  const auto idx = one_region();
  const auto sys = MrioSystem<double>::build(
      make_core<double>(idx, mat2(10, 20, 30, 40), (MatrixXd(2, 1) << 70, 130).finished()));
  SatelliteTable<double> table(idx, {{"f", "kg", (VectorXd(2) << 5, 10).finished()}});
  const auto d = stressor_diagnostics(table, sys);
  REQUIRE(d.size() == 1);
  CHECK(d[0].direct_total == 15);
  CHECK(d[0].attributed_total == doctest::Approx(15.0));
  CHECK(d[0].negative_entries == 0);
}
