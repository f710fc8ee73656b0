#pragma once

// Multi-regional input-output engine: coefficient matrices, the Leontief
// inverse, and consumption-based attribution of satellite stressors to the
// region where they physically occur.

#include "biovalent/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace biovalent::mrio {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Ordered regions x sectors. Flattened positions enumerate (region, sector)
/// pairs region-major: position = region * sector_count + sector.
class RegionSectorIndex {
 public:
  RegionSectorIndex() = default;
  RegionSectorIndex(std::vector<std::string> regions, std::vector<std::string> sectors);

  std::size_t region_count() const noexcept { return regions_.size(); }
  std::size_t sector_count() const noexcept { return sectors_.size(); }
  std::size_t size() const noexcept { return regions_.size() * sectors_.size(); }

  const std::vector<std::string>& regions() const noexcept { return regions_; }
  const std::vector<std::string>& sectors() const noexcept { return sectors_; }

  std::size_t position(std::size_t region, std::size_t sector) const noexcept {
    return region * sectors_.size() + sector;
  }
  /// Throws StructuralError for unknown codes.
  std::size_t position(std::string_view region, std::string_view sector) const;
  std::size_t region_of(std::size_t position) const noexcept { return position / sectors_.size(); }
  std::size_t sector_of(std::size_t position) const noexcept { return position % sectors_.size(); }

  std::optional<std::size_t> find_region(std::string_view code) const;
  std::optional<std::size_t> find_sector(std::string_view code) const;
  std::size_t region(std::string_view code) const;
  std::size_t sector(std::string_view code) const;

  /// "region:sector"
  std::string label(std::size_t position) const;
  /// Inverse of label(); throws StructuralError.
  std::size_t position_of_label(std::string_view label) const;

  bool operator==(const RegionSectorIndex& other) const {
    return regions_ == other.regions_ && sectors_ == other.sectors_;
  }

 private:
  std::vector<std::string> regions_;
  std::vector<std::string> sectors_;
};

/// Monetary core of the input-output table.
template <typename Scalar>
struct EconomicCore {
  RegionSectorIndex index;
  Matrix<Scalar> flows;         ///< Z, N x N
  Matrix<Scalar> final_demand;  ///< Y, N x regions (categories pre-summed per consuming region)
  Vector<Scalar> output;        ///< x, length N
};

template <typename Scalar>
struct StressorRow {
  std::string name;
  std::string unit;
  Vector<Scalar> values;  ///< quantity at each producing (region, sector)
};

/// Named stressor accounts over the producing index.
template <typename Scalar>
class SatelliteTable {
 public:
  SatelliteTable() = default;
  SatelliteTable(RegionSectorIndex index, std::vector<StressorRow<Scalar>> rows)
      : index_(std::move(index)), rows_(std::move(rows)) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto& row = rows_[r];
      if (row.unit.empty()) throw InputError("stressor \"" + row.name + "\" has no unit");
      if (static_cast<std::size_t>(row.values.size()) != index_.size())
        throw StructuralError("stressor \"" + row.name + "\" has " + std::to_string(row.values.size()) +
                              " values, expected " + std::to_string(index_.size()));
      for (std::size_t q = 0; q < r; ++q)
        if (rows_[q].name == row.name) throw InputError("duplicate stressor \"" + row.name + "\"");
    }
  }

  const RegionSectorIndex& index() const noexcept { return index_; }
  const std::vector<StressorRow<Scalar>>& rows() const noexcept { return rows_; }

  const StressorRow<Scalar>* find(std::string_view name) const {
    auto it = std::find_if(rows_.begin(), rows_.end(), [&](const auto& r) { return r.name == name; });
    return it == rows_.end() ? nullptr : &*it;
  }
  const StressorRow<Scalar>& row(std::string_view name) const {
    if (const auto* r = find(name)) return *r;
    throw InputError("unknown stressor \"" + std::string(name) + "\"");
  }

 private:
  RegionSectorIndex index_;
  std::vector<StressorRow<Scalar>> rows_;
};

/// values(i, (j,k)): stressor occurring in impact region i that is driven by
/// final consumption of product k in consuming region j.
template <typename Scalar>
struct AttributionTensor {
  RegionSectorIndex index;
  std::string unit;
  Matrix<Scalar> values;  ///< regions x N

  Scalar column_total(std::size_t column) const { return values.col(column).sum(); }
};

/// Stressor per unit of final demand for each (consuming region, product).
template <typename Scalar>
struct IntensityTable {
  RegionSectorIndex index;
  std::string unit;
  Vector<Scalar> values;           ///< length N, position (j,k)
  std::vector<bool> zero_demand;   ///< columns without final demand (value held at 0)
};

// ---------------------------------------------------------------------------
// Aggregation operators

/// G with G(i, (i,s)) = 1: sums a producing-index vector into regions.
template <typename Scalar>
Matrix<Scalar> region_aggregator(const RegionSectorIndex& index) {
  Matrix<Scalar> g = Matrix<Scalar>::Zero(index.region_count(), index.size());
  for (std::size_t n = 0; n < index.size(); ++n) g(index.region_of(n), n) = Scalar(1);
  return g;
}

/// H with H((r,k), k) = 1: sums over supplying regions per product.
template <typename Scalar>
Matrix<Scalar> sector_gather(const RegionSectorIndex& index) {
  Matrix<Scalar> h = Matrix<Scalar>::Zero(index.size(), index.sector_count());
  for (std::size_t n = 0; n < index.size(); ++n) h(n, index.sector_of(n)) = Scalar(1);
  return h;
}

namespace detail {

inline std::string describe_position(std::size_t n, const RegionSectorIndex* index) {
  if (index && n < index->size()) return "(" + index->regions()[index->region_of(n)] + ", " +
                                         index->sectors()[index->sector_of(n)] + ")";
  return "column " + std::to_string(n + 1);
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string(what) + " contains NaN or Inf");
}

}  // namespace detail

/// x = Z·1 + Y·1.
template <typename DerivedZ, typename DerivedY>
Vector<typename DerivedZ::Scalar> derive_output(const Eigen::MatrixBase<DerivedZ>& flows,
                                                const Eigen::MatrixBase<DerivedY>& final_demand) {
  if (flows.rows() != flows.cols())
    throw StructuralError("flow matrix columns: expected " + std::to_string(flows.rows()) + ", found " +
                          std::to_string(flows.cols()));
  if (final_demand.rows() != flows.rows())
    throw StructuralError("final demand rows: expected " + std::to_string(flows.rows()) + ", found " +
                          std::to_string(final_demand.rows()));
  detail::require_finite(flows, "flow matrix");
  detail::require_finite(final_demand, "final demand");
  return flows.rowwise().sum() + final_demand.rowwise().sum();
}

/// Validates shapes and signs; derives x when it is not supplied.
template <typename Scalar>
EconomicCore<Scalar> make_core(RegionSectorIndex index, Matrix<Scalar> flows, Matrix<Scalar> final_demand,
                               std::optional<Vector<Scalar>> output = std::nullopt) {
  const auto n = static_cast<Eigen::Index>(index.size());
  if (flows.rows() != n) throw StructuralError("flow matrix rows: expected " + std::to_string(n) + ", found " +
                                               std::to_string(flows.rows()));
  if (final_demand.cols() != static_cast<Eigen::Index>(index.region_count()))
    throw StructuralError("final demand columns: expected " + std::to_string(index.region_count()) +
                          ", found " + std::to_string(final_demand.cols()));
  Vector<Scalar> derived = derive_output(flows, final_demand);
  if ((flows.array() < Scalar(0)).any()) throw InputError("flow matrix has negative entries");
  if ((final_demand.array() < Scalar(0)).any()) throw InputError("final demand has negative entries");

  if (output) {
    if (output->size() != n) throw StructuralError("gross output length: expected " + std::to_string(n) +
                                                   ", found " + std::to_string(output->size()));
    detail::require_finite(*output, "gross output");
    if ((output->array() < Scalar(0)).any()) throw InputError("gross output has negative entries");
    const Scalar tol = Scalar(1e-6) * std::max(output->maxCoeff(), Scalar(0));
    const Vector<Scalar> intermediate = flows.rowwise().sum();
    for (Eigen::Index i = 0; i < n; ++i)
      if ((*output)(i) < intermediate(i) - tol)
        throw InputError("gross output below intermediate use at " + index.label(static_cast<std::size_t>(i)));
  }
  return EconomicCore<Scalar>{std::move(index), std::move(flows), std::move(final_demand),
                              output ? std::move(*output) : std::move(derived)};
}

/// A(n,m) = Z(n,m) / x(m). Zero-output columns must be empty.
template <typename DerivedZ, typename DerivedX>
Matrix<typename DerivedZ::Scalar> build_coefficients(const Eigen::MatrixBase<DerivedZ>& flows,
                                                     const Eigen::MatrixBase<DerivedX>& output,
                                                     const RegionSectorIndex* index = nullptr) {
  using Scalar = typename DerivedZ::Scalar;
  if (flows.rows() != flows.cols() || flows.cols() != output.size())
    throw StructuralError("coefficient inputs: flow matrix " + std::to_string(flows.rows()) + "x" +
                          std::to_string(flows.cols()) + " vs output length " + std::to_string(output.size()));
  Matrix<Scalar> a(flows.rows(), flows.cols());
  for (Eigen::Index m = 0; m < flows.cols(); ++m) {
    const Scalar xm = output(m);
    if (xm == Scalar(0)) {
      if (!flows.col(m).isZero(0))
        throw DegenerateSectorError(static_cast<std::size_t>(m),
                                    "zero output with nonzero inputs at " +
                                        detail::describe_position(static_cast<std::size_t>(m), index));
      a.col(m).setZero();
    } else {
      a.col(m) = flows.col(m) / xm;
    }
  }
  return a;
}

enum class LeontiefMethod { direct, iterative };

struct LeontiefOptions {
  LeontiefMethod method = LeontiefMethod::direct;
  double residual_tolerance = 1e-8;  ///< bound on max |(I - A) L - I|
};

/// Largest |eigenvalue| of A.
template <typename Derived>
typename Derived::Scalar spectral_radius(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return Scalar(0);
  Eigen::EigenSolver<Matrix<Scalar>> solver(a.eval(), false);
  if (solver.info() != Eigen::Success) throw ProductivityError("eigenvalue iteration did not converge");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// L = (I - A)^-1, verified by its residual.
template <typename Derived>
Matrix<typename Derived::Scalar> leontief_inverse(const Eigen::MatrixBase<Derived>& coefficients,
                                                  const LeontiefOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  if (coefficients.rows() != coefficients.cols()) throw StructuralError("coefficient matrix must be square");
  detail::require_finite(coefficients, "coefficient matrix");
  const Eigen::Index n = coefficients.rows();
  const Matrix<Scalar> a = coefficients;

  // A column- or row-sum norm below one bounds the spectral radius; otherwise compute it.
  const Scalar norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  const Scalar norm_inf = a.cwiseAbs().rowwise().sum().maxCoeff();
  if (n > 0 && norm1 >= Scalar(1) && norm_inf >= Scalar(1)) {
    const Scalar rho = spectral_radius(a);
    if (!(rho < Scalar(1)))
      throw ProductivityError("spectral radius of the coefficient matrix is " + std::to_string(double(rho)) +
                              " (must be below 1)");
  }

  const Matrix<Scalar> system = Matrix<Scalar>::Identity(n, n) - a;
  Matrix<Scalar> inverse;
  if (options.method == LeontiefMethod::direct) {
    Eigen::FullPivLU<Matrix<Scalar>> lu(system);
    if (!lu.isInvertible()) throw ProductivityError("I - A is singular");
    inverse = lu.inverse();
  } else {
    Eigen::SparseMatrix<Scalar> sparse = system.sparseView();
    Eigen::BiCGSTAB<Eigen::SparseMatrix<Scalar>> solver;
    solver.setTolerance(Scalar(1e-14));
    solver.setMaxIterations(std::max<Eigen::Index>(100, 10 * n));
    solver.compute(sparse);
    if (solver.info() != Eigen::Success) throw ProductivityError("iterative factorisation failed");
    inverse = solver.solve(Matrix<Scalar>::Identity(n, n));
    if (solver.info() != Eigen::Success) throw ProductivityError("iterative Leontief solve did not converge");
  }

  if (!inverse.allFinite()) throw ProductivityError("Leontief inverse is not finite");
  const Scalar residual =
      n == 0 ? Scalar(0) : (system * inverse - Matrix<Scalar>::Identity(n, n)).cwiseAbs().maxCoeff();
  if (residual > Scalar(options.residual_tolerance))
    throw ProductivityError("Leontief residual " + std::to_string(double(residual)) + " exceeds tolerance");
  return inverse;
}

/// s = f / x; zero-output positions must carry no stressor.
template <typename DerivedF, typename DerivedX>
Vector<typename DerivedF::Scalar> stressor_coefficients(const Eigen::MatrixBase<DerivedF>& stressor,
                                                        const Eigen::MatrixBase<DerivedX>& output,
                                                        const RegionSectorIndex* index = nullptr) {
  using Scalar = typename DerivedF::Scalar;
  if (stressor.size() != output.size())
    throw StructuralError("stressor length " + std::to_string(stressor.size()) + " vs output length " +
                          std::to_string(output.size()));
  Vector<Scalar> s(stressor.size());
  for (Eigen::Index n = 0; n < stressor.size(); ++n) {
    if (output(n) == Scalar(0)) {
      if (stressor(n) != Scalar(0))
        throw DegenerateSectorError(static_cast<std::size_t>(n),
                                    "stressor recorded at zero-output " +
                                        detail::describe_position(static_cast<std::size_t>(n), index));
      s(n) = Scalar(0);
    } else {
      s(n) = stressor(n) / output(n);
    }
  }
  return s;
}

/// values(i, (j,k)) = sum over source sectors s and supplying regions r of
/// f(i,s)/x(i,s) * L((i,s),(r,k)) * Y((r,k), j).
template <typename Scalar>
AttributionTensor<Scalar> source_attribution(const Vector<Scalar>& stressor, const Matrix<Scalar>& leontief,
                                             const Matrix<Scalar>& final_demand, const Vector<Scalar>& output,
                                             const RegionSectorIndex& index, std::string unit = {}) {
  const auto n = static_cast<Eigen::Index>(index.size());
  const auto regions = static_cast<Eigen::Index>(index.region_count());
  const auto sectors = static_cast<Eigen::Index>(index.sector_count());
  if (leontief.rows() != n || leontief.cols() != n)
    throw StructuralError("Leontief inverse: expected " + std::to_string(n) + "x" + std::to_string(n));
  if (final_demand.rows() != n || final_demand.cols() != regions)
    throw StructuralError("final demand: expected " + std::to_string(n) + "x" + std::to_string(regions));

  const Vector<Scalar> s = stressor_coefficients(stressor, output, &index);
  const Matrix<Scalar> located = region_aggregator<Scalar>(index) * s.asDiagonal() * leontief;
  const Matrix<Scalar> gather = sector_gather<Scalar>(index);

  AttributionTensor<Scalar> tensor{index, std::move(unit), Matrix<Scalar>(regions, n)};
  for (Eigen::Index j = 0; j < regions; ++j)
    tensor.values.middleCols(j * sectors, sectors).noalias() =
        located * final_demand.col(j).asDiagonal() * gather;
  return tensor;
}

/// Final demand per (consuming region j, product k), i.e. sum over supplying regions.
template <typename Scalar>
Vector<Scalar> demand_by_product(const Matrix<Scalar>& final_demand, const RegionSectorIndex& index) {
  const Matrix<Scalar> per_product = sector_gather<Scalar>(index).transpose() * final_demand;  // sectors x regions
  return per_product.reshaped();  // column-major: (k, j) -> j * sectors + k
}

/// Total embodied stressor per (j,k) divided by that column's final demand.
template <typename Scalar>
IntensityTable<Scalar> footprint_intensity(const AttributionTensor<Scalar>& attribution,
                                           const Matrix<Scalar>& final_demand) {
  const auto& index = attribution.index;
  const Vector<Scalar> demand = demand_by_product(final_demand, index);
  IntensityTable<Scalar> table{index, attribution.unit, Vector<Scalar>::Zero(index.size()),
                               std::vector<bool>(index.size(), false)};
  for (std::size_t c = 0; c < index.size(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    if (demand(col) == Scalar(0)) {
      table.zero_demand[c] = true;
      continue;
    }
    table.values(col) = attribution.column_total(c) / demand(col);
  }
  return table;
}

template <typename Scalar>
IntensityTable<Scalar> footprint_intensity(const Vector<Scalar>& stressor, const Matrix<Scalar>& leontief,
                                           const Matrix<Scalar>& final_demand, const Vector<Scalar>& output,
                                           const RegionSectorIndex& index, std::string unit = {}) {
  return footprint_intensity(source_attribution(stressor, leontief, final_demand, output, index, std::move(unit)),
                             final_demand);
}

/// Replaces every row whose full name matches `pattern` with their element-wise
/// sum under `new_name`, placed where the first match was.
template <typename Scalar>
SatelliteTable<Scalar> aggregate_stressor_rows(const SatelliteTable<Scalar>& table, const std::regex& pattern,
                                               const std::string& new_name, Diagnostics* diagnostics = nullptr) {
  std::vector<StressorRow<Scalar>> rows;
  std::optional<std::size_t> slot;
  StressorRow<Scalar> merged{new_name, {}, Vector<Scalar>::Zero(table.index().size())};
  for (const auto& row : table.rows()) {
    if (!std::regex_match(row.name, pattern)) {
      rows.push_back(row);
      continue;
    }
    if (!slot) {
      slot = rows.size();
      merged.unit = row.unit;
      rows.emplace_back();
    } else if (row.unit != merged.unit) {
      throw UnitError("cannot aggregate \"" + row.name + "\" [" + row.unit + "] with [" + merged.unit + "]");
    }
    merged.values += row.values;
  }
  if (!slot) {
    if (diagnostics) diagnostics->warn("stressor aggregation \"" + new_name + "\": pattern matched no rows");
    return table;
  }
  rows[*slot] = std::move(merged);
  return SatelliteTable<Scalar>(table.index(), std::move(rows));
}

template <typename Scalar>
SatelliteTable<Scalar> aggregate_stressor_rows(const SatelliteTable<Scalar>& table, const std::string& pattern,
                                               const std::string& new_name, Diagnostics* diagnostics = nullptr) {
  return aggregate_stressor_rows(table, std::regex(pattern), new_name, diagnostics);
}

/// Economic core together with its coefficient matrix and Leontief inverse.
template <typename Scalar>
class MrioSystem {
 public:
  static MrioSystem build(EconomicCore<Scalar> core, const LeontiefOptions& options = {}) {
    MrioSystem system;
    system.core_ = std::move(core);
    system.coefficients_ = build_coefficients(system.core_.flows, system.core_.output, &system.core_.index);
    system.leontief_ = leontief_inverse(system.coefficients_, options);
    return system;
  }

  const EconomicCore<Scalar>& core() const noexcept { return core_; }
  const RegionSectorIndex& index() const noexcept { return core_.index; }
  const Matrix<Scalar>& coefficients() const noexcept { return coefficients_; }
  const Matrix<Scalar>& leontief() const noexcept { return leontief_; }

  AttributionTensor<Scalar> attribute(const StressorRow<Scalar>& row) const {
    return source_attribution(row.values, leontief_, core_.final_demand, core_.output, core_.index, row.unit);
  }
  IntensityTable<Scalar> intensity(const StressorRow<Scalar>& row) const {
    return footprint_intensity(attribute(row), core_.final_demand);
  }

 private:
  EconomicCore<Scalar> core_;
  Matrix<Scalar> coefficients_;
  Matrix<Scalar> leontief_;
};

/// Per-row data-quality figures. Reported, never repaired.
template <typename Scalar>
struct StressorDiagnostic {
  std::string name;
  std::string unit;
  Scalar direct_total{};       ///< sum of f
  Scalar attributed_total{};   ///< sum of the attribution tensor
  std::size_t negative_entries = 0;
  std::size_t orphan_entries = 0;  ///< nonzero f where x = 0
};

template <typename Scalar>
std::vector<StressorDiagnostic<Scalar>> stressor_diagnostics(const SatelliteTable<Scalar>& table,
                                                             const MrioSystem<Scalar>& system) {
  std::vector<StressorDiagnostic<Scalar>> out;
  const auto& x = system.core().output;
  for (const auto& row : table.rows()) {
    StressorDiagnostic<Scalar> d{row.name, row.unit, row.values.sum()};
    for (Eigen::Index n = 0; n < row.values.size(); ++n) {
      if (row.values(n) < Scalar(0)) ++d.negative_entries;
      if (row.values(n) != Scalar(0) && x(n) == Scalar(0)) ++d.orphan_entries;
    }
    if (d.orphan_entries == 0) d.attributed_total = system.attribute(row).values.sum();
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace biovalent::mrio
