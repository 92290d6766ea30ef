#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pseudofrac/analysis.hpp"
#include "pseudofrac/eigensolver.hpp"
#include "pseudofrac/energy.hpp"
#include "pseudofrac/harness.hpp"
#include "pseudofrac/local_limit.hpp"

namespace pseudofrac {

/// Shortest decimal that round-trips; "nan", "inf", "-inf" for non-finite.
std::string format_number(double value);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// see either the old file or the complete new one.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Header `ix,iy,x,y,value`, one row per node in storage order.
std::string grid_function_csv(const GridFunction& u);
/// {"domain", "hx", "hy", "nodes", "ix", "iy", "values"}.
std::string grid_function_json(const GridFunction& u);

/// Summary with grid metadata; `eigenfunction_csv` is stored as given.
std::string eigen_result_json(const EigenResult& result, const std::string& eigenfunction_csv);
/// Same layout tagged "kind":"local".
std::string eigen_result_json(const LocalEigenResult& result, const std::string& eigenfunction_csv);

/// Header `s,p,lambda,lambda_scaled,reference,gap,grid_h,converged,wall_time_ms`.
std::string sweep_csv(const std::vector<SweepRecord>& rows);

std::string diagram_json(const DiagramReport& report);

/// Header `check_name,param_summary,margin,pass`.
std::string checks_csv(const std::vector<CheckRecord>& records);

/// Header `ix,iy,A,B,C,D,residual`.
std::string viscosity_csv(const ViscosityReport& report);

}  // namespace pseudofrac
