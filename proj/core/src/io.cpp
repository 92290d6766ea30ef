#include "pseudofrac/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "json.hpp"
#include "pseudofrac/errors.hpp"

namespace pseudofrac {
namespace {

using nlohmann::ordered_json;

// NaN and infinities have no JSON spelling; they become null.
ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json grid_meta(const Grid& g) {
  ordered_json meta;
  meta["domain"] = format_domain(g.domain);
  meta["hx"] = g.hx;
  meta["hy"] = g.hy;
  meta["nodes"] = g.size();
  return meta;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::invalid_argument, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorKind::invalid_argument, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorKind::invalid_argument, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string grid_function_csv(const GridFunction& u) {
  const Grid& g = u.grid();
  std::ostringstream out;
  out << "ix,iy,x,y,value\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    out << g.ix[i] << ',' << g.iy[i] << ',' << format_number(g.nodes[i].x) << ','
        << format_number(g.nodes[i].y) << ',' << format_number(u[i]) << '\n';
  }
  return out.str();
}

std::string grid_function_json(const GridFunction& u) {
  const Grid& g = u.grid();
  ordered_json j = grid_meta(g);
  j["ix"] = g.ix;
  j["iy"] = g.iy;
  ordered_json values = ordered_json::array();
  for (double v : u.values()) values.push_back(number(v));
  j["values"] = std::move(values);
  return j.dump() + "\n";
}

std::string eigen_result_json(const EigenResult& r, const std::string& eigenfunction_csv) {
  ordered_json j;
  j["kind"] = "nonlocal";
  j["lambda"] = number(r.lambda);
  j["log_lambda_over_p"] = number(r.log_lambda_over_p);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["residual"] = number(r.residual);
  j["grad_norm"] = number(r.grad_norm);
  j["log_domain"] = r.log_domain;
  j["grid"] = grid_meta(r.u.grid());
  j["eigenfunction_csv"] = eigenfunction_csv;
  return j.dump(2) + "\n";
}

std::string eigen_result_json(const LocalEigenResult& r, const std::string& eigenfunction_csv) {
  ordered_json j;
  j["kind"] = "local";
  j["lambda"] = number(r.lambda_local);
  j["log_lambda_over_p"] = number(r.log_lambda_over_p);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["residual"] = number(r.residual);
  j["grid"] = grid_meta(r.u.grid());
  j["eigenfunction_csv"] = eigenfunction_csv;
  return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRecord>& rows) {
  std::ostringstream out;
  out << "s,p,lambda,lambda_scaled,reference,gap,grid_h,converged,wall_time_ms\n";
  for (const auto& r : rows) {
    out << format_number(r.s) << ',' << format_number(r.p) << ',' << format_number(r.lambda) << ','
        << format_number(r.lambda_scaled) << ',' << format_number(r.reference) << ','
        << format_number(r.gap) << ',' << format_number(r.grid_h) << ',' << (r.converged ? 1 : 0)
        << ',' << r.wall_time_ms << '\n';
  }
  return out.str();
}

std::string diagram_json(const DiagramReport& d) {
  ordered_json j;
  j["s_hi"] = d.s_hi;
  j["p_hi"] = d.p_hi;
  j["corner_sp"] = number(d.corner_sp);
  j["corner_1p"] = number(d.corner_1p);
  j["corner_sinf"] = number(d.corner_sinf);
  j["corner_inf"] = number(d.corner_inf);
  ordered_json edges = ordered_json::array();
  for (const auto& e : d.edges) {
    edges.push_back({{"name", e.name}, {"from", e.from}, {"to", e.to}, {"gap", number(e.gap)}});
  }
  j["edges"] = std::move(edges);
  j["nonlocal_converged"] = d.nonlocal_converged;
  j["local_converged"] = d.local_converged;
  j["bbm_constant"] = number(d.bbm.value);
  j["bbm_provenance"] = std::string(to_string(d.bbm.provenance));
  return j.dump(2) + "\n";
}

std::string checks_csv(const std::vector<CheckRecord>& records) {
  std::ostringstream out;
  out << "check_name,param_summary,margin,pass\n";
  for (const auto& r : records) {
    // param_summary uses ';' between fields, so no quoting is needed.
    out << r.check_name << ',' << r.param_summary << ',' << format_number(r.margin.margin) << ','
        << (r.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string viscosity_csv(const ViscosityReport& report) {
  std::ostringstream out;
  out << "ix,iy,A,B,C,D,residual\n";
  for (const auto& r : report.rows) {
    out << r.ix << ',' << r.iy << ',' << format_number(r.q.A) << ',' << format_number(r.q.B) << ','
        << format_number(r.q.C) << ',' << format_number(r.q.D) << ',' << format_number(r.residual)
        << '\n';
  }
  return out.str();
}

}  // namespace pseudofrac
