#include "hyperforge/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hyperforge::io {

using nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_row(const std::string& line, std::size_t expect) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t pos = 0;
    out.push_back(std::stod(cell, &pos));
  }
  if (out.size() != expect)
    throw std::runtime_error("csv row has " + std::to_string(out.size()) +
                             " cells, expected " + std::to_string(expect));
  return out;
}

}  // namespace

std::string trajectory_to_json(const Trajectory& traj) {
  ordered_json j;
  j["c"] = traj.c;
  j["branch"] = curvatureflow::to_string(traj.branch);
  j["t"] = traj.t;
  std::vector<double> alpha, beta, phi;
  for (const auto& s : traj.states) {
    alpha.push_back(s.alpha);
    beta.push_back(s.beta);
    phi.push_back(s.phi);
  }
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["phi"] = phi;
  j["halt_reason"] = curvatureflow::to_string(traj.halt);
  return j.dump(2) + "\n";
}

Trajectory trajectory_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  Trajectory traj;
  traj.c = j.at("c").get<double>();
  traj.branch = curvatureflow::branch_from_string(j.at("branch").get<std::string>());
  traj.halt = curvatureflow::halt_from_string(j.at("halt_reason").get<std::string>());
  traj.t = j.at("t").get<std::vector<double>>();
  const auto alpha = j.at("alpha").get<std::vector<double>>();
  const auto beta = j.at("beta").get<std::vector<double>>();
  const auto phi = j.at("phi").get<std::vector<double>>();
  if (alpha.size() != traj.t.size() || beta.size() != traj.t.size() ||
      phi.size() != traj.t.size())
    throw std::runtime_error("trajectory json: array length mismatch");
  for (std::size_t i = 0; i < traj.t.size(); ++i)
    traj.states.push_back({alpha[i], beta[i], phi[i]});
  return traj;
}

std::string curve_to_csv(const std::vector<FramedCurveSample>& curve) {
  std::string out =
      "t,pos_x,pos_y,pos_z,tan_x,tan_y,tan_z,nor_x,nor_y,nor_z,alpha,beta,phi\n";
  for (const auto& s : curve) {
    out += fmt(s.t);
    for (int i = 0; i < 3; ++i) out += "," + fmt(s.pos.x[i]);
    for (int i = 0; i < 3; ++i) out += "," + fmt(s.tangent[i]);
    for (int i = 0; i < 3; ++i) out += "," + fmt(s.normal[i]);
    out += "," + fmt(s.state.alpha) + "," + fmt(s.state.beta) + "," +
           fmt(s.state.phi) + "\n";
  }
  return out;
}

std::vector<FramedCurveSample> curve_from_csv(const std::string& text) {
  std::vector<FramedCurveSample> out;
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line.rfind("t,pos_x", 0) != 0)
    throw std::runtime_error("curve csv: missing header");
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto v = parse_row(line, 13);
    FramedCurveSample s;
    s.t = v[0];
    s.pos.x << v[1], v[2], v[3];
    s.tangent << v[4], v[5], v[6];
    s.normal << v[7], v[8], v[9];
    s.state = {v[10], v[11], v[12]};
    out.push_back(s);
  }
  if (out.empty()) throw std::runtime_error("curve csv: no rows");
  return out;
}

namespace {

constexpr char kSampleHeader[] =
    "t,theta1,theta2,point_re0,point_im0,point_re1,point_im1,point_re2,"
    "point_im2,eig1,eig2,eig3,phi";

std::string sample_row_csv(const SampleRow& r) {
  std::string out = fmt(r.t) + "," + fmt(r.theta1) + "," + fmt(r.theta2);
  for (int i = 0; i < 6; ++i) out += "," + fmt(r.point[i]);
  for (int i = 0; i < 3; ++i) out += "," + fmt(r.eigs[i]);
  out += "," + fmt(r.phi) + "\n";
  return out;
}

}  // namespace

std::string samples_to_csv(const std::vector<HypersurfaceSample>& samples) {
  std::string out = std::string(kSampleHeader) + "\n";
  for (const auto& s : samples) {
    SampleRow r{};
    r.t = s.t;
    r.theta1 = s.theta1;
    r.theta2 = s.theta2;
    for (int i = 0; i < 3; ++i) {
      r.point[2 * i] = s.point.z[i].real();
      r.point[2 * i + 1] = s.point.z[i].imag();
    }
    for (int i = 0; i < 3; ++i) r.eigs[i] = s.eigs[i];
    r.phi = s.hopf.phi;
    out += sample_row_csv(r);
  }
  return out;
}

std::vector<SampleRow> sample_rows_from_csv(const std::string& text) {
  std::vector<SampleRow> out;
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line.rfind("t,theta1", 0) != 0)
    throw std::runtime_error("samples csv: missing header");
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto v = parse_row(line, 13);
    SampleRow r{};
    r.t = v[0];
    r.theta1 = v[1];
    r.theta2 = v[2];
    for (int i = 0; i < 6; ++i) r.point[i] = v[3 + i];
    for (int i = 0; i < 3; ++i) r.eigs[i] = v[9 + i];
    r.phi = v[12];
    out.push_back(r);
  }
  if (out.empty()) throw std::runtime_error("samples csv: no rows");
  return out;
}

std::string sample_rows_to_csv(const std::vector<SampleRow>& rows) {
  if (rows.empty()) throw std::runtime_error("samples: no rows");
  std::string out = std::string(kSampleHeader) + "\n";
  for (const auto& r : rows) out += sample_row_csv(r);
  return out;
}

std::string sample_rows_to_mesh_json(const std::vector<SampleRow>& rows) {
  if (rows.empty()) throw std::runtime_error("mesh export: no rows");
  std::set<double> ts, th1s, th2s;
  for (const auto& r : rows) {
    ts.insert(r.t);
    th1s.insert(r.theta1);
    th2s.insert(r.theta2);
  }
  const std::size_t nt = ts.size(), n1 = th1s.size(), n2 = th2s.size();
  if (nt * n1 * n2 != rows.size())
    throw std::runtime_error("mesh export: rows do not form a full grid");

  ordered_json j;
  j["dims"] = {nt, n1, n2};
  auto verts = ordered_json::array();
  std::vector<double> eig1, eig2, eig3, phi, tcol;
  for (const auto& r : rows) {
    verts.push_back({r.point[0], r.point[1], r.point[2], r.point[3], r.point[4],
                     r.point[5]});
    eig1.push_back(r.eigs[0]);
    eig2.push_back(r.eigs[1]);
    eig3.push_back(r.eigs[2]);
    phi.push_back(r.phi);
    tcol.push_back(r.t);
  }
  j["vertices"] = verts;
  j["scalars"]["t"] = tcol;
  j["scalars"]["eig1"] = eig1;
  j["scalars"]["eig2"] = eig2;
  j["scalars"]["eig3"] = eig3;
  j["scalars"]["phi"] = phi;
  return j.dump(2) + "\n";
}

std::string report_to_json(const CurvatureReport& report) {
  ordered_json j;
  j["pass"] = report.pass;
  j["n_samples"] = report.rows.size();
  std::size_t failed = 0;
  for (const auto& r : report.rows) failed += r.ok ? 0 : 1;
  j["n_failed"] = failed;
  j["max_intra_pair_spread"] = report.max_spread;
  j["max_double_residual"] = report.max_double_residual;
  j["max_simple_residual"] = report.max_simple_residual;
  j["max_hopf_residual"] = report.max_hopf_residual;
  j["mean_double_residual"] = report.mean_double_residual;
  j["mean_simple_residual"] = report.mean_simple_residual;
  j["min_b"] = report.min_b;
  j["tolerances"]["tol_mult"] = report.tols.tol_mult;
  j["tolerances"]["tol_match"] = report.tols.tol_match;
  j["tolerances"]["tol_hopf"] = report.tols.tol_hopf;
  if (!report.pass) {
    j["diagnostic"] =
        report.max_spread >= report.tols.tol_mult
            ? "eigenvalue pair spread exceeds tolerance: the spectrum has "
              "three distinct values at some samples"
            : "eigenvalues split two-one but do not match the prescribed "
              "curvature functions";
  }
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + tmp);
    out << content;
    if (!out.good()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

}  // namespace hyperforge::io
