#include "betheforge/chain.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

namespace betheforge {

Spin parse_spin(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
  if (t.empty()) throw domain_error("parse_spin: empty label");
  auto slash = t.find('/');
  if (slash == std::string::npos) {
    int v = std::stoi(t);
    if (v < 0) throw domain_error("parse_spin: negative spin");
    return Spin(2 * v);
  }
  if (t.substr(slash + 1) != "2")
    throw domain_error("parse_spin: denominators other than 2 not supported");
  int num = std::stoi(t.substr(0, slash));
  if (num < 0) throw domain_error("parse_spin: negative spin");
  return Spin(num);
}

int ChainSpec::sea_doubled(int j) const {
  if (j == 0) return 0;
  if (j < 1 || j > num_seas()) throw domain_error("sea index out of range");
  return seas[j - 1].doubled;
}

int ChainSpec::gap_doubled(int j) const {
  if (j < 0 || j > num_seas()) throw domain_error("gap index out of range");
  if (j == num_seas()) return 0;  // sbar_{L+1} = infinity
  return sea_doubled(j + 1) - sea_doubled(j);
}

std::vector<int> ChainSpec::gap_set(int j) const {
  if (j < 0 || j >= num_seas())
    throw domain_error("gap_set: finite sets exist for 0 <= j < num_seas");
  std::vector<int> out;
  for (int r2 = sea_doubled(j) + 1; r2 < sea_doubled(j + 1); ++r2)
    out.push_back(r2);
  return out;
}

int ChainSpec::sea_index(int s2) const {
  for (int j = 1; j <= num_seas(); ++j)
    if (sea_doubled(j) == s2) return j;
  return 0;
}

int ChainSpec::gap_index_of(int r2) const {
  if (r2 <= 0) throw domain_error("gap_index_of: need a positive doubled spin");
  for (int j = 0; j < num_seas(); ++j)
    if (r2 > sea_doubled(j) && r2 < sea_doubled(j + 1)) return j;
  if (r2 > sea_doubled(num_seas())) return num_seas();
  throw domain_error("gap_index_of: spin is present in the chain");
}

Rational ChainSpec::density_of(int s2) const {
  int j = sea_index(s2);
  if (j == 0) throw domain_error("density_of: spin not in the chain");
  return rho[j - 1];
}

Rational ChainSpec::highest_spin() const {
  Rational s0(0);
  for (int j = 0; j < num_seas(); ++j)
    s0 += Rational(seas[j].doubled, 2) * rho[j] * Rational(L);
  return s0;
}

ChainSpec make_chain_spec(std::vector<Spin> motif, int repeats, const BigInt& dim_cap) {
  if (motif.empty()) throw domain_error("make_chain_spec: empty motif");
  if (repeats < 1) throw domain_error("make_chain_spec: repeats must be >= 1");
  for (Spin s : motif)
    if (s.doubled > max_spin_doubled)
      throw domain_error("make_chain_spec: spin exceeds cap");

  ChainSpec spec;
  spec.motif = std::move(motif);
  spec.repeats = repeats;
  spec.L0 = static_cast<int>(spec.motif.size());
  spec.L = spec.L0 * repeats;

  std::set<int> distinct;
  for (Spin s : spec.motif) distinct.insert(s.doubled);
  for (int d : distinct) {
    spec.seas.push_back(Spin(d));
    int count = 0;
    for (Spin s : spec.motif)
      if (s.doubled == d) ++count;
    spec.sea_sites.push_back(count);
    spec.rho.push_back(Rational(count, spec.L0));
  }
  Rational total(0);
  for (const Rational& r : spec.rho) total += r;
  if (total != Rational(1)) throw numeric_error("make_chain_spec: densities do not sum to 1");

  BigInt dim = 1;
  for (int p = 0; p < repeats; ++p)
    for (Spin s : spec.motif) dim *= s.dimension();
  spec.hilbert_dim = dim;
  if (dim > dim_cap)
    throw domain_error("make_chain_spec: Hilbert dimension " + dim.str() +
                       " exceeds cap " + dim_cap.str());
  return spec;
}

ChainSpec chain_spec_from_json(const std::string& text, const BigInt& dim_cap) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw domain_error(std::string("chain spec JSON: ") + e.what());
  }
  if (!j.contains("motif") || !j["motif"].is_array())
    throw domain_error("chain spec JSON: missing motif array");
  std::vector<Spin> motif;
  for (const auto& item : j["motif"]) {
    if (item.is_string())
      motif.push_back(parse_spin(item.get<std::string>()));
    else if (item.is_number_integer())
      motif.push_back(Spin(2 * item.get<int>()));
    else
      throw domain_error("chain spec JSON: motif entries must be strings or integers");
  }
  int repeats = j.value("repeats", 1);
  return make_chain_spec(std::move(motif), repeats, dim_cap);
}

std::string chain_spec_to_json(const ChainSpec& spec) {
  nlohmann::json j;
  j["motif"] = nlohmann::json::array();
  for (Spin s : spec.motif) j["motif"].push_back(s.str());
  j["repeats"] = spec.repeats;
  return j.dump();
}

std::vector<Spin> site_spins(const ChainSpec& spec) {
  std::vector<Spin> sites;
  sites.reserve(spec.L);
  for (int p = 0; p < spec.repeats; ++p)
    for (Spin s : spec.motif) sites.push_back(s);
  return sites;
}

std::vector<int> site_dims(const ChainSpec& spec) {
  std::vector<int> dims;
  for (Spin s : site_spins(spec)) dims.push_back(s.dimension());
  return dims;
}

DenseOperator inhomogeneous_transfer(Spin aux, const std::vector<Spin>& sites,
                                     cplx u, const std::vector<cplx>& shifts,
                                     bool use_reference_kernel) {
  if (!shifts.empty() && shifts.size() != sites.size())
    throw domain_error("inhomogeneous_transfer: shift count mismatch");
  std::vector<int> dims;
  dims.push_back(aux.dimension());
  for (Spin s : sites) dims.push_back(s.dimension());
  const int D = product_dim(dims);

  Eigen::MatrixXcd T = Eigen::MatrixXcd::Identity(D, D);
  for (size_t i = 0; i < sites.size(); ++i) {
    cplx ui = shifts.empty() ? u : u - shifts[i];
    DenseOperator R = fused_R(aux, sites[i], ui);
    if (use_reference_kernel)
      apply_pair_right_reference(T, R.mat, 0, static_cast<int>(i) + 1, dims);
    else
      apply_pair_right(T, R.mat, 0, static_cast<int>(i) + 1, dims);
  }
  return trace_leg0(T, dims);
}

DenseOperator transfer_matrix(const ChainSpec& spec, Spin s, cplx u) {
  if (spec.sea_index(s.doubled) == 0)
    throw domain_error("transfer_matrix: auxiliary spin must belong to the chain");
  return inhomogeneous_transfer(s, site_spins(spec), u, {});
}

DenseOperator composite_transfer(const ChainSpec& spec, const std::vector<cplx>& u_list) {
  if (static_cast<int>(u_list.size()) != spec.L0)
    throw domain_error("composite_transfer: need one spectral parameter per motif site");
  DenseOperator out;
  for (int i = 0; i < spec.L0; ++i) {
    DenseOperator t = transfer_matrix(spec, spec.motif[i], u_list[i]);
    if (i == 0)
      out = std::move(t);
    else
      out.mat = out.mat * t.mat;
  }
  return out;
}

namespace {

// 4th-order central difference of a matrix-valued map at 0.
Eigen::MatrixXcd central_derivative(const std::function<Eigen::MatrixXcd(double)>& f,
                                    double h) {
  return (8.0 * (f(h) - f(-h)) - (f(2 * h) - f(-2 * h))) / (12.0 * h);
}

DenseOperator log_derivative_hamiltonian(const Eigen::MatrixXcd& t0,
                                         const Eigen::MatrixXcd& tprime,
                                         std::vector<int> dims) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(t0);
  double rcond = lu.rcond();
  if (rcond < 1e-8)
    throw numeric_error("hamiltonian: t(0) numerically singular (rcond " +
                        std::to_string(rcond) + ")");
  Eigen::MatrixXcd H = cplx(0.0, 1.0) * lu.solve(tprime);
  double defect = (H - H.adjoint()).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if (defect > 1e-8 * scale * 10.0)
    throw numeric_error("hamiltonian: Hermiticity defect " + std::to_string(defect));
  DenseOperator out;
  out.mat = 0.5 * (H + H.adjoint().eval());
  out.dims = std::move(dims);
  return out;
}

}  // namespace

DenseOperator hamiltonian(const ChainSpec& spec, Spin s) {
  const double h = 1e-5;
  auto t_of = [&](double u) { return transfer_matrix(spec, s, cplx(u, 0.0)).mat; };
  Eigen::MatrixXcd t0 = t_of(0.0);
  Eigen::MatrixXcd tp = central_derivative(t_of, h);
  return log_derivative_hamiltonian(t0, tp, site_dims(spec));
}

DenseOperator general_hamiltonian(const ChainSpec& spec, const std::vector<double>& alpha,
                                  bool allow_nonpositive_theta) {
  if (static_cast<int>(alpha.size()) != spec.L0)
    throw domain_error("general_hamiltonian: need one alpha per motif site");

  // theta_s = sum_j delta_{s, s_j} alpha_j over the motif
  std::map<int, double> theta;
  for (int j = 0; j < spec.L0; ++j) theta[spec.motif[j].doubled] += alpha[j];
  for (auto& [s2, th] : theta)
    if (th <= 0.0 && !allow_nonpositive_theta)
      throw domain_error("general_hamiltonian: theta_s must be positive (spin " +
                         Spin(s2).str() + ")");

  DenseOperator sum;
  bool first = true;
  for (auto& [s2, th] : theta) {
    DenseOperator H = hamiltonian(spec, Spin(s2));
    if (first) {
      sum.mat = th * H.mat;
      sum.dims = H.dims;
      first = false;
    } else {
      sum.mat += th * H.mat;
    }
  }

  // gradient construction: i sum_j alpha_j d/du_j ln t(u) at u = 0
  const double h = 1e-5;
  std::vector<cplx> zeros(spec.L0, 0.0);
  Eigen::MatrixXcd t0 = composite_transfer(spec, zeros).mat;
  Eigen::MatrixXcd grad = Eigen::MatrixXcd::Zero(t0.rows(), t0.cols());
  for (int j = 0; j < spec.L0; ++j) {
    if (alpha[j] == 0.0) continue;
    auto t_of = [&](double uj) {
      std::vector<cplx> u = zeros;
      u[j] = uj;
      return composite_transfer(spec, u).mat;
    };
    grad += alpha[j] * central_derivative(t_of, h);
  }
  DenseOperator from_grad = log_derivative_hamiltonian(t0, grad, site_dims(spec));
  double diff = (from_grad.mat - sum.mat).cwiseAbs().maxCoeff();
  if (diff > 1e-7)
    throw numeric_error("general_hamiltonian: gradient and sum constructions differ by " +
                        std::to_string(diff));
  return sum;
}

DenseOperator momentum_operator(const ChainSpec& spec) {
  std::vector<cplx> zeros(spec.L0, 0.0);
  DenseOperator shift = composite_transfer(spec, zeros);
  const int D = shift.dim();
  double unit_defect =
      (shift.mat * shift.mat.adjoint() - Eigen::MatrixXcd::Identity(D, D))
          .cwiseAbs()
          .maxCoeff();
  if (unit_defect > 1e-10)
    throw numeric_error("momentum_operator: shift is not unitary (defect " +
                        std::to_string(unit_defect) + ")");

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(shift.mat);
  Eigen::MatrixXcd T = schur.matrixT();
  Eigen::MatrixXcd Q = schur.matrixU();
  // shift is normal, so T must be (numerically) diagonal
  Eigen::MatrixXcd offdiag = T;
  offdiag.diagonal().setZero();
  if (offdiag.cwiseAbs().maxCoeff() > 1e-8)
    throw numeric_error("momentum_operator: Schur form not diagonal");

  const double window = 2.0 * pi / spec.L0;
  Eigen::VectorXcd phases(D);
  for (int k = 0; k < D; ++k) {
    double p = -std::arg(T(k, k));
    p = std::fmod(p, window);
    if (p < 0) p += window;
    if (p >= window) p -= window;
    phases(k) = p;
  }
  DenseOperator out;
  out.mat = Q * phases.asDiagonal() * Q.adjoint();
  out.dims = shift.dims;
  return out;
}

SpectrumResult diagonalize(const DenseOperator& op) {
  if (op.mat.rows() != op.mat.cols()) throw domain_error("diagonalize: not square");
  SpectrumResult out;
  out.dimension = op.dim();
  double herm = (op.mat - op.mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm < 1e-10 * std::max(1.0, op.mat.cwiseAbs().maxCoeff())) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.mat);
    if (es.info() != Eigen::Success) throw numeric_error("diagonalize: solver failed");
    for (int i = 0; i < out.dimension; ++i)
      out.eigenvalues.push_back(es.eigenvalues()(i));
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.mat);
    if (es.info() != Eigen::Success) throw numeric_error("diagonalize: solver failed");
    for (int i = 0; i < out.dimension; ++i)
      out.eigenvalues.push_back(es.eigenvalues()(i));
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](cplx a, cplx b) {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    });
  }
  return out;
}

DenseOperator total_generator(const ChainSpec& spec, Gl2Generator which) {
  auto dims = site_dims(spec);
  const int D = product_dim(dims);
  DenseOperator out;
  out.mat = Eigen::MatrixXcd::Zero(D, D);
  out.dims = dims;
  auto sites = site_spins(spec);
  for (size_t i = 0; i < sites.size(); ++i) {
    SpinGenerators g = spin_rep(sites[i]);
    const Eigen::MatrixXcd* m = nullptr;
    switch (which) {
      case Gl2Generator::e3: m = &g.e3.mat; break;
      case Gl2Generator::e_plus: m = &g.e_plus.mat; break;
      case Gl2Generator::e_minus: m = &g.e_minus.mat; break;
    }
    out.mat += embed_single(*m, static_cast<int>(i), dims);
  }
  return out;
}

}  // namespace betheforge
