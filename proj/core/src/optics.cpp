#include "squeezebeam/optics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "squeezebeam/error.hpp"

namespace squeezebeam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

Matrix annihilation(std::size_t dim) {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t n = 1; n < dim; ++n)
    a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(static_cast<double>(n));
  return a;
}

// exp(A) |v> for anti-Hermitian A, via the eigen-decomposition of H = -i A.
Vector apply_unitary_exp(const Matrix& generator, const Vector& v) {
  const Matrix h = std::complex<double>(0.0, -1.0) * generator;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  if (eig.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
  const Matrix& u = eig.eigenvectors();
  Vector phases(eig.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::polar(1.0, eig.eigenvalues()(k));
  return u * phases.asDiagonal() * (u.adjoint() * v);
}

}  // namespace

void validate(const OpticalStateSpec& spec) {
  std::visit(overloaded{
                 [](const FockState&) {},
                 [](const CoherentState& s) {
                   if (!std::isfinite(s.alpha.real()) || !std::isfinite(s.alpha.imag()))
                     throw ValidationError("optical_state.alpha must be finite");
                 },
                 [](const SqueezedCoherentState& s) {
                   std::vector<std::string> issues;
                   if (!(std::isfinite(s.r) && s.r >= 0)) issues.push_back("optical_state.r must be >= 0");
                   if (!std::isfinite(s.theta)) issues.push_back("optical_state.theta must be finite");
                   if (!std::isfinite(s.alpha.real()) || !std::isfinite(s.alpha.imag()))
                     issues.push_back("optical_state.alpha must be finite");
                   if (!issues.empty()) throw ValidationError(std::move(issues));
                 },
                 [](const DirectMoments& s) {
                   std::vector<std::string> issues;
                   if (!(std::isfinite(s.n_bar) && s.n_bar >= 0))
                     issues.push_back("optical_state.n_bar must be >= 0");
                   // Var(n) >= 0 gives <b^dag2 b^2> >= n_bar^2 - n_bar.
                   const double bound = std::max(0.0, s.n_bar * s.n_bar - s.n_bar);
                   if (!(std::isfinite(s.bdag2b2) && s.bdag2b2 >= bound * (1.0 - 1e-12))) {
                     std::ostringstream os;
                     os << "optical_state.bdag2b2 = " << s.bdag2b2 << " is below the physical bound "
                        << bound;
                     issues.push_back(os.str());
                   }
                   if (!issues.empty()) throw ValidationError(std::move(issues));
                 },
             },
             spec);
}

OpticalMoments optical_moments(const OpticalStateSpec& spec) {
  validate(spec);
  return std::visit(
      overloaded{
          [](const FockState& s) {
            const double n = s.n;
            return OpticalMoments{n, n * (n - 1.0)};
          },
          [](const CoherentState& s) {
            const double n = std::norm(s.alpha);
            return OpticalMoments{n, n * n};
          },
          [](const SqueezedCoherentState& s) {
            // b = alpha + cosh(r) b0 - e^{i theta} sinh(r) b0^dag on vacuum:
            // normal moment N = sinh^2 r, anomalous M = -e^{i theta} sinh r cosh r.
            const double sh = std::sinh(s.r), ch = std::cosh(s.r);
            const double normal = sh * sh;
            const std::complex<double> anomalous = -std::polar(sh * ch, s.theta);
            const double a2 = std::norm(s.alpha);
            const double n_bar = a2 + normal;
            const double cross = 2.0 * std::real(std::conj(s.alpha) * std::conj(s.alpha) * anomalous);
            const double bdag2b2 =
                a2 * a2 + 4.0 * a2 * normal + cross + std::norm(anomalous) + 2.0 * normal * normal;
            return OpticalMoments{n_bar, bdag2b2};
          },
          [](const DirectMoments& s) { return OpticalMoments{s.n_bar, s.bdag2b2}; },
      },
      spec);
}

OpticalMoments truncated_fock_moments(const OpticalStateSpec& spec, std::size_t dimension) {
  validate(spec);
  if (dimension < 8) throw ValidationError("truncated Fock dimension must be at least 8");
  const auto dim = static_cast<Eigen::Index>(dimension);

  Vector state = Vector::Zero(dim);
  if (const auto* fock = std::get_if<FockState>(&spec)) {
    if (fock->n >= dimension) throw TruncationError("Fock number exceeds the truncated dimension");
    state(static_cast<Eigen::Index>(fock->n)) = 1.0;
  } else if (std::holds_alternative<DirectMoments>(spec)) {
    throw ValidationError("direct moments have no state vector");
  } else {
    std::complex<double> alpha{};
    std::complex<double> xi{};
    if (const auto* coh = std::get_if<CoherentState>(&spec)) {
      alpha = coh->alpha;
    } else {
      const auto& sq = std::get<SqueezedCoherentState>(spec);
      alpha = sq.alpha;
      xi = std::polar(sq.r, sq.theta);
    }
    const Matrix a = annihilation(dimension);
    const Matrix ad = a.adjoint();
    state(0) = 1.0;
    if (xi != 0.0) {
      // S(xi) = exp((xi^* a^2 - xi a^dag^2) / 2)
      const Matrix gen = 0.5 * (std::conj(xi) * (a * a) - xi * (ad * ad));
      state = apply_unitary_exp(gen, state);
    }
    if (alpha != 0.0) {
      // D(alpha) = exp(alpha a^dag - alpha^* a)
      const Matrix gen = alpha * ad - std::conj(alpha) * a;
      state = apply_unitary_exp(gen, state);
    }
  }

  double tail = 0;
  for (Eigen::Index n = (3 * dim) / 4; n < dim; ++n) tail += std::norm(state(n));
  if (tail > 1e-10) {
    std::ostringstream os;
    os << "truncated Fock space of dimension " << dimension << " leaves tail probability " << tail
       << " (> 1e-10)";
    throw TruncationError(os.str());
  }

  OpticalMoments m;
  for (Eigen::Index n = 0; n < dim; ++n) {
    const double p = std::norm(state(n));
    const auto nn = static_cast<double>(n);
    m.n_bar += nn * p;
    m.bdag2b2 += nn * (nn - 1.0) * p;
  }
  return m;
}

double fano(const OpticalMoments& moments) {
  if (!(moments.n_bar > 0))
    throw UndefinedForVacuumError("normalized variance is undefined for a vacuum input (n_bar = 0)");
  return (moments.bdag2b2 - moments.n_bar * moments.n_bar) / moments.n_bar + 1.0;
}

}  // namespace squeezebeam
