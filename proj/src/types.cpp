#include "pdp/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "pdp/prox.hpp"

namespace pdp {

Iterate Iterate::zeros(const ProblemSpec& spec) {
  Iterate w;
  w.x_blocks.reserve(spec.blocks.size());
  for (const auto& blk : spec.blocks) w.x_blocks.push_back(Vector::Zero(blk.cols()));
  w.lambda = Vector::Zero(spec.rows());
  return w;
}

bool Iterate::matches(const ProblemSpec& spec) const {
  if (static_cast<int>(x_blocks.size()) != spec.block_count()) return false;
  for (int i = 0; i < spec.block_count(); ++i)
    if (x_blocks[i].size() != spec.blocks[i].cols()) return false;
  return lambda.size() == spec.rows();
}

bool Iterate::all_finite() const {
  for (const auto& x : x_blocks)
    if (!x.allFinite()) return false;
  return lambda.allFinite();
}

Eigen::Index Iterate::size() const {
  Eigen::Index n = lambda.size();
  for (const auto& x : x_blocks) n += x.size();
  return n;
}

Vector Iterate::stacked() const {
  Vector out(size());
  Eigen::Index at = 0;
  for (const auto& x : x_blocks) {
    out.segment(at, x.size()) = x;
    at += x.size();
  }
  out.segment(at, lambda.size()) = lambda;
  return out;
}

Iterate operator-(const Iterate& a, const Iterate& b) {
  Iterate out = a;
  for (std::size_t i = 0; i < out.x_blocks.size(); ++i) out.x_blocks[i] -= b.x_blocks[i];
  out.lambda -= b.lambda;
  return out;
}

Iterate operator+(const Iterate& a, const Iterate& b) {
  Iterate out = a;
  out += b;
  return out;
}

Iterate operator*(double s, const Iterate& a) {
  Iterate out = a;
  for (auto& x : out.x_blocks) x *= s;
  out.lambda *= s;
  return out;
}

Iterate& operator+=(Iterate& a, const Iterate& b) {
  for (std::size_t i = 0; i < a.x_blocks.size(); ++i) a.x_blocks[i] += b.x_blocks[i];
  a.lambda += b.lambda;
  return a;
}

double dot(const Iterate& a, const Iterate& b) {
  double s = a.lambda.dot(b.lambda);
  for (std::size_t i = 0; i < a.x_blocks.size(); ++i) s += a.x_blocks[i].dot(b.x_blocks[i]);
  return s;
}

namespace {

void check_prox_mode(const BlockSpec& blk, int index, std::vector<Violation>& out) {
  std::ostringstream tag;
  tag << "block " << index << ": ";
  if (const auto* img = std::get_if<IdentityMinusGram>(&blk.prox_mode)) {
    if (img->tau <= 0.0) {
      out.push_back({ViolationKind::Positivity, tag.str() + "tau must be positive"});
      return;
    }
    const double bound = blk.beta * spectral_norm_gram(blk.matrix);
    if (img->tau <= bound) {
      std::ostringstream msg;
      msg << tag.str() << "tau = " << img->tau << " <= beta*||A'A|| = " << bound
          << "; Q = tau*I - beta*A'A is not positive definite";
      out.push_back({ViolationKind::ProxMode, msg.str()});
    }
  } else if (const auto* bsg = std::get_if<BetaScaledIdentityMinusGram>(&blk.prox_mode)) {
    if (bsg->tau <= 0.0) {
      out.push_back({ViolationKind::Positivity, tag.str() + "tau must be positive"});
      return;
    }
    const double bound = spectral_norm_gram(blk.matrix);
    if (bsg->tau <= bound) {
      std::ostringstream msg;
      msg << tag.str() << "tau = " << bsg->tau << " <= ||A'A|| = " << bound
          << "; Q = beta*(tau*I - A'A) is not positive definite";
      out.push_back({ViolationKind::ProxMode, msg.str()});
    }
  } else {
    const Matrix& q = std::get<GeneralSpd>(blk.prox_mode).q;
    if (q.rows() != blk.cols() || q.cols() != blk.cols()) {
      out.push_back({ViolationKind::Dimension, tag.str() + "Q shape does not match the block"});
      return;
    }
    if (!q.isApprox(q.transpose(), 1e-12)) {
      out.push_back({ViolationKind::ProxMode, tag.str() + "Q is not symmetric"});
      return;
    }
    Eigen::LLT<Matrix> llt(q);
    if (llt.info() != Eigen::Success)
      out.push_back({ViolationKind::ProxMode, tag.str() + "Q is not positive definite"});
  }
}

}  // namespace

std::vector<Violation> validate(const ProblemSpec& spec) {
  std::vector<Violation> out;
  const int p = spec.block_count();
  if (p < 1) {
    out.push_back({ViolationKind::Dimension, "spec has no blocks"});
    return out;
  }
  if (spec.rhs.size() < 1) out.push_back({ViolationKind::Dimension, "rhs is empty"});
  if (spec.proximal_count < 0 || spec.proximal_count > p) {
    std::ostringstream msg;
    msg << "proximal_count = " << spec.proximal_count << " outside [0, " << p << "]";
    out.push_back({ViolationKind::Dimension, msg.str()});
  }

  for (int i = 0; i < p; ++i) {
    const BlockSpec& blk = spec.blocks[i];
    std::ostringstream tag;
    tag << "block " << i << ": ";
    if (blk.rows() != spec.rhs.size()) {
      std::ostringstream msg;
      msg << tag.str() << "matrix has " << blk.rows() << " rows but rhs has " << spec.rhs.size();
      out.push_back({ViolationKind::Dimension, msg.str()});
      continue;  // dependent checks would misfire
    }
    if (blk.cols() < 1) {
      out.push_back({ViolationKind::Dimension, tag.str() + "matrix has no columns"});
      continue;
    }
    if (!blk.objective)
      out.push_back({ViolationKind::Dimension, tag.str() + "objective handle is null"});
    if (!(blk.beta > 0.0))
      out.push_back({ViolationKind::Positivity, tag.str() + "beta must be positive"});
    if (blk.feasible_set)
      out.push_back({ViolationKind::Unsupported,
                     tag.str() + "proper feasible sets are not supported by the solvers"});

    if (i < spec.proximal_count) {
      check_prox_mode(blk, i, out);
    } else {
      // Without the Q term the block metric is beta*A'A, which must be
      // nonsingular for the subproblem to have a unique minimizer.
      const Matrix gram = blk.matrix.transpose() * blk.matrix;
      Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues().minCoeff();
      const double hi = es.eigenvalues().maxCoeff();
      if (lo < 1e-12 * hi) {
        std::ostringstream msg;
        msg << tag.str() << "non-proximal block has (near-)singular A'A"
            << " (smallest Ritz value " << lo << " vs norm " << hi << ")";
        out.push_back({ViolationKind::IllPosedBlock, msg.str()});
      }
    }
  }
  return out;
}

bool only_prox_mode_violations(const std::vector<Violation>& violations) {
  for (const auto& v : violations)
    if (v.kind != ViolationKind::ProxMode) return false;
  return true;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Dimension: return "dimension";
    case ViolationKind::Positivity: return "positivity";
    case ViolationKind::ProxMode: return "prox-mode";
    case ViolationKind::IllPosedBlock: return "ill-posed-block";
    case ViolationKind::Unsupported: return "unsupported";
  }
  return "?";
}

std::string to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::PdpAlm: return "pdp-alm";
    case Algorithm::BalancedAlm: return "b-alm";
    case Algorithm::DpBalm: return "dp-balm";
    case Algorithm::PenaltyAlm: return "penalty-alm";
    case Algorithm::SplittingPdp: return "split-pdp";
    case Algorithm::PartialProxPdp: return "partial-pdp";
    case Algorithm::LinearizedAdmm: return "pl-admm";
  }
  return "?";
}

std::string to_string(DualStepMode mode) {
  return mode == DualStepMode::ProofConsistent ? "proof-consistent" : "paper-literal";
}

}  // namespace pdp
