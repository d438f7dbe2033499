#include "qwalk/coin.hpp"

#include <cmath>
#include <sstream>

#include "qwalk/error.hpp"

namespace qwalk {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NormViolation: return "NormViolation";
    case ErrorKind::DegenerateCoin: return "DegenerateCoin";
    case ErrorKind::VanishedState: return "VanishedState";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BranchDegenerate: return "BranchDegenerate";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::NumericalBlowup: return "NumericalBlowup";
    case ErrorKind::NotADistribution: return "NotADistribution";
    case ErrorKind::NoMinimum: return "NoMinimum";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::NullSpaceEmpty: return "NullSpaceEmpty";
    case ErrorKind::FullyLocalized: return "FullyLocalized";
    case ErrorKind::IOFailure: return "IOFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

CoinParameters build_coin(cplx a, cplx b) {
  const double aa = std::norm(a);
  const double bb = std::norm(b);
  if (std::abs(aa + bb - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "|a|^2 + |b|^2 = " << aa + bb << " (expected 1)";
    throw Error(ErrorKind::NormViolation, msg.str());
  }
  if (std::abs(a) < 1e-9 || std::abs(b) < 1e-9) {
    throw Error(ErrorKind::DegenerateCoin, "coin with a = 0 or b = 0 decouples the walk");
  }
  const double scale = 1.0 / std::sqrt(aa + bb);
  CoinParameters coin;
  coin.a = a * scale;
  coin.b = b * scale;
  coin.y = std::abs(coin.a) / std::abs(coin.b);
  coin.phi = std::atan2(std::abs(coin.b), std::abs(coin.a));
  return coin;
}

CoinParameters hadamard_coin() {
  const double h = 1.0 / std::sqrt(2.0);
  return build_coin({h, 0.0}, {h, 0.0});
}

}  // namespace qwalk
