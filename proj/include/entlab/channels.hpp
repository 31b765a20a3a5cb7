#pragma once

// Conjugate channel pairs built from one embedding, and the output-space
// geometry used by the concentration arguments: the segment towards I/d,
// the tube around it, and the ball B_d(n).

#include <vector>

#include "entlab/isometry.hpp"
#include "entlab/matcore.hpp"
#include "entlab/randq.hpp"

namespace entlab {

/// The pair (Phi_W, Phi_W^C), or (conj Phi_W, conj Phi_W^C) when
/// `conjugated` is set. Phi_W traces out C^d (n x n outputs); Phi_W^C
/// traces out C^n (d x d outputs).
class ChannelPair {
 public:
  explicit ChannelPair(Isometry embedding, bool conjugated = false);

  const Isometry& embedding() const { return w_; }
  bool conjugated() const { return conjugated_; }
  /// The matrix actually applied: W, or its entrywise conjugate.
  const CMatrix& matrix() const { return applied_; }
  int s() const { return w_.s(); }
  int n() const { return w_.n(); }
  int d() const { return w_.d(); }

 private:
  Isometry w_;
  bool conjugated_;
  CMatrix applied_;
};

DensityMatrix apply_direct(const ChannelPair& ch, const PureState& phi);
DensityMatrix apply_conjugate(const ChannelPair& ch, const PureState& phi);

/// A_j (n x s), j = 0..d-1, with Phi(rho) = sum_j A_j rho A_j^dagger and
/// Phi^C(rho)_{kl} = Tr(A_k rho A_l^dagger).
std::vector<CMatrix> kraus_operators(const ChannelPair& ch);

/// Phi^C(|u><v|): entry (k, l) = <v| A_l^dagger A_k |u>. Accepts unnormalized
/// vectors of length s.
CMatrix cross_term(const ChannelPair& ch, const CVector& u, const CVector& v);

/// (Phi^C (x) conj Phi^C)(|psi><psi|) as a d^2 x d^2 matrix with composite
/// index k*d + k'. psi has length s^2 (first factor slow).
DensityMatrix product_output(const ChannelPair& ch, const PureState& psi);

/// Radius of the tube: 2 sqrt(log n / n) + 13 d sqrt(log d / s).
double tube_radius(int s, int n, int d);
/// Radius of the ball B_d(n) around I/d: 2 sqrt(log n / n).
double ball_radius(int n);

struct TubeSpec {
  DensityMatrix center;
  double gamma;
  double radius;

  /// Radius computed from (s, n, d); gamma must lie in (0, 1).
  static TubeSpec make(DensityMatrix center, double gamma, int s, int n, int d);
};

/// min over r in [gamma, 1] of |theta - (r rho + (1 - r) I/d)|_inf, by
/// ternary search (the objective is convex in r).
double tube_distance(const DensityMatrix& theta, const TubeSpec& tube);
bool in_tube(const DensityMatrix& theta, const TubeSpec& tube);
bool in_ball(const DensityMatrix& rho, int n);

struct TypicalityEstimate {
  double fraction;
  bool is_typical;
  int trials;
};

/// Monte Carlo estimate of the fraction of uniform inputs whose conjugate
/// output lands in B_d(n); typical when the fraction is at least 1/2.
TypicalityEstimate typicality_estimate(const ChannelPair& ch, int trials,
                                       RngStream& rng);

}  // namespace entlab
