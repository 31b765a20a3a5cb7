#pragma once

#include "entlab/matcore.hpp"

namespace entlab {

/// Embedding W : C^s -> C^d (x) C^n with W^dagger W = I_s. Rows follow the
/// shared composite layout (row i*d + j for n-index i and d-index j).
class Isometry {
 public:
  /// Throws std::invalid_argument on shape mismatch, s > n*d, or when
  /// W^dagger W deviates from the identity by more than 1e-10 entrywise.
  Isometry(CMatrix matrix, int s, int n, int d);

  const CMatrix& matrix() const { return w_; }
  int s() const { return s_; }
  int n() const { return n_; }
  int d() const { return d_; }

  /// Entrywise complex conjugate, still an isometry.
  Isometry conjugate() const;

 private:
  CMatrix w_;
  int s_;
  int n_;
  int d_;
};

/// The coordinate embedding of C^s onto the first s basis vectors.
Isometry coordinate_embedding(int s, int n, int d);

}  // namespace entlab
