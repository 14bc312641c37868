#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "warpfock/test_functions.hpp"

namespace warpfock {

// One-particle operator (Vh)_i = scale_i * h_{perm_i} on the node basis.
struct ScaledPermutation {
  std::vector<int> perm;
  CVec scale;

  static ScaledPermutation identity(int n);
  static ScaledPermutation diagonal(const CVec& s);
  int size() const { return static_cast<int>(perm.size()); }
  CVec apply(const CVec& h) const;
  // (this * rhs) h = this(rhs(h))
  ScaledPermutation compose(const ScaledPermutation& rhs) const;
  ScaledPermutation inverse() const;
  ScaledPermutation conj() const;
  CMat dense() const;
};

struct FockState {
  GridPtr grid;
  int n_max = 3;
  std::vector<CVec> sectors;
  bool truncated = false;

  static FockState zero(GridPtr g, int n_max);
  static FockState vacuum(GridPtr g, int n_max);
  int modes() const { return grid->size(); }
  int64_t sector_size(int n) const;

  FockState operator+(const FockState& o) const;
  FockState operator-(const FockState& o) const;
  FockState operator*(cplx s) const;
  FockState& operator+=(const FockState& o);

  cplx inner(const FockState& o) const;  // conjugate-linear in *this
  double norm() const;
  double max_abs_diff(const FockState& o) const;
  // Largest deviation under adjacent index transpositions.
  double symmetry_defect() const;
  FockState symmetrized() const;
  FockState conj() const;
  bool same_shape(const FockState& o) const;
};

// Digits of a sector index, most significant first.
void decode_index(int64_t idx, int n, int modes, int* digits);
int64_t encode_index(const int* digits, int n, int modes);

// Twist matrix E(j, l) = exp(i x_j theta x_l); nullptr means no twist.
FockState create(const CVec& c, const FockState& psi, const CMat* twist = nullptr);
FockState annihilate(const CVec& h, const FockState& psi, const CMat* twist = nullptr);
FockState create(const OnShellFunction& f, const FockState& psi);
FockState annihilate(const OnShellFunction& h, const FockState& psi);

struct SmearedFieldDescriptor {
  OnShellFunction f_plus;
  OnShellFunction f_minus;

  static SmearedFieldDescriptor from_test_function(const TestFunction& f, const GridPtr& grid);
  // Descriptor of the complex-conjugate test function.
  SmearedFieldDescriptor conj() const;
  CVec creation_coefficients() const { return f_plus.values; }
  CVec annihilation_coefficients() const { return f_minus.values.conjugate(); }
};

FockState free_field_apply(const SmearedFieldDescriptor& desc, const FockState& psi);
FockState second_quantize_apply(const ScaledPermutation& v, const FockState& psi);
FockState apply_translation(const Vec& a, const FockState& psi);
FockState number_sqrt_apply(const FockState& psi);

// Random node-supported data restricted to nodes [lo, hi).
CVec random_coefficients(int modes, int lo, int hi, std::mt19937_64& rng);
FockState random_state(const GridPtr& g, int n_max, int top_sector, int lo, int hi, std::mt19937_64& rng);

nlohmann::json to_json(const FockState& psi);
FockState fock_from_json(const nlohmann::json& j, const GridPtr& g);

}  // namespace warpfock
