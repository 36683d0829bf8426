#pragma once

// N-th cutoffs of a single closed chain under one periodic axis, and the
// check of the state-sum factorization of their Jones polynomial.

#include <vector>

#include "pjones/half_integer.hpp"
#include "pjones/laurent.hpp"
#include "pjones/pbc.hpp"

namespace pjones {

inline constexpr int kOracleSharedCap = 16;

struct CutoffLink {
  int N = 1;
  int axis = 0;
  int cells = 0;           // measured span of the cutoff region in cells
  int expected_cells = 0;  // (2N-1)|MU| - (N-1)
  MinimalPeriodicLink base;
  std::vector<std::vector<MplComponent>> copies;
  std::vector<MplComponent> all_images;

  // Copies in order; component i belongs to copy copy_of(i).
  CurveCollection curves() const;
  std::vector<int> copy_of_components() const;
};

CutoffLink build_cutoff(const PBCSystem& sys, int N, const PbcOptions& opt = {});

struct VerifyOptions {
  double tol = kDefaultTolerance;
  BracketOptions bracket;
  // Enumerate all shared-crossing resolutions (skipped above the cap).
  bool run_oracle = true;
  int oracle_cap = kOracleSharedCap;
};

struct Theorem1Report {
  int N = 1;
  int cells = 0;
  int expected_cells = 0;
  int shared_crossings = 0;
  int self_crossings = 0;

  LaurentPoly lhs;          // V of the cutoff at xi
  LaurentPoly v_p;          // V of the minimal periodic link
  HalfInteger slk;          // SLK_P at xi
  // (-A)^(-(N-1) SLK) d^(N-1) V_P^N
  LaurentPoly state_term;
  LaurentPoly lambda_tilde;  // lhs - state_term
  // Same with the exponent the oriented state actually carries:
  // (-A^2)^(-(N-1) SLK) d^(N-1) V_P^N
  LaurentPoly state_term_derived;
  LaurentPoly lambda_tilde_derived;

  int writhe_cutoff = 0;
  int writhe_copy = 0;
  HalfInteger pairwise_linking;  // sum over i<j of the copy-copy linking
  bool writhe_identity_ok = false;  // Wr = N Wr(L_C) + (N-1) SLK
  bool pairwise_tally_ok = false;   // 2 * pairwise = (N-1) SLK

  LaurentPoly oriented_state;  // bracket of the state with every shared crossing oriented-smoothed
  bool state_oracle_ok = false;          // equals A^(2(N-1)SLK) d^(N-1) <L_C>^N
  bool state_oracle_derived_ok = false;  // equals A^((N-1)SLK) d^(N-1) <L_C>^N

  bool oracle_run = false;
  LaurentPoly non_disconnecting_sum;  // jones-normalized sum over the other states
  bool decomposition_ok = false;          // state_term + sum == lhs
  bool decomposition_derived_ok = false;  // state_term_derived + sum == lhs
  int disconnecting_states = 0;  // states whose bracket equals d^(N-1) <L_C>^N up to weight
};

Theorem1Report verify_theorem1(const PBCSystem& sys, int N, const Vec3& xi,
                               const VerifyOptions& opt = {});

nlohmann::json to_json(const Theorem1Report& r);

}  // namespace pjones
