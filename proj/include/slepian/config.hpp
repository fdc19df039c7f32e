#pragma once

#include <array>
#include <string_view>

namespace slepian {

inline constexpr std::string_view kVersion = "1.0.0";

/// Every numerical tolerance used by the library and the verification suite.
struct Tolerances {
  // numkit
  double quad_weight_sum = 1e-13;
  double quad_node_symmetry = 1e-14;
  double quad_monomial = 1e-13;
  double orthonormality = 1e-12;
  double eigen_residual_rel = 1e-11;
  double route_agreement_dense = 1e-12;

  // discrete spectrum
  double untrusted_floor = 1e-13;  // eigenvalues below are reported but flagged
  double eigen_floor = 1e-12;      // lower limit for every eigenvalue-level check
  double trace_rel = 1e-11;
  double cross_route = 1e-10;
  double eigvec_alignment = 1e-8;
  double eigvec_gap = 1e-6;
  double symmetry = 1e-10;
  double commutation = 1e-12;
  double double_orthogonality = 1e-10;
  double periodicity = 1e-12;
  double tail_floor = 1e-8;
  double sign_tie_rel = 1e-9;

  // continuous spectrum
  double nystrom_trace_rel = 1e-9;
  double mesh_refinement = 1e-10;
  double hs_quadrature_rel = 1e-8;

  // verification
  double check_floor = 1e-12;  // "satisfied" slack on eigenvalue scales
  double table1_rel = 0.02;
  double example2_sup = 1e-8;
  double example3_rel = 0.10;
  double turan_formula_abs = 1e-3;
  double projection_floor = 1e-28;  // squared stabilized norm below which a mode is dropped
  double sobolev_rel = 1e-8;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

inline constexpr Tolerances kDefaultTolerances{};

struct ToleranceField {
  std::string_view name;
  double Tolerances::*member;
};

/// Name/member table used for serialization and config overrides.
inline constexpr auto kToleranceFields = [] {
  using Field = ToleranceField;
  return std::array{
    Field{"quad_weight_sum", &Tolerances::quad_weight_sum},
    Field{"quad_node_symmetry", &Tolerances::quad_node_symmetry},
    Field{"quad_monomial", &Tolerances::quad_monomial},
    Field{"orthonormality", &Tolerances::orthonormality},
    Field{"eigen_residual_rel", &Tolerances::eigen_residual_rel},
    Field{"route_agreement_dense", &Tolerances::route_agreement_dense},
    Field{"untrusted_floor", &Tolerances::untrusted_floor},
    Field{"eigen_floor", &Tolerances::eigen_floor},
    Field{"trace_rel", &Tolerances::trace_rel},
    Field{"cross_route", &Tolerances::cross_route},
    Field{"eigvec_alignment", &Tolerances::eigvec_alignment},
    Field{"eigvec_gap", &Tolerances::eigvec_gap},
    Field{"symmetry", &Tolerances::symmetry},
    Field{"commutation", &Tolerances::commutation},
    Field{"double_orthogonality", &Tolerances::double_orthogonality},
    Field{"periodicity", &Tolerances::periodicity},
    Field{"tail_floor", &Tolerances::tail_floor},
    Field{"sign_tie_rel", &Tolerances::sign_tie_rel},
    Field{"nystrom_trace_rel", &Tolerances::nystrom_trace_rel},
    Field{"mesh_refinement", &Tolerances::mesh_refinement},
    Field{"hs_quadrature_rel", &Tolerances::hs_quadrature_rel},
    Field{"check_floor", &Tolerances::check_floor},
    Field{"table1_rel", &Tolerances::table1_rel},
    Field{"example2_sup", &Tolerances::example2_sup},
    Field{"example3_rel", &Tolerances::example3_rel},
    Field{"turan_formula_abs", &Tolerances::turan_formula_abs},
    Field{"projection_floor", &Tolerances::projection_floor},
    Field{"sobolev_rel", &Tolerances::sobolev_rel},
  };
}();

}  // namespace slepian
