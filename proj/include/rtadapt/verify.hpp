#pragma once

#include "rtadapt/assembly.hpp"
#include "rtadapt/problem.hpp"

#include <cstddef>
#include <vector>

namespace rtadapt {

/// Squared energy error per element:
/// ||S^-1/2 (u - u_h)||_K^2 + c_wr,K ||p - p_h||_K^2, seven-point rule.
std::vector<double> energy_error_sq(const Triangulation& mesh, const ProblemData& problem,
                                    const ExactSolution& exact, const MixedSolution& solution);
std::vector<double> energy_error_sq_serial(const Triangulation& mesh, const ProblemData& problem,
                                           const ExactSolution& exact, const MixedSolution& solution);

/// Square root of the serial sum.
double energy_error(const Triangulation& mesh, const ProblemData& problem, const ExactSolution& exact,
                    const MixedSolution& solution);

/// Experimental order of convergence in terms of the DOF count,
/// log(e_{k-1} / e_k) / log(N_k / N_{k-1}). NaN when undefined.
double eoc(double e_prev, double e_cur, std::size_t dof_prev, std::size_t dof_cur);

/// eta / E; NaN when E is zero or either is not finite.
double effectivity(double eta, double energy);

}  // namespace rtadapt
