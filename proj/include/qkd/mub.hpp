// mub.hpp
// Phase states and mutually unbiased bases for biphoton qutrits (d=3)
// and the standard qubit set (d=2), plus Born-rule measurement utilities.
//
// Conventions, fixed everywhere including file output:
//   d=3 amplitudes are ordered by the number of horizontally polarized
//   photons: (|0,2>, |1,1>, |2,0>).  d=2 uses the computational ordering.
//   q = exp(2*pi*i/3) is the primitive cube root of unity.

#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace qkd {

using Complex = std::complex<double>;

// Tolerance for all exact-algebra checks.  The constructions involve only
// unit-modulus complex numbers, so double precision supports this.
inline constexpr double kExactTol = 1e-12;

// Primitive cube root of unity raised to the k-th power, k reduced mod 3.
Complex cube_root_unity(int k);

// A pure state as d complex amplitudes in the fixed ordering above.
struct StateVector {
    std::vector<Complex> amplitudes;

    int dim() const { return static_cast<int>(amplitudes.size()); }
    double squared_norm() const;
    bool is_normalized(double tol = kExactTol) const;
};

// Inner product <a|b> (conjugate-linear in the first argument).
Complex overlap(const StateVector& a, const StateVector& b);

// The unitary phase operator for the two-photon Fock sector: a cyclic
// permutation |0,2> -> |2,0> -> |1,1> -> |0,2> whose eigenstates are the
// phase states with eigenvalues q^m.
struct PhaseOperator {
    std::array<std::array<Complex, 3>, 3> matrix;  // row-major, Fock ordering

    StateVector apply(const StateVector& state) const;
};

PhaseOperator phase_operator();

// One orthonormal basis of a MubTable.
struct Basis {
    std::string label;
    std::vector<StateVector> vectors;

    int dim() const { return vectors.empty() ? 0 : vectors.front().dim(); }
};

// The complete set of mutually unbiased bases for dimension d:
// 4 bases for d=3 (computational B3 plus B0, B1, B2), 3 bases for d=2
// (computational, diagonal, circular).  Immutable after construction.
struct MubTable {
    int dimension = 0;
    std::vector<Basis> bases;
};

// The three phase states |m> = (|0,2> + q^m |1,1> + q^{2m} |2,0>) / sqrt(3).
std::vector<StateVector> phase_states();

// Diagonal of the evolution operator at t_p = p*pi/3 in Fock ordering.
// The exponents n_h*(n_v+1) evaluate to (0, 2, 2), so the diagonal is
// (1, q^p, q^p).  Throws std::invalid_argument unless p is 0, 1 or 2.
std::array<Complex, 3> evolution_phases(int p);

// Full MUB set for d in {2,3}.  Throws std::invalid_argument otherwise.
// For d=3, basis B_p holds |p,m> = (|0,2> + q^{m+p}|1,1> + q^{2m+p}|2,0>)/sqrt(3)
// with m = 0,1,2; B0 coincides with the phase states.
MubTable mub_table(int d);

// Born-rule outcome distribution (|<u_0|psi>|^2, ..., |<u_{d-1}|psi>|^2).
// Throws std::invalid_argument on dimension mismatch.
std::vector<double> born_probabilities(const StateVector& state, const Basis& basis);

// Exhaustive orthonormality / unbiasedness verification of a table.
struct MubCheck {
    double max_orthonormality_deviation = 0.0;  // max |<u_i|u_j> - delta_ij| within a basis
    double max_unbiased_deviation = 0.0;        // max ||<u|v>|^2 - 1/d| across distinct bases

    bool passed(double tol = kExactTol) const {
        return max_orthonormality_deviation < tol && max_unbiased_deviation < tol;
    }
};

MubCheck verify_mub_table(const MubTable& table);

}  // namespace qkd
