#include "qkd/mub.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qkd {

Complex cube_root_unity(int k) {
    int r = ((k % 3) + 3) % 3;
    return std::polar(1.0, 2.0 * std::numbers::pi * r / 3.0);
}

double StateVector::squared_norm() const {
    double n = 0.0;
    for (const auto& a : amplitudes) n += std::norm(a);
    return n;
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(squared_norm() - 1.0) < tol;
}

Complex overlap(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("overlap: state dimensions differ");
    }
    Complex acc{0.0, 0.0};
    for (int i = 0; i < a.dim(); ++i) {
        acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return acc;
}

StateVector PhaseOperator::apply(const StateVector& state) const {
    if (state.dim() != 3) {
        throw std::invalid_argument("PhaseOperator::apply: expected a 3-dimensional state");
    }
    StateVector out;
    out.amplitudes.assign(3, Complex{0.0, 0.0});
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out.amplitudes[i] += matrix[i][j] * state.amplitudes[j];
        }
    }
    return out;
}

PhaseOperator phase_operator() {
    // Cyclic permutation in Fock ordering: column j holds the image of
    // basis state j, i.e. |0,2> -> |2,0>, |2,0> -> |1,1>, |1,1> -> |0,2>.
    PhaseOperator op{};
    op.matrix = {{
        {Complex{0, 0}, Complex{1, 0}, Complex{0, 0}},
        {Complex{0, 0}, Complex{0, 0}, Complex{1, 0}},
        {Complex{1, 0}, Complex{0, 0}, Complex{0, 0}},
    }};
    return op;
}

std::vector<StateVector> phase_states() {
    const double s = 1.0 / std::sqrt(3.0);
    std::vector<StateVector> states;
    states.reserve(3);
    for (int m = 0; m < 3; ++m) {
        StateVector v;
        v.amplitudes = {s * cube_root_unity(0), s * cube_root_unity(m), s * cube_root_unity(2 * m)};
        states.push_back(std::move(v));
    }
    return states;
}

std::array<Complex, 3> evolution_phases(int p) {
    if (p < 0 || p > 2) {
        throw std::invalid_argument("evolution_phases: p must be 0, 1 or 2");
    }
    return {Complex{1.0, 0.0}, cube_root_unity(p), cube_root_unity(p)};
}

namespace {

MubTable qutrit_table() {
    MubTable table;
    table.dimension = 3;

    Basis computational{"B3", {}};
    for (int i = 0; i < 3; ++i) {
        StateVector v;
        v.amplitudes.assign(3, Complex{0.0, 0.0});
        v.amplitudes[i] = Complex{1.0, 0.0};
        computational.vectors.push_back(std::move(v));
    }
    table.bases.push_back(std::move(computational));

    const double s = 1.0 / std::sqrt(3.0);
    for (int p = 0; p < 3; ++p) {
        Basis basis{"B" + std::to_string(p), {}};
        for (int m = 0; m < 3; ++m) {
            StateVector v;
            v.amplitudes = {Complex{s, 0.0},
                            s * cube_root_unity(m + p),
                            s * cube_root_unity(2 * m + p)};
            basis.vectors.push_back(std::move(v));
        }
        table.bases.push_back(std::move(basis));
    }
    return table;
}

MubTable qubit_table() {
    MubTable table;
    table.dimension = 2;
    const double s = 1.0 / std::sqrt(2.0);

    Basis computational{"computational", {}};
    computational.vectors.push_back({{Complex{1, 0}, Complex{0, 0}}});
    computational.vectors.push_back({{Complex{0, 0}, Complex{1, 0}}});
    table.bases.push_back(std::move(computational));

    Basis diagonal{"diagonal", {}};
    diagonal.vectors.push_back({{Complex{s, 0}, Complex{s, 0}}});
    diagonal.vectors.push_back({{Complex{s, 0}, Complex{-s, 0}}});
    table.bases.push_back(std::move(diagonal));

    Basis circular{"circular", {}};
    circular.vectors.push_back({{Complex{s, 0}, Complex{0, s}}});
    circular.vectors.push_back({{Complex{s, 0}, Complex{0, -s}}});
    table.bases.push_back(std::move(circular));

    return table;
}

}  // namespace

MubTable mub_table(int d) {
    switch (d) {
        case 2:
            return qubit_table();
        case 3:
            return qutrit_table();
        default:
            throw std::invalid_argument("mub_table: dimension must be 2 or 3");
    }
}

std::vector<double> born_probabilities(const StateVector& state, const Basis& basis) {
    if (basis.dim() != state.dim()) {
        throw std::invalid_argument("born_probabilities: basis/state dimension mismatch");
    }
    std::vector<double> probs;
    probs.reserve(basis.vectors.size());
    for (const auto& u : basis.vectors) {
        probs.push_back(std::norm(overlap(u, state)));
    }
    return probs;
}

MubCheck verify_mub_table(const MubTable& table) {
    MubCheck check;
    const double inv_d = 1.0 / table.dimension;
    const std::size_t nb = table.bases.size();
    for (std::size_t b = 0; b < nb; ++b) {
        const auto& vecs = table.bases[b].vectors;
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            for (std::size_t j = 0; j < vecs.size(); ++j) {
                const double target = (i == j) ? 1.0 : 0.0;
                const double dev = std::abs(overlap(vecs[i], vecs[j]) - Complex{target, 0.0});
                check.max_orthonormality_deviation =
                    std::max(check.max_orthonormality_deviation, dev);
            }
        }
        for (std::size_t b2 = b + 1; b2 < nb; ++b2) {
            for (const auto& u : vecs) {
                for (const auto& v : table.bases[b2].vectors) {
                    const double dev = std::abs(std::norm(overlap(u, v)) - inv_d);
                    check.max_unbiased_deviation = std::max(check.max_unbiased_deviation, dev);
                }
            }
        }
    }
    return check;
}

}  // namespace qkd
