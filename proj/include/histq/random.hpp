#pragma once

#include <random>

#include "histq/consistency.hpp"
#include "histq/decoherence.hpp"

namespace histq {

using Rng = std::mt19937_64;

[[nodiscard]] Matrix random_ginibre(Rng& rng, std::size_t rows, std::size_t cols);
[[nodiscard]] Matrix random_unitary(Rng& rng, std::size_t d);
[[nodiscard]] Matrix random_hermitian(Rng& rng, std::size_t d, double scale = 1.0);
/// Full-rank density matrix (Wishart normalized to unit trace).
[[nodiscard]] Matrix random_density(Rng& rng, std::size_t d);
/// Projector of the given rank onto a Haar-random subspace.
[[nodiscard]] Matrix random_projector(Rng& rng, std::size_t d, std::size_t rank);
/// Projector with a random rank in [0, d].
[[nodiscard]] Matrix random_projector(Rng& rng, std::size_t d);
/// Rank-1 PVM from a Haar-random basis.
[[nodiscard]] Pvm random_basis_pvm(Rng& rng, std::size_t d);

[[nodiscard]] HomogeneousHistory random_history(Rng& rng, std::size_t d, const std::vector<double>& times);

/// Random model (Hermitian H, full-rank rho) on grid times 1..n_times with t0 = 0.
[[nodiscard]] DecoherenceState random_state(Rng& rng, std::size_t d, std::size_t n_times);

/// Computational and Fourier-type (Hadamard for d = 2) rank-1 PVMs.
[[nodiscard]] Pvm computational_pvm(std::size_t d);
[[nodiscard]] Pvm hadamard_pvm(std::size_t d);

}  // namespace histq
