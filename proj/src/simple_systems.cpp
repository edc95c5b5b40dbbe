#include "routh/systems.hpp"

namespace routh {

namespace {

Trivialization no_symmetry(int n) { return Trivialization(Matrix::Identity(n, n), Matrix::Zero(n, 0)); }

}  // namespace

FreeParticle::FreeParticle(int n) : NaturalSystem(no_symmetry(n)) {}

Matrix FreeParticle::mass_matrix(const Vector& q) const { return Matrix::Identity(q.size(), q.size()); }

std::vector<Matrix> FreeParticle::mass_matrix_derivatives(const Vector& q) const {
  return std::vector<Matrix>(q.size(), Matrix::Zero(q.size(), q.size()));
}

HarmonicOscillator::HarmonicOscillator() : NaturalSystem(no_symmetry(1)) {}

Matrix HarmonicOscillator::mass_matrix(const Vector&) const { return Matrix::Identity(1, 1); }

std::vector<Matrix> HarmonicOscillator::mass_matrix_derivatives(const Vector&) const {
  return {Matrix::Zero(1, 1)};
}

}  // namespace routh
