#pragma once

#include <utility>

#include "singmetric/errors.hpp"
#include "singmetric/mass.hpp"

namespace singmetric {

/// Engine-independent operations. An engine plugs in by providing, for its
/// handle type H, the free functions
///   mass_vector(H)  -> MassVectorT<scalar>
///   compare(H, H)   -> Relation   (throws on engine/budget mismatch)
///   join(H, H)      -> H          (the max of the singularity types)
/// found by argument-dependent lookup.

template <class H>
using mass_scalar_t = decltype(mass_vector(std::declval<const H&>()).budget);

struct ComparabilityWitness {
  Relation relation = Relation::INCOMPARABLE;
};

template <class H>
ComparabilityWitness certify(const H& a, const H& b) {
  return {compare(a, b)};
}

/// Exact d_S for comparable types: the mass-difference formula. Throws
/// IncomparableError when neither order is certified.
template <class H>
mass_scalar_t<H> ds_comparable(const H& a, const H& b) {
  Relation rel = compare(a, b);
  if (rel == Relation::INCOMPARABLE)
    throw IncomparableError("ds_comparable needs a certified ordering of the types");
  return ds_mass_formula(mass_vector(a), mass_vector(b));
}

/// Decomposition estimator through the join: exact d_S on each comparable
/// leg, bi-Lipschitz to d_S in general, and equal to ds_comparable when
/// the pair is comparable (the join collapses onto the larger element).
template <class H>
mass_scalar_t<H> ds_estimate(const H& a, const H& b) {
  H top = join(a, b);
  return ds_mass_formula(mass_vector(a), mass_vector(top)) +
         ds_mass_formula(mass_vector(top), mass_vector(b));
}

/// Monge-Ampere energy of the singularity type (the radial slope):
/// -budget + 1/(n+1) * sum of the mixed masses. Nonpositive, 1-Lipschitz
/// with respect to the estimator.
template <class H>
mass_scalar_t<H> energy_Is(const H& a) {
  return energy_from_masses(mass_vector(a));
}

template <class H, class S>
bool in_s_delta(const H& a, const S& delta) {
  return in_s_delta_mass(mass_vector(a), delta);
}

}  // namespace singmetric
