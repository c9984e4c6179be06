//! Shared fixtures for the unit tests.

use crate::root_datum::{LatticeConfig, ParamPolicy, RootDatum, RootDatumConfig};

/// Rank one on the coweight lattice: `alpha^vee = (2)`, `rho = 1/2`.
pub fn a1_coweight() -> RootDatum {
    RootDatum::build(RootDatumConfig::coweight(vec![vec![2]])).unwrap()
}

/// Rank one on the coroot lattice: `alpha^vee = (1)`, `rho = 1`.
/// `alpha(Y) = 2Z`, so sigma and sigma' stay distinct under "auto".
pub fn a1_qvee(policy: ParamPolicy) -> RootDatum {
    RootDatum::build(RootDatumConfig {
        cartan: vec![vec![2]],
        lattice: LatticeConfig::Explicit {
            roots_on_basis: vec![vec![2]],
            coroots_in_basis: vec![vec![1]],
        },
        rho: None,
        parameters: policy,
    })
    .unwrap()
}

pub fn a2() -> RootDatum {
    RootDatum::build(RootDatumConfig::coweight(vec![vec![2, -1], vec![-1, 2]])).unwrap()
}

/// B2-type matrix, two parameter classes under "auto".
pub fn b2() -> RootDatum {
    RootDatum::build(RootDatumConfig::coweight(vec![vec![2, -1], vec![-2, 2]])).unwrap()
}

/// G2-type matrix (braid order 6).
pub fn g2() -> RootDatum {
    RootDatum::build(RootDatumConfig::coweight(vec![vec![2, -1], vec![-3, 2]])).unwrap()
}

/// Affine rank 2 on the standard three-dimensional realization, equal
/// parameters. Basis: `alpha_1^vee`, `alpha_2^vee`, `d` with
/// `alpha_1(d) = 0`, `alpha_2(d) = 1`, `rho = (1, 1, 0)`.
pub fn affine_a1() -> RootDatum {
    RootDatum::build(affine_a1_config(ParamPolicy::Equal)).unwrap()
}

/// Same realization with the mandated identifications only
/// (three classes: `sigma_1`, `sigma'_1`, merged `sigma_2 = sigma'_2`).
pub fn affine_a1_auto() -> RootDatum {
    RootDatum::build(affine_a1_config(ParamPolicy::Auto)).unwrap()
}

pub fn affine_a1_config(parameters: ParamPolicy) -> RootDatumConfig {
    RootDatumConfig {
        cartan: vec![vec![2, -2], vec![-2, 2]],
        lattice: LatticeConfig::Explicit {
            roots_on_basis: vec![vec![2, -2, 0], vec![-2, 2, 1]],
            coroots_in_basis: vec![vec![1, 0], vec![0, 1], vec![0, 0]],
        },
        rho: Some(vec![
            num_rational::BigRational::from_integer(1.into()),
            num_rational::BigRational::from_integer(1.into()),
            num_rational::BigRational::from_integer(0.into()),
        ]),
        parameters,
    }
}

/// Hyperbolic rank 2 example on the coweight lattice.
pub fn hyperbolic() -> RootDatum {
    RootDatum::build(
        RootDatumConfig::coweight(vec![vec![2, -3], vec![-3, 2]]).with_equal_parameters(),
    )
    .unwrap()
}
