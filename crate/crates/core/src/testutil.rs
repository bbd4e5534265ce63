//! Shared algebra fixtures for unit tests.

use crate::algebra::CubicAlgebra;
use crate::poly::Poly;

fn zero() -> Poly {
    Poly::zero()
}

/// 3:1 anisotropic-oscillator algebra at ω = ħ = 1.
pub(crate) fn threefold_oscillator() -> CubicAlgebra {
    CubicAlgebra::new(
        0.0,
        0.0,
        -2.0,
        zero(),
        Poly::constant(144.0),
        zero(),
        Poly::new(vec![0.0, 6.0]),
        Poly::constant(-56.0),
        Poly::new(vec![0.0, 72.0, 0.0, -8.0]),
        Poly::new(vec![720.0, 0.0, 64.0, 0.0, -16.0]),
    )
    .unwrap()
}

/// 3:1 oscillator with a centrifugal y-barrier at ω = ħ = 1.
pub(crate) fn threefold_barrier() -> CubicAlgebra {
    CubicAlgebra::new(
        0.0,
        0.0,
        -2.0,
        zero(),
        Poly::constant(144.0),
        zero(),
        Poly::new(vec![0.0, 6.0]),
        Poly::constant(-8.0),
        Poly::new(vec![0.0, 72.0, 0.0, -8.0]),
        Poly::new(vec![-1008.0, 0.0, 256.0, 0.0, -16.0]),
    )
    .unwrap()
}

/// Double-well pair algebra at ħ = 1, a² = −1.
pub(crate) fn shifted_pair() -> CubicAlgebra {
    CubicAlgebra::new(
        0.0,
        0.0,
        -2.0,
        zero(),
        Poly::constant(36.0),
        zero(),
        Poly::new(vec![0.0, 6.0]),
        Poly::constant(10.0),
        Poly::new(vec![24.0, 18.0, 0.0, -8.0]),
        Poly::new(vec![-171.0, -96.0, 112.0, 0.0, -16.0]),
    )
    .unwrap()
    .with_sqrt_delta_sign(-1.0)
}

/// Singular-pair potential algebra at ħ = 1, a² = −1.
pub(crate) fn singular_pair() -> CubicAlgebra {
    CubicAlgebra::new(
        0.0,
        0.0,
        -2.0,
        zero(),
        Poly::constant(4.0),
        zero(),
        Poly::new(vec![-6.0, -6.0]),
        Poly::new(vec![2.0, -8.0]),
        Poly::new(vec![6.0, -2.0, 8.0, 8.0]),
        Poly::new(vec![-3.0, 40.0, 16.0, -32.0, -16.0]),
    )
    .unwrap()
    .with_sqrt_delta_sign(-1.0)
}
