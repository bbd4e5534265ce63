//! Cubic symmetry algebras and their deformed-oscillator realizations.
//!
//! A cubic algebra is generated by an integral pair (A, B) closing as
//! [A,B] = C, [A,C] = αA² + β{A,B} + γA + δB + ε and
//! [B,C] = μA³ + νA² − βB² − α{A,B} + ξA − γB + ζ, where γ, δ, ε, ν,
//! ξ, ζ and the Casimir invariant K are polynomials in the Hamiltonian.
//! On a common eigenspace of H every coefficient becomes a number and the
//! generators reduce to a deformed oscillator with number operator N,
//! diagonal A(N) and a ladder part weighted by a gauge function ρ(N).

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Degree caps in H for the energy-dependent coefficients.
///
/// γ, δ, ν are at most linear, ε, ξ at most quadratic, ζ at most cubic
/// and the Casimir at most quartic; anything higher cannot arise from a
/// second- plus third-order integral pair.
fn degree_ok(p: &Poly, cap: usize) -> bool {
    p.degree().map_or(true, |d| d <= cap)
}

/// Constant set defining one cubic algebra.
///
/// `sqrt_delta_sign` selects the branch of √δ used by the linear (β = 0)
/// realization. Both branches realize the same abstract algebra; catalog
/// entries fix the branch that reproduces their published root patterns.
#[derive(Debug, Clone)]
pub struct CubicAlgebra {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub gamma: Poly,
    pub delta: Poly,
    pub epsilon: Poly,
    pub nu: Poly,
    pub xi: Poly,
    pub zeta: Poly,
    pub casimir: Poly,
    pub sqrt_delta_sign: f64,
}

impl CubicAlgebra {
    /// Validates the degree caps and normalizes the branch sign.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        beta: f64,
        mu: f64,
        gamma: Poly,
        delta: Poly,
        epsilon: Poly,
        nu: Poly,
        xi: Poly,
        zeta: Poly,
        casimir: Poly,
    ) -> Result<Self> {
        let caps = [
            (&gamma, 1usize, "gamma"),
            (&delta, 1, "delta"),
            (&nu, 1, "nu"),
            (&epsilon, 2, "epsilon"),
            (&xi, 2, "xi"),
            (&zeta, 3, "zeta"),
            (&casimir, 4, "casimir"),
        ];
        for (p, cap, name) in caps {
            if !degree_ok(p, cap) {
                return Err(Error::RealizationUndefined(format!(
                    "{name} exceeds degree {cap} in H"
                )));
            }
        }
        Ok(Self {
            alpha,
            beta,
            mu,
            gamma,
            delta,
            epsilon,
            nu,
            xi,
            zeta,
            casimir,
            sqrt_delta_sign: 1.0,
        })
    }

    /// Same algebra with the opposite √δ branch.
    pub fn with_sqrt_delta_sign(mut self, sign: f64) -> Self {
        self.sqrt_delta_sign = if sign < 0.0 { -1.0 } else { 1.0 };
        self
    }

    /// Evaluates every coefficient polynomial at a fixed energy.
    pub fn at_energy(&self, e: f64) -> AlgebraAt {
        AlgebraAt {
            alpha: self.alpha,
            beta: self.beta,
            mu: self.mu,
            gamma: self.gamma.eval(e),
            delta: self.delta.eval(e),
            epsilon: self.epsilon.eval(e),
            nu: self.nu.eval(e),
            xi: self.xi.eval(e),
            zeta: self.zeta.eval(e),
            k: self.casimir.eval(e),
            sqrt_delta_sign: self.sqrt_delta_sign,
        }
    }
}

/// Casimir polynomial K(H) evaluated at H = E.
pub fn casimir_value(alg: &CubicAlgebra, e: f64) -> f64 {
    alg.casimir.eval(e)
}

/// Algebra coefficients frozen on one energy eigenspace.
#[derive(Debug, Clone, Copy)]
pub struct AlgebraAt {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub nu: f64,
    pub xi: f64,
    pub zeta: f64,
    pub k: f64,
    pub sqrt_delta_sign: f64,
}

impl AlgebraAt {
    /// Signed square root of δ; an error when δ ≤ 0.
    pub fn sqrt_delta(&self) -> Result<f64> {
        if self.delta <= 0.0 {
            return Err(Error::RealizationUndefined(format!(
                "delta = {} is not positive",
                self.delta
            )));
        }
        Ok(self.sqrt_delta_sign * self.delta.sqrt())
    }
}

/// β ≠ 0 realization: A(N) quadratic in N + u.
///
/// A(N) = (β/2)((N+u)² − 1/4 − δ/β²), and the gauge is fixed to
/// ρ(N) = 1 / (3·2¹² β⁸ (N+u)(1+N+u)(1+2(N+u))²) so that the structure
/// function comes out polynomial.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticRealization {
    at: AlgebraAt,
    u: f64,
}

/// β = 0, δ > 0 realization: A(N) = √δ (N+u), trivial gauge ρ(N) = 1.
#[derive(Debug, Clone, Copy)]
pub struct LinearRealization {
    at: AlgebraAt,
    u: f64,
    sqrt_delta: f64,
}

impl QuadraticRealization {
    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn coefficients(&self) -> AlgebraAt {
        self.at
    }

    /// Eigenvalue of A on the level with N = x.
    pub fn a(&self, x: f64) -> f64 {
        let t = x + self.u;
        0.5 * self.at.beta * (t * t - 0.25 - self.at.delta / (self.at.beta * self.at.beta))
    }

    /// Diagonal part of B; undefined where 2βA + δ vanishes (N+u = ±1/2).
    pub fn b(&self, x: f64) -> Result<f64> {
        let a = self.a(x);
        let den = 2.0 * self.at.beta * a + self.at.delta;
        if den == 0.0 {
            return Err(Error::RealizationUndefined(format!(
                "2βA + δ vanishes at N + u = {}",
                x + self.u
            )));
        }
        Ok(-(self.at.alpha * a * a + self.at.gamma * a + self.at.epsilon) / den)
    }

    /// Gauge weight; poles at N + u ∈ {0, −1, −1/2}.
    pub fn rho(&self, x: f64) -> Result<f64> {
        let t = x + self.u;
        let den = t * (1.0 + t) * (1.0 + 2.0 * t) * (1.0 + 2.0 * t);
        if den == 0.0 {
            return Err(Error::RhoPole { t });
        }
        Ok(1.0 / (3.0 * 4096.0 * self.at.beta.powi(8) * den))
    }
}

impl LinearRealization {
    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn coefficients(&self) -> AlgebraAt {
        self.at
    }

    pub fn sqrt_delta(&self) -> f64 {
        self.sqrt_delta
    }

    /// Eigenvalue of A on the level with N = x.
    pub fn a(&self, x: f64) -> f64 {
        self.sqrt_delta * (x + self.u)
    }

    /// Diagonal part of B.
    pub fn b(&self, x: f64) -> f64 {
        let t = x + self.u;
        -self.at.alpha * t * t - self.at.gamma * t / self.sqrt_delta
            - self.at.epsilon / self.at.delta
    }

    /// Gauge weight, identically one.
    pub fn rho(&self, _x: f64) -> f64 {
        1.0
    }
}

/// Realizes a β ≠ 0 algebra on the eigenspace at energy `e`.
pub fn realize_quadratic(alg: &CubicAlgebra, e: f64, u: f64) -> Result<QuadraticRealization> {
    if alg.beta == 0.0 {
        return Err(Error::RealizationUndefined(
            "β = 0: use the linear realization".into(),
        ));
    }
    Ok(QuadraticRealization {
        at: alg.at_energy(e),
        u,
    })
}

/// Realizes a β = 0 algebra on the eigenspace at energy `e`.
pub fn realize_linear(alg: &CubicAlgebra, e: f64, u: f64) -> Result<LinearRealization> {
    if alg.beta != 0.0 {
        return Err(Error::RealizationUndefined(
            "β ≠ 0: use the quadratic realization".into(),
        ));
    }
    let at = alg.at_energy(e);
    let sqrt_delta = at.sqrt_delta()?;
    Ok(LinearRealization { at, u, sqrt_delta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_poly() -> Poly {
        Poly::zero()
    }

    fn plain(alpha: f64, beta: f64, mu: f64, delta: f64, epsilon: f64) -> CubicAlgebra {
        CubicAlgebra::new(
            alpha,
            beta,
            mu,
            zero_poly(),
            Poly::constant(delta),
            Poly::constant(epsilon),
            zero_poly(),
            zero_poly(),
            zero_poly(),
            zero_poly(),
        )
        .unwrap()
    }

    #[test]
    fn linear_realization_matches_hand_values() {
        let alg = plain(0.0, 0.0, 0.0, 1.0, 0.0);
        let r = realize_linear(&alg, 0.0, 0.0).unwrap();
        assert_eq!(r.a(3.0), 3.0);
        assert_eq!(r.b(3.0), 0.0);

        let alg = plain(1.0, 0.0, 0.0, 4.0, 8.0);
        let r = realize_linear(&alg, 0.0, 0.0).unwrap();
        assert_eq!(r.b(1.0), -3.0);
    }

    #[test]
    fn negative_delta_is_rejected() {
        let alg = plain(0.0, 0.0, 0.0, -1.0, 0.0);
        match realize_linear(&alg, 0.0, 0.0) {
            Err(Error::RealizationUndefined(_)) => {}
            other => panic!("expected RealizationUndefined, got {other:?}"),
        }
    }

    #[test]
    fn quadratic_realization_matches_hand_values() {
        let alg = plain(0.0, 2.0, 0.0, 0.0, 0.0);
        let r = realize_quadratic(&alg, 0.0, 0.5).unwrap();
        assert_eq!(r.a(0.0), 0.0);

        let alg = plain(0.0, 1.0, 0.0, 0.0, 0.0);
        let r = realize_quadratic(&alg, 0.0, 1.0).unwrap();
        assert!((r.a(1.0) - 15.0 / 8.0).abs() < 1e-15);
        assert_eq!(r.b(1.0).unwrap(), 0.0);
        let rho = r.rho(1.0).unwrap();
        let expect = 1.0 / (3.0 * 4096.0 * 2.0 * 3.0 * 25.0);
        assert!((rho - expect).abs() < 1e-20 * expect.abs().max(1.0));
    }

    #[test]
    fn rho_pole_is_reported() {
        let alg = plain(0.0, 1.0, 0.0, 0.0, 0.0);
        let r = realize_quadratic(&alg, 0.0, 0.0).unwrap();
        match r.rho(0.0) {
            Err(Error::RhoPole { t }) => assert_eq!(t, 0.0),
            other => panic!("expected RhoPole, got {other:?}"),
        }
    }

    #[test]
    fn degree_caps_enforced() {
        let bad = CubicAlgebra::new(
            0.0,
            0.0,
            0.0,
            Poly::new(vec![0.0, 1.0, 1.0]), // quadratic gamma
            Poly::constant(1.0),
            zero_poly(),
            zero_poly(),
            zero_poly(),
            zero_poly(),
            zero_poly(),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn casimir_evaluates_polynomial() {
        let alg = CubicAlgebra::new(
            0.0,
            0.0,
            -2.0,
            zero_poly(),
            Poly::constant(144.0),
            zero_poly(),
            zero_poly(),
            zero_poly(),
            zero_poly(),
            Poly::new(vec![720.0, 0.0, 64.0, 0.0, -16.0]),
        )
        .unwrap();
        assert_eq!(casimir_value(&alg, 2.0), 720.0);
        assert_eq!(casimir_value(&CubicAlgebra::new(
            0.0, 0.0, 0.0,
            zero_poly(), Poly::constant(1.0), zero_poly(),
            zero_poly(), zero_poly(), zero_poly(), zero_poly(),
        ).unwrap(), 5.0), 0.0);
    }
}
