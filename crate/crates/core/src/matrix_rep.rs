//! Matrix representations of the cubic algebra on finite number bases.
//!
//! With Φ(0) = Φ(p+1) = 0 the deformed-oscillator action closes on the
//! first p+1 number states, so the generators become exact finite
//! matrices: A is diagonal from the realization, B couples neighbours
//! through √Φ, and C = [A,B]. Every defining relation then reduces to
//! plain matrix arithmetic, which is what the residual methods check.

use nalgebra::DMatrix;

use crate::algebra::{realize_linear, realize_quadratic, AlgebraAt, CubicAlgebra};
use crate::error::{Error, Result};
use crate::structure::StructureFunction;

/// Finite representation of dimension p+1 at a fixed energy.
#[derive(Debug, Clone)]
pub struct MatrixRepresentation {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub energy: f64,
    at: AlgebraAt,
}

fn fro(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn rel(lhs: &DMatrix<f64>, rhs: &DMatrix<f64>) -> f64 {
    fro(&(lhs - rhs)) / fro(lhs).max(fro(rhs)).max(1e-300)
}

/// Builds the (p+1)-dimensional matrices for one boundary solution.
///
/// The ladder weight is √ρ so that b†b = Φ(N) holds with the gauge the
/// structure function was computed in; for linear realizations ρ = 1 and
/// the weight drops out.
pub fn build_matrix_representation(
    alg: &CubicAlgebra,
    phi: &StructureFunction,
    p: u32,
    e: f64,
) -> Result<MatrixRepresentation> {
    let n = p as usize + 1;
    let mut phi_vals = vec![0.0f64; n + 1];
    for (x, v) in phi_vals.iter_mut().enumerate() {
        *v = phi.eval(x as f64);
    }
    for x in 1..=p as usize {
        if phi_vals[x] <= 0.0 {
            return Err(Error::NonUnitary {
                x: x as u32,
                phi: phi_vals[x],
            });
        }
    }

    let mut avals = Vec::with_capacity(n);
    let mut bvals = Vec::with_capacity(n);
    let mut wvals = Vec::with_capacity(n);
    if alg.beta != 0.0 {
        let r = realize_quadratic(alg, e, phi.u)?;
        for x in 0..n {
            let x = x as f64;
            avals.push(r.a(x));
            bvals.push(r.b(x)?);
            let rho = r.rho(x)?;
            if rho < 0.0 {
                return Err(Error::RealizationUndefined(format!(
                    "ladder weight ρ({x}) = {rho} is negative"
                )));
            }
            wvals.push(rho.sqrt());
        }
    } else {
        let r = realize_linear(alg, e, phi.u)?;
        for x in 0..n {
            let x = x as f64;
            avals.push(r.a(x));
            bvals.push(r.b(x));
            wvals.push(1.0);
        }
    }

    let mut a = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, n);
    for x in 0..n {
        a[(x, x)] = avals[x];
        b[(x, x)] = bvals[x];
        if x + 1 < n {
            let off = wvals[x] * phi_vals[x + 1].sqrt();
            b[(x, x + 1)] = off;
            b[(x + 1, x)] = off;
        }
    }
    let c = &a * &b - &b * &a;
    Ok(MatrixRepresentation {
        a,
        b,
        c,
        energy: e,
        at: alg.at_energy(e),
    })
}

impl MatrixRepresentation {
    pub fn dimension(&self) -> usize {
        self.a.nrows()
    }

    fn eye(&self) -> DMatrix<f64> {
        DMatrix::identity(self.dimension(), self.dimension())
    }

    /// Relative residual of [A,C] = αA² + β{A,B} + γA + δB + ε.
    pub fn quadratic_relation_residual(&self) -> f64 {
        let t = &self.at;
        let lhs = &self.a * &self.c - &self.c * &self.a;
        let aa = &self.a * &self.a;
        let anti_ab = &self.a * &self.b + &self.b * &self.a;
        let rhs = aa * t.alpha
            + anti_ab * t.beta
            + &self.a * t.gamma
            + &self.b * t.delta
            + self.eye() * t.epsilon;
        rel(&lhs, &rhs)
    }

    /// Relative residual of [B,C] = μA³ + νA² − βB² − α{A,B} + ξA − γB + ζ.
    pub fn cubic_relation_residual(&self) -> f64 {
        let t = &self.at;
        let lhs = &self.b * &self.c - &self.c * &self.b;
        let aa = &self.a * &self.a;
        let aaa = &aa * &self.a;
        let bb = &self.b * &self.b;
        let anti_ab = &self.a * &self.b + &self.b * &self.a;
        let rhs = aaa * t.mu + aa * t.nu - bb * t.beta - anti_ab * t.alpha
            + &self.a * t.xi
            - &self.b * t.gamma
            + self.eye() * t.zeta;
        rel(&lhs, &rhs)
    }

    /// Relative residual of the Casimir combination against K(E)·identity.
    pub fn casimir_residual(&self) -> f64 {
        let t = &self.at;
        let (al, be) = (t.alpha, t.beta);
        let anti = |x: &DMatrix<f64>, y: &DMatrix<f64>| x * y + y * x;
        let aa = &self.a * &self.a;
        let aaa = &aa * &self.a;
        let a4 = &aa * &aa;
        let bb = &self.b * &self.b;
        let q2 = -t.mu * be * be / 6.0 + be * t.nu / 3.0 + t.delta * t.mu / 2.0 + al * al + t.xi;
        let q1 = -t.mu * be * t.delta / 6.0 + t.delta * t.nu / 3.0 + al * t.gamma + 2.0 * t.zeta;
        let km = &self.c * &self.c - anti(&aa, &self.b) * al - anti(&self.a, &bb) * be
            + anti(&self.a, &self.b) * (al * be - t.gamma)
            + bb * (be * be - t.delta)
            + &self.b * (be * t.gamma - 2.0 * t.epsilon)
            + a4 * (t.mu / 2.0)
            + aaa * (2.0 / 3.0 * (t.nu + t.mu * be))
            + aa * q2
            + &self.a * q1;
        let rhs = self.eye() * t.k;
        rel(&km, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::linear_structure;
    use crate::testutil::{shifted_pair, threefold_barrier, threefold_oscillator};

    #[test]
    fn singlet_is_one_dimensional() {
        let alg = threefold_oscillator();
        let phi = linear_structure(&alg, 2.0, 1.0 / 6.0).unwrap();
        let rep = build_matrix_representation(&alg, &phi, 0, 2.0).unwrap();
        assert_eq!(rep.dimension(), 1);
        assert!(rep.c[(0, 0)].abs() < 1e-12);
        assert!(rep.quadratic_relation_residual() < 1e-12);
        assert!(rep.cubic_relation_residual() < 1e-9);
        assert!(rep.casimir_residual() < 1e-8);
    }

    #[test]
    fn doublet_off_diagonal_matches_phi() {
        let alg = threefold_oscillator();
        let phi = linear_structure(&alg, 5.0, -1.0 / 3.0).unwrap();
        let rep = build_matrix_representation(&alg, &phi, 1, 5.0).unwrap();
        assert_eq!(rep.dimension(), 2);
        assert!((rep.b[(0, 1)] - 8.0f64.sqrt()).abs() < 1e-9);
        assert!((rep.b[(1, 0)] - 8.0f64.sqrt()).abs() < 1e-9);
        assert!(rep.quadratic_relation_residual() < 1e-9);
        assert!(rep.cubic_relation_residual() < 1e-9);
        assert!(rep.casimir_residual() < 1e-8);
    }

    #[test]
    fn quadruplet_residuals_stay_tight() {
        // E = 11, u = -4/3 closes a four-dimensional chain
        let alg = threefold_oscillator();
        let phi = linear_structure(&alg, 11.0, -4.0 / 3.0).unwrap();
        let rep = build_matrix_representation(&alg, &phi, 3, 11.0).unwrap();
        assert_eq!(rep.dimension(), 4);
        assert!(rep.quadratic_relation_residual() < 1e-10);
        assert!(rep.cubic_relation_residual() < 1e-9);
        assert!(rep.casimir_residual() < 1e-8);
    }

    #[test]
    fn negative_branch_chain_closes() {
        // E = 4.5, u = -2 closes a four-dimensional chain on the other branch
        let alg = shifted_pair();
        let phi = linear_structure(&alg, 4.5, -2.0).unwrap();
        assert!(phi.eval(0.0).abs() < 1e-9);
        assert!(phi.eval(4.0).abs() < 1e-9);
        let rep = build_matrix_representation(&alg, &phi, 3, 4.5).unwrap();
        assert!(rep.quadratic_relation_residual() < 1e-9);
        assert!(rep.cubic_relation_residual() < 1e-9);
        assert!(rep.casimir_residual() < 1e-8);
    }

    #[test]
    fn interior_zero_or_negative_phi_is_rejected() {
        let alg = threefold_barrier();
        let phi = linear_structure(&alg, 4.0, -1.0 / 6.0).unwrap();
        match build_matrix_representation(&alg, &phi, 1, 4.0) {
            Err(Error::NonUnitary { x: 1, phi }) => assert!(phi < 0.0),
            other => panic!("expected NonUnitary, got {other:?}"),
        }
    }
}
