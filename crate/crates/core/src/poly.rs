//! Dense univariate polynomials over f64.
//!
//! The structure-function construction multiplies, shifts and exactly divides
//! polynomials whose coefficients are dyadic rationals in every catalogued
//! case, so f64 arithmetic stays exact until the final division. All
//! "exactness" checks are tolerance based and scaled by operand magnitude.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial with coefficients in ascending degree order.
/// Invariant: the last coefficient is nonzero; the zero polynomial is the
/// empty vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn x() -> Self {
        Poly::monomial(1.0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Taylor shift: returns q with q(x) = p(x + h).
    pub fn shift(&self, h: f64) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        // accumulate (x + h)^k incrementally
        let mut pw = vec![1.0];
        for (k, &c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                let mut next = vec![0.0; pw.len() + 1];
                for (i, &p) in pw.iter().enumerate() {
                    next[i] += p * h;
                    next[i + 1] += p;
                }
                pw = next;
            }
            if c != 0.0 {
                for (i, &p) in pw.iter().enumerate() {
                    out[i] += c * p;
                }
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() < 2 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Euclidean division, returning (quotient, remainder).
    /// Panics when the divisor is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        if self.degree().map_or(true, |n| n < dd) {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let n = rem.len() - 1;
        let lead = d.leading();
        let mut quot = vec![0.0; n - dd + 1];
        for k in (dd..=n).rev() {
            let q = rem[k] / lead;
            quot[k - dd] = q;
            if q != 0.0 {
                for j in 0..=dd {
                    rem[k - dd + j] -= q * d.coeffs[j];
                }
            }
            rem[k] = 0.0;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Division that must be exact up to roundoff; None when the remainder is
    /// not negligible against the operands.
    pub fn divide_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        let scale = self
            .coeffs
            .iter()
            .chain(d.coeffs.iter())
            .fold(1.0f64, |m, &c| m.max(c.abs()));
        let rmax = r.coeffs.iter().fold(0.0f64, |m, &c| m.max(c.abs()));
        if rmax <= 1e-8 * scale {
            Some(q)
        } else {
            None
        }
    }

    /// All complex roots by Durand-Kerner iteration. Deterministic: fixed
    /// starting points, fixed sweep cap. Constants have no roots.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Vec::new(),
        };
        let lead = self.leading();
        let monic: Vec<f64> = self.coeffs.iter().map(|c| c / lead).collect();
        let radius = 1.0
            + monic[..n]
                .iter()
                .fold(0.0f64, |m, &c| m.max(c.abs()));
        let seed = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| seed.powu(k as u32 + 1) * radius)
            .collect();
        let p = |w: Complex64| {
            monic
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
        };
        for _ in 0..600 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let mut den = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if j != i {
                        den *= z[i] - z[j];
                    }
                }
                if den.norm() == 0.0 {
                    den = Complex64::new(1e-300, 0.0);
                }
                let step = p(z[i]) / den;
                z[i] -= step;
                moved = moved.max(step.norm());
            }
            if moved < 1e-14 * radius {
                break;
            }
        }
        z
    }

    /// Real roots (ascending), keeping multiplicity as delivered by the
    /// complex solver. `im_tol` bounds the acceptable imaginary part.
    pub fn real_roots(&self, im_tol: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .roots()
            .into_iter()
            .filter(|z| z.im.abs() <= im_tol * (1.0 + z.re.abs()))
            .map(|z| z.re)
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    /// Render with the given variable name, highest degree first.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let mag = c.abs();
            if s.is_empty() {
                if c < 0.0 {
                    s.push('-');
                }
            } else if c < 0.0 {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let unit_coeff = mag == 1.0 && k > 0;
            if !unit_coeff {
                s.push_str(&format!("{}", mag));
            }
            if k > 0 {
                if !unit_coeff {
                    s.push('*');
                }
                s.push_str(var);
                if k > 1 {
                    s.push_str(&format!("^{}", k));
                }
            }
        }
        s
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        Poly::new(out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        (&self).neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-8i32..=8, 0..7)
            .prop_map(|v| Poly::new(v.into_iter().map(|c| c as f64).collect()))
    }

    #[test]
    fn degree_and_trim() {
        assert_eq!(Poly::new(vec![1.0, 2.0, 0.0]).degree(), Some(1));
        assert_eq!(Poly::new(vec![0.0, 0.0]).degree(), None);
        assert!(Poly::zero().is_zero());
    }

    #[test]
    fn shift_matches_direct_eval() {
        let p = Poly::new(vec![3.0, -2.0, 0.5, 1.0, -4.0]);
        let q = p.shift(1.75);
        for &x in &[-2.0, -0.3, 0.0, 0.9, 3.1] {
            assert_relative_eq!(q.eval(x), p.eval(x + 1.75), max_relative = 1e-12);
        }
    }

    #[test]
    fn shift_roundtrip() {
        let p = Poly::new(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let back = p.shift(0.625).shift(-0.625);
        for (a, b) in back.coeffs().iter().zip(p.coeffs()) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn division_roundtrip() {
        let a = Poly::new(vec![1.0, 0.0, -3.0, 2.0]);
        let b = Poly::new(vec![-1.0, 1.0]);
        let prod = &a * &b;
        let q = prod.divide_exact(&b).unwrap();
        assert_eq!(q, a);
    }

    #[test]
    fn inexact_division_rejected() {
        let a = Poly::new(vec![1.0, 1.0, 1.0]);
        let b = Poly::new(vec![-1.0, 1.0]);
        assert!(a.divide_exact(&b).is_none());
    }

    #[test]
    fn quartic_roots() {
        // (x-1)(x-2)(x-3)(x+5)
        let p = &(&Poly::new(vec![-1.0, 1.0]) * &Poly::new(vec![-2.0, 1.0]))
            * &(&Poly::new(vec![-3.0, 1.0]) * &Poly::new(vec![5.0, 1.0]));
        let roots = p.real_roots(1e-9);
        assert_eq!(roots.len(), 4);
        let expect = [-5.0, 1.0, 2.0, 3.0];
        for (r, e) in roots.iter().zip(expect) {
            assert_relative_eq!(*r, e, epsilon = 1e-9);
        }
    }

    #[test]
    fn complex_pair_detected() {
        // x^2 + 1
        let p = Poly::new(vec![1.0, 0.0, 1.0]);
        assert!(p.real_roots(1e-9).is_empty());
        let rts = p.roots();
        assert_eq!(rts.len(), 2);
        for z in rts {
            assert_relative_eq!(z.im.abs(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn display_var() {
        let p = Poly::new(vec![2.0, 0.0, -1.0, 3.0]);
        assert_eq!(p.to_string_var("H"), "3*H^3 - H^2 + 2");
        assert_eq!(Poly::zero().to_string_var("x"), "0");
        assert_eq!(Poly::constant(-1.0).to_string_var("x"), "-1");
    }

    proptest! {
        #[test]
        fn add_commutes(a in small_poly(), b in small_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn mul_commutes(a in small_poly(), b in small_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn mul_distributes(a in small_poly(), b in small_poly(), c in small_poly()) {
            let lhs = &a * &(&b + &c);
            let rhs = &(&a * &b) + &(&a * &c);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn eval_is_ring_hom(a in small_poly(), b in small_poly(), x in -4.0f64..4.0) {
            let prod = (&a * &b).eval(x);
            prop_assert!((prod - a.eval(x) * b.eval(x)).abs() <= 1e-6 * (1.0 + prod.abs()));
        }

        #[test]
        fn division_inverts_mul(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            let q = prod.divide_exact(&b);
            prop_assert!(q.is_some());
            prop_assert_eq!(q.unwrap(), a);
        }
    }
}
