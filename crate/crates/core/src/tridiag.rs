//! Symmetric tridiagonal eigensolver: Sturm-count bisection for the
//! lowest eigenvalues, inverse iteration for eigenvectors.
//!
//! Bisection is preferred over QL/QR here because only a handful of the
//! lowest eigenvalues are ever needed from grids with thousands of
//! points, and the Sturm count gives each one independently, which also
//! makes the loop embarrassingly parallel.

use crate::par;

#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> SymTridiag {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length");
        SymTridiag { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below x (Sturm sequence count).
    /// Near-zero pivots are forced negative, the conservative convention.
    pub fn count_below(&self, x: f64) -> usize {
        let off_sq_max = self.off.iter().fold(0.0f64, |m, &e| m.max(e * e));
        let pivmin = (f64::MIN_POSITIVE / f64::EPSILON) * (1.0 + off_sq_max);
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        let mut count = usize::from(q < 0.0);
        for i in 1..self.n() {
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin bounds containing the whole spectrum.
    fn bounds(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The k lowest eigenvalues, ascending.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let k = k.min(self.n());
        let (lo, hi) = self.bounds();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        par::map_indexed(k, |j| self.bisect_for(j, lo, hi, scale))
    }

    /// Sequential twin for the bench comparison.
    pub fn lowest_eigenvalues_seq(&self, k: usize) -> Vec<f64> {
        let k = k.min(self.n());
        let (lo, hi) = self.bounds();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        par::map_indexed_seq(k, |j| self.bisect_for(j, lo, hi, scale))
    }

    /// Bisection for the j-th eigenvalue (0-based, ascending): maintains
    /// count_below(lo) <= j < count_below(hi).
    fn bisect_for(&self, j: usize, mut lo: f64, mut hi: f64, scale: f64) -> f64 {
        let tol = 1e-14 * scale;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * v[i];
            if i > 0 {
                s += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * v[i + 1];
            }
            out[i] = s;
        }
        out
    }

    /// Normalized eigenvector by inverse iteration at the given value.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.n();
        let scale = self
            .diag
            .iter()
            .chain(self.off.iter())
            .fold(1.0f64, |m, &v| m.max(v.abs()));
        // deterministic start with no accidental symmetry
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i.wrapping_mul(2654435761)) % 1024) as f64 / 1024.0)
            .collect();
        normalize(&mut v);
        for _ in 0..3 {
            v = self.solve_shifted(lambda + 1e-12 * scale, &v);
            normalize(&mut v);
        }
        let imax = (0..n).fold(0, |a, i| if v[i].abs() > v[a].abs() { i } else { a });
        if v[imax] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        v
    }

    /// Solves (T - shift I) x = b by elimination with partial pivoting;
    /// pivoting introduces one extra superdiagonal of fill-in.
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        let tiny = f64::MIN_POSITIVE / f64::EPSILON;
        if n == 1 {
            let d = self.diag[0] - shift;
            let d = if d.abs() < tiny { tiny } else { d };
            return vec![b[0] / d];
        }
        let mut dg: Vec<f64> = self.diag.iter().map(|&x| x - shift).collect();
        let mut up1 = vec![0.0; n];
        up1[..n - 1].copy_from_slice(&self.off);
        let mut up2 = vec![0.0; n];
        let mut rhs = b.to_vec();
        for i in 0..n - 1 {
            let mut low = self.off[i];
            if low.abs() > dg[i].abs() {
                std::mem::swap(&mut dg[i], &mut low);
                // after swapping the leading entries, the remainder of the
                // two rows exchanges as well
                let t = up1[i];
                up1[i] = dg[i + 1];
                dg[i + 1] = t;
                let t = up2[i];
                up2[i] = up1[i + 1];
                up1[i + 1] = t;
                rhs.swap(i, i + 1);
            }
            if dg[i].abs() < tiny {
                dg[i] = tiny.copysign(dg[i]);
            }
            let m = low / dg[i];
            dg[i + 1] -= m * up1[i];
            up1[i + 1] -= m * up2[i];
            rhs[i + 1] -= m * rhs[i];
        }
        if dg[n - 1].abs() < tiny {
            dg[n - 1] = tiny.copysign(dg[n - 1]);
        }
        let mut x = vec![0.0; n];
        x[n - 1] = rhs[n - 1] / dg[n - 1];
        if n >= 2 {
            x[n - 2] = (rhs[n - 2] - up1[n - 2] * x[n - 1]) / dg[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (rhs[i] - up1[i] * x[i + 1] - up2[i] * x[i + 2]) / dg[i];
        }
        x
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}
