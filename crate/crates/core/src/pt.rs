//! Complex-contour spectra for the real-displacement pair potential.
//!
//! With a real displacement the inverse-square pair sits directly on the
//! x axis and the grid oracle refuses to sample it. Shifting the
//! sampling line down into the complex plane, x to x - i*eps, moves both
//! poles off the contour while keeping the operator PT symmetric, so the
//! bound spectrum stays real and eps independent. The discretized
//! operator is complex symmetric, not Hermitian, and is diagonalized by
//! an implicit-shift QL sweep in complex arithmetic; states are scored
//! by the indefinite mirror overlap instead of the usual norm.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::SQRT_2;

use crate::catalog::{PotentialId, PotentialSpec};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::solver::{Spectrum, SpectrumEntry};

/// Separable 1D pieces that stay PT symmetric under the contour shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PtPart {
    /// Plain harmonic well, the y axis piece.
    Harmonic,
    /// Harmonic well with the inverse-square pair at +-a, ground
    /// referenced so its evenly spaced ladder starts one step above zero.
    RegularizedPair,
}

impl PtPart {
    pub fn as_str(&self) -> &'static str {
        match self {
            PtPart::Harmonic => "harmonic",
            PtPart::RegularizedPair => "regularized-pair",
        }
    }
}

fn part_potential(part: PtPart, a: f64, hbar: f64) -> impl Fn(Complex64) -> Complex64 {
    let h2 = hbar * hbar;
    let a2 = a * a;
    move |z| {
        let well = h2 / (8.0 * a2 * a2) * z * z;
        match part {
            PtPart::Harmonic => well,
            PtPart::RegularizedPair => {
                let zm = z - a;
                let zp = z + a;
                well + h2 / (zm * zm) + h2 / (zp * zp) - 0.75 * h2 / a2
            }
        }
    }
}

/// Dirichlet discretization sampled on the shifted line Im x = -eps.
///
/// The kinetic stencil is the same second-order one the real-line grid
/// uses; only the diagonal turns complex. The matrix is complex
/// symmetric, and PT symmetry of the potential shows up as the mirrored
/// conjugate diagonal: V(-x)* = V(x).
#[derive(Debug, Clone)]
pub struct ComplexGridHamiltonian {
    pub grid: Grid1D,
    pub epsilon: f64,
    diag: Vec<Complex64>,
    off: f64,
}

impl ComplexGridHamiltonian {
    pub fn sample(
        grid: Grid1D,
        hbar: f64,
        eps: f64,
        v: &dyn Fn(Complex64) -> Complex64,
    ) -> ComplexGridHamiltonian {
        assert!(!grid.half_line, "the shifted contour needs the full line");
        assert!(eps > 0.0 && hbar > 0.0, "positive contour depth and hbar");
        let h = grid.spacing();
        let kin = hbar * hbar / (h * h);
        let diag = grid
            .points()
            .iter()
            .map(|&x| kin + v(Complex64::new(x, -eps)))
            .collect();
        ComplexGridHamiltonian {
            grid,
            epsilon: eps,
            diag,
            off: -0.5 * kin,
        }
    }

    pub fn part(part: PtPart, a: f64, hbar: f64, eps: f64, grid: Grid1D) -> ComplexGridHamiltonian {
        assert!(a > 0.0, "positive displacement");
        let v = part_potential(part, a, hbar);
        ComplexGridHamiltonian::sample(grid, hbar, eps, &v)
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Largest |V(-x)* - V(x)| over the grid, zero for a PT-symmetric
    /// potential sampled on a symmetric box.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| (self.diag[n - 1 - i].conj() - self.diag[i]).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let n = self.n();
        assert_eq!(psi.len(), n, "state length");
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * psi[i];
                if i > 0 {
                    s += self.off * psi[i - 1];
                }
                if i + 1 < n {
                    s += self.off * psi[i + 1];
                }
                s
            })
            .collect()
    }

    /// All eigenvalues, sorted by real part then imaginary part.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        let mut d = self.diag.clone();
        let mut e = vec![Complex64::new(self.off, 0.0); self.n()];
        if let Some(last) = e.last_mut() {
            *last = Complex64::new(0.0, 0.0);
        }
        cmtql(&mut d, &mut e)?;
        d.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        Ok(d)
    }

    /// Eigenvector by inverse iteration at a converged eigenvalue,
    /// unit 2-norm, largest component rotated onto the positive real
    /// axis. The mirror overlap is phase invariant, so the rotation is
    /// cosmetic.
    pub fn eigenvector(&self, lambda: Complex64) -> Vec<Complex64> {
        let n = self.n();
        let scale = self
            .diag
            .iter()
            .map(|v| v.norm())
            .fold(self.off.abs(), f64::max);
        // deterministic start with no accidental symmetry
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| {
                Complex64::new(
                    1.0 + 0.5 * ((i.wrapping_mul(2654435761)) % 1024) as f64 / 1024.0,
                    0.0,
                )
            })
            .collect();
        normalize(&mut v);
        let shift = lambda + Complex64::new(1e-12 * scale, 0.0);
        for _ in 0..3 {
            v = self.solve_shifted(shift, &v);
            normalize(&mut v);
        }
        let imax = (0..n).fold(0, |a, i| {
            if v[i].norm_sqr() > v[a].norm_sqr() {
                i
            } else {
                a
            }
        });
        let phase = v[imax] / v[imax].norm();
        for x in v.iter_mut() {
            *x /= phase;
        }
        v
    }

    /// (T - shift) x = rhs by tridiagonal elimination with partial
    /// pivoting; pivoting fills one extra superdiagonal.
    fn solve_shifted(&self, shift: Complex64, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.n();
        let zero = Complex64::new(0.0, 0.0);
        let off = Complex64::new(self.off, 0.0);
        let dl = vec![off; n.saturating_sub(1)];
        let mut d: Vec<Complex64> = self.diag.iter().map(|&q| q - shift).collect();
        let mut du = vec![off; n.saturating_sub(1)];
        let mut du2 = vec![zero; n.saturating_sub(2)];
        let mut x = rhs.to_vec();
        let guard = |p: Complex64| {
            if p.norm() < 1e-300 {
                Complex64::new(1e-300, 0.0)
            } else {
                p
            }
        };
        for i in 0..n.saturating_sub(1) {
            if d[i].norm() >= dl[i].norm() {
                let piv = guard(d[i]);
                d[i] = piv;
                let fact = dl[i] / piv;
                let drop_d = fact * du[i];
                d[i + 1] -= drop_d;
                let drop_x = fact * x[i];
                x[i + 1] -= drop_x;
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                let xt = x[i];
                x[i] = x[i + 1];
                x[i + 1] = xt - fact * x[i];
            }
        }
        x[n - 1] /= guard(d[n - 1]);
        if n >= 2 {
            x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / guard(d[n - 2]);
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / guard(d[i]);
        }
        x
    }
}

fn normalize(v: &mut [Complex64]) {
    let s = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= s;
    }
}

/// Implicit-shift QL on a complex symmetric tridiagonal matrix. The
/// rotations satisfy c^2 + s^2 = 1 in complex arithmetic, which keeps
/// the matrix complex symmetric but is no longer a unitary similarity;
/// an isotropic rotation (f^2 + g^2 = 0 with f, g nonzero) aborts.
fn cmtql(d: &mut [Complex64], e: &mut [Complex64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut f = Complex64::new(0.0, 0.0);
    let mut tst1 = 0.0f64;
    for l in 0..n {
        let mut iter = 0;
        tst1 = tst1.max(d[l].norm() + e[l].norm());
        loop {
            let mut m = l;
            while m < n {
                if e[m].norm() <= eps * tst1 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::RootFindFailure(format!(
                    "complex ql stalled at index {l} of {n}"
                )));
            }

            // shift from the leading 2x2; (p + r)(p - r) = -1, so the
            // larger branch keeps |p + r| >= 1 and the divisions safe
            let g = d[l];
            let p = (d[l + 1] - g) / (2.0 * e[l]);
            let mut r = (p * p + 1.0).sqrt();
            if (p + r).norm() < (p - r).norm() {
                r = -r;
            }
            d[l] = e[l] / (p + r);
            d[l + 1] = e[l] * (p + r);
            let dl1 = d[l + 1];
            let mut h = g - d[l];
            for v in d.iter_mut().take(n).skip(l + 2) {
                *v -= h;
            }
            f += h;

            // implicit QL sweep back toward l
            let mut p = d[m];
            let mut c = Complex64::new(1.0, 0.0);
            let mut c2 = c;
            let mut c3 = c;
            let el1 = e[l + 1];
            let mut s = Complex64::new(0.0, 0.0);
            let mut s2 = s;
            for i in (l..m).rev() {
                c3 = c2;
                c2 = c;
                s2 = s;
                let g = c * e[i];
                h = c * p;
                let r = (p * p + e[i] * e[i]).sqrt();
                if r.norm() <= 1e-8 * (p.norm() + e[i].norm()) {
                    return Err(Error::RootFindFailure(format!(
                        "isotropic rotation at index {i} of {n}"
                    )));
                }
                e[i + 1] = s * r;
                s = e[i] / r;
                c = p / r;
                p = c * d[i] - s * g;
                d[i + 1] = h + s * (c * g + s * d[i]);
            }
            let p = -s * s2 * c3 * el1 * e[l] / dl1;
            e[l] = s * p;
            d[l] = c * p;
            if e[l].norm() <= eps * tst1 {
                break;
            }
        }
        d[l] += f;
        e[l] = Complex64::new(0.0, 0.0);
    }
    Ok(())
}

/// Knobs for the complex-contour convergence driver.
#[derive(Debug, Clone, Copy)]
pub struct PtOptions {
    pub base_n: usize,
    /// absolute shift of successive extrapolants that counts as converged
    pub tol: f64,
    pub max_doublings: usize,
    /// box half-width in units of the displacement
    pub box_factor: f64,
}

impl Default for PtOptions {
    fn default() -> Self {
        PtOptions {
            base_n: 768,
            tol: 1e-6,
            max_doublings: 4,
            box_factor: 12.0,
        }
    }
}

/// Converged complex levels plus the grid they were read from.
#[derive(Debug, Clone)]
pub struct PtConverged {
    pub values: Vec<Complex64>,
    pub n: usize,
    pub l: f64,
    pub epsilon: f64,
    pub error_estimate: f64,
}

/// k lowest-by-real-part eigenvalues of the contour-shifted operator,
/// converged by grid doubling with Richardson extrapolation. The box is
/// fixed: every catalog part confines like a Gaussian well, so only the
/// spacing needs driving, and an underresolved pole passage shows up as
/// an unstable (even complex-paired) head that keeps the loop doubling.
pub fn converged_complex_eigenvalues(
    v: &dyn Fn(Complex64) -> Complex64,
    hbar: f64,
    eps: f64,
    l: f64,
    k: usize,
    opts: &PtOptions,
) -> Result<PtConverged> {
    let head = |grid: Grid1D| -> Option<Vec<Complex64>> {
        let ham = ComplexGridHamiltonian::sample(grid, hbar, eps, v);
        // a QL breakdown on an underresolved grid is not fatal, the
        // next doubling retries
        ham.eigenvalues().ok().map(|mut vals| {
            vals.truncate(k);
            vals
        })
    };
    let mut grid = Grid1D::full(l, opts.base_n);
    let mut raw_prev = head(grid);
    let mut rich_prev: Option<Vec<Complex64>> = None;
    let mut last_delta = f64::INFINITY;
    for _ in 0..opts.max_doublings {
        let fine = grid.refined();
        let raw = head(fine);
        if let (Some(raw), Some(prev)) = (&raw, &raw_prev) {
            let rich: Vec<Complex64> = raw
                .iter()
                .zip(prev)
                .map(|(f, c)| (4.0 * f - c) / 3.0)
                .collect();
            let raw_delta = raw
                .iter()
                .zip(prev)
                .map(|(f, c)| (f - c).norm())
                .fold(0.0f64, f64::max);
            let rich_delta = rich_prev
                .as_ref()
                .map(|p| {
                    rich.iter()
                        .zip(p)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0f64, f64::max)
                })
                .unwrap_or(f64::INFINITY);
            last_delta = raw_delta.min(rich_delta);
            if last_delta < opts.tol {
                return Ok(PtConverged {
                    values: rich,
                    n: fine.n,
                    l,
                    epsilon: eps,
                    error_estimate: last_delta,
                });
            }
            rich_prev = Some(rich);
        } else {
            rich_prev = None;
        }
        raw_prev = raw;
        grid = fine;
    }
    Err(Error::GridNotConverged {
        n: grid.n,
        delta: last_delta,
    })
}

/// k lowest-by-real-part levels of one contour-shifted catalog part.
///
/// For the pair part the two lowest returned levels are not ladder
/// members: they are images of the partner well's two lowest states
/// under the first-order intertwiner and sit at strictly negative
/// energy. `split_ladder` separates them.
pub fn pt_eigenvalues(
    part: PtPart,
    a: f64,
    hbar: f64,
    eps: f64,
    k: usize,
    opts: &PtOptions,
) -> Result<PtConverged> {
    assert!(a > 0.0 && hbar > 0.0 && eps > 0.0, "positive parameters");
    let v = part_potential(part, a, hbar);
    converged_complex_eigenvalues(&v, hbar, eps, opts.box_factor * a, k, opts)
}

/// Splits pair-part levels into the evenly spaced ladder and the two
/// partner-well states below it. The ladder starts a full step above
/// zero and the partner states are strictly negative for every
/// parameter value, so the sign of the real part is the partition.
pub fn split_ladder(values: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    values.iter().copied().partition(|v| v.re > 0.0)
}

/// Two-axis spectrum of the complexified pair potential: ladder levels
/// of the pair axis plus harmonic levels of the other axis. The 1D pair
/// operator is ground referenced while the assembled potential carries
/// the raw well, which sits 3/4 of a ladder step higher, hence the
/// offset. Level p collects the p+1 index splits, so its reported
/// energy is their mean and the degeneracy is p+1. The two partner-well
/// states are 1D facts reported by `pt_eigenvalues`, not folded in here.
pub fn pt_spectrum_2d(a: f64, hbar: f64, eps: f64, k: usize, opts: &PtOptions) -> Result<Spectrum> {
    let x = pt_eigenvalues(PtPart::RegularizedPair, a, hbar, eps, k + 2, opts)?;
    let y = pt_eigenvalues(PtPart::Harmonic, a, hbar, eps, k, opts)?;
    let (ladder, partner) = split_ladder(&x.values);
    assert_eq!(partner.len(), 2, "pair part keeps exactly two partner states");
    let offset = 0.75 * hbar * hbar / (a * a);
    let mut entries = Vec::with_capacity(k);
    for p in 0..k {
        let mut sum = 0.0;
        for nx in 0..=p {
            sum += ladder[nx].re + offset + y.values[p - nx].re;
        }
        entries.push(SpectrumEntry {
            energy: sum / (p as f64 + 1.0),
            degeneracy: p as u32 + 1,
            family_id: 0,
        });
    }
    let mut spec = PotentialSpec::with_defaults(PotentialId::P1);
    spec.params.hbar = hbar;
    spec.params.length = a;
    spec.params.length_imaginary = false;
    Ok(Spectrum {
        entries,
        params: spec.spectrum_params(),
    })
}

/// Indefinite overlap of a state with the conjugate of its mirror image.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PseudoNorm {
    /// overlap of the unit-norm state, before sign normalization
    pub value: f64,
    pub sigma: f64,
    /// half-resolution quadrature difference plus the residual imaginary
    /// part (the exact overlap is real by the mirror substitution)
    pub quad_error: f64,
}

/// Mirror overlap sum over the symmetric box. A magnitude below 1e-10
/// flags an exceptional point where the state is orthogonal to its own
/// mirror conjugate and no sign can be assigned; `index` labels the
/// offending state in the caller's list.
pub fn pseudo_norm(psi: &[Complex64], grid: &Grid1D, index: usize) -> Result<PseudoNorm> {
    assert!(!grid.half_line, "mirror overlap needs the full line");
    assert_eq!(psi.len(), grid.n, "state length");
    let n = grid.n;
    let h = grid.spacing();
    let norm: f64 = psi.iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
    let fine: Complex64 = (0..n).map(|i| psi[n - 1 - i].conj() * psi[i]).sum();
    let coarse: Complex64 = (1..n)
        .step_by(2)
        .map(|i| psi[n - 1 - i].conj() * psi[i])
        .sum();
    let q = fine * h / norm;
    let q2 = coarse * 2.0 * h / norm;
    let value = q.re;
    let quad_error = (q - q2).norm().max(q.im.abs());
    if value.abs() < 1e-10 {
        return Err(Error::SelfOrthogonal { index });
    }
    Ok(PseudoNorm {
        value,
        sigma: value.signum(),
        quad_error,
    })
}

/// One converged level with its sign and grid provenance, the shape the
/// reports serialize.
#[derive(Debug, Clone, Serialize)]
pub struct PtLevelRecord {
    pub re: f64,
    pub im: f64,
    pub sigma: f64,
    pub pseudo_norm: f64,
    pub quad_error: f64,
    pub epsilon: f64,
    pub n: usize,
    pub l: f64,
}

/// Converged levels of one part scored by the mirror overlap.
pub fn pt_states(
    part: PtPart,
    a: f64,
    hbar: f64,
    eps: f64,
    k: usize,
    opts: &PtOptions,
) -> Result<Vec<PtLevelRecord>> {
    let conv = pt_eigenvalues(part, a, hbar, eps, k, opts)?;
    let grid = Grid1D::full(conv.l, conv.n);
    let v = part_potential(part, a, hbar);
    let ham = ComplexGridHamiltonian::sample(grid, hbar, eps, &v);
    let mut out = Vec::with_capacity(conv.values.len());
    for (i, &lam) in conv.values.iter().enumerate() {
        let state = ham.eigenvector(lam);
        let pn = pseudo_norm(&state, &ham.grid, i)?;
        out.push(PtLevelRecord {
            re: lam.re,
            im: lam.im,
            sigma: pn.sigma,
            pseudo_norm: pn.value,
            quad_error: pn.quad_error,
            epsilon: eps,
            n: conv.n,
            l: conv.l,
        });
    }
    Ok(out)
}

fn hermite_c(k: usize, u: Complex64) -> Complex64 {
    let mut h0 = Complex64::new(1.0, 0.0);
    let mut h1 = 2.0 * u;
    if k == 0 {
        return h0;
    }
    for j in 1..k {
        let next = 2.0 * u * h1 - 2.0 * (j as f64) * h0;
        h0 = h1;
        h1 = next;
    }
    h1
}

/// Closed-form harmonic eigenfunction sampled on the shifted contour,
/// unnormalized.
pub fn harmonic_state(m: usize, a: f64, eps: f64, grid: &Grid1D) -> Vec<Complex64> {
    grid.points()
        .iter()
        .map(|&x| {
            let z = Complex64::new(x, -eps);
            (-z * z / (4.0 * a * a)).exp() * hermite_c(m, z / (SQRT_2 * a))
        })
        .collect()
}

/// Closed-form ladder eigenfunction of the pair axis on the contour,
/// unnormalized: the first-order factor applied to the harmonic state
/// three rungs up, which lands at energy (n+1) steps above zero.
pub fn ladder_state(n: usize, a: f64, eps: f64, grid: &Grid1D) -> Vec<Complex64> {
    grid.points()
        .iter()
        .map(|&x| {
            let z = Complex64::new(x, -eps);
            let u = z / (SQRT_2 * a);
            let gauss = (-z * z / (4.0 * a * a)).exp();
            let swing = 2.0 * z / (z * z - a * a) * hermite_c(n + 3, u);
            let drop = 2.0 * (n as f64 + 3.0) / (SQRT_2 * a) * hermite_c(n + 2, u);
            gauss * (swing - drop)
        })
        .collect()
}
