//! Fock-boundary enumeration of unitary representations and spectra.
//!
//! A (p+1)-dimensional unitary chain needs Φ(0) = Φ(p+1) = 0 with
//! Φ(x) > 0 strictly in between. For catalogued potentials the quartic
//! factors with roots affine in E, so both boundary conditions reduce to
//! linear equations; `solve_generic` is the numeric fallback that scans E
//! and tracks quartic root branches instead.

use serde::Serialize;

use crate::algebra::CubicAlgebra;
use crate::error::{Error, Result};
use crate::structure::linear_structure;

/// Root of the structure quartic, affine in energy: r(E) = slope·E + offset.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AffineRoot {
    pub slope: f64,
    pub offset: f64,
}

impl AffineRoot {
    pub fn new(slope: f64, offset: f64) -> Self {
        AffineRoot { slope, offset }
    }

    pub fn eval(&self, e: f64) -> f64 {
        self.slope * e + self.offset
    }
}

/// Factored quartic for one potential mode: Φ(t) = c·Π(t − rᵢ(E)).
///
/// Only the sign of `constant` decides unitarity; its magnitude merely
/// scales the reported Φ values (overall rescalings are equivalent).
#[derive(Debug, Clone)]
pub struct FactoredPhi {
    pub roots: [AffineRoot; 4],
    pub constant: f64,
}

/// One accepted boundary solution: a (p+1)-dimensional chain at energy E.
#[derive(Debug, Clone, Serialize)]
pub struct RepresentationSolution {
    pub u: f64,
    pub p: u32,
    pub energy: f64,
    /// 4i+j for the ordered root pairing (i,j) that produced it, 0-based.
    pub family_id: usize,
    /// Φ(1..p); empty for singlets.
    pub phi_values: Vec<f64>,
    pub unitary: bool,
    pub physical: bool,
}

impl RepresentationSolution {
    pub fn dimension(&self) -> u32 {
        self.p + 1
    }
}

fn sort_solutions(out: &mut [RepresentationSolution]) {
    out.sort_by(|a, b| {
        a.energy
            .partial_cmp(&b.energy)
            .unwrap()
            .then(a.family_id.cmp(&b.family_id))
    });
}

/// Enumerates chains from a factored quartic by pairing roots.
///
/// u = rᵢ(E) plants Φ(0) = 0; rⱼ(E) − rᵢ(E) = p+1 then pins E. Pairings
/// with constant root separation never pin E and are skipped; solutions
/// with any interior Φ(x) ≤ 0 are discarded; identical (E, p) pairs from
/// different pairings are kept once.
pub fn solve_factored(phi: &FactoredPhi, p: u32) -> Vec<RepresentationSolution> {
    let mut out: Vec<RepresentationSolution> = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let ds = phi.roots[j].slope - phi.roots[i].slope;
            if ds.abs() < 1e-12 {
                continue;
            }
            let doff = phi.roots[j].offset - phi.roots[i].offset;
            let e = (p as f64 + 1.0 - doff) / ds;
            let u = phi.roots[i].eval(e);
            let xroots: Vec<f64> = phi.roots.iter().map(|r| r.eval(e) - u).collect();
            let mut vals = Vec::with_capacity(p as usize);
            let mut unitary = true;
            for x in 1..=p {
                let v = phi.constant * xroots.iter().map(|r| x as f64 - r).product::<f64>();
                if v <= 0.0 {
                    unitary = false;
                    break;
                }
                vals.push(v);
            }
            if !unitary {
                continue;
            }
            if out
                .iter()
                .any(|s| s.p == p && (s.energy - e).abs() < 1e-8)
            {
                continue;
            }
            out.push(RepresentationSolution {
                u,
                p,
                energy: e,
                family_id: 4 * i + j,
                phi_values: vals,
                unitary: true,
                physical: true,
            });
        }
    }
    sort_solutions(&mut out);
    out
}

/// Numeric boundary scan for algebras without a catalogued factorization.
///
/// At each grid energy the u candidates are the real roots of the quartic
/// in t (Φ(0) = 0 makes t = u a root); Φ(p+1) is then tracked along each
/// root branch and sign changes are bisected to 1e-10 in E.
pub fn solve_generic(
    alg: &CubicAlgebra,
    p: u32,
    e_range: (f64, f64),
    grid: usize,
) -> Result<Vec<RepresentationSolution>> {
    if alg.beta != 0.0 {
        return Err(Error::RealizationUndefined(
            "boundary scan requires a linear realization".into(),
        ));
    }
    let (e_lo, e_hi) = e_range;
    let mut out: Vec<RepresentationSolution> = Vec::new();
    if !(e_hi > e_lo) || grid < 2 {
        return Ok(out);
    }

    let u_candidates = |e: f64| -> Result<Vec<f64>> {
        let sf = linear_structure(alg, e, 0.0)?;
        if sf.coeff.is_zero() {
            return Err(Error::RootFindFailure(format!(
                "structure function vanishes identically at E = {e}"
            )));
        }
        Ok(sf.coeff.real_roots(1e-9))
    };
    let boundary_gap = |e: f64, u: f64| -> Result<f64> {
        let sf = linear_structure(alg, e, u)?;
        Ok(sf.eval(p as f64 + 1.0))
    };
    let nearest = |roots: &[f64], target: f64| -> Option<f64> {
        roots
            .iter()
            .copied()
            .min_by(|a, b| (a - target).abs().partial_cmp(&(b - target).abs()).unwrap())
    };

    let step = (e_hi - e_lo) / (grid as f64 - 1.0);
    let mut prev_e = e_lo;
    let mut prev_roots = u_candidates(e_lo)?;
    for k in 1..grid {
        let e = e_lo + step * k as f64;
        let roots = u_candidates(e)?;
        for &u1 in &prev_roots {
            let Some(u2) = nearest(&roots, u1) else {
                continue;
            };
            let g1 = boundary_gap(prev_e, u1)?;
            let g2 = boundary_gap(e, u2)?;
            if g1 == 0.0 || g1 * g2 > 0.0 {
                continue;
            }
            // bisect along the branch
            let (mut ea, mut eb) = (prev_e, e);
            let (mut ua, mut ga) = (u1, g1);
            while eb - ea > 1e-10 {
                let em = 0.5 * (ea + eb);
                let rm = u_candidates(em)?;
                let Some(um) = nearest(&rm, ua) else { break };
                let gm = boundary_gap(em, um)?;
                if gm == 0.0 {
                    ea = em;
                    eb = em;
                    ua = um;
                    break;
                }
                if ga * gm < 0.0 {
                    eb = em;
                } else {
                    ea = em;
                    ua = um;
                    ga = gm;
                }
            }
            let e_star = 0.5 * (ea + eb);
            let Some(u_star) = nearest(&u_candidates(e_star)?, ua) else {
                continue;
            };
            let sf = linear_structure(alg, e_star, u_star)?;
            let scale = sf.coeff.coeffs().iter().fold(1.0f64, |m, c| m.max(c.abs()));
            if sf.eval(p as f64 + 1.0).abs() > 1e-6 * scale {
                continue;
            }
            if out
                .iter()
                .any(|s| s.p == p && (s.energy - e_star).abs() < 1e-8)
            {
                continue;
            }
            let vals: Vec<f64> = (1..=p).map(|x| sf.eval(x as f64)).collect();
            let unitary = vals.iter().all(|v| *v > 0.0);
            out.push(RepresentationSolution {
                u: u_star,
                p,
                energy: e_star,
                family_id: 0,
                phi_values: vals,
                unitary,
                physical: true,
            });
        }
        prev_e = e;
        prev_roots = roots;
    }
    sort_solutions(&mut out);
    Ok(out)
}

/// Flags solutions below the potential floor; keeps them for reporting.
pub fn physical_filter(
    mut solutions: Vec<RepresentationSolution>,
    v_min: f64,
) -> Vec<RepresentationSolution> {
    for s in &mut solutions {
        s.physical = s.energy >= v_min;
    }
    solutions
}

/// One spectrum line: a level produced by a single (family, p) pair.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumEntry {
    pub energy: f64,
    pub degeneracy: u32,
    pub family_id: usize,
}

/// Potential parameters a spectrum was computed at.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumParams {
    pub hbar: f64,
    pub omega: f64,
    pub length: f64,
    pub length_imaginary: bool,
}

/// Energy levels with per-family degeneracies, ascending in energy.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    pub params: SpectrumParams,
}

impl Spectrum {
    /// Levels merged across families with coincidence tolerance 1e-8.
    pub fn merged(&self) -> Vec<(f64, u32)> {
        let mut out: Vec<(f64, u32)> = Vec::new();
        for e in &self.entries {
            match out.last_mut() {
                Some((energy, deg)) if (e.energy - *energy).abs() < 1e-8 => {
                    *deg += e.degeneracy;
                }
                _ => out.push((e.energy, e.degeneracy)),
            }
        }
        out
    }
}
