//! Catalogue of the nine potentials: evaluators, algebra constants,
//! factored structure quartics, and closed-form reference spectra.
//!
//! The shifted-pair potentials come in two parameter modes. With an
//! imaginary displacement (length_imaginary, the default) the singular
//! pair collapses to the real rational 2(z² − a₀²)/(z² + a₀²)² and the
//! potential is regular on the whole plane; with a real displacement the
//! barriers are genuine and the catalogue flags the families whose
//! boundary conditions are not settled.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::CubicAlgebra;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::solver::{
    physical_filter, solve_factored, AffineRoot, FactoredPhi, RepresentationSolution, Spectrum,
    SpectrumEntry, SpectrumParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialId {
    ReducibleIso,
    ReducibleSw1,
    ReducibleSw2,
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
}

impl PotentialId {
    pub fn all() -> [PotentialId; 9] {
        use PotentialId::*;
        [
            ReducibleIso,
            ReducibleSw1,
            ReducibleSw2,
            P1,
            P2,
            P3,
            P4,
            P5,
            P6,
        ]
    }

    pub fn as_str(&self) -> &'static str {
        use PotentialId::*;
        match self {
            ReducibleIso => "reducible_iso",
            ReducibleSw1 => "reducible_sw1",
            ReducibleSw2 => "reducible_sw2",
            P1 => "p1",
            P2 => "p2",
            P3 => "p3",
            P4 => "p4",
            P5 => "p5",
            P6 => "p6",
        }
    }

    pub fn parse(s: &str) -> Result<PotentialId> {
        PotentialId::all()
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownPotential(s.to_string()))
    }
}

/// Runtime parameters; `length` is a (real mode) or a₀ (imaginary mode).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PotentialParams {
    pub hbar: f64,
    pub omega: f64,
    pub length: f64,
    pub length_imaginary: bool,
    /// inverse-square couplings of the reducible entries
    pub b: f64,
    pub c: f64,
}

/// One closed-form reference family.
///
/// Product families contribute one eigenstate per lattice point
/// (k₁, k₂ ≥ 0) at E = base + step1·k₁ + step2·k₂ (a zero step freezes
/// its index at 0). Level families contribute one level per p with
/// degeneracy p+1 at E = base + step1·p.
#[derive(Debug, Clone, Serialize)]
pub struct ReferenceFamily {
    pub label: &'static str,
    pub base: f64,
    pub step1: f64,
    pub step2: f64,
    pub level_degeneracy: bool,
    pub p_max: Option<u32>,
}

/// A catalogue entry bound to concrete parameter values.
#[derive(Debug, Clone)]
pub struct PotentialSpec {
    pub id: PotentialId,
    pub params: PotentialParams,
}

fn guarded_inv_sq(d: f64) -> Option<f64> {
    if d.abs() < 1e-12 {
        None
    } else {
        Some(1.0 / (d * d))
    }
}

impl PotentialSpec {
    /// Entry at ħ = ω = 1, unit length, imaginary displacement where the
    /// paper's unitary families live, unit inverse-square couplings.
    pub fn with_defaults(id: PotentialId) -> PotentialSpec {
        use PotentialId::*;
        PotentialSpec {
            id,
            params: PotentialParams {
                hbar: 1.0,
                omega: 1.0,
                length: 1.0,
                length_imaginary: matches!(id, P1 | P4 | P5 | P6),
                b: 1.0,
                c: 1.0,
            },
        }
    }

    pub fn new(id: PotentialId, params: PotentialParams) -> PotentialSpec {
        PotentialSpec { id, params }
    }

    /// Signed square of the displacement: a² (real mode) or −a₀².
    fn s(&self) -> f64 {
        let l2 = self.params.length * self.params.length;
        if self.params.length_imaginary {
            -l2
        } else {
            l2
        }
    }

    /// ħ²·(1/(z−a)² + 1/(z+a)²) in whichever mode is active.
    fn pair(&self, z: f64) -> Option<f64> {
        let h2 = self.params.hbar * self.params.hbar;
        let l = self.params.length;
        if self.params.length_imaginary {
            let d = z * z + l * l;
            Some(h2 * 2.0 * (z * z - l * l) / (d * d))
        } else {
            Some(h2 * (guarded_inv_sq(z - l)? + guarded_inv_sq(z + l)?))
        }
    }

    /// x-part of the potential; None at a barrier coordinate.
    pub fn vx(&self, x: f64) -> Option<f64> {
        use PotentialId::*;
        let p = &self.params;
        let h2 = p.hbar * p.hbar;
        let w2 = p.omega * p.omega;
        let s2 = self.s() * self.s();
        match self.id {
            ReducibleIso => Some(w2 / 2.0 * x * x),
            ReducibleSw1 => Some(w2 / 2.0 * x * x + p.b * guarded_inv_sq(x)?),
            ReducibleSw2 => Some(w2 * 2.0 * x * x + p.c * x),
            P1 => Some(h2 * x * x / (8.0 * s2) + self.pair(x)?),
            P2 | P3 => Some(w2 / 2.0 * 9.0 * x * x),
            P4 => Some(h2 * 9.0 * x * x / (8.0 * s2)),
            P5 => Some(h2 / (8.0 * s2) * (x * x + self.pair(x)? / h2)),
            P6 => Some(h2 * x * x / (8.0 * s2) + self.pair(x)?),
        }
    }

    /// y-part of the potential; None at a barrier coordinate.
    pub fn vy(&self, y: f64) -> Option<f64> {
        use PotentialId::*;
        let p = &self.params;
        let h2 = p.hbar * p.hbar;
        let w2 = p.omega * p.omega;
        let s2 = self.s() * self.s();
        match self.id {
            ReducibleIso => Some(w2 / 2.0 * y * y),
            ReducibleSw1 => Some(w2 / 2.0 * y * y + p.c * guarded_inv_sq(y)?),
            ReducibleSw2 => Some(w2 / 2.0 * y * y + p.b * guarded_inv_sq(y)?),
            P1 => Some(h2 * y * y / (8.0 * s2)),
            P2 => Some(w2 / 2.0 * y * y),
            P3 => Some(w2 / 2.0 * y * y + h2 * guarded_inv_sq(y)?),
            P4 => Some(h2 * y * y / (8.0 * s2) + self.pair(y)?),
            P5 => Some(h2 / (8.0 * s2) * (y * y + guarded_inv_sq(y)?)),
            P6 => Some(h2 * y * y / (8.0 * s2) + self.pair(y)?),
        }
    }

    /// V(x, y) = vx(x) + vy(y).
    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        match (self.vx(x), self.vy(y)) {
            (Some(a), Some(b)) => Ok(a + b),
            _ => Err(Error::SingularPoint { x, y }),
        }
    }

    /// Cubic-algebra constants, available for the four irreducible
    /// potentials that close at third order.
    pub fn algebra(&self) -> Result<CubicAlgebra> {
        use PotentialId::*;
        let p = &self.params;
        let h2 = p.hbar * p.hbar;
        let (h4, h6) = (h2 * h2, h2 * h2 * h2);
        let (h8, h10) = (h4 * h4, h4 * h6);
        let w2 = p.omega * p.omega;
        let s = self.s();
        let (s2, s3, s4) = (s * s, s * s * s, s * s * s * s);
        let z = Poly::zero();
        match self.id {
            P1 => CubicAlgebra::new(
                0.0,
                0.0,
                -2.0 * h2,
                z.clone(),
                Poly::constant(4.0 * h4 / s2),
                z,
                Poly::new(vec![6.0 * h4 / s, -6.0 * h2]),
                Poly::new(vec![2.0 * h6 / s2, 8.0 * h4 / s]),
                Poly::new(vec![-6.0 * h8 / s3, -2.0 * h6 / s2, -8.0 * h4 / s, 8.0 * h2]),
                Poly::new(vec![
                    -3.0 * h10 / s4,
                    -40.0 * h8 / s3,
                    16.0 * h6 / s2,
                    32.0 * h4 / s,
                    -16.0 * h2,
                ]),
            )
            .map(|a| a.with_sqrt_delta_sign(s.signum())),
            P2 => CubicAlgebra::new(
                0.0,
                0.0,
                -2.0 * h2,
                z.clone(),
                Poly::constant(144.0 * w2 * h2),
                z,
                Poly::new(vec![0.0, 6.0 * h2]),
                Poly::constant(-56.0 * w2 * h4),
                Poly::new(vec![0.0, 72.0 * w2 * h4, 0.0, -8.0 * h2]),
                Poly::new(vec![
                    720.0 * w2 * w2 * h6,
                    0.0,
                    64.0 * w2 * h4,
                    0.0,
                    -16.0 * h2,
                ]),
            ),
            P3 => CubicAlgebra::new(
                0.0,
                0.0,
                -2.0 * h2,
                z.clone(),
                Poly::constant(144.0 * w2 * h2),
                z,
                Poly::new(vec![0.0, 6.0 * h2]),
                Poly::constant(-8.0 * w2 * h4),
                Poly::new(vec![0.0, 72.0 * w2 * h4, 0.0, -8.0 * h2]),
                Poly::new(vec![
                    -1008.0 * w2 * w2 * h6,
                    0.0,
                    256.0 * w2 * h4,
                    0.0,
                    -16.0 * h2,
                ]),
            ),
            P4 => CubicAlgebra::new(
                0.0,
                0.0,
                -2.0 * h2,
                z.clone(),
                Poly::constant(36.0 * h4 / s2),
                z,
                Poly::new(vec![0.0, 6.0 * h2]),
                Poly::constant(10.0 * h6 / s2),
                Poly::new(vec![-24.0 * h8 / s3, 18.0 * h6 / s2, 0.0, -8.0 * h2]),
                Poly::new(vec![
                    -171.0 * h10 / s4,
                    96.0 * h8 / s3,
                    112.0 * h6 / s2,
                    0.0,
                    -16.0 * h2,
                ]),
            )
            .map(|a| a.with_sqrt_delta_sign(s.signum())),
            P5 | P6 => Err(Error::NoFiniteCubicAlgebra(self.id.as_str().to_string())),
            _ => Err(Error::NotCatalogued {
                id: self.id.as_str().to_string(),
                what: "cubic algebra".to_string(),
            }),
        }
    }

    /// Factored structure quartic with roots affine in E.
    pub fn factored_phi(&self) -> Result<FactoredPhi> {
        use PotentialId::*;
        let p = &self.params;
        let h2 = p.hbar * p.hbar;
        let h6 = h2 * h2 * h2;
        let s = self.s();
        match self.id {
            P1 => Ok(FactoredPhi {
                roots: [
                    AffineRoot::new(-s / h2, -0.5),
                    AffineRoot::new(s / h2, 0.5),
                    AffineRoot::new(-s / h2, 1.5),
                    AffineRoot::new(-s / h2, 2.5),
                ],
                constant: -h6 / (s * s),
            }),
            P2 => {
                let m = 1.0 / (6.0 * p.omega * p.hbar);
                Ok(FactoredPhi {
                    roots: [
                        AffineRoot::new(-m, 0.5),
                        AffineRoot::new(m, 1.0 / 6.0),
                        AffineRoot::new(m, 0.5),
                        AffineRoot::new(m, 5.0 / 6.0),
                    ],
                    constant: -36.0 * p.omega * p.omega * h2 * h2,
                })
            }
            P3 => {
                let m = 1.0 / (6.0 * p.omega * p.hbar);
                Ok(FactoredPhi {
                    roots: [
                        AffineRoot::new(-m, 0.5),
                        AffineRoot::new(m, -1.0 / 6.0),
                        AffineRoot::new(m, 0.5),
                        AffineRoot::new(m, 7.0 / 6.0),
                    ],
                    constant: -36.0 * p.omega * p.omega * h2 * h2,
                })
            }
            P4 => {
                let m = s / (3.0 * h2);
                Ok(FactoredPhi {
                    roots: [
                        AffineRoot::new(m, -0.5),
                        AffineRoot::new(-m, 0.5),
                        AffineRoot::new(m, 5.0 / 6.0),
                        AffineRoot::new(m, 7.0 / 6.0),
                    ],
                    constant: -9.0 * h6 / (s * s),
                })
            }
            P5 | P6 => Err(Error::NoFiniteCubicAlgebra(self.id.as_str().to_string())),
            _ => Err(Error::NotCatalogued {
                id: self.id.as_str().to_string(),
                what: "factored structure function".to_string(),
            }),
        }
    }

    /// Catalogued potential floor, or a numeric estimate when the floor
    /// has no closed form.
    pub fn v_min(&self) -> f64 {
        use PotentialId::*;
        let p = &self.params;
        let h2 = p.hbar * p.hbar;
        let l2 = p.length * p.length;
        match (self.id, p.length_imaginary) {
            (P1, true) | (P4, true) => -2.0 * h2 / l2,
            (P2, _) | (ReducibleIso, _) => 0.0,
            (P3, _) => std::f64::consts::SQRT_2 * p.omega * p.hbar,
            _ => self.v_min_estimate(),
        }
    }

    /// Coarse scan plus ternary refinement of each separable part.
    fn v_min_estimate(&self) -> f64 {
        let reach = 8.0 * self.params.length.abs() + 8.0 / self.params.omega.max(0.25);
        let min1d = |f: &dyn Fn(f64) -> Option<f64>| -> f64 {
            let n = 4096;
            let mut best = f64::INFINITY;
            let mut best_t = 0.0;
            for i in 0..=n {
                let t = -reach + 2.0 * reach * i as f64 / n as f64;
                if let Some(v) = f(t) {
                    if v < best {
                        best = v;
                        best_t = t;
                    }
                }
            }
            let (mut lo, mut hi) = (best_t - 2.0 * reach / n as f64, best_t + 2.0 * reach / n as f64);
            for _ in 0..200 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                let v1 = f(m1).unwrap_or(f64::INFINITY);
                let v2 = f(m2).unwrap_or(f64::INFINITY);
                if v1 < v2 {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let t = 0.5 * (lo + hi);
            f(t).unwrap_or(best).min(best)
        };
        min1d(&|x| self.vx(x)) + min1d(&|y| self.vy(y))
    }

    /// Families whose physical reading is not settled for real
    /// displacements (impenetrable barriers, open boundary conditions).
    pub fn real_a_unverified(&self) -> bool {
        use PotentialId::*;
        matches!(self.id, P1 | P4 | P5 | P6) && !self.params.length_imaginary
    }

    /// Closed-form reference families for this entry and parameter mode.
    pub fn reference_families(&self) -> Vec<ReferenceFamily> {
        use PotentialId::*;
        let p = &self.params;
        let wh = p.omega * p.hbar;
        let q = p.hbar * p.hbar / (2.0 * p.length * p.length);
        let alpha = |g: f64| 0.5 * (1.0 + (1.0 + 8.0 * g / (p.hbar * p.hbar)).sqrt());
        let products = |label, base, s1, s2| ReferenceFamily {
            label,
            base,
            step1: s1,
            step2: s2,
            level_degeneracy: false,
            p_max: None,
        };
        let levels = |label, base, step, p_max| ReferenceFamily {
            label,
            base,
            step1: step,
            step2: 0.0,
            level_degeneracy: true,
            p_max,
        };
        match (self.id, p.length_imaginary) {
            (ReducibleIso, _) => vec![products("oscillator products", wh, wh, wh)],
            (ReducibleSw1, _) => vec![products(
                "inverse-square oscillator products",
                wh * (alpha(p.b) + alpha(p.c)),
                2.0 * wh,
                2.0 * wh,
            )],
            (ReducibleSw2, _) => vec![products(
                "shifted anisotropic products",
                wh * (1.5 + alpha(p.b)) - p.c * p.c / (8.0 * p.omega * p.omega),
                2.0 * wh,
                2.0 * wh,
            )],
            (P1, true) => vec![
                products("doublet products", 2.0 * q, q, q),
                products("x-singlet tower", -q, q, 0.0),
            ],
            (P1, false) => vec![levels("outer-well levels", 3.0 * q, q, None)],
            (P2, _) => vec![products("anisotropic products", 2.0 * wh, 3.0 * wh, wh)],
            (P3, _) => vec![products("barrier products", 4.0 * wh, 3.0 * wh, 2.0 * wh)],
            (P4, true) => vec![
                products("doublet products", 3.0 * q, 3.0 * q, q),
                products("y-singlet tower", 0.0, 3.0 * q, 0.0),
            ],
            (P4, false) => vec![
                levels("inner levels", 6.0 * q, 3.0 * q, None),
                levels("upper edge level", 2.0 * q, 3.0 * q, Some(0)),
                levels("lower edge level", q, 3.0 * q, Some(0)),
            ],
            (P5, true) => vec![
                products("doublet products", 5.0 * q, q, 2.0 * q),
                products("x-singlet tower", 2.0 * q, 2.0 * q, 0.0),
            ],
            (P6, true) => vec![
                products("doublet products", 3.0 * q, q, q),
                products("x-singlet tower", 0.0, q, 0.0),
                products("y-singlet tower", 0.0, q, 0.0),
                products("double-singlet state", -3.0 * q, 0.0, 0.0),
            ],
            (P5, false) | (P6, false) => Vec::new(),
        }
    }

    pub fn spectrum_params(&self) -> SpectrumParams {
        SpectrumParams {
            hbar: self.params.hbar,
            omega: self.params.omega,
            length: self.params.length,
            length_imaginary: self.params.length_imaginary,
        }
    }

    /// Enumerates the reference families up to e_max.
    pub fn reference_spectrum(&self, e_max: f64) -> Spectrum {
        let tol = 1e-9;
        let mut entries = Vec::new();
        for (idx, fam) in self.reference_families().iter().enumerate() {
            if fam.level_degeneracy {
                let mut p = 0u32;
                loop {
                    if let Some(cap) = fam.p_max {
                        if p > cap {
                            break;
                        }
                    }
                    let e = fam.base + fam.step1 * p as f64;
                    if e > e_max + tol {
                        break;
                    }
                    entries.push(SpectrumEntry {
                        energy: e,
                        degeneracy: p + 1,
                        family_id: idx,
                    });
                    if fam.step1 <= 0.0 {
                        break;
                    }
                    p += 1;
                }
            } else {
                let k_cap = |base: f64, step: f64| -> u32 {
                    if step <= 0.0 {
                        0
                    } else {
                        (((e_max - base) / step).floor().max(-1.0) as i64).max(-1) as u32
                    }
                };
                let k1_max = if fam.base > e_max + tol && fam.step1 <= 0.0 {
                    continue;
                } else {
                    k_cap(fam.base, fam.step1)
                };
                for k1 in 0..=k1_max {
                    let e1 = fam.base + fam.step1 * k1 as f64;
                    if e1 > e_max + tol {
                        break;
                    }
                    let k2_max = k_cap(e1, fam.step2);
                    for k2 in 0..=k2_max {
                        let e = e1 + fam.step2 * k2 as f64;
                        if e > e_max + tol {
                            break;
                        }
                        entries.push(SpectrumEntry {
                            energy: e,
                            degeneracy: 1,
                            family_id: idx,
                        });
                    }
                }
            }
        }
        entries.sort_by(|a, b| {
            a.energy
                .partial_cmp(&b.energy)
                .unwrap()
                .then(a.family_id.cmp(&b.family_id))
        });
        Spectrum {
            entries,
            params: self.spectrum_params(),
        }
    }

    /// All boundary solutions for p = 0..=p_max, physicality flagged.
    pub fn solutions(&self, p_max: u32) -> Result<Vec<RepresentationSolution>> {
        let phi = self.factored_phi()?;
        let v_min = self.v_min();
        let mut all = Vec::new();
        for p in 0..=p_max {
            all.extend(physical_filter(solve_factored(&phi, p), v_min));
        }
        Ok(all)
    }

    /// Algebraic spectrum from unitary, physical chains up to p_max.
    pub fn assemble_spectrum(&self, p_max: u32) -> Result<Spectrum> {
        let mut entries: Vec<SpectrumEntry> = self
            .solutions(p_max)?
            .into_iter()
            .filter(|s| s.unitary && s.physical)
            .map(|s| SpectrumEntry {
                energy: s.energy,
                degeneracy: s.p + 1,
                family_id: s.family_id,
            })
            .collect();
        entries.sort_by(|a, b| {
            a.energy
                .partial_cmp(&b.energy)
                .unwrap()
                .then(a.family_id.cmp(&b.family_id))
        });
        Ok(Spectrum {
            entries,
            params: self.spectrum_params(),
        })
    }
}

/// Algebraic spectrum for a potential referenced by id string.
pub fn assemble_spectrum(id: &str, p_max: u32) -> Result<Spectrum> {
    PotentialSpec::with_defaults(PotentialId::parse(id)?).assemble_spectrum(p_max)
}

/// Machine-readable catalogue: ids, default parameters, families.
pub fn catalog_document() -> Value {
    let entries: Vec<Value> = PotentialId::all()
        .iter()
        .map(|id| {
            let spec = PotentialSpec::with_defaults(*id);
            json!({
                "id": id.as_str(),
                "params": spec.params,
                "has_cubic_algebra": spec.algebra().is_ok(),
                "real_a_unverified": spec.real_a_unverified(),
                "reference_families": spec.reference_families(),
            })
        })
        .collect();
    json!({ "potentials": entries })
}
