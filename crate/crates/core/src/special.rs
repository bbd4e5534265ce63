//! Orthogonal-function recurrences used for closed-form eigenfunctions:
//! normalized oscillator (Hermite) functions with analytic derivatives and
//! generalized Laguerre polynomials. Three-term recurrences throughout,
//! no external special-function dependency.

/// Normalized eigenfunctions of p^2/2 + omega^2 x^2 / 2 at a point.
///
/// Returns psi_0..psi_k. Uses the normalized recurrence
/// psi_{j+1} = xi sqrt(2/(j+1)) psi_j - sqrt(j/(j+1)) psi_{j-1}
/// with xi = x sqrt(omega/hbar), which is stable for all j.
pub fn oscillator_functions(k: usize, omega: f64, hbar: f64, x: f64) -> Vec<f64> {
    assert!(omega > 0.0 && hbar > 0.0);
    let s = (omega / hbar).sqrt();
    let xi = s * x;
    let mut out = Vec::with_capacity(k + 1);
    // (omega / pi hbar)^{1/4} e^{-xi^2/2}
    let psi0 = (omega / (std::f64::consts::PI * hbar)).powf(0.25) * (-0.5 * xi * xi).exp();
    out.push(psi0);
    if k == 0 {
        return out;
    }
    out.push(xi * std::f64::consts::SQRT_2 * psi0);
    for j in 1..k {
        let next = xi * (2.0 / (j as f64 + 1.0)).sqrt() * out[j]
            - (j as f64 / (j as f64 + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    out
}

/// Analytic x-derivatives of the functions returned by
/// `oscillator_functions`: psi_j' = s (sqrt(j/2) psi_{j-1} - sqrt((j+1)/2) psi_{j+1}).
pub fn oscillator_derivatives(k: usize, omega: f64, hbar: f64, x: f64) -> Vec<f64> {
    let s = (omega / hbar).sqrt();
    let psi = oscillator_functions(k + 1, omega, hbar, x);
    (0..=k)
        .map(|j| {
            let lower = if j == 0 {
                0.0
            } else {
                (j as f64 / 2.0).sqrt() * psi[j - 1]
            };
            s * (lower - ((j as f64 + 1.0) / 2.0).sqrt() * psi[j + 1])
        })
        .collect()
}

/// Generalized Laguerre polynomials L_0^{(alpha)}..L_k^{(alpha)} at a point:
/// (j+1) L_{j+1} = (2j + 1 + alpha - t) L_j - (j + alpha) L_{j-1}.
pub fn laguerre(k: usize, alpha: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0);
    if k == 0 {
        return out;
    }
    out.push(1.0 + alpha - t);
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - t) * out[j] - (jf + alpha) * out[j - 1])
            / (jf + 1.0);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        // n even panels
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn oscillator_orthonormal() {
        for (i, j) in [(0usize, 0usize), (3, 3), (7, 7), (2, 6), (1, 4)] {
            let ip = simpson(
                |x| {
                    let p = oscillator_functions(7, 0.5, 1.0, x);
                    p[i] * p[j]
                },
                -20.0,
                20.0,
                4000,
            );
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((ip - want).abs() < 1e-10, "({i},{j}): {ip}");
        }
    }

    #[test]
    fn oscillator_solves_schrodinger() {
        // hbar^2/2 psi'' = (V - E) psi checked with the analytic derivative
        // of psi' via a fine central difference
        let (omega, hbar) = (0.5f64, 1.0f64);
        let h = 1e-4;
        for k in [0usize, 1, 5] {
            for &x in &[0.3, 1.1, 2.7] {
                let dp = oscillator_derivatives(k, omega, hbar, x + h)[k];
                let dm = oscillator_derivatives(k, omega, hbar, x - h)[k];
                let ddpsi = (dp - dm) / (2.0 * h);
                let psi = oscillator_functions(k, omega, hbar, x)[k];
                let e = hbar * omega * (k as f64 + 0.5);
                let lhs = -0.5 * hbar * hbar * ddpsi + 0.5 * omega * omega * x * x * psi;
                assert!((lhs - e * psi).abs() < 1e-6, "k={k} x={x}: {lhs} vs {}", e * psi);
            }
        }
    }

    #[test]
    fn laguerre_known_values() {
        // L_2^{(0)}(t) = t^2/2 - 2t + 1
        let t = 0.7;
        let l = laguerre(2, 0.0, t);
        assert!((l[2] - (0.5 * t * t - 2.0 * t + 1.0)).abs() < 1e-14);
        // L_1^{(alpha)}(t) = 1 + alpha - t
        let l = laguerre(1, 1.5, 2.0);
        assert!((l[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn laguerre_weighted_orthogonality() {
        // integral t^alpha e^{-t} L_2 L_3 dt = 0; substituting t = u^2
        // keeps the integrand smooth at the endpoint
        let alpha = 1.5;
        let ip = simpson(
            |u| {
                let t = u * u;
                let l = laguerre(3, alpha, t);
                2.0 * u * t.powf(alpha) * (-t).exp() * l[2] * l[3]
            },
            0.0,
            8.0,
            4000,
        );
        assert!(ip.abs() < 1e-9, "{ip}");
    }
}
