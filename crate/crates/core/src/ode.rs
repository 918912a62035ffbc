//! Fixed-step classical Runge-Kutta integration.

/// One RK4 step of `ẋ = f(x)` with step `dt`.
pub fn rk4_step<const N: usize>(x: &[f64; N], dt: f64, mut f: impl FnMut(&[f64; N]) -> [f64; N]) -> [f64; N] {
    let k1 = f(x);
    rk4_step_from(x, &k1, dt, f)
}

/// RK4 step reusing an already evaluated `k1 = f(x)`.
pub fn rk4_step_from<const N: usize>(
    x: &[f64; N],
    k1: &[f64; N],
    dt: f64,
    mut f: impl FnMut(&[f64; N]) -> [f64; N],
) -> [f64; N] {
    let offset = |base: &[f64; N], k: &[f64; N], h: f64| -> [f64; N] {
        std::array::from_fn(|i| base[i] + h * k[i])
    };
    let k2 = f(&offset(x, k1, 0.5 * dt));
    let k3 = f(&offset(x, &k2, 0.5 * dt));
    let k4 = f(&offset(x, &k3, dt));
    std::array::from_fn(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_is_fourth_order() {
        let run = |dt: f64| {
            let mut x = [1.0];
            let steps = (1.0 / dt).round() as usize;
            for _ in 0..steps {
                x = rk4_step(&x, dt, |s| [-s[0]]);
            }
            (x[0] - (-1.0f64).exp()).abs()
        };
        let (e1, e2) = (run(0.1), run(0.05));
        // Halving the step cuts the error by about 2^4.
        assert!(e1 / e2 > 14.0 && e1 / e2 < 18.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let mut x = [1.0, 0.0];
        for _ in 0..1000 {
            x = rk4_step(&x, 0.01, |s| [s[1], -s[0]]);
        }
        assert!((x[0] * x[0] + x[1] * x[1] - 1.0).abs() < 1e-9);
    }
}
