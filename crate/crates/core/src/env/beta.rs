use rand::Rng;
use rand_distr::{Open01, StandardNormal};

/// Draws from `Beta(a, b)` as `X / (X + Y)` with independent `X ~ Gamma(a)` and
/// `Y ~ Gamma(b)`.
///
/// The Gamma draws are kept in log space so shapes far below one (the bundled
/// tables go down to 0.08) cannot underflow both variates to zero.
pub fn sample_beta<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let ln_x = ln_gamma_variate(a, rng);
    let ln_y = ln_gamma_variate(b, rng);
    // x / (x + y) = 1 / (1 + exp(ln_y - ln_x)); the logistic form saturates to
    // 0 or 1 instead of producing NaN.
    let value = 1.0 / (1.0 + (ln_y - ln_x).exp());
    value.clamp(0.0, 1.0)
}

/// Natural log of a `Gamma(shape, 1)` variate (Marsaglia and Tsang).
fn ln_gamma_variate<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        // Gamma(s) = Gamma(s + 1) * U^(1/s)
        let u: f64 = rng.sample(Open01);
        return ln_gamma_variate(shape + 1.0, rng) + u.ln() / shape;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.sample(Open01);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d.ln() + v.ln();
        }
    }
}
