//! Laplace coefficients, scale changes and the numerical growth diagnostics.
//!
//! Quantities such as `e^{-n} n^n` and `Γ(n + 1/2 - k)` are handled in log
//! space on MPFR floats. The remainder of the inverted Stirling expansion is
//! normalized by `Γ(n + 1/2 - R)` before subtracting, so that the partial sum
//! becomes an exact rational and only one floating-point term remains.

use crate::arith::{bernoulli, binomial, Rational};
use crate::chi::solve_triangular;
use crate::error::{Error, Result};
use crate::graphs::{vertex_weight_sum, EnumConfig};
use crate::series::{wick_extract, BiSeries, Series};
use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub const DEFAULT_PRECISION: u32 = 256;
pub const MAX_PRECISION: u32 = 4096;
pub const MIN_PRECISION: u32 = 128;
/// Environment variable overriding the default working precision in bits.
pub const PRECISION_ENV: &str = "OUTFN_EULER_PRECISION";
/// Bits that must survive cancellation for a remainder to count as certified.
pub const CERTIFIED_BITS: i64 = 64;

/// Default precision, honouring `OUTFN_EULER_PRECISION`.
pub fn default_precision() -> Result<u32> {
    match std::env::var(PRECISION_ENV) {
        Ok(s) => {
            let bits: u32 = s
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("{PRECISION_ENV}={s:?} is not a bit count")))?;
            check_precision(bits)?;
            Ok(bits)
        }
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

pub fn check_precision(bits: u32) -> Result<()> {
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&bits) {
        return Err(Error::Usage(format!(
            "precision must lie in {MIN_PRECISION}..={MAX_PRECISION} bits, got {bits}"
        )));
    }
    Ok(())
}

/// A binary float with a fixed working precision.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct HighFloat(Float);

impl HighFloat {
    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        HighFloat(Float::with_val(bits, q))
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        HighFloat(Float::with_val(bits, v))
    }

    pub fn pi(bits: u32) -> Self {
        HighFloat(Float::with_val(bits, Constant::Pi))
    }

    pub fn precision(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn ln(&self) -> Self {
        HighFloat(self.0.clone().ln())
    }

    pub fn exp(&self) -> Self {
        HighFloat(self.0.clone().exp())
    }

    pub fn lgamma(&self) -> Self {
        HighFloat(self.0.clone().ln_gamma())
    }

    pub fn abs(&self) -> Self {
        HighFloat(self.0.clone().abs())
    }

    pub fn add(&self, o: &Self) -> Self {
        HighFloat(Float::with_val(self.precision(), &self.0 + &o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        HighFloat(Float::with_val(self.precision(), &self.0 - &o.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        HighFloat(Float::with_val(self.precision(), &self.0 * &o.0))
    }

    pub fn div(&self, o: &Self) -> Self {
        HighFloat(Float::with_val(self.precision(), &self.0 / &o.0))
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_positive(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Greater)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// `log2 |x|`, or `None` at zero.
    pub fn log2_abs(&self) -> Option<f64> {
        if self.0.is_zero() {
            return None;
        }
        Some(Float::with_val(64, self.0.abs_ref()).log2().to_f64())
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits))
    }
}

impl fmt::Display for HighFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(24))
    }
}

/// `Σ_ℓ z^ℓ (2ℓ−1)!! [x^{2ℓ}] f(x) e^{h(x)/z}` to order `order`, where
/// `h = g + x²/2` must have valuation at least 3 in `x`.
pub fn laplace_coefficients(f: &Series, h: &Series, order: usize) -> Result<Series> {
    let x_max = 6 * order;
    let pad = |s: &Series| -> Result<Series> {
        if s.order() >= x_max {
            s.truncate(x_max)
        } else {
            Err(Error::Window { requested: x_max, available: s.order() })
        }
    };
    let h = pad(h)?;
    if let Some(v) = h.valuation() {
        if v < 3 {
            return Err(Error::Valuation { required: 3, found: v });
        }
    }
    let e = BiSeries::from_x_series_over_z(&h, order)?.exp()?;
    let prod = e.mul(&BiSeries::from_x_series(&pad(f)?, order)?)?;
    wick_extract(&prod, 1, order)
}

/// `h(x) = Σ_{s≥3} b_s x^s / s!` from vertex weights.
pub fn weight_exponent(weights: impl Fn(usize) -> Rational, order: usize) -> Series {
    Series::from_fn(order, |s| {
        if s < 3 {
            Rational::new()
        } else {
            weights(s) / Rational::from(crate::arith::factorial(s))
        }
    })
}

/// `exp(Σ_{k≥1} B_{k+1}/(k(k+1)) z^k)`.
pub fn stirling_coefficients(order: usize) -> Result<Series> {
    bernoulli_exponent(order).exp()
}

fn bernoulli_exponent(order: usize) -> Series {
    Series::from_fn(order, |k| {
        if k == 0 {
            Rational::new()
        } else {
            bernoulli(k + 1) / Rational::from((k * (k + 1)) as u64)
        }
    })
}

/// Left side of the Bernoulli identity for `ψ_m`:
/// `Σ_ℓ z^ℓ (2ℓ−1)!! [x^{2ℓ}] exp(−(e^x − x²/2 − x − 1)/z + x(1/2 − m))`.
pub fn psi_wick_series(m: &Rational, order: usize) -> Result<Series> {
    let x_max = 6 * order;
    let minus_tail = crate::series::exp_cubic_tail(x_max).scale(&Rational::from(-1));
    let shift = Rational::from((1, 2)) - m.clone();
    laplace_coefficients(&Series::exp_linear(&shift, x_max), &minus_tail, order)
}

/// Right side in logarithmic form:
/// `exp((m − 1/z) log(1/(1 − z(m−½))) + m − ½ + Σ B_{k+1}/(k(k+1)) z^k (1 − z(m−½))^{−k})`.
pub fn psi_bernoulli_series_log_form(m: &Rational, order: usize) -> Result<Series> {
    let u = m.clone() - Rational::from((1, 2));
    // (m − 1/z) Σ_{j≥1} u^j z^j / j + u, collected by powers of z.
    let mut exponent = Series::from_fn(order, |k| {
        if k == 0 {
            return Rational::new();
        }
        let uk = u.clone().pow(k as i32);
        let first = Rational::from(m * &uk) / Rational::from(k as u64);
        let second = uk * &u / Rational::from((k + 1) as u64);
        first - second
    });
    exponent = exponent.add(&bernoulli_shift_part(&u, order))?;
    exponent.exp()
}

/// Right side in closed form:
/// `exp(Σ_k z^k/(k(k+1)) ((m + k/2)(m−½)^k + B_{k+1}(1 − z(m−½))^{−k}))`.
pub fn psi_bernoulli_series(m: &Rational, order: usize) -> Result<Series> {
    let u = m.clone() - Rational::from((1, 2));
    let mut exponent = Series::from_fn(order, |k| {
        if k == 0 {
            return Rational::new();
        }
        let coef = m.clone() + Rational::from((k as i64, 2));
        coef * u.clone().pow(k as i32) / Rational::from((k * (k + 1)) as u64)
    });
    exponent = exponent.add(&bernoulli_shift_part(&u, order))?;
    exponent.exp()
}

/// `Σ_{k≥1} B_{k+1}/(k(k+1)) z^k (1 − u z)^{−k}`.
fn bernoulli_shift_part(u: &Rational, order: usize) -> Series {
    let mut coeffs = vec![Rational::new(); order + 1];
    for k in 1..=order {
        let b = bernoulli(k + 1);
        if b.cmp0().is_eq() {
            continue;
        }
        let base = b / Rational::from((k * (k + 1)) as u64);
        for j in 0..=order - k {
            let c = Rational::from(binomial(k + j - 1, j)) * u.clone().pow(j as i32);
            coeffs[k + j] += Rational::from(&base * &c);
        }
    }
    Series::from_coeffs(coeffs, order)
}

/// A solved triangular scale change `c_k = Σ_{m≤k} c′_m c_{m,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleChange {
    pub c: Vec<Rational>,
    pub c_matrix: Vec<Vec<Rational>>,
    pub c_prime: Vec<Rational>,
}

pub fn solve_scale_change(c: &[Rational], c_matrix: &[Vec<Rational>]) -> Result<ScaleChange> {
    if c_matrix.len() < c.len() || c_matrix.iter().take(c.len()).any(|row| row.len() < c.len()) {
        return Err(Error::Window { requested: c.len(), available: c_matrix.len() });
    }
    let c_prime = solve_triangular(c, c_matrix)?;
    Ok(ScaleChange { c: c.to_vec(), c_matrix: c_matrix.to_vec(), c_prime })
}

/// Rows `c_{m,k}`, `0 ≤ m, k ≤ max_m`, for the scale `ψ_m`.
pub fn psi_rows(max_m: usize) -> Result<Vec<Vec<Rational>>> {
    crate::chi::psi_scale_matrix(max_m)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LaplaceGraphReport {
    pub k_max: usize,
    pub laplace: Vec<String>,
    pub graphs: Vec<String>,
    pub first_mismatch: Option<usize>,
}

/// Compares Laplace coefficients for the weights `b_s` with the graph sums
/// `Σ_{|Γ|=k} Π_v b_{|v|}/|Aut Γ|` for `k ≤ k_max`.
pub fn laplace_vs_graphs(
    weights: impl Fn(usize) -> Rational,
    k_max: usize,
    cfg: &EnumConfig,
) -> Result<LaplaceGraphReport> {
    let h = weight_exponent(&weights, 6 * k_max);
    let laplace = laplace_coefficients(&Series::one(6 * k_max), &h, k_max)?;
    let table: BTreeMap<usize, Rational> = (3..=2 * k_max + 2).map(|s| (s, weights(s))).collect();
    let mut graphs = Vec::new();
    let mut first_mismatch = None;
    for k in 0..=k_max {
        let g = vertex_weight_sum(k as i64, &table, cfg)?;
        if first_mismatch.is_none() && g != *laplace.coeff(k) {
            first_mismatch = Some(k);
        }
        graphs.push(g.to_string());
    }
    Ok(LaplaceGraphReport {
        k_max,
        laplace: laplace.coeffs().iter().map(|q| q.to_string()).collect(),
        graphs,
        first_mismatch,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RemainderValue {
    pub n: u64,
    pub terms: usize,
    pub scale: usize,
    pub value: HighFloat,
    pub precision: u32,
    /// `log2(|value| / error bound)`.
    pub certified_bits: i64,
}

/// `|√(2π) e^{−n} n^n − Σ_{k<terms} Ĉh_k (−1)^k Γ(n+½−k)| / Γ(n+½−scale)`,
/// escalating precision from `bits` until at least `CERTIFIED_BITS` survive.
pub fn theorem_b_partial(n: u64, terms: usize, scale: usize, ch_hat: &[Rational], bits: u32) -> Result<RemainderValue> {
    if terms > ch_hat.len() {
        return Err(Error::Window { requested: terms, available: ch_hat.len() });
    }
    if n <= scale as u64 || scale < terms.saturating_sub(1) {
        return Err(Error::Domain(format!("need n > scale >= terms - 1, got n={n}, terms={terms}, scale={scale}")));
    }
    check_precision(bits)?;
    // Γ(n+½−k)/Γ(n+½−scale) = Π_{j=k+1}^{scale} (n+½−j), exact.
    let half_n = Rational::from(n) + Rational::from((1, 2));
    let mut partial = Rational::new();
    for (k, c) in ch_hat.iter().enumerate().take(terms) {
        let mut p = Rational::from(1);
        for j in k + 1..=scale {
            p *= half_n.clone() - Rational::from(j as u64);
        }
        let term = p * c;
        if k % 2 == 0 {
            partial += term;
        } else {
            partial -= term;
        }
    }
    let mut p = bits;
    loop {
        let nf = Float::with_val(p, n);
        let ln_n = Float::with_val(p, nf.ln_ref());
        let n_ln_n = Float::with_val(p, &ln_n * n);
        let arg = Float::with_val(p, &half_n - Rational::from(scale as u64));
        let lg = arg.ln_gamma();
        let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
        let half_ln_2pi = two_pi.ln() / 2u32;
        let log_lead = Float::with_val(p, &half_ln_2pi - n) + &n_ln_n - &lg;
        let lead = Float::with_val(p, log_lead.exp_ref());
        let s = Float::with_val(p, &partial);
        let diff = Float::with_val(p, &lead - &s).abs();
        // Absolute error: the exponent carries error ~ (n ln n + n + |lgamma| + 8) ulp,
        // which becomes a relative error of `lead`; the partial sum is rounded once.
        let exponent_size = Float::with_val(64, &n_ln_n) + n + Float::with_val(64, lg.abs_ref()) + 8u32;
        let err = Float::with_val(64, lead.abs_ref()) * exponent_size * Float::with_val(64, Float::i_exp(1, 4 - p as i32))
            + Float::with_val(64, s.abs_ref()) * Float::with_val(64, Float::i_exp(1, 2 - p as i32));
        let certified = if diff.is_zero() {
            i64::MIN
        } else {
            (Float::with_val(64, &diff / &err).log2().to_f64().floor()) as i64
        };
        if certified >= CERTIFIED_BITS {
            return Ok(RemainderValue {
                n,
                terms,
                scale,
                value: HighFloat(diff),
                precision: p,
                certified_bits: certified,
            });
        }
        if p >= MAX_PRECISION {
            return Err(Error::Precision { bits: p });
        }
        p = (p * 2).min(MAX_PRECISION);
    }
}

/// Remainder of the `R`-term expansion measured against `Γ(n+½−R)`.
pub fn theorem_b_remainder(n: u64, r: usize, ch_hat: &[Rational], bits: u32) -> Result<RemainderValue> {
    if r == 0 {
        return Err(Error::Usage("R must be at least 1".into()));
    }
    theorem_b_partial(n, r, r, ch_hat, bits)
}

/// `r_n = ch_{n−1} / (−Γ(n − 3/2) / (√(2π) log² n))`, evaluated in log space.
/// `ch[k]` holds `ch_k`.
pub fn theorem_a_ratio(n_list: &[u64], ch: &[Rational], bits: u32) -> Result<Vec<(u64, HighFloat)>> {
    check_precision(bits)?;
    n_list
        .par_iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::Domain(format!("theorem A ratio needs n >= 2, got {n}")));
            }
            let idx = (n - 1) as usize;
            let c = ch.get(idx).ok_or(Error::Window { requested: idx, available: ch.len().saturating_sub(1) })?;
            if c.cmp0().is_eq() {
                return Ok((n, HighFloat(Float::with_val(bits, 0))));
            }
            let ln_abs = Float::with_val(bits, c.clone().abs()).ln();
            let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
            let ln_ln_n = Float::with_val(bits, n).ln().ln();
            let lg = Float::with_val(bits, Rational::from(n) - Rational::from((3, 2))).ln_gamma();
            let log_r = ln_abs + two_pi.ln() / 2u32 + ln_ln_n * 2u32 - lg;
            let mut r = log_r.exp();
            if c.cmp0() == Ordering::Greater {
                r = -r;
            }
            Ok((n, HighFloat(r)))
        })
        .collect()
}

pub fn theorem_a_csv(rows: &[(u64, HighFloat)]) -> String {
    let mut out = String::from("n,r_n\n");
    for (n, r) in rows {
        out.push_str(&format!("{n},{}\n", r.to_decimal(24)));
    }
    out
}

pub fn theorem_b_csv(rows: &[RemainderValue]) -> String {
    let mut out = String::from("n,R,remainder_ratio,precision_bits,certified_bits\n");
    for v in rows {
        out.push_str(&format!("{},{},{},{},{}\n", v.n, v.terms, v.value.to_decimal(24), v.precision, v.certified_bits));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorial, half_integer_gamma_ratio};
    use crate::chi::chi_lambert;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn stirling_head() {
        let s = stirling_coefficients(4).unwrap();
        assert_eq!(*s.coeff(0), 1);
        assert_eq!(*s.coeff(1), q(1, 12));
        assert_eq!(*s.coeff(2), q(1, 288));
        assert_eq!(*s.coeff(3), q(-139, 51840));
    }

    #[test]
    fn laplace_matches_stirling() {
        let h = crate::series::exp_cubic_tail(60).scale(&Rational::from(-1));
        let c = laplace_coefficients(&Series::one(60), &h, 10).unwrap();
        assert_eq!(c, stirling_coefficients(10).unwrap());
    }

    #[test]
    fn laplace_rejects_low_valuation() {
        let h = Series::from_fn(12, |k| Rational::from(u8::from(k == 2)));
        assert!(matches!(laplace_coefficients(&Series::one(12), &h, 2), Err(Error::Valuation { .. })));
    }

    #[test]
    fn lie_weights_give_ch_hat() {
        let h = weight_exponent(|s| -Rational::from(factorial(s - 2)), 30);
        let c = laplace_coefficients(&Series::one(30), &h, 5).unwrap();
        let t = chi_lambert(5).unwrap();
        for k in 0..=5 {
            assert_eq!(c.coeff(k), t.ch_hat(k));
        }
    }

    #[test]
    fn remark_identity_forms_agree() {
        for m in [q(0, 1), q(1, 2), q(1, 1), q(2, 1), q(-3, 4)] {
            let lhs = psi_wick_series(&m, 8).unwrap();
            assert_eq!(lhs, psi_bernoulli_series_log_form(&m, 8).unwrap(), "m = {m}");
            assert_eq!(lhs, psi_bernoulli_series(&m, 8).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn scale_change_examples() {
        let id: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| Rational::from(u8::from(i == j))).collect()).collect();
        let c = vec![q(1, 2), q(3, 1), q(-1, 5), q(0, 1)];
        assert_eq!(solve_scale_change(&c, &id).unwrap().c_prime, c);
        let rows = psi_rows(6).unwrap();
        let first = rows[0].clone();
        let s = solve_scale_change(&first, &rows).unwrap();
        assert_eq!(s.c_prime[0], 1);
        assert!(s.c_prime[1..].iter().all(|x| x.cmp0().is_eq()));
        let mut bad = id.clone();
        bad[2][2] = Rational::new();
        assert!(matches!(solve_scale_change(&c, &bad), Err(Error::ZeroDiagonal(2))));
    }

    #[test]
    fn psi_rows_are_unit_triangular() {
        let rows = psi_rows(5).unwrap();
        for (m, row) in rows.iter().enumerate() {
            assert_eq!(row[m], 1);
            assert!(row[..m].iter().all(|x| x.cmp0().is_eq()));
        }
    }

    #[test]
    fn lgamma_at_half_integers() {
        let bits = 256;
        let half_ln_pi = HighFloat::pi(bits).ln().div(&HighFloat::from_i64(2, bits));
        for (n, k) in [(5, 0), (10, 3), (40, 39), (100, 7)] {
            let exact = HighFloat::from_rational(&half_integer_gamma_ratio(n, k).unwrap(), bits).ln().add(&half_ln_pi);
            let arg = HighFloat::from_rational(&(Rational::from(n - k) + q(1, 2)), bits);
            let diff = arg.lgamma().sub(&exact).abs();
            let tol = exact.abs().mul(&HighFloat(Float::with_val(bits, Float::i_exp(1, 8 - bits as i32))));
            assert!(diff <= tol, "n={n} k={k}");
        }
    }

    #[test]
    fn remainder_small_cases() {
        let t = chi_lambert(6).unwrap();
        let v = theorem_b_remainder(50, 1, &t.ch_hat, 256).unwrap();
        assert!(v.value.is_sign_positive() && v.value.is_finite());
        assert!(v.certified_bits >= CERTIFIED_BITS);
        let without = theorem_b_partial(50, 2, 3, &t.ch_hat, 256).unwrap();
        let with = theorem_b_partial(50, 3, 3, &t.ch_hat, 256).unwrap();
        assert!(with.value < without.value);
        assert!(matches!(theorem_b_remainder(50, 0, &t.ch_hat, 256), Err(Error::Usage(_))));
    }

    #[test]
    fn theorem_a_sign() {
        let t = chi_lambert(40).unwrap();
        let rows = theorem_a_ratio(&[10, 20, 40], &t.ch, 256).unwrap();
        assert!(rows.iter().all(|(_, r)| r.is_sign_positive()));
        assert!(theorem_a_ratio(&[1], &t.ch, 256).is_err());
    }

    #[test]
    fn precision_bounds() {
        assert!(check_precision(64).is_err());
        assert!(check_precision(256).is_ok());
        assert!(check_precision(8192).is_err());
    }
}
