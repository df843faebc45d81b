//! Tables of `ch_n = chi(Out(F_{n+1}))` and `Ch_n = [z^n] exp(sum ch_k z^k)`.
//!
//! Three independent routes are provided:
//!
//! * [`chi_lambert`]: the rational recursion through the branch-point
//!   coefficients `mu_n` of the Lambert W function. This is the production
//!   path and scales to `n = 1000`.
//! * [`chi_implicit`]: solve the triangular system `c_k = sum_m (-1)^m Ch_m c_{m,k}`
//!   whose entries come from Gaussian extraction of
//!   `exp(-(e^x - x^2/2 - x - 1)/z + x(1/2 - m))`.
//! * [`chi_laplace_lie`]: Gaussian extraction of
//!   `exp(-(1/z) sum_{s>=3} x^s/(s(s-1)))`, whose coefficients are `Ch_k`
//!   directly.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;

use crate::arith::{double_factorial_odd, half_integer_gamma_ratio, Rational};
use crate::error::{Error, Result};
use crate::series::{exp_cubic_tail, wick_extract, BiSeries, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Lambert,
    Implicit,
    LaplaceLie,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Lambert, Route::Implicit, Route::LaplaceLie];

    pub fn name(self) -> &'static str {
        match self {
            Route::Lambert => "lambert",
            Route::Implicit => "implicit",
            Route::LaplaceLie => "laplace-lie",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Route> {
        match s {
            "lambert" => Ok(Route::Lambert),
            "implicit" => Ok(Route::Implicit),
            "laplace-lie" | "laplace_lie" => Ok(Route::LaplaceLie),
            other => Err(Error::Usage(format!(
                "unknown route {other:?} (expected lambert, implicit or laplace-lie)"
            ))),
        }
    }
}

/// Exact table produced by one route.
#[derive(Debug, Clone)]
pub struct ChiTable {
    pub route: Route,
    /// `ch[n]` for `0 <= n <= max_n`; `ch[0] = 0`.
    pub ch: Vec<Rational>,
    /// `ch_hat[n]` for `0 <= n <= max_n`; `ch_hat[0] = 1`.
    pub ch_hat: Vec<Rational>,
    /// `mu[i] = mu_{i-1}`, populated by the Lambert route only.
    mu: Vec<Rational>,
    /// `alpha[n]`, populated by the Lambert route only.
    alpha: Vec<Rational>,
}

impl ChiTable {
    pub fn max_n(&self) -> usize {
        self.ch.len() - 1
    }

    pub fn ch(&self, n: usize) -> &Rational {
        &self.ch[n]
    }

    pub fn ch_hat(&self, n: usize) -> &Rational {
        &self.ch_hat[n]
    }

    /// `mu_n` for `n >= -1`, if this table carries them.
    pub fn mu(&self, n: i64) -> Option<&Rational> {
        if n < -1 {
            return None;
        }
        self.mu.get((n + 1) as usize)
    }

    pub fn alpha(&self, n: usize) -> Option<&Rational> {
        self.alpha.get(n)
    }

    pub fn has_mu(&self) -> bool {
        !self.mu.is_empty()
    }

    fn from_ch_hat(route: Route, ch_hat: Vec<Rational>) -> ChiTable {
        let ch = ch_from_ch_hat(&ch_hat);
        ChiTable {
            route,
            ch,
            ch_hat,
            mu: Vec::new(),
            alpha: Vec::new(),
        }
    }

    /// Table rows `(n, ch num, ch den, Ch num, Ch den, sign)`.
    pub fn rows(&self) -> Vec<ChiRow> {
        (1..=self.max_n())
            .map(|n| ChiRow {
                n,
                ch_numerator: self.ch[n].numer().to_string(),
                ch_denominator: self.ch[n].denom().to_string(),
                ch_hat_numerator: self.ch_hat[n].numer().to_string(),
                ch_hat_denominator: self.ch_hat[n].denom().to_string(),
                sign: self.ch[n].cmp0() as i32,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChiRow {
    pub n: usize,
    pub ch_numerator: String,
    pub ch_denominator: String,
    #[serde(rename = "Ch_numerator")]
    pub ch_hat_numerator: String,
    #[serde(rename = "Ch_denominator")]
    pub ch_hat_denominator: String,
    pub sign: i32,
}

/// `ch_n = Ch_n - (1/n) sum_{k=1}^{n-1} k ch_k Ch_{n-k}`.
pub fn ch_from_ch_hat(ch_hat: &[Rational]) -> Vec<Rational> {
    let mut hat = Scaled::new();
    for q in ch_hat {
        hat.push(q);
    }
    let mut ch: Vec<Rational> = vec![Rational::new()];
    let mut scaled = Scaled::new();
    scaled.push(&ch[0]);
    for n in 1..ch_hat.len() {
        let (c, h) = (&scaled.scaled, &hat.scaled);
        let term = |k: usize| Integer::from(&c[k] * &h[n - k]) * k as u64;
        let acc: Integer = if n > 64 {
            (1..n).into_par_iter().map(term).reduce(Integer::new, |a, b| a + b)
        } else {
            (1..n).map(term).fold(Integer::new(), |a, b| a + b)
        };
        let den = Integer::from(&scaled.lcm * &hat.lcm) * n as u64;
        let next = &ch_hat[n] - Rational::from((acc, den));
        scaled.push(&next);
        ch.push(next);
    }
    ch
}

fn check_max_n(max_n: usize) -> Result<()> {
    if max_n == 0 {
        return Err(Error::Usage("max_n must be at least 1".into()));
    }
    Ok(())
}

/// Builds the table with the selected route.
pub fn chi_table(route: Route, max_n: usize) -> Result<ChiTable> {
    match route {
        Route::Lambert => chi_lambert(max_n),
        Route::Implicit => chi_implicit(max_n),
        Route::LaplaceLie => chi_laplace_lie(max_n),
    }
}

/// `sum_{k=2}^{n-1} mu_k mu_{n+1-k}`, pairing symmetric terms.
/// Rationals kept as integers over a shared denominator `lcm`, so that
/// quadratic convolutions need no gcd work.
struct Scaled {
    lcm: Integer,
    scaled: Vec<Integer>,
}

impl Scaled {
    fn new() -> Self {
        Scaled { lcm: Integer::from(1), scaled: Vec::new() }
    }

    fn push(&mut self, q: &Rational) {
        let den = q.denom();
        if !self.lcm.is_divisible(den) {
            let next = Integer::from(self.lcm.lcm_ref(den));
            let factor = Integer::from(&next / &self.lcm);
            self.scaled.par_iter_mut().for_each(|x| *x *= &factor);
            self.lcm = next;
        }
        let mut v = Integer::from(&self.lcm / den);
        v *= q.numer();
        self.scaled.push(v);
    }

    /// `alpha_n = sum_{k=2}^{n-1} mu_k mu_{n+1-k}`; index `i` holds `mu_{i-1}`.
    fn alpha(&self, n: usize) -> Rational {
        if n < 3 {
            return Rational::new();
        }
        let s = &self.scaled;
        let paired = |k: usize| Integer::from(&s[k + 1] * &s[n + 2 - k]);
        let ks: Vec<usize> = (2..n).take_while(|&k| 2 * k < n + 1).collect();
        let mut acc: Integer = if ks.len() > 32 {
            ks.par_iter().map(|&k| paired(k)).reduce(Integer::new, |a, b| a + b)
        } else {
            ks.iter().map(|&k| paired(k)).fold(Integer::new(), |a, b| a + b)
        };
        acc <<= 1;
        if (n + 1).is_multiple_of(2) && n.div_ceil(2) >= 2 {
            acc += paired(n.div_ceil(2));
        }
        Rational::from((acc, Integer::from(self.lcm.square_ref())))
    }
}

/// Lambert W branch-point recursion.
pub fn chi_lambert(max_n: usize) -> Result<ChiTable> {
    check_max_n(max_n)?;
    let top = 2 * max_n + 1;
    // mu[i] = mu_{i-1}
    let mut mu: Vec<Rational> = vec![Rational::new(), Rational::from(-1), Rational::from(1)];
    let mut alpha: Vec<Rational> = vec![Rational::from(2), Rational::from(-1)];
    let mut scaled = Scaled::new();
    for q in &mu {
        scaled.push(q);
    }
    for n in 2..=top {
        alpha.push(scaled.alpha(n));
        let mut m = &mu[n - 1] / Rational::from(2);
        m += &alpha[n - 2] / Rational::from(4);
        m *= Rational::from(((n - 1) as u64, (n + 1) as u64));
        m -= &alpha[n] / Rational::from(2);
        m -= &mu[n] / Rational::from((n + 1) as u64);
        scaled.push(&m);
        mu.push(m);
    }
    let mu_at = |k: usize| &mu[k + 1];
    let mut ch_hat = vec![Rational::from(1)];
    for n in 1..=max_n {
        let w = reduced_w_from_mu(mu_at(2 * n - 1), mu_at(2 * n + 1), n);
        ch_hat.push(-(w * double_factorial_odd(n)));
    }
    let ch = ch_from_ch_hat(&ch_hat);
    Ok(ChiTable {
        route: Route::Lambert,
        ch,
        ch_hat,
        mu,
        alpha,
    })
}

/// `(1/2)(2k-1) mu_{2k-1} - (2k+1) mu_{2k+1}`.
fn reduced_w_from_mu(mu_lo: &Rational, mu_hi: &Rational, k: usize) -> Rational {
    let mut w = mu_lo * Rational::from(((2 * k - 1) as u64, 2u64));
    w -= Rational::from(mu_hi * (2 * k + 1) as u64);
    w
}

/// Rows `c_{m,k}` for `0 <= m, k <= max_n`: the `z^k` coefficient of
/// `z^m sum_l z^l (2l-1)!! [x^{2l}] exp(-(e^x - x^2/2 - x - 1)/z + x(1/2 - m))`.
pub fn psi_scale_matrix(max_n: usize) -> Result<Vec<Vec<Rational>>> {
    let base = BiSeries::from_x_series_over_z(&exp_cubic_tail(6 * max_n).scale(&Rational::from(-1)), max_n)?
        .exp()?;
    let rows: Result<Vec<Vec<Rational>>> = (0..=max_n)
        .into_par_iter()
        .map(|m| {
            let order = max_n - m;
            let shift = Rational::from((1 - 2 * m as i64, 2i64));
            let f = BiSeries::from_x_series(&Series::exp_linear(&shift, 6 * order), order)?;
            let prod = base.truncate(order)?.mul(&f)?;
            let inner = wick_extract(&prod, 1, order)?;
            let mut row = vec![Rational::new(); max_n + 1];
            for (k, c) in inner.coeffs().iter().enumerate() {
                row[m + k] = c.clone();
            }
            Ok(row)
        })
        .collect();
    rows
}

/// Forward substitution for `c_k = sum_{m<=k} c'_m c_{m,k}`.
pub fn solve_triangular(c: &[Rational], matrix: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    let n = c.len();
    let mut out: Vec<Rational> = Vec::with_capacity(n);
    for k in 0..n {
        let diag = &matrix[k][k];
        if diag.cmp0().is_eq() {
            return Err(Error::ZeroDiagonal(k));
        }
        let mut acc = c[k].clone();
        for (m, cm) in out.iter().enumerate() {
            acc -= Rational::from(cm * &matrix[m][k]);
        }
        acc /= diag;
        out.push(acc);
    }
    Ok(out)
}

/// Triangular-system route.
pub fn chi_implicit(max_n: usize) -> Result<ChiTable> {
    check_max_n(max_n)?;
    let matrix = psi_scale_matrix(max_n)?;
    let mut target = vec![Rational::new(); max_n + 1];
    target[0] = Rational::from(1);
    let solved = solve_triangular(&target, &matrix)?;
    let ch_hat = solved
        .into_iter()
        .enumerate()
        .map(|(m, c)| if m % 2 == 1 { -c } else { c })
        .collect();
    Ok(ChiTable::from_ch_hat(Route::Implicit, ch_hat))
}

/// `-sum_{s>=3} x^s / (s(s-1))`: the Lie-operad action minus its quadratic part.
pub fn lie_action_tail(order: usize) -> Series {
    Series::from_fn(order, |s| {
        if s >= 3 {
            Rational::from((-1, (s * (s - 1)) as i64))
        } else {
            Rational::new()
        }
    })
}

/// Laplace-method route through the Lie graph complex integral.
pub fn chi_laplace_lie(max_n: usize) -> Result<ChiTable> {
    check_max_n(max_n)?;
    let a = BiSeries::from_x_series_over_z(&lie_action_tail(6 * max_n), max_n)?;
    let ch_hat = wick_extract(&a.exp()?, 1, max_n)?;
    Ok(ChiTable::from_ch_hat(Route::LaplaceLie, ch_hat.coeffs().to_vec()))
}

/// `w_k = v_{2k-1} / 2^{(2k-1)/2}` for `1 <= k <= max_n`, where
/// `z W_0'(z) = sum_k (-1)^{k+1} v_k (1 + e z)^{k/2}`.
#[derive(Debug, Clone)]
pub struct ReducedV {
    /// `w[k]`, index 0 unused.
    pub w: Vec<Rational>,
}

impl ReducedV {
    pub fn get(&self, k: usize) -> &Rational {
        &self.w[k]
    }

    pub fn all_positive(&self) -> bool {
        self.w[1..].iter().all(|w| w.cmp0().is_gt())
    }
}

/// `w_k` from `Ch_k = -2 Gamma(k+1/2)/sqrt(2 pi) v_{2k-1}`, i.e.
/// `w_k = -Ch_k / (2^k Gamma(k+1/2)/sqrt(pi)) = -Ch_k / (2k-1)!!`.
pub fn reduced_v_from_ch_hat(ch_hat: &[Rational]) -> Result<ReducedV> {
    let mut w = vec![Rational::new()];
    for (k, c) in ch_hat.iter().enumerate().skip(1) {
        let scale = half_integer_gamma_ratio(k as i64, 0)? * (Integer::from(1) << k as u32);
        w.push(-Rational::from(c / &scale));
    }
    Ok(ReducedV { w })
}

/// `w_k` from the branch-point coefficients via
/// `v_n = (-1)^{n+1} 2^{n/2} (n mu_n / 2 - (n+2) mu_{n+2})` at `n = 2k-1`,
/// asserting agreement with the `Ch`-based definition.
pub fn reduced_v(table: &ChiTable) -> Result<ReducedV> {
    let from_ch = reduced_v_from_ch_hat(&table.ch_hat)?;
    if !table.has_mu() {
        return Ok(from_ch);
    }
    let mut w = vec![Rational::new()];
    for k in 1..=table.max_n() {
        let lo = table.mu(2 * k as i64 - 1).expect("mu table covers 2n+1");
        let hi = table.mu(2 * k as i64 + 1).expect("mu table covers 2n+1");
        let wk = reduced_w_from_mu(lo, hi, k);
        if wk != from_ch.w[k] {
            return Err(Error::Domain(format!(
                "reduced v mismatch at k={k}: {wk} (mu) vs {} (Ch)",
                from_ch.w[k]
            )));
        }
        w.push(wk);
    }
    Ok(ReducedV { w })
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteReport {
    pub max_n: usize,
    pub routes: Vec<String>,
    pub agree: bool,
    pub first_divergence: Option<Divergence>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Divergence {
    pub route: String,
    pub quantity: String,
    pub index: usize,
    pub expected: String,
    pub found: String,
}

/// Bit-exact comparison of all three routes up to `max_n`.
pub fn route_consistency(max_n: usize) -> Result<RouteReport> {
    let tables: Vec<ChiTable> = Route::ALL
        .par_iter()
        .map(|&r| chi_table(r, max_n))
        .collect::<Result<_>>()?;
    Ok(compare_tables(&tables))
}

pub fn compare_tables(tables: &[ChiTable]) -> RouteReport {
    let reference = &tables[0];
    let mut first = None;
    'outer: for t in &tables[1..] {
        for n in 0..=reference.max_n().min(t.max_n()) {
            for (quantity, a, b) in [("ch", &reference.ch[n], &t.ch[n]), ("Ch", &reference.ch_hat[n], &t.ch_hat[n])] {
                if a != b {
                    first = Some(Divergence {
                        route: t.route.to_string(),
                        quantity: quantity.into(),
                        index: n,
                        expected: a.to_string(),
                        found: b.to_string(),
                    });
                    break 'outer;
                }
            }
        }
    }
    RouteReport {
        max_n: reference.max_n(),
        routes: tables.iter().map(|t| t.route.to_string()).collect(),
        agree: first.is_none(),
        first_divergence: first,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    const CH: [(i64, i64); 5] = [(-1, 24), (-1, 48), (-161, 5760), (-367, 5760), (-120257, 580608)];
    const CH_HAT: [(i64, i64); 5] = [
        (-1, 24),
        (-23, 1152),
        (-11237, 414720),
        (-2482411, 39813120),
        (-272785979, 1337720832),
    ];

    fn check_displayed(t: &ChiTable) {
        assert_eq!(t.ch_hat(0), &q(1, 1));
        for n in 1..=5 {
            assert_eq!(t.ch(n), &q(CH[n - 1].0, CH[n - 1].1), "{} ch_{n}", t.route);
            assert_eq!(t.ch_hat(n), &q(CH_HAT[n - 1].0, CH_HAT[n - 1].1), "{} Ch_{n}", t.route);
        }
    }

    #[test]
    fn lambert_mu_values() {
        let t = chi_lambert(3).unwrap();
        assert_eq!(t.mu(-1).unwrap(), &q(0, 1));
        assert_eq!(t.mu(0).unwrap(), &q(-1, 1));
        assert_eq!(t.mu(1).unwrap(), &q(1, 1));
        assert_eq!(t.mu(2).unwrap(), &q(-1, 3));
        assert_eq!(t.mu(3).unwrap(), &q(11, 72));
        assert_eq!(t.mu(4).unwrap(), &q(-43, 540));
        assert_eq!(t.mu(5).unwrap(), &q(769, 17280));
        assert_eq!(t.alpha(0).unwrap(), &q(2, 1));
        assert_eq!(t.alpha(1).unwrap(), &q(-1, 1));
    }

    #[test]
    fn all_routes_reproduce_displayed_series() {
        for r in Route::ALL {
            check_displayed(&chi_table(r, 5).unwrap());
        }
    }

    #[test]
    fn implicit_route_small_cases() {
        let t = chi_implicit(1).unwrap();
        assert_eq!(t.ch(1), &q(-1, 24));
        let t = chi_implicit(4).unwrap();
        assert_eq!(t.ch(4), &q(-367, 5760));
    }

    #[test]
    fn max_n_zero_rejected() {
        for r in Route::ALL {
            assert!(chi_table(r, 0).is_err());
        }
    }

    #[test]
    fn reduced_v_examples() {
        let t = chi_lambert(12).unwrap();
        let v = reduced_v(&t).unwrap();
        assert_eq!(v.get(1), &q(3, 72));
        for k in 1..=12 {
            assert_eq!(v.get(k).cmp0(), t.ch_hat(k).cmp0().reverse());
        }
        assert!(v.all_positive());
    }

    #[test]
    fn psi_matrix_is_unit_triangular() {
        let m = psi_scale_matrix(6).unwrap();
        for (i, row) in m.iter().enumerate() {
            assert_eq!(row[i], 1);
            for c in &row[..i] {
                assert_eq!(c.cmp0(), std::cmp::Ordering::Equal);
            }
        }
    }

    #[test]
    fn triangular_solver() {
        let id: Vec<Vec<Rational>> = (0..4)
            .map(|i| (0..4).map(|j| Rational::from((i == j) as i64)).collect())
            .collect();
        let c = vec![q(1, 2), q(3, 1), q(0, 1), q(-7, 5)];
        assert_eq!(solve_triangular(&c, &id).unwrap(), c);
        let mut singular = id.clone();
        singular[2][2] = Rational::new();
        assert!(matches!(solve_triangular(&c, &singular), Err(Error::ZeroDiagonal(2))));
    }

    #[test]
    fn route_consistency_small() {
        let r = route_consistency(8).unwrap();
        assert!(r.agree, "{:?}", r.first_divergence);
    }

    #[test]
    fn route_names_round_trip() {
        for r in Route::ALL {
            assert_eq!(r.name().parse::<Route>().unwrap(), r);
        }
        assert!("nope".parse::<Route>().is_err());
    }
}
