//! Truncated formal power series over the rationals.
//!
//! [`Series`] is univariate with an explicit truncation order. [`BiSeries`]
//! is bivariate in `(z, x)` and allows negative powers of `z` subject to the
//! pole rule `3 deg_z + deg_x >= 0` (every `1/z` carries at least `x^3`).
//! It is truncated by the weight `2 deg_z + deg_x <= 2 * order`, which is
//! closed under products and exponentials of pole-rule series and is exactly
//! what the Gaussian extraction `z^l [x^{2l}]` needs to report `z^0..z^order`.

use std::fmt;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{double_factorial_odd, factorial, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "; O({})]", self.order() + 1)
    }
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![Rational::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::from(1);
        s
    }

    /// Builds a series from leading coefficients, zero-padding up to `order`
    /// and dropping anything beyond it.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::new());
        Series { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Series {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    /// `exp(c x)` truncated at `order`.
    pub fn exp_linear(c: &Rational, order: usize) -> Self {
        let mut pow = Rational::from(1);
        Self::from_fn(order, |n| {
            let term = Rational::from(&pow / factorial(n));
            pow *= c;
            term
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set(&mut self, n: usize, value: Rational) {
        self.coeffs[n] = value;
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| c.cmp0().is_ne())
    }

    pub fn truncate(&self, order: usize) -> Result<Series> {
        if order > self.order() {
            return Err(Error::Window {
                requested: order,
                available: self.order(),
            });
        }
        Ok(Series {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        check_same_order(self, other)?;
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Rational::from(a + b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        series_mul(self, other)
    }

    pub fn exp(&self) -> Result<Series> {
        series_exp(self)
    }

    pub fn log(&self) -> Result<Series> {
        series_log(self)
    }

    /// Rows of `(index, numerator, denominator)` as decimal strings.
    pub fn to_rows(&self) -> Vec<SeriesRow> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(index, c)| SeriesRow {
                index,
                numerator: c.numer().to_string(),
                denominator: c.denom().to_string(),
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,numerator,denominator\n");
        for row in self.to_rows() {
            out.push_str(&format!("{},{},{}\n", row.index, row.numerator, row.denominator));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_rows()).expect("series rows serialize")
    }

    pub fn from_rows(rows: &[SeriesRow]) -> Result<Series> {
        let order = rows
            .iter()
            .map(|r| r.index)
            .max()
            .ok_or_else(|| Error::Usage("empty series".into()))?;
        let mut s = Series::zero(order);
        for r in rows {
            let num: Integer = r
                .numerator
                .parse()
                .map_err(|_| Error::Usage(format!("bad numerator {:?}", r.numerator)))?;
            let den: Integer = r
                .denominator
                .parse()
                .map_err(|_| Error::Usage(format!("bad denominator {:?}", r.denominator)))?;
            if den.cmp0().is_le() {
                return Err(Error::Usage("denominator must be positive".into()));
            }
            s.coeffs[r.index] = Rational::from((num, den));
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub index: usize,
    pub numerator: String,
    pub denominator: String,
}

fn check_same_order(a: &Series, b: &Series) -> Result<()> {
    if a.order() != b.order() {
        return Err(Error::MixedOrder {
            left: a.order(),
            right: b.order(),
        });
    }
    Ok(())
}

/// Truncated Cauchy product.
pub fn series_mul(a: &Series, b: &Series) -> Result<Series> {
    check_same_order(a, b)?;
    let order = a.order();
    let mut out = Series::zero(order);
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.cmp0().is_eq() {
            continue;
        }
        for (j, bj) in b.coeffs[..=order - i].iter().enumerate() {
            if bj.cmp0().is_ne() {
                out.coeffs[i + j] += Rational::from(ai * bj);
            }
        }
    }
    Ok(out)
}

/// `exp(a)` via `n e_n = sum_{k=1}^{n} k a_k e_{n-k}`.
pub fn series_exp(a: &Series) -> Result<Series> {
    if a.coeffs[0].cmp0().is_ne() {
        return Err(Error::NonzeroConstantTerm);
    }
    let order = a.order();
    let mut e = Vec::with_capacity(order + 1);
    e.push(Rational::from(1));
    for n in 1..=order {
        let mut acc = Rational::new();
        for k in 1..=n {
            if a.coeffs[k].cmp0().is_ne() {
                acc += Rational::from(&a.coeffs[k] * &e[n - k]) * k as u64;
            }
        }
        acc /= n as u64;
        e.push(acc);
    }
    Ok(Series { coeffs: e })
}

/// `log(a)` for `a_0 = 1`, the inverse of [`series_exp`]:
/// `l_n = a_n - (1/n) sum_{k=1}^{n-1} k l_k a_{n-k}`.
pub fn series_log(a: &Series) -> Result<Series> {
    if a.coeffs[0] != 1 {
        return Err(Error::ConstantTermNotOne);
    }
    let order = a.order();
    let mut l: Vec<Rational> = Vec::with_capacity(order + 1);
    l.push(Rational::new());
    for n in 1..=order {
        let mut acc = Rational::new();
        for k in 1..n {
            if l[k].cmp0().is_ne() {
                acc += Rational::from(&l[k] * &a.coeffs[n - k]) * k as u64;
            }
        }
        acc /= n as u64;
        l.push(Rational::from(&a.coeffs[n] - &acc));
    }
    Ok(Series { coeffs: l })
}

/// Bivariate series in `(z, x)` with bounded Laurent tail in `z`.
///
/// Stored as one Laurent polynomial in `z` per power of `x`. Row `n` holds
/// `z`-degrees `d` with `-floor(n/3) <= d <= floor((2*order - n)/2)`, so
/// `x`-degrees run up to `6*order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiSeries {
    order: usize,
    rows: Vec<Vec<Rational>>,
}

impl BiSeries {
    pub fn zero(order: usize) -> Self {
        let rows = (0..=Self::x_max_for(order))
            .map(|n| vec![Rational::new(); Self::row_len(order, n)])
            .collect();
        BiSeries { order, rows }
    }

    pub fn one(order: usize) -> Self {
        let mut b = Self::zero(order);
        b.rows[0][0] = Rational::from(1);
        b
    }

    fn x_max_for(order: usize) -> usize {
        6 * order
    }

    fn d_lo(n: usize) -> i64 {
        -((n / 3) as i64)
    }

    fn d_hi(order: usize, n: usize) -> i64 {
        (2 * order as i64 - n as i64).div_euclid(2)
    }

    fn row_len(order: usize, n: usize) -> usize {
        (Self::d_hi(order, n) - Self::d_lo(n) + 1).max(0) as usize
    }

    /// Output order of [`wick_extract`] that is guaranteed exact.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn x_max(&self) -> usize {
        Self::x_max_for(self.order)
    }

    /// Smallest `z`-degree the window can hold.
    pub fn z_min(&self) -> i64 {
        Self::d_lo(self.x_max())
    }

    pub fn z_max(&self) -> i64 {
        self.order as i64
    }

    fn in_window(&self, d: i64, n: usize) -> bool {
        n <= self.x_max() && d >= Self::d_lo(n) && d <= Self::d_hi(self.order, n)
    }

    /// Coefficient of `z^d x^n`; zero outside the window.
    pub fn coeff(&self, d: i64, n: usize) -> Rational {
        if self.in_window(d, n) {
            self.rows[n][(d - Self::d_lo(n)) as usize].clone()
        } else {
            Rational::new()
        }
    }

    /// Adds `c z^d x^n`. Terms beyond the weight window are dropped; terms
    /// violating the pole rule are rejected.
    pub fn add_term(&mut self, d: i64, n: usize, c: &Rational) -> Result<()> {
        if 3 * d + (n as i64) < 0 {
            return Err(Error::PoleRule {
                z_degree: d,
                x_degree: n,
            });
        }
        if self.in_window(d, n) {
            self.rows[n][(d - Self::d_lo(n)) as usize] += c;
        }
        Ok(())
    }

    /// Embeds a series in `x` (no `z` dependence).
    pub fn from_x_series(s: &Series, order: usize) -> Result<Self> {
        let mut b = Self::zero(order);
        b.require_x_order(s)?;
        for n in 0..=b.x_max() {
            b.add_term(0, n, s.coeff(n))?;
        }
        Ok(b)
    }

    /// `s(x) / z`; requires valuation of `s` at least 3.
    pub fn from_x_series_over_z(s: &Series, order: usize) -> Result<Self> {
        if let Some(v) = s.valuation() {
            if v < 3 {
                return Err(Error::Valuation {
                    required: 3,
                    found: v,
                });
            }
        }
        let mut b = Self::zero(order);
        b.require_x_order(s)?;
        for n in 3..=b.x_max() {
            b.add_term(-1, n, s.coeff(n))?;
        }
        Ok(b)
    }

    fn require_x_order(&self, s: &Series) -> Result<()> {
        if s.order() < self.x_max() {
            return Err(Error::Window {
                requested: self.x_max(),
                available: s.order(),
            });
        }
        Ok(())
    }

    /// Restriction to a smaller output order.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::Window {
                requested: order,
                available: self.order,
            });
        }
        let mut out = Self::zero(order);
        for n in 0..=out.x_max() {
            let lo = Self::d_lo(n);
            for d in lo..=Self::d_hi(order, n) {
                out.rows[n][(d - lo) as usize] = self.rows[n][(d - lo) as usize].clone();
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &BiSeries) -> Result<BiSeries> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (ro, rb) in out.rows.iter_mut().zip(&other.rows) {
            for (a, b) in ro.iter_mut().zip(rb) {
                *a += b;
            }
        }
        Ok(out)
    }

    fn check_order(&self, other: &BiSeries) -> Result<()> {
        if self.order != other.order {
            return Err(Error::MixedOrder {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    /// Accumulates `a_row * b_row` into `out` restricted to row `n`'s window.
    fn mul_rows_into(&self, out: &mut [Rational], n: usize, i: usize, a: &[Rational], j: usize, b: &[Rational]) {
        let (lo_a, lo_b, lo_o) = (Self::d_lo(i), Self::d_lo(j), Self::d_lo(n));
        let hi_o = Self::d_hi(self.order, n);
        for (ia, ca) in a.iter().enumerate() {
            if ca.cmp0().is_eq() {
                continue;
            }
            let da = lo_a + ia as i64;
            for (ib, cb) in b.iter().enumerate() {
                let d = da + lo_b + ib as i64;
                if d > hi_o {
                    break;
                }
                if cb.cmp0().is_eq() || d < lo_o {
                    continue;
                }
                out[(d - lo_o) as usize] += Rational::from(ca * cb);
            }
        }
    }

    pub fn mul(&self, other: &BiSeries) -> Result<BiSeries> {
        self.check_order(other)?;
        let mut out = Self::zero(self.order);
        for n in 0..=self.x_max() {
            let mut row = std::mem::take(&mut out.rows[n]);
            for i in 0..=n {
                self.mul_rows_into(&mut row, n, i, &self.rows[i], n - i, &other.rows[n - i]);
            }
            out.rows[n] = row;
        }
        Ok(out)
    }

    /// `exp(self)`: the `x^0` row is exponentiated as a series in `z`, then
    /// `n E_n = sum_k k A_k E_{n-k}` fills higher powers of `x`.
    pub fn exp(&self) -> Result<BiSeries> {
        if self.rows[0][0].cmp0().is_ne() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut out = Self::zero(self.order);
        let base = Series::from_coeffs(self.rows[0].clone(), self.order);
        out.rows[0] = series_exp(&base)?.coeffs;
        for n in 1..=self.x_max() {
            let mut row = std::mem::take(&mut out.rows[n]);
            for k in 1..=n {
                if self.rows[k].iter().all(|c| c.cmp0().is_eq()) {
                    continue;
                }
                let scaled: Vec<Rational> = self.rows[k]
                    .iter()
                    .map(|c| Rational::from(c * k as u64))
                    .collect();
                self.mul_rows_into(&mut row, n, k, &scaled, n - k, &out.rows[n - k]);
            }
            for c in row.iter_mut() {
                *c /= n as u64;
            }
            out.rows[n] = row;
        }
        Ok(out)
    }
}

/// `T(z, x) = (e^x - x^2/2 - x - 1)/z + x/2 + T(z e^{-x})` built from the
/// univariate `t`, truncated at output order `order`.
pub fn series_compose_scaled_exponent(t: &Series, order: usize) -> Result<BiSeries> {
    if t.coeff(0).cmp0().is_ne() {
        return Err(Error::NonzeroConstantTerm);
    }
    if t.order() < order {
        return Err(Error::Window {
            requested: order,
            available: t.order(),
        });
    }
    let mut b = BiSeries::zero(order);
    let x_max = b.x_max();
    for s in 3..=x_max {
        b.add_term(-1, s, &Rational::from((Integer::from(1), factorial(s))))?;
    }
    b.add_term(0, 1, &Rational::from((1, 2)))?;
    for n in 1..=order {
        let c = t.coeff(n);
        if c.cmp0().is_eq() {
            continue;
        }
        // z^n e^{-n x} = z^n sum_s (-n)^s x^s / s!
        let mut pow = Rational::from(1);
        for s in 0..=x_max {
            if !b.in_window(n as i64, s) {
                break;
            }
            let term = Rational::from(&pow / factorial(s)) * c;
            b.add_term(n as i64, s, &term)?;
            pow *= -(n as i64);
        }
    }
    Ok(b)
}

/// `sum_l (sign z)^l (2l-1)!! [x^{2l}] b`, reported up to `order`.
pub fn wick_extract(b: &BiSeries, sign: i32, order: usize) -> Result<Series> {
    if sign != 1 && sign != -1 {
        return Err(Error::Domain(format!("sign must be +1 or -1, got {sign}")));
    }
    if order > b.order() {
        return Err(Error::Window {
            requested: order,
            available: b.order(),
        });
    }
    let mut out = Series::zero(order);
    for l in 0..=(b.x_max() / 2) {
        let mut w = Rational::from(double_factorial_odd(l));
        if sign < 0 && l % 2 == 1 {
            w = -w;
        }
        let n = 2 * l;
        let lo = BiSeries::d_lo(n);
        for (i, c) in b.rows[n].iter().enumerate() {
            let k = lo + i as i64 + l as i64;
            if c.cmp0().is_eq() || k < 0 || k > order as i64 {
                continue;
            }
            out.coeffs[k as usize] += Rational::from(c * &w);
        }
    }
    Ok(out)
}

/// `e^x - x^2/2 - x - 1` as a series in `x`.
pub fn exp_cubic_tail(order: usize) -> Series {
    Series::from_fn(order, |s| {
        if s >= 3 {
            Rational::from((Integer::from(1), factorial(s)))
        } else {
            Rational::new()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::bernoulli;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn s(v: &[(i64, i64)], order: usize) -> Series {
        Series::from_coeffs(v.iter().map(|&(n, d)| q(n, d)).collect(), order)
    }

    fn paper_t(order: usize) -> Series {
        s(
            &[(0, 1), (-1, 24), (-1, 48), (-161, 5760), (-367, 5760), (-120257, 580608)],
            order,
        )
    }

    fn bernoulli_series(order: usize) -> Series {
        Series::from_fn(order, |k| {
            if k == 0 {
                Rational::new()
            } else {
                bernoulli(k + 1) / Rational::from((k * (k + 1)) as u64)
            }
        })
    }

    #[test]
    fn mul_examples() {
        let a = s(&[(1, 1), (1, 1)], 4);
        let b = s(&[(1, 1), (-1, 1)], 4);
        assert_eq!(series_mul(&a, &b).unwrap(), s(&[(1, 1), (0, 1), (-1, 1)], 4));
        assert_eq!(series_mul(&paper_t(5), &Series::zero(5)).unwrap(), Series::zero(5));
        let geo = Series::from_fn(10, |_| q(1, 1));
        assert_eq!(series_mul(&geo, &s(&[(1, 1), (-1, 1)], 10)).unwrap(), Series::one(10));
        assert!(matches!(
            series_mul(&geo, &Series::one(3)),
            Err(Error::MixedOrder { .. })
        ));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(series_exp(&Series::zero(6)).unwrap(), Series::one(6));
        let e = series_exp(&paper_t(5)).unwrap();
        assert_eq!(
            e,
            s(
                &[(1, 1), (-1, 24), (-23, 1152), (-11237, 414720), (-2482411, 39813120), (-272785979, 1337720832)],
                5
            )
        );
        let st = series_exp(&bernoulli_series(6)).unwrap();
        assert_eq!(st.coeff(1), &q(1, 12));
        assert_eq!(st.coeff(2), &q(1, 288));
        assert_eq!(st.coeff(3), &q(-139, 51840));
        assert!(matches!(series_exp(&Series::one(3)), Err(Error::NonzeroConstantTerm)));
    }

    #[test]
    fn log_examples() {
        assert_eq!(series_log(&Series::one(5)).unwrap(), Series::zero(5));
        let t = paper_t(5);
        assert_eq!(series_log(&series_exp(&t).unwrap()).unwrap(), t);
        let one_plus_z = s(&[(1, 1), (1, 1)], 6);
        let mercator = Series::from_fn(6, |n| {
            if n == 0 {
                q(0, 1)
            } else {
                q(if n % 2 == 1 { 1 } else { -1 }, n as i64)
            }
        });
        assert_eq!(series_log(&one_plus_z).unwrap(), mercator);
        assert!(matches!(series_log(&Series::zero(2)), Err(Error::ConstantTermNotOne)));
    }

    #[test]
    fn compose_examples() {
        let b = series_compose_scaled_exponent(&Series::zero(3), 3).unwrap();
        assert_eq!(b.coeff(-1, 3), q(1, 6));
        assert_eq!(b.coeff(-1, 4), q(1, 24));
        assert_eq!(b.coeff(0, 1), q(1, 2));
        assert_eq!(b.coeff(0, 0), q(0, 1));
        assert_eq!(b.coeff(-1, 2), q(0, 1));
        let b = series_compose_scaled_exponent(&paper_t(5), 5).unwrap();
        assert_eq!(b.coeff(1, 0), q(-1, 24));
        assert_eq!(b.coeff(1, 1), q(1, 24));
        // z^2 x^2: ch_2 (-2)^2 / 2!
        assert_eq!(b.coeff(2, 1), q(1, 24));
        assert_eq!(b.coeff(2, 2), q(-1, 24));
    }

    #[test]
    fn pole_rule_enforced() {
        let mut b = BiSeries::zero(2);
        assert!(matches!(b.add_term(-1, 2, &q(1, 1)), Err(Error::PoleRule { .. })));
        assert!(b.add_term(-1, 3, &q(1, 1)).is_ok());
    }

    #[test]
    fn window_geometry() {
        let b = BiSeries::zero(10);
        assert_eq!(b.x_max(), 60);
        assert_eq!(b.z_min(), -20);
        assert_eq!(b.z_max(), 10);
    }

    #[test]
    fn wick_examples() {
        assert_eq!(wick_extract(&BiSeries::one(5), 1, 5).unwrap(), Series::one(5));
        let t = paper_t(5);
        let b = series_compose_scaled_exponent(&t, 5).unwrap().exp().unwrap();
        assert_eq!(wick_extract(&b, -1, 5).unwrap(), Series::one(5));
        assert!(matches!(wick_extract(&b, -1, 6), Err(Error::Window { .. })));
    }

    #[test]
    fn wick_of_pure_cubic_tail_is_stirling() {
        let order = 8;
        let a = BiSeries::from_x_series_over_z(&exp_cubic_tail(6 * order).scale(&q(-1, 1)), order).unwrap();
        let lhs = wick_extract(&a.exp().unwrap(), 1, order).unwrap();
        assert_eq!(lhs, series_exp(&bernoulli_series(order)).unwrap());
    }

    #[test]
    fn exp_matches_product_of_exps() {
        let order = 4;
        let mut a = BiSeries::zero(order);
        a.add_term(-1, 3, &q(2, 3)).unwrap();
        a.add_term(0, 1, &q(-1, 2)).unwrap();
        a.add_term(1, 0, &q(1, 5)).unwrap();
        let mut b = BiSeries::zero(order);
        b.add_term(-1, 4, &q(1, 7)).unwrap();
        b.add_term(1, 2, &q(3, 1)).unwrap();
        let lhs = a.add(&b).unwrap().exp().unwrap();
        let rhs = a.exp().unwrap().mul(&b.exp().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn csv_and_json_rows() {
        let t = paper_t(3);
        assert_eq!(
            t.to_csv(),
            "index,numerator,denominator\n0,0,1\n1,-1,24\n2,-1,48\n3,-161,5760\n"
        );
        let rows: Vec<SeriesRow> = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(Series::from_rows(&rows).unwrap(), t);
    }
}
