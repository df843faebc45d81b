//! Exact integer and rational helpers: factorials, odd double factorials,
//! half-integer gamma ratios and a memoized Bernoulli table.

use std::sync::{OnceLock, RwLock};

use rug::Integer;

use crate::error::{Error, Result};

pub use rug::Rational;

/// Default size of the memoized tables.
pub const DEFAULT_TABLE_CAP: usize = 2100;

struct Tables {
    factorials: Vec<Integer>,
    bernoulli: Vec<Rational>,
}

fn tables() -> &'static RwLock<Tables> {
    static TABLES: OnceLock<RwLock<Tables>> = OnceLock::new();
    TABLES.get_or_init(|| {
        RwLock::new(Tables {
            factorials: vec![Integer::from(1)],
            bernoulli: vec![Rational::from(1)],
        })
    })
}

/// `n!`, memoized.
pub fn factorial(n: usize) -> Integer {
    if let Some(f) = tables().read().unwrap().factorials.get(n) {
        return f.clone();
    }
    let mut t = tables().write().unwrap();
    while t.factorials.len() <= n {
        let k = t.factorials.len();
        let next = Integer::from(&t.factorials[k - 1] * k as u64);
        t.factorials.push(next);
    }
    t.factorials[n].clone()
}

pub fn binomial(n: usize, k: usize) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(n).binomial(k as u32)
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
///
/// Built from `sum_{k=0}^{n} C(n+1,k) B_k = 0` and memoized.
pub fn bernoulli(n: usize) -> Rational {
    if let Some(b) = tables().read().unwrap().bernoulli.get(n) {
        return b.clone();
    }
    let mut t = tables().write().unwrap();
    while t.bernoulli.len() <= n {
        let m = t.bernoulli.len();
        if m >= 3 && m % 2 == 1 {
            t.bernoulli.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        for (k, b) in t.bernoulli.iter().enumerate() {
            if b.cmp0().is_ne() {
                acc += Rational::from(binomial(m + 1, k)) * b;
            }
        }
        acc /= Integer::from(m + 1);
        acc = -acc;
        t.bernoulli.push(acc);
    }
    t.bernoulli[n].clone()
}

/// `(2l-1)!!` with `(-1)!! = 1`.
pub fn double_factorial_odd(l: usize) -> Integer {
    let mut acc = Integer::from(1);
    for j in 1..=l {
        acc *= 2 * j as u64 - 1;
    }
    acc
}

/// `Gamma(n - k + 1/2) / sqrt(pi)` as an exact rational, i.e.
/// `(2(n-k))! / (4^(n-k) (n-k)!)`.
pub fn half_integer_gamma_ratio(n: i64, k: i64) -> Result<Rational> {
    let m = n - k;
    if m < 0 {
        return Err(Error::Domain(format!(
            "half_integer_gamma_ratio needs n - k >= 0, got n={n}, k={k}"
        )));
    }
    let m = m as usize;
    let num = factorial(2 * m);
    let den = (Integer::from(1) << (2 * m as u32)) * factorial(m);
    Ok(Rational::from((num, den)))
}

/// Decimal string pair `(numerator, denominator)`.
pub fn rational_parts(q: &Rational) -> (String, String) {
    (q.numer().to_string(), q.denom().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), q(0, 1));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn bernoulli_recurrence_to_200() {
        for n in 1..=200usize {
            let mut s = Rational::new();
            for k in 0..=n {
                s += Rational::from(binomial(n + 1, k)) * bernoulli(k);
            }
            assert_eq!(s, 0, "recurrence fails at n={n}");
            if n >= 3 && n % 2 == 1 {
                assert_eq!(bernoulli(n), 0);
            }
        }
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd(0), 1);
        assert_eq!(double_factorial_odd(2), 3);
        assert_eq!(double_factorial_odd(4), 105);
        for l in 0..=100usize {
            let lhs = double_factorial_odd(l) * factorial(l) * (Integer::from(1) << l as u32);
            assert_eq!(lhs, factorial(2 * l));
        }
    }

    #[test]
    fn half_integer_gamma() {
        assert_eq!(half_integer_gamma_ratio(1, 0).unwrap(), q(1, 2));
        assert_eq!(half_integer_gamma_ratio(2, 0).unwrap(), q(3, 4));
        assert_eq!(half_integer_gamma_ratio(3, 1).unwrap(), q(3, 4));
        assert_eq!(half_integer_gamma_ratio(0, 0).unwrap(), q(1, 1));
        assert!(half_integer_gamma_ratio(1, 2).is_err());
    }

    #[test]
    fn half_integer_gamma_functional_equation() {
        for n in 0..40i64 {
            for k in 0..=n {
                let lhs = half_integer_gamma_ratio(n, k).unwrap() * q(2 * (n - k) + 1, 2);
                assert_eq!(lhs, half_integer_gamma_ratio(n + 1, k).unwrap());
            }
        }
    }
}
