//! Graph characters: multiplicative functions to the rationals.

use super::{Graph, UnionFind};
use crate::arith::factorial;
use rug::{Integer, Rational};
use std::fmt;
use std::sync::Arc;

/// Alternating count of subforests: `Σ_{φ ⊂ Γ forest} (−1)^{e(φ)}`.
pub fn tau(g: &Graph) -> Rational {
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| (g.vertex_of()[a], g.vertex_of()[b]))
        .filter(|(u, v)| u != v)
        .collect();
    let mut total = Integer::new();
    forests(&edges, 0, &mut UnionFind::new(g.vertex_count()), 0, &mut total);
    Rational::from(total)
}

fn forests(edges: &[(usize, usize)], k: usize, uf: &mut UnionFind, size: usize, total: &mut Integer) {
    if k == edges.len() {
        if size.is_multiple_of(2) {
            *total += 1;
        } else {
            *total -= 1;
        }
        return;
    }
    forests(edges, k + 1, uf, size, total);
    let (u, v) = edges[k];
    if uf.find(u) != uf.find(v) {
        let mut grown = uf.clone();
        grown.union(u, v);
        forests(edges, k + 1, &mut grown, size + 1, total);
    }
}

/// `(−1)^{e(Γ)}`.
pub fn sigma(g: &Graph) -> Rational {
    Rational::from(if g.edge_count().is_multiple_of(2) { 1 } else { -1 })
}

/// `(−1)^{v(Γ)} Π_v (|v|−2)!`. Vertices of valence below 2 give 0.
pub fn xi(g: &Graph) -> Rational {
    let mut p = Integer::from(if g.vertex_count().is_multiple_of(2) { 1 } else { -1 });
    for d in g.valences() {
        if d < 2 {
            return Rational::new();
        }
        p *= factorial(d - 2);
    }
    Rational::from(p)
}

/// `u∘ε`: 1 on edge-free graphs, 0 otherwise.
pub fn unit(g: &Graph) -> Rational {
    Rational::from(u8::from(g.edge_count() == 0))
}

type CustomEval = Arc<dyn Fn(&Graph) -> Rational + Send + Sync>;

#[derive(Clone)]
pub enum Character {
    Tau,
    Sigma,
    Xi,
    Unit,
    Custom { name: String, eval: CustomEval },
}

impl Character {
    pub fn custom(name: impl Into<String>, eval: impl Fn(&Graph) -> Rational + Send + Sync + 'static) -> Self {
        Character::Custom { name: name.into(), eval: Arc::new(eval) }
    }

    pub fn name(&self) -> &str {
        match self {
            Character::Tau => "tau",
            Character::Sigma => "sigma",
            Character::Xi => "xi",
            Character::Unit => "unit",
            Character::Custom { name, .. } => name,
        }
    }

    pub fn eval(&self, g: &Graph) -> Rational {
        match self {
            Character::Tau => tau(g),
            Character::Sigma => sigma(g),
            Character::Xi => xi(g),
            Character::Unit => unit(g),
            Character::Custom { eval, .. } => eval(g),
        }
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character({})", self.name())
    }
}

impl std::str::FromStr for Character {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "tau" => Ok(Character::Tau),
            "sigma" => Ok(Character::Sigma),
            "xi" => Ok(Character::Xi),
            "unit" => Ok(Character::Unit),
            other => Err(crate::error::Error::Usage(format!("unknown character {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_on_rank_two() {
        assert_eq!(tau(&Graph::rose(2)), 1);
        assert_eq!(tau(&Graph::dumbbell()), 0);
        assert_eq!(tau(&Graph::theta(3)), -2);
    }

    #[test]
    fn sigma_and_xi() {
        assert_eq!(sigma(&Graph::rose(2)), 1);
        assert_eq!(sigma(&Graph::theta(3)), -1);
        assert_eq!(xi(&Graph::rose(2)), -2);
        assert_eq!(xi(&Graph::theta(3)), 1);
    }

    #[test]
    fn unit_and_parsing() {
        assert_eq!(unit(&Graph::star(4)), 1);
        assert_eq!(unit(&Graph::rose(1)), 0);
        assert_eq!("xi".parse::<Character>().unwrap().name(), "xi");
        assert!("rho".parse::<Character>().is_err());
        let c = Character::custom("edges", |g| Rational::from(g.edge_count() as u32));
        assert_eq!(c.eval(&Graph::theta(3)), 3);
    }
}
