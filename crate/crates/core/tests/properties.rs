use outfn_euler::arith::{double_factorial_odd, factorial, half_integer_gamma_ratio, Rational};
use outfn_euler::asymptotics::HighFloat;
use outfn_euler::graphs::{canonical_form, enumerate_connected, Character, EnumConfig, Graph, GraphClass};
use outfn_euler::series::{wick_extract, BiSeries, Series};
use outfn_euler::verify::LGAMMA_GUARD_BITS;
use proptest::prelude::*;
use proptest::sample::Index;
use rug::Integer;
use std::sync::OnceLock;

fn series(coeffs: &[i64], order: usize, constant: i64) -> Series {
    Series::from_fn(order, |k| if k == 0 { Rational::from(constant) } else { Rational::from(coeffs[k - 1]) })
}

fn small_coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn exp_and_log_are_inverse(c in small_coeffs(), order in 1usize..=8) {
        let a = series(&c, order, 0);
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a.clone());
        let one_plus = series(&c, order, 1);
        prop_assert_eq!(one_plus.log().unwrap().exp().unwrap(), one_plus);
    }
}

proptest! {
    #[test]
    fn mul_commutes_and_associates(a in small_coeffs(), b in small_coeffs(), c in small_coeffs(), k in -3i64..=3) {
        let (a, b, c) = (series(&a, 8, k), series(&b, 8, 1), series(&c, 8, -k));
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn wick_extract_is_linear(
        terms in prop::collection::vec((-2i64..=4, 0usize..=24, -9i64..=9), 0..20),
        more in prop::collection::vec((-2i64..=4, 0usize..=24, -9i64..=9), 0..20),
        sign in prop::sample::select(vec![1i32, -1]),
    ) {
        let order = 4;
        let build = |ts: &[(i64, usize, i64)]| {
            let mut b = BiSeries::zero(order);
            for &(d, n, c) in ts {
                let _ = b.add_term(d, n, &Rational::from(c));
            }
            b
        };
        let (x, y) = (build(&terms), build(&more));
        let sum = wick_extract(&x.add(&y).unwrap(), sign, order).unwrap();
        let parts = wick_extract(&x, sign, order).unwrap().add(&wick_extract(&y, sign, order).unwrap()).unwrap();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn gamma_ratio_functional_equation(n in 0i64..200, k in 0i64..200) {
        prop_assume!(k <= n);
        let lhs = half_integer_gamma_ratio(n, k).unwrap() * (Rational::from(n - k) + Rational::from((1, 2)));
        prop_assert_eq!(lhs, half_integer_gamma_ratio(n + 1, k).unwrap());
    }

    #[test]
    fn double_factorial_counts_matchings(l in 0usize..=100) {
        let lhs = double_factorial_odd(l) * factorial(l) * (Integer::from(1) << l as u32);
        prop_assert_eq!(lhs, factorial(2 * l));
    }

    #[test]
    fn lgamma_matches_exact_ratio(n in 0i64..400, k in 0i64..400) {
        prop_assume!(k <= n);
        let target = 256;
        let bits = target + LGAMMA_GUARD_BITS;
        let exact = HighFloat::from_rational(&half_integer_gamma_ratio(n, k).unwrap(), bits)
            .mul(&HighFloat::pi(bits).ln().div(&HighFloat::from_i64(2, bits)).exp());
        let arg = HighFloat::from_rational(&(Rational::from(n - k) + Rational::from((1, 2))), bits);
        let rel = arg.lgamma().exp().sub(&exact).div(&exact).abs();
        prop_assert!(rel.log2_abs().is_none_or(|l| l < 8.0 - target as f64), "{:?}", rel.log2_abs());
    }
}

fn pool() -> &'static [GraphClass] {
    static POOL: OnceLock<Vec<GraphClass>> = OnceLock::new();
    POOL.get_or_init(|| {
        let cfg = EnumConfig::default();
        [(0, 3), (0, 4), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1)]
            .iter()
            .flat_map(|&(a, s)| enumerate_connected(a, s, &cfg).unwrap())
            .collect()
    })
}

/// Applies a random relabeling of half-edges and vertices.
fn relabel(g: &Graph, seed: &[Index]) -> Graph {
    let h = g.half_edge_count();
    let v = g.vertex_count();
    let mut he: Vec<usize> = (0..h).collect();
    let mut vx: Vec<usize> = (0..v).collect();
    for (i, idx) in seed.iter().enumerate() {
        if h > 1 {
            let j = idx.index(h);
            he.swap(i % h, j);
        }
        if v > 1 {
            let j = idx.index(v);
            vx.swap(i % v, j);
        }
    }
    let mut vertex_of = vec![0; h];
    let mut involution = vec![0; h];
    for old in 0..h {
        vertex_of[he[old]] = vx[g.vertex_of()[old]];
        involution[he[old]] = he[g.involution()[old]];
    }
    Graph::new(v, vertex_of, involution).unwrap()
}

proptest! {
    #[test]
    fn canonical_form_ignores_labels(pick in any::<Index>(), seed in prop::collection::vec(any::<Index>(), 1..16)) {
        let g = &pool()[pick.index(pool().len())].graph;
        let h = relabel(g, &seed);
        prop_assert_eq!(canonical_form(g), canonical_form(&h));
    }

    #[test]
    fn characters_multiply_on_disjoint_unions(a in any::<Index>(), b in any::<Index>()) {
        let p = pool();
        let (g, h) = (&p[a.index(p.len())].graph, &p[b.index(p.len())].graph);
        let u = g.disjoint_union(h);
        for chi in [Character::Tau, Character::Sigma, Character::Xi, Character::Unit] {
            prop_assert_eq!(chi.eval(&u), chi.eval(g) * chi.eval(h), "{}", chi.name());
        }
    }

    #[test]
    fn automorphism_order_divides_half_edge_factorial(pick in any::<Index>()) {
        let c = &pool()[pick.index(pool().len())];
        let h = c.graph.half_edge_count();
        prop_assert!(factorial(h).is_divisible(&c.automorphisms));
        prop_assert_eq!(c.graph.edge_count() as i64 - c.graph.vertex_count() as i64, c.graph.loop_order());
    }
}
