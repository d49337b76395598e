use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use voaplus::catalog::{catalog, parse_spec, Value};
use voaplus::code::{has_rm14_subcode, Word};
use voaplus::lattice::enumerate::{vectors_of_norm, vectors_of_norm_shifted};
use voaplus::{BinaryCode, DualVector, Lattice};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Positive definite Gram matrices `AᵀA + I` with small entries, rank 1 to 3.
fn gram_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(-2i64..=2, n * n).prop_map(move |a| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (0..n).map(|k| a[k * n + i] * a[k * n + j]).sum::<i64>()
                                + i64::from(i == j)
                        })
                        .collect()
                })
                .collect()
        })
    })
}

fn norm(g: &[Vec<i64>], x: &[i64]) -> i64 {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|j| x[i] * g[i][j] * x[j]).sum::<i64>()).sum()
}

/// Integer vectors of norm `m` found by scanning a box. The box radius uses
/// `λ_min(G) ≥ 1`, which holds for `AᵀA + I`.
fn naive(g: &[Vec<i64>], m: i64) -> Vec<Vec<i64>> {
    let n = g.len();
    let r = (m as f64).sqrt().ceil() as i64;
    let mut out = Vec::new();
    let mut z = vec![-r; n];
    'scan: loop {
        if norm(g, &z) == m {
            out.push(z.clone());
        }
        for k in 0..n {
            if z[k] < r {
                z[k] += 1;
                continue 'scan;
            }
            z[k] = -r;
        }
        break;
    }
    out.sort();
    out
}

fn doubly_even_code() -> impl Strategy<Value = BinaryCode> {
    (4usize..=12, prop::collection::vec(any::<u64>(), 1..8)).prop_map(|(n, raw)| {
        let mut basis: Vec<Word> = Vec::new();
        for w in raw {
            let w = w & ((1u64 << n) - 1);
            if w.count_ones() % 4 == 0
                && w != 0
                && basis.iter().all(|&b| (w & b).count_ones() % 2 == 0)
            {
                basis.push(w);
            }
        }
        BinaryCode::new(n, &basis).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_box(g in gram_strategy(), m in 0i64..=6) {
        let l = Lattice::new(g.clone()).unwrap();
        let got: Vec<DualVector> = vectors_of_norm(&l, &l.discriminant().trivial(), &int(m)).unwrap();
        let want: Vec<DualVector> = naive(&g, m).iter().map(|v| DualVector::from_ints(v)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn enumeration_is_symmetric(g in gram_strategy(), m in 1i64..=6) {
        let l = Lattice::new(g).unwrap();
        let vs = vectors_of_norm(&l, &l.discriminant().trivial(), &int(m)).unwrap();
        prop_assert_eq!(vs.len() % 2, 0);
        for v in &vs {
            prop_assert!(vs.binary_search(&v.scale_int(-1)).is_ok());
        }
    }

    #[test]
    fn coset_rep_does_not_depend_on_shift(
        g in gram_strategy(),
        pick in prop::collection::vec(-3i64..=3, 3),
        shift in prop::collection::vec(-4i64..=4, 3),
    ) {
        let l = Lattice::new(g).unwrap();
        let n = l.rank();
        // A dual vector: G⁻¹ times an integer vector.
        let y: Vec<i64> = pick[..n].to_vec();
        let ginv = voaplus::lattice::matrix::inverse(&voaplus::lattice::matrix::to_big(l.gram())).unwrap();
        let x = DualVector::new(
            (0..n)
                .map(|i| (0..n).fold(int(0), |a, j| a + &ginv[i][j] * int(y[j])))
                .collect(),
        );
        let moved = &x + &DualVector::from_ints(&shift[..n]);
        let a = l.discriminant().coset_of(&x).unwrap();
        let b = l.discriminant().coset_of(&moved).unwrap();
        prop_assert_eq!(&a, &b);
        for c in a.rep().coords() {
            prop_assert!(*c >= int(0) && *c < int(1));
        }
        prop_assert!((a.rep() - &x).is_integral());
        let m = l.norm_rational(a.rep());
        let from_rep = vectors_of_norm(&l, &a, &m).unwrap();
        let from_shift = vectors_of_norm_shifted(&l, &moved, &m).unwrap();
        prop_assert_eq!(from_rep, from_shift);
    }

    #[test]
    fn code_is_invariant_under_permutation(c in doubly_even_code(), seed in any::<u64>()) {
        let n = c.length();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = c.permute(&perm).unwrap();
        prop_assert_eq!(p.dimension(), c.dimension());
        prop_assert_eq!(p.weight_distribution().unwrap(), c.weight_distribution().unwrap());
        prop_assert_eq!(p.is_doubly_even(), c.is_doubly_even());
        prop_assert_eq!(p.contains_all_one(), c.contains_all_one());
    }

    #[test]
    fn permuted_rm14_is_detected(perm in Just((0..16).collect::<Vec<usize>>()).prop_shuffle()) {
        let c = BinaryCode::rm14().permute(&perm).unwrap();
        let found = has_rm14_subcode(&c).unwrap().expect("RM(1,4) image not detected");
        prop_assert_eq!(found.dimension(), 5);
        prop_assert_eq!(found.weight_distribution().unwrap(), BinaryCode::rm14().weight_distribution().unwrap());
        prop_assert!(found.basis().iter().all(|&w| c.contains(w)));
        // Dropping one generator of weight 8 leaves no such subcode.
        let rest: Vec<Word> = c.basis().iter().copied().filter(|w| w.count_ones() != 16).skip(1).collect();
        let smaller = BinaryCode::new(16, &rest).unwrap();
        if smaller.dimension() < 5 {
            prop_assert!(has_rm14_subcode(&smaller).unwrap().is_none());
        }
    }

    #[test]
    fn code_basis_is_canonical(c in doubly_even_code()) {
        let again = BinaryCode::new(c.length(), c.basis()).unwrap();
        prop_assert_eq!(&again, &c);
        let mut shuffled = c.basis().to_vec();
        shuffled.reverse();
        if shuffled.len() > 1 {
            let first = shuffled[0];
            shuffled[1] ^= first;
        }
        prop_assert_eq!(&BinaryCode::new(c.length(), &shuffled).unwrap(), &c);
    }

    #[test]
    fn code_expression_round_trips(c in doubly_even_code()) {
        match parse_spec(&c.to_expr()).unwrap() {
            Value::Code(back) => prop_assert_eq!(back, c),
            Value::Lattice(_) => prop_assert!(false, "parsed a lattice"),
        }
    }

    #[test]
    fn lattice_expression_round_trips(g in gram_strategy(), k in 1i64..=3) {
        let l = Lattice::new(g).unwrap().rescale(k).unwrap();
        match parse_spec(&l.to_expr()).unwrap() {
            Value::Lattice(back) => prop_assert_eq!(back.gram(), l.gram()),
            Value::Code(_) => prop_assert!(false, "parsed a code"),
        }
    }
}

#[test]
fn catalog_expressions_are_idempotent() {
    for e in catalog() {
        let v = e.build().unwrap();
        let printed = v.to_expr();
        let again = parse_spec(&printed).unwrap();
        assert_eq!(again.to_expr(), printed, "{}", e.name);
        match (&v, &again) {
            (Value::Lattice(a), Value::Lattice(b)) => assert_eq!(a.gram(), b.gram()),
            (Value::Code(a), Value::Code(b)) => assert_eq!(a, b),
            _ => panic!("{}: kind changed", e.name),
        }
    }
}

#[test]
fn dual_vector_equality_is_exact() {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let a = DualVector::new(vec![half.clone()]);
    let b = DualVector::new(vec![BigRational::new(BigInt::from(2), BigInt::from(4))]);
    assert_eq!(a, b);
}
