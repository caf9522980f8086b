mod common;

use common::{check_model, load, random_models};
use loopinv::algebra::{apply_derivation, apply_map, Generator, GradedAlgebra, Monomial, Polynomial};
use loopinv::linalg::{involution_eigen_dims, kernel_basis, rank, rat};
use loopinv::models::{borel_model, loop_model};
use loopinv::series::{algebra_generating_function, ExprTerm, RationalExpr, TruncatedSeries};
use loopinv::{DgaModel, MinimalModel, QMatrix};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = QMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            QMatrix::from_int_rows(&refs)
        })
    })
}

proptest! {
    #[test]
    fn rank_nullity(m in small_matrix()) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.len(), m.cols());
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == rat(0)));
        }
        prop_assert_eq!(rank(&m), common::rank((0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()));
    }

    #[test]
    fn eigen_dims_are_conjugation_invariant(
        signs in prop::collection::vec(any::<bool>(), 1..6),
        lower in prop::collection::vec(-2i64..=2, 36),
        upper in prop::collection::vec(-2i64..=2, 36),
    ) {
        let n = signs.len();
        // P = L·U with unit diagonals is invertible, and P⁻¹ = U⁻¹·L⁻¹.
        let mut l = QMatrix::identity(n);
        let mut u = QMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                l.set(i, j, rat(lower[i * 6 + j]));
                u.set(j, i, rat(upper[i * 6 + j]));
            }
        }
        let mut diag = QMatrix::identity(n);
        for (i, &s) in signs.iter().enumerate() {
            if s {
                diag.set(i, i, rat(-1));
            }
        }
        let p = l.mul(&u).unwrap();
        let p_inv = invert_unitriangular_upper(&u).mul(&invert_unitriangular_lower(&l)).unwrap();
        prop_assert_eq!(p.mul(&p_inv).unwrap(), QMatrix::identity(n));
        let t = p.mul(&diag).unwrap().mul(&p_inv).unwrap();
        let minus = signs.iter().filter(|&&s| s).count();
        prop_assert_eq!(involution_eigen_dims(&t).unwrap(), (n - minus, minus));
    }

    #[test]
    fn generating_function_counts_bases(degrees in prop::collection::vec(1u32..=7, 0..5)) {
        let gens: Vec<Generator> = degrees.iter().enumerate().map(|(i, &d)| Generator::new(format!("g{i}"), d)).collect();
        let a = GradedAlgebra::new(gens.clone()).unwrap();
        let gf = algebra_generating_function(&gens, 18);
        for n in 0..18u32 {
            prop_assert_eq!(gf.coeffs()[n as usize], a.monomial_basis(n).len() as i64);
        }
    }

    #[test]
    fn shift_round_trip(coeffs in prop::collection::vec(-5i64..=5, 0..20), k in 0i64..8) {
        let s = TruncatedSeries::new(coeffs.clone());
        let back = s.shift(k).shift(-k);
        prop_assert_eq!(back.coeffs(), s.coeffs());
        let down = s.shift(-k);
        let mut rebuilt: Vec<i64> = down.dropped().iter().rev().copied().collect();
        rebuilt.extend_from_slice(down.coeffs());
        prop_assert_eq!(rebuilt, coeffs);
    }

    #[test]
    fn expansion_is_linear(
        a in prop::collection::vec((-3i64..=3, 0u32..6, prop::option::of(1u32..6)), 0..4),
        b in prop::collection::vec((-3i64..=3, 0u32..6, prop::option::of(1u32..6)), 0..4),
    ) {
        let build = |v: &[(i64, u32, Option<u32>)]| RationalExpr::new(v.iter().map(|&(c, p, per)| match per {
            Some(q) => ExprTerm::geometric(c, p, q),
            None => ExprTerm::monomial(c, p),
        }).collect());
        let (ea, eb) = (build(&a), build(&b));
        let sum = ea.clone().plus(&eb);
        prop_assert_eq!(sum.expand(25), ea.expand(25).add(&eb.expand(25)));
        prop_assert_eq!(RationalExpr::parse(&ea.to_string()).unwrap().expand(25), ea.expand(25));
    }
}

fn invert_unitriangular_lower(l: &QMatrix) -> QMatrix {
    let n = l.rows();
    let mut inv = QMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            let mut s = rat(0);
            for k in j..i {
                s -= l.get(i, k) * inv.get(k, j);
            }
            inv.set(i, j, s);
        }
    }
    inv
}

fn invert_unitriangular_upper(u: &QMatrix) -> QMatrix {
    invert_unitriangular_lower(&u.transpose()).transpose()
}

fn s2_borel() -> DgaModel {
    borel_model(&load("s2.model"), 30).unwrap()
}

/// Random homogeneous polynomials of `alg` in degrees `1..=6`.
fn homogeneous(alg: &GradedAlgebra) -> impl Strategy<Value = Polynomial> {
    let alg = alg.clone();
    (1u32..=6, prop::collection::vec(-3i64..=3, 12)).prop_map(move |(n, cs)| {
        let mut p = alg.zero();
        for (m, c) in alg.monomial_basis(n).into_iter().zip(cs) {
            p.add_term(m, rat(c));
        }
        p
    })
}

fn degree_or_zero(alg: &GradedAlgebra, p: &Polynomial) -> u32 {
    alg.homogeneous_degree(p).unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz_and_multiplicativity(
        (p, q) in {
            let a = s2_borel().algebra().clone();
            (homogeneous(&a), homogeneous(&a))
        }
    ) {
        let m = s2_borel();
        let a = m.algebra();
        let d = m.differential();
        let t = m.involution().unwrap();
        let pq = a.multiply(&p, &q);
        let sign = if degree_or_zero(a, &p) % 2 == 1 { rat(-1) } else { rat(1) };
        let rhs = a.multiply(&apply_derivation(a, d, &p), &q)
            .add(&a.multiply(&p, &apply_derivation(a, d, &q)).scale(&sign));
        prop_assert_eq!(apply_derivation(a, d, &pq), rhs);
        prop_assert_eq!(apply_map(a, t, &pq), a.multiply(&apply_map(a, t, &p), &apply_map(a, t, &q)));
    }

    #[test]
    fn koszul_commutation(
        (p, q) in {
            let a = s2_borel().algebra().clone();
            (homogeneous(&a), homogeneous(&a))
        }
    ) {
        let a = s2_borel().algebra().clone();
        let (dp, dq) = (degree_or_zero(&a, &p), degree_or_zero(&a, &q));
        let sign = if dp * dq % 2 == 1 { rat(-1) } else { rat(1) };
        prop_assert_eq!(a.multiply(&p, &q), a.multiply(&q, &p).scale(&sign));
    }
}

const CAP: u32 = 24;

#[test]
fn bundled_models_pass_the_suite() {
    for name in ["sphere-bundle-d2.model", "sphere-bundle-d3.model", "s2.model"] {
        check_model(&load(name), CAP);
    }
}

#[test]
fn random_models_pass_the_suite() {
    for m in random_models(0x5eed, 8, CAP, 250) {
        check_model(&m, CAP);
    }
}

/// Dropping every term containing α from the Borel differential leaves the
/// loop differential.
#[test]
fn alpha_to_zero_recovers_loop_differential() {
    let mut models: Vec<MinimalModel> = ["sphere-bundle-d2.model", "s2.model"].iter().map(|n| load(n)).collect();
    models.extend(random_models(7, 10, CAP, 250));
    for m in &models {
        let borel = borel_model(m, CAP).unwrap();
        let lp = loop_model(m).unwrap();
        let alpha = borel.algebra().index_of("alpha").unwrap();
        assert_eq!(alpha, 0);
        let positions: Vec<usize> = (1..borel.algebra().len()).collect();
        for (k, &pos) in positions.iter().enumerate() {
            let mut reduced = Polynomial::zero(lp.algebra().len());
            for (mono, c) in borel.differential().value(pos).terms() {
                if mono.0[alpha] == 0 {
                    reduced.add_term(Monomial(mono.0[1..].to_vec()), c.clone());
                }
            }
            assert_eq!(&reduced, lp.differential().value(k), "generator {}", lp.algebra().generators()[k].name);
        }
    }
}

/// The suspension preserves word length, so `δ(v̄)` is decomposable whenever
/// `d(v)` is.
#[test]
fn loop_differential_keeps_word_length() {
    let mut models: Vec<MinimalModel> = ["s2.model"].iter().map(|n| load(n)).collect();
    models.extend(random_models(11, 12, CAP, 250));
    for m in &models {
        let lp = loop_model(m).unwrap();
        let n = m.generators().len();
        for i in 0..n {
            let dv = m.differential().value(i);
            let dbar = lp.differential().value(n + i);
            if let Some(w) = dv.min_word_length() {
                assert!(w >= 2);
                assert!(dbar.min_word_length().is_none_or(|x| x >= 2));
            }
        }
    }
}

#[test]
fn random_models_are_reproducible() {
    assert_eq!(random_models(3, 5, CAP, 250), random_models(3, 5, CAP, 250));
}
