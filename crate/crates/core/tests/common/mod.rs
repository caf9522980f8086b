//! Test-only helpers: an independent cohomology oracle and a seeded random
//! minimal model generator.
//!
//! The oracle shares nothing with the library beyond the `Rational` type and
//! the generator values of the input model. It enumerates its own bases,
//! multiplies by sorting words of odd generators, applies derivations letter
//! by letter, builds the Borel differential from scratch and ranks matrices
//! with plain first-nonzero-pivot row reduction.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use loopinv::algebra::{apply_derivation, apply_map, Derivation, Generator, GradedAlgebra, Polynomial};
use loopinv::cohomology::{eigen_table, CochainComplex};
use loopinv::linalg::{kernel_basis, rat};
use loopinv::series::algebra_generating_function;
use loopinv::{parse_model, MinimalModel, QMatrix, Rational, Space};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Word = Vec<u32>;
pub type OPoly = BTreeMap<Word, Rational>;

fn add_into(p: &mut OPoly, m: Word, c: Rational) {
    let slot = p.entry(m.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        p.remove(&m);
    }
}

pub struct Oracle {
    pub degrees: Vec<u32>,
    /// Differential on generators.
    pub values: Vec<OPoly>,
}

impl Oracle {
    fn len(&self) -> usize {
        self.degrees.len()
    }

    fn odd(&self, i: usize) -> bool {
        self.degrees[i] % 2 == 1
    }

    /// All exponent vectors of total degree `n`, by direct recursion.
    pub fn basis(&self, n: u32) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = vec![0; self.len()];
        self.fill(0, n, &mut cur, &mut out);
        out
    }

    fn fill(&self, i: usize, left: u32, cur: &mut Word, out: &mut Vec<Word>) {
        if i == self.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = self.degrees[i];
        let max = if self.odd(i) { 1 } else { left / d };
        for e in 0..=max.min(left / d) {
            cur[i] = e;
            self.fill(i + 1, left - e * d, cur, out);
        }
        cur[i] = 0;
    }

    fn degree(&self, m: &Word) -> u32 {
        m.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    /// Product of two monomials: the odd letters of `a` followed by those of
    /// `b` are bubble-sorted, each swap contributing a sign.
    fn mul_mono(&self, a: &Word, b: &Word) -> Option<(Word, bool)> {
        let mut word = Vec::new();
        for m in [a, b] {
            for (i, &e) in m.iter().enumerate() {
                if self.odd(i) && e == 1 {
                    word.push(i);
                }
            }
        }
        let mut swaps = 0;
        for x in 0..word.len() {
            for y in 0..word.len() - 1 - x {
                if word[y] > word[y + 1] {
                    word.swap(y, y + 1);
                    swaps += 1;
                } else if word[y] == word[y + 1] {
                    return None;
                }
            }
        }
        if word.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let prod = a.iter().zip(b).map(|(x, y)| x + y).collect();
        Some((prod, swaps % 2 == 1))
    }

    pub fn mul(&self, p: &OPoly, q: &OPoly) -> OPoly {
        let mut out = OPoly::new();
        for (a, x) in p {
            for (b, y) in q {
                if let Some((m, neg)) = self.mul_mono(a, b) {
                    let c = x * y;
                    add_into(&mut out, m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    fn mono(m: Word) -> OPoly {
        let mut p = OPoly::new();
        p.insert(m, Rational::one());
        p
    }

    /// Applies the derivation with generator values `values` and degree of
    /// parity `odd_shift`, walking the monomial letter by letter.
    pub fn derive(&self, values: &[OPoly], odd_shift: bool, m: &Word) -> OPoly {
        let letters: Vec<usize> = m
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        let mut out = OPoly::new();
        for k in 0..letters.len() {
            let mut prefix = vec![0; self.len()];
            for &l in &letters[..k] {
                prefix[l] += 1;
            }
            let mut suffix = vec![0; self.len()];
            for &l in &letters[k + 1..] {
                suffix[l] += 1;
            }
            let neg = odd_shift && self.degree(&prefix) % 2 == 1;
            let term = self.mul(&self.mul(&Self::mono(prefix), &values[letters[k]]), &Self::mono(suffix));
            for (w, c) in term {
                add_into(&mut out, w, if neg { -c } else { c });
            }
        }
        out
    }

    fn differential_matrix(&self, n: u32, basis: &[Word], target: &[Word]) -> Vec<Vec<Rational>> {
        let index: HashMap<&Word, usize> = target.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows = vec![vec![Rational::zero(); basis.len()]; target.len()];
        for (j, m) in basis.iter().enumerate() {
            debug_assert_eq!(self.degree(m), n);
            for (w, c) in self.derive(&self.values, true, m) {
                rows[index[&w]][j] = c;
            }
        }
        rows
    }

    fn betti_on(&self, n: u32, keep: &dyn Fn(&Word) -> bool) -> usize {
        let b = |k: u32| -> Vec<Word> { self.basis(k).into_iter().filter(|w| keep(w)).collect() };
        let here = b(n);
        let out_rank = rank(self.differential_matrix(n, &here, &b(n + 1)));
        let in_rank = if n == 0 {
            0
        } else {
            rank(self.differential_matrix(n - 1, &b(n - 1), &here))
        };
        here.len() - out_rank - in_rank
    }

    pub fn betti(&self, n: u32) -> usize {
        self.betti_on(n, &|_| true)
    }

    /// Cohomology of the subcomplex of monomials on which `signs` multiplies
    /// to `+1` (`plus`) or `-1`. For a diagonal involution this is the
    /// eigenspace dimension.
    pub fn eigen(&self, n: u32, signs: &[bool], plus: bool) -> usize {
        let keep = |w: &Word| {
            let flips: u32 = w.iter().zip(signs).filter(|(_, &s)| s).map(|(e, _)| *e).sum();
            flips.is_multiple_of(2) == plus
        };
        self.betti_on(n, &keep)
    }
}

/// Rank by row reduction, taking the first nonzero entry as pivot.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] / &pivot;
            let (top, bottom) = rows.split_at_mut(i);
            for (x, y) in bottom[0][c..].iter_mut().zip(&top[r][c..]) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    r
}

fn to_opoly(p: &Polynomial, len: usize) -> OPoly {
    let mut out = OPoly::new();
    for (m, c) in p.terms() {
        let mut w = m.0.clone();
        w.resize(len, 0);
        add_into(&mut out, w, c.clone());
    }
    out
}

/// The base model `(ΛV, d)`.
pub fn base_oracle(m: &MinimalModel) -> Oracle {
    let degrees: Vec<u32> = m.generators().iter().map(|g| g.degree).collect();
    let values = m.differential().values().iter().map(|p| to_opoly(p, degrees.len())).collect();
    Oracle { degrees, values }
}

/// The Borel model `Λ(V, V̄, α)` built independently: generators are laid
/// out as `V`, then `V̄`, then `α`.
pub fn borel_oracle(m: &MinimalModel) -> (Oracle, Vec<bool>) {
    let n = m.generators().len();
    let len = 2 * n + 1;
    let mut degrees: Vec<u32> = m.generators().iter().map(|g| g.degree).collect();
    degrees.extend(m.generators().iter().map(|g| g.degree - 1));
    degrees.push(2);
    let alpha = 2 * n;
    let mut shell = Oracle {
        degrees,
        values: Vec::new(),
    };
    // s: v -> v̄, v̄ -> 0, α -> 0.
    let mut s_values = vec![OPoly::new(); len];
    for i in 0..n {
        let mut w = vec![0; len];
        w[n + i] = 1;
        s_values[i] = Oracle::mono(w);
    }
    let dv: Vec<OPoly> = m.differential().values().iter().map(|p| to_opoly(p, len)).collect();
    let mut values = vec![OPoly::new(); len];
    for i in 0..n {
        let mut alpha_vbar = vec![0; len];
        alpha_vbar[alpha] = 1;
        alpha_vbar[n + i] = 1;
        let mut v = dv[i].clone();
        add_into(&mut v, alpha_vbar, Rational::one());
        values[i] = v;
        let mut sdv = OPoly::new();
        for (w, c) in &dv[i] {
            for (x, y) in shell.derive(&s_values, true, w) {
                add_into(&mut sdv, x, -(c * y));
            }
        }
        values[n + i] = sdv;
    }
    shell.values = values;
    let mut signs = vec![false; len];
    for s in signs.iter_mut().skip(n) {
        *s = true;
    }
    (shell, signs)
}

/// Generators of the Borel model: `α` of degree 2, `V`, and `V̄` shifted down.
pub fn borel_generators(degrees: &[u32]) -> Vec<Generator> {
    let mut g = vec![Generator::new("alpha", 2)];
    g.extend(degrees.iter().enumerate().map(|(i, &d)| Generator::new(format!("v{i}"), d)));
    g.extend(degrees.iter().enumerate().map(|(i, &d)| Generator::new(format!("w{i}"), d - 1)));
    g
}

/// Largest Borel cochain dimension in degrees `0..=cap`.
pub fn borel_width(degrees: &[u32], cap: u32) -> i64 {
    let gf = algebra_generating_function(&borel_generators(degrees), cap as usize + 1);
    gf.coeffs().iter().copied().max().unwrap_or(0)
}

/// Random valid minimal models with 1 to 4 generators of degree 2 to 9.
/// Each `d(v)` is a combination with nonzero coefficients in `±1, ±2` of a
/// basis of the closed decomposables of the right degree in the earlier generators. Models whose
/// Borel cochains exceed `budget` in some degree up to `cap` are skipped.
/// Models with zero differential are thinned out.
pub fn random_models(seed: u64, count: usize, cap: u32, budget: i64) -> Vec<MinimalModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let k = rng.gen_range(1..=4);
        let mut degrees: Vec<u32> = (0..k).map(|_| rng.gen_range(2..=9)).collect();
        degrees.sort_unstable();
        if borel_width(&degrees, cap) > budget {
            continue;
        }
        let m = random_differential(&mut rng, &degrees);
        // Most degree patterns force d = 0; keep only a quarter of those.
        if m.differential().is_zero() && rng.gen_range(0..4) != 0 {
            continue;
        }
        out.push(m);
    }
    out
}

fn random_differential(rng: &mut ChaCha8Rng, degrees: &[u32]) -> MinimalModel {
    let gens: Vec<Generator> = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| Generator::new(format!("{}{i}", if d % 2 == 0 { "e" } else { "o" }), d))
        .collect();
    let full = GradedAlgebra::new(gens.clone()).unwrap();
    let mut values: Vec<Polynomial> = Vec::new();
    for (idx, &deg) in degrees.iter().enumerate() {
        let target = deg + 1;
        let value = if idx == 0 {
            full.zero()
        } else {
            let earlier = GradedAlgebra::new(gens[..idx].to_vec()).unwrap();
            let d = Derivation::new(&earlier, 1, values.iter().map(|v| restrict(v, idx)).collect()).unwrap();
            let sub = MinimalModel::new(earlier.clone(), d).unwrap();
            let dga = sub.base_dga();
            let complex = CochainComplex::new(&dga, target + 1);
            let basis: Vec<_> = complex.basis(target).to_vec();
            let decomposable: Vec<usize> = (0..basis.len()).filter(|&j| basis[j].word_length() >= 2).collect();
            let dm = complex.differential_matrix(target).unwrap();
            let restricted = QMatrix::from_columns(dm.rows(), &decomposable.iter().map(|&j| dm.column(j)).collect::<Vec<_>>()).unwrap();
            let kernel = kernel_basis(&restricted);
            let mut p = Polynomial::zero(idx);
            for v in &kernel {
                let c = Rational::from_integer([-2i64, -1, 1, 2][rng.gen_range(0..4)].into());
                for (pos, &j) in decomposable.iter().enumerate() {
                    if !v[pos].is_zero() {
                        p.add_term(basis[j].clone(), &c * &v[pos]);
                    }
                }
            }
            p.reindex(&(0..idx).collect::<Vec<_>>(), degrees.len())
        };
        values.push(value);
    }
    let d = Derivation::new(&full, 1, values).unwrap();
    let m = MinimalModel::new(full, d).unwrap();
    // Exercise the text round trip on every generated model.
    let reparsed = parse_model(&m.to_text()).unwrap();
    assert_eq!(reparsed, m, "text round trip of\n{}", m.to_text());
    m
}

fn restrict(p: &Polynomial, len: usize) -> Polynomial {
    let mut out = Polynomial::zero(len);
    for (m, c) in p.terms() {
        out.add_term(loopinv::Monomial(m.0[..len].to_vec()), c.clone());
    }
    out
}

pub fn model_file(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("models").join(name)
}

pub fn load(name: &str) -> MinimalModel {
    parse_model(&std::fs::read_to_string(model_file(name)).unwrap()).unwrap()
}

/// Every check of the model-level suite, exhaustively on cochains through
/// `cap` rather than only on generators.
pub fn check_model(m: &MinimalModel, cap: u32) {
    let borel = m.dga(Space::Borel, cap).unwrap();
    let (a, d, t) = (borel.algebra(), borel.differential(), borel.involution().unwrap());
    let complex = CochainComplex::new(&borel, cap);
    let gf = algebra_generating_function(a.generators(), cap as usize + 1);
    let (oracle, signs) = borel_oracle(m);
    let table = eigen_table(&borel, cap).unwrap();
    for n in 0..=cap {
        assert_eq!(complex.dim(n) as i64, gf.coeffs()[n as usize], "monomial count at {n}");
        assert_eq!(complex.dim(n), oracle.basis(n).len(), "oracle basis at {n}");
        for mono in complex.basis(n) {
            let x = Polynomial::term(mono.clone(), rat(1));
            let dx = apply_derivation(a, d, &x);
            assert!(apply_derivation(a, d, &dx).is_zero(), "D^2 on {}", a.format(&x));
            assert_eq!(apply_map(a, t, &apply_map(a, t, &x)), x);
            assert_eq!(apply_map(a, t, &dx), apply_derivation(a, d, &apply_map(a, t, &x)));
        }
    }
    for s in &table.slices {
        let (plus, minus) = (s.inv_plus.unwrap(), s.inv_minus.unwrap());
        assert_eq!(plus + minus, s.betti);
        assert_eq!(s.betti, oracle.betti(s.degree), "oracle betti at {}", s.degree);
        assert_eq!(plus, oracle.eigen(s.degree, &signs, true), "oracle Inv+ at {}", s.degree);
        assert_eq!(minus, oracle.eigen(s.degree, &signs, false), "oracle Inv- at {}", s.degree);
    }
    let base = eigen_table(&m.base_dga(), cap).unwrap();
    let base_oracle = base_oracle(m);
    for s in &base.slices {
        assert_eq!(s.betti, base_oracle.betti(s.degree));
    }
}
