//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use definetti_core::rational::{q, Q};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Rational in `[0, hi/den]` with denominator `den`.
pub fn rand_q<R: Rng>(rng: &mut R, hi: i64, den: i64) -> Q {
    q(rng.gen_range(0..=hi), den)
}

/// Random point of the simplex with denominator `den`.
pub fn rand_simplex<R: Rng>(rng: &mut R, k: usize, den: i64) -> Vec<Q> {
    let mut cuts: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(0..=den)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out = Vec::with_capacity(k);
    for c in cuts.into_iter().chain(std::iter::once(den)) {
        out.push(q(c - prev, den));
        prev = c;
    }
    out
}

/// Gauss-Jordan elimination over the rationals; `None` when singular.
pub fn solve_square(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        let piv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &piv;
        }
        b[col] = &b[col] / &piv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some(b)
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Vertices of `{u ≥ 0 : ⟨g, u⟩ ≤ 1 for every generator g}`, by trying
/// every choice of `d` tight constraints.
pub fn dual_vertices(gens: &[Vec<Q>], d: usize) -> Vec<Vec<Q>> {
    let mut rows: Vec<(Vec<Q>, Q)> = gens.iter().map(|g| (g.clone(), Q::one())).collect();
    for j in 0..d {
        let mut e = vec![Q::zero(); d];
        e[j] = -Q::one();
        rows.push((e, Q::zero()));
    }
    let mut out: Vec<Vec<Q>> = Vec::new();
    for pick in (0..rows.len()).combinations(d) {
        let a = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let b = pick.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(u) = solve_square(a, b) {
            if rows.iter().all(|(r, c)| dot(r, &u) <= *c) && !out.contains(&u) {
                out.push(u);
            }
        }
    }
    out
}

/// `x` lies in the biorthogonal closure of `gens` iff it pairs to at most
/// one with every vertex of the dual polytope.
pub fn oracle_inside(vertices: &[Vec<Q>], x: &[Q]) -> bool {
    !x.iter().any(Signed::is_negative) && vertices.iter().all(|v| dot(v, x) <= Q::one())
}
