//! Mixing measures versus total elements of `!X`.
//!
//! [`iota`] sends an atomic mixing measure to its mixture of promotions,
//! [`check_total`] tests the recurrence `u_μ = Σ_x u_{μ+[x]}` with `u_[] = 1`,
//! and [`recover_measure`] inverts `iota` on a rational grid of the simplex
//! by minimising the largest moment residual.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chains::{self, Cone, ConeKind};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multiset::{binomial, Alphabet, Multiset, MultisetBasis};
use crate::optim::{self, LpStatus, Mode};
use crate::pcoh;
pub use crate::pcoh::BangElement;
use crate::rational::{self, Q};
use crate::report::CheckReport;
use crate::stoch::{Atom, AtomicMeasure, ProbVector};

pub const DEFAULT_TOTALITY_TOL: f64 = 1e-9;
pub const DEFAULT_RECOVERY_TOL: f64 = 1e-6;

pub const ANCHOR_IOTA: &str = "iota-commutes-with-the-two-chains";
pub const ANCHOR_TOTALITY: &str = "total-elements-satisfy-the-recurrence";

/// The alphabet a mixing measure lives on: its own, else `{t,f}` for two
/// points and `a, b, …` otherwise.
pub fn mixing_alphabet(mixing: &AtomicMeasure) -> Alphabet {
    mixing.alphabet.clone().unwrap_or_else(|| match mixing.dimension() {
        2 => Alphabet::bool(),
        k => Alphabet::letters(k),
    })
}

/// `ι(mixing)` at depth `depth`: `u_μ = Σ_j w_j Π_a r_j(a)^{μ(a)}`.
pub fn iota(mixing: &AtomicMeasure, depth: usize) -> Result<BangElement> {
    mixing.validate()?;
    let alphabet = mixing_alphabet(mixing);
    if alphabet.is_empty() {
        return Err(Error::Alphabet("mixing measure without atoms or alphabet".into()));
    }
    BangElement::from_fn(alphabet, depth, |mu| mixing.moment(mu))
}

/// Outcome of [`check_total`]. Defects are exact.
#[derive(Clone, Debug, PartialEq)]
pub enum Totality {
    Total {
        /// Largest defect seen (zero for exactly total input).
        defect: Q,
    },
    NonTotal {
        /// Worst multiset; `[]` also stands for the normalisation `u_[] = 1`.
        witness: Multiset,
        lhs: Q,
        rhs: Q,
        defect: Q,
    },
}

impl Totality {
    pub fn is_total(&self) -> bool {
        matches!(self, Totality::Total { .. })
    }

    pub fn defect(&self) -> &Q {
        match self {
            Totality::Total { defect } | Totality::NonTotal { defect, .. } => defect,
        }
    }
}

/// Checks `u_[] = 1` and `u_μ = Σ_x u_{μ+[x]}` for `|μ| < depth`; the worst
/// violation is reported, earliest in canonical order on ties.
pub fn check_total(b: &BangElement, tol: f64) -> Totality {
    let k = b.alphabet().len();
    let empty = Multiset::empty(k);
    let norm = (empty.clone(), b.get(&empty), Q::one());
    let candidates: Vec<&Multiset> = b.basis().items().iter().filter(|mu| (mu.size() as usize) < b.depth()).collect();
    let rows: Vec<(Multiset, Q, Q)> = candidates
        .par_iter()
        .map(|mu| {
            let rhs: Q = (0..k).map(|a| b.get(&mu.with(a))).sum();
            ((*mu).clone(), b.get(mu), rhs)
        })
        .collect();
    let mut worst: Option<(Multiset, Q, Q, Q)> = None;
    for (mu, lhs, rhs) in std::iter::once(norm).chain(rows) {
        let defect = (&lhs - &rhs).abs();
        if worst.as_ref().map_or(true, |w| defect > w.3) {
            worst = Some((mu, lhs, rhs, defect));
        }
    }
    let (witness, lhs, rhs, defect) = worst.expect("normalisation is always checked");
    if rational::to_f64(&defect) <= tol {
        Totality::Total { defect }
    } else {
        Totality::NonTotal { witness, lhs, rhs, defect }
    }
}

fn require_total(b: &BangElement, tol: f64) -> Result<()> {
    match check_total(b, tol) {
        Totality::Total { .. } => Ok(()),
        Totality::NonTotal { witness, defect, .. } => {
            Err(Error::NotTotal { witness: witness.counts().to_vec(), defect: rational::to_f64(&defect) })
        }
    }
}

/// Cone on the De Finetti chain of `X^PCoh`: leg `n` keeps the coefficients
/// on multisets of size exactly `n`.
pub fn extract_definetti_cone(b: &BangElement) -> Result<Cone> {
    require_total(b, DEFAULT_TOTALITY_TOL)?;
    let k = b.alphabet().len();
    let legs = (0..=b.depth())
        .map(|n| Matrix::row_vector(MultisetBasis::exact(k, n).items().iter().map(|mu| b.get(mu)).collect()))
        .collect();
    Ok(Cone { kind: ConeKind::DrawDelete, apex: 1, param: 1, legs })
}

/// Moments `m_a = u([t^a])` of a Bool element, `a = 0..=N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentTable {
    #[serde(with = "rational::serde_q_vec")]
    values: Vec<Q>,
}

impl MomentTable {
    pub fn new(values: Vec<Q>) -> Result<Self> {
        match values.first() {
            Some(m0) if m0.is_one() => Ok(MomentTable { values }),
            _ => Err(Error::NotADistribution("moment table must start with m_0 = 1".into())),
        }
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn depth(&self) -> usize {
        self.values.len() - 1
    }

    /// `c_{a,b} = Σ_i (−1)^i C(b,i) m_{a+i}`, the coefficient at `[t^a f^b]`.
    pub fn coefficient(&self, a: usize, b: usize) -> Q {
        (0..=b)
            .map(|i| {
                let c = Q::from_integer(binomial(b as u64, i as u64).into()) * &self.values[a + i];
                if i.is_odd() {
                    -c
                } else {
                    c
                }
            })
            .sum()
    }
}

fn require_bool(b: &BangElement) -> Result<()> {
    if b.alphabet().len() != 2 {
        return Err(Error::Alphabet(format!("moment tables need two symbols, got {}", b.alphabet().len())));
    }
    Ok(())
}

pub fn bool_moment_table(b: &BangElement) -> Result<MomentTable> {
    require_bool(b)?;
    require_total(b, DEFAULT_TOTALITY_TOL)?;
    MomentTable::new((0..=b.depth()).map(|a| b.get(&Multiset::new(vec![a as u32, 0]))).collect())
}

/// Rebuilds the Bool element from its moments; rejects the first negative
/// coefficient in canonical order.
pub fn table_to_bang(m: &MomentTable) -> Result<BangElement> {
    let depth = m.depth();
    let basis = MultisetBasis::bounded(2, depth);
    let mut coeffs = Vec::with_capacity(basis.len());
    for mu in basis.items() {
        let (a, b) = (mu.count(0) as usize, mu.count(1) as usize);
        let c = m.coefficient(a, b);
        if c.is_negative() {
            return Err(Error::NotCompletelyMonotone { a, b, value: rational::format(&c) });
        }
        coeffs.push(c);
    }
    BangElement::new(Alphabet::bool(), depth, coeffs)
}

/// Result of [`recover_measure`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Recovery {
    #[serde(flatten)]
    pub measure: AtomicMeasure,
    /// Largest `|ι(measure)_μ − b_μ|`, recomputed exactly after pruning.
    pub residual: f64,
    pub grid_resolution: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl Recovery {
    pub fn within(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}

/// Points of `Δ(X)` with coordinates in `(1/grid)ℕ`.
pub fn simplex_grid(k: usize, grid: usize) -> Vec<Vec<Q>> {
    MultisetBasis::exact(k, grid)
        .items()
        .iter()
        .map(|p| p.counts().iter().map(|&c| rational::q(c as i64, grid as i64)).collect())
        .collect()
}

/// Rounds float weights to twelve decimals, folding the rounding error into
/// the heaviest atom so the total stays exactly one.
fn rationalise(weights: &[f64]) -> Vec<Q> {
    let scale = 1_000_000_000_000_i64;
    let mut out: Vec<Q> = weights.iter().map(|w| rational::q((w * scale as f64).round() as i64, scale)).collect();
    if let Some(heavy) = (0..out.len()).max_by(|&i, &j| out[i].cmp(&out[j]).then(j.cmp(&i))) {
        let rest: Q = out.iter().enumerate().filter(|(i, _)| *i != heavy).map(|(_, w)| w).sum();
        out[heavy] = Q::one() - rest;
    }
    out
}

/// Finds grid weights `w ≥ 0`, `Σ w = 1`, minimising `max_μ |Σ_j w_j r_j^μ − b_μ|`
/// over `|μ| ≤ depth`. Weights below `tol` are pruned and the rest
/// renormalised; a residual above `tol` comes back with a diagnostic.
pub fn recover_measure(b: &BangElement, grid: usize, tol: f64, mode: Mode) -> Result<Recovery> {
    if grid < 2 {
        return Err(Error::Dimension(format!("grid resolution {grid} < 2")));
    }
    require_total(b, DEFAULT_TOTALITY_TOL.max(tol))?;
    let k = b.alphabet().len();
    let points = simplex_grid(k, grid);
    let design: Vec<Vec<Q>> = b.basis().items().iter().map(|mu| points.iter().map(|r| pcoh::power(r, mu)).collect()).collect();
    let weights: Vec<Q> = match mode {
        Mode::Exact => {
            let sol = optim::feasibility_minmax::<Q>(&design, b.coeffs())?;
            expect_optimal(sol.status)?;
            sol.primal[..points.len()].to_vec()
        }
        Mode::Float => {
            let sol = optim::feasibility_minmax::<f64>(&design, b.coeffs())?;
            expect_optimal(sol.status)?;
            let kept: Vec<f64> = sol.primal[..points.len()].iter().map(|&w| if w < tol { 0.0 } else { w }).collect();
            let total: f64 = kept.iter().sum();
            rationalise(&kept.iter().map(|w| w / total).collect::<Vec<_>>())
        }
    };
    let tol_q = rational::from_f64(tol)?;
    let mut atoms: Vec<Atom> = points
        .into_iter()
        .zip(weights)
        .filter(|(_, w)| w.is_positive() && (mode == Mode::Float || *w >= tol_q))
        .map(|(p, w)| Ok(Atom { point: ProbVector::proper(p)?, weight: w }))
        .collect::<Result<_>>()?;
    let total: Q = atoms.iter().map(|a| &a.weight).sum();
    if !total.is_one() {
        for a in &mut atoms {
            a.weight = &a.weight / &total;
        }
    }
    let measure = AtomicMeasure { alphabet: Some(b.alphabet().clone()), atoms };
    let residual = b
        .basis()
        .items()
        .iter()
        .zip(b.coeffs())
        .map(|(mu, c)| (measure.moment(mu) - c).abs())
        .max()
        .unwrap_or_else(Q::zero);
    let residual = rational::to_f64(&residual);
    let diagnostic = (residual > tol).then(|| {
        format!("best residual {residual:e} exceeds tolerance {tol:e} at grid {grid}; increase resolution")
    });
    Ok(Recovery { measure, residual, grid_resolution: grid, diagnostic })
}

fn expect_optimal(status: LpStatus) -> Result<()> {
    match status {
        LpStatus::Optimal => Ok(()),
        other => Err(Error::Dimension(format!("recovery LP ended {other:?}"))),
    }
}

/// Checks `ρ_{∞,n}(ι(mixing)) = leg_n · M_n⟨id, w⟩` for `n ≤ depth`, where
/// `leg_n` is the De Finetti leg of the mixing in δ-coordinates.
pub fn verify_iota_cone(mixing: &AtomicMeasure, depth: usize) -> Result<Vec<CheckReport>> {
    let b = iota(mixing, depth)?;
    let alphabet = b.alphabet().clone();
    let k = alphabet.len();
    (0..=depth)
        .into_par_iter()
        .map(|n| {
            let lhs = Matrix::row_vector(pcoh::rho_inf_n(&b, n)?.coeffs().to_vec());
            let urn = Matrix::row_vector(mixing.urn_law(n)?);
            let inverse = Matrix::diagonal(
                MultisetBasis::exact(k, n)
                    .items()
                    .iter()
                    .map(|mu| Q::new(1.into(), crate::multiset::multinomial(mu).into()))
                    .collect(),
            );
            let rhs = urn.then(&inverse)?.then(pcoh::mn_alpha(&alphabet, n).matrix())?;
            Ok(CheckReport::exact("iota square", ANCHOR_IOTA, Some(n), lhs.max_abs_diff(&rhs)?))
        })
        .collect()
}

/// Totality as a report line.
pub fn totality_report(b: &BangElement, tol: f64) -> CheckReport {
    let t = check_total(b, tol);
    let mut r = CheckReport::within("totality recurrence", ANCHOR_TOTALITY, None, rational::to_f64(t.defect()), tol);
    if let Totality::NonTotal { witness, .. } = &t {
        r = r.with_witness(b.alphabet().show(witness));
    }
    r
}

/// The cone of [`extract_definetti_cone`] meets the draw-and-delete maps of
/// the De Finetti chain with deviation zero.
pub fn definetti_cone_deviation(b: &BangElement) -> Result<Q> {
    let cone = extract_definetti_cone(b)?;
    let chain = chains::build_dd_chain(&chains::CopointedObject::pcoh_definetti(b.alphabet()), b.depth())?;
    Ok(chain.cone_deviation(&cone)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn mix(pairs: &[(&[Q], Q)]) -> AtomicMeasure {
        AtomicMeasure::from_pairs(pairs.iter().map(|(p, w)| (p.to_vec(), w.clone())).collect()).unwrap()
    }

    #[test]
    fn iota_of_dirac_is_promotion() {
        let r = [q(1, 3), q(2, 3)];
        let b = iota(&mix(&[(&r, qi(1))]), 4).unwrap();
        let x = pcoh::PcsVector::new(r.to_vec()).unwrap();
        assert_eq!(b, pcoh::promotion(&Alphabet::bool(), &x, 4).unwrap());
    }

    #[test]
    fn iota_of_vertex_mixture() {
        let b = iota(&mix(&[(&[qi(1), qi(0)], q(1, 2)), (&[qi(0), qi(1)], q(1, 2))]), 2).unwrap();
        let expect = [
            (vec![0, 0], q(1, 1)),
            (vec![1, 0], q(1, 2)),
            (vec![0, 1], q(1, 2)),
            (vec![2, 0], q(1, 2)),
            (vec![1, 1], qi(0)),
            (vec![0, 2], q(1, 2)),
        ];
        for (c, v) in expect {
            assert_eq!(b.get(&Multiset::new(c)), v);
        }
    }

    #[test]
    fn zero_measure() {
        let m = AtomicMeasure { alphabet: Some(Alphabet::bool()), atoms: vec![] };
        let b = iota(&m, 2).unwrap();
        assert!(b.coeffs().iter().all(Zero::is_zero));
        assert!(!check_total(&b, 1e-9).is_total());
    }

    #[test]
    fn probability_mixings_are_total() {
        let m = mix(&[(&[q(1, 5), q(4, 5)], q(1, 3)), (&[q(3, 4), q(1, 4)], q(2, 3))]);
        assert_eq!(check_total(&iota(&m, 5).unwrap(), 0.0), Totality::Total { defect: qi(0) });
    }

    #[test]
    fn subdistribution_promotion_is_not_total() {
        let x = pcoh::PcsVector::new(vec![q(2, 5), q(2, 5)]).unwrap();
        let b = pcoh::promotion(&Alphabet::bool(), &x, 3).unwrap();
        match check_total(&b, 1e-9) {
            Totality::NonTotal { witness, lhs, rhs, defect } => {
                assert_eq!(witness, Multiset::empty(2));
                assert_eq!((lhs, rhs, defect), (qi(1), q(4, 5), q(1, 5)));
            }
            t => panic!("{t:?}"),
        }
    }

    #[test]
    fn damped_element_defect() {
        let u = iota(&mix(&[(&[q(1, 2), q(1, 2)], qi(1))]), 3).unwrap();
        let p = q(1, 2);
        let damped = BangElement::from_fn(Alphabet::bool(), 3, |mu| {
            num_traits::pow(p.clone(), mu.size() as usize) * u.get(mu)
        })
        .unwrap();
        match check_total(&damped, 1e-9) {
            Totality::NonTotal { witness, defect, .. } => {
                assert_eq!(witness, Multiset::empty(2));
                assert_eq!(defect, (qi(1) - &p) * damped.get(&witness));
            }
            t => panic!("{t:?}"),
        }
        assert!(extract_definetti_cone(&damped).is_err());
    }

    #[test]
    fn definetti_cone_legs() {
        let r = [q(1, 4), q(3, 4)];
        let b = iota(&mix(&[(&r, qi(1))]), 3).unwrap();
        let cone = extract_definetti_cone(&b).unwrap();
        assert_eq!(cone.legs[2].entries(), &[q(1, 16), q(3, 16), q(9, 16)]);
        assert_eq!(definetti_cone_deviation(&b).unwrap(), qi(0));
    }

    #[test]
    fn moment_tables() {
        let b = iota(&mix(&[(&[q(1, 2), q(1, 2)], qi(1))]), 4).unwrap();
        let m = bool_moment_table(&b).unwrap();
        assert_eq!(m.values(), &[qi(1), q(1, 2), q(1, 4), q(1, 8), q(1, 16)]);
        assert_eq!(m.coefficient(1, 1), q(1, 4));
        assert_eq!(table_to_bang(&m).unwrap(), b);

        let dirac = MomentTable::new(vec![qi(1); 4]).unwrap();
        let t = table_to_bang(&dirac).unwrap();
        for (mu, c) in t.basis().items().iter().zip(t.coeffs()) {
            assert_eq!(c.is_zero(), mu.count(1) > 0);
        }

        let bad = MomentTable::new(vec![qi(1), q(1, 2), q(1, 2), q(3, 5)]).unwrap();
        assert_eq!(bad.coefficient(1, 1), qi(0));
        assert_eq!(bad.coefficient(0, 2), q(1, 2));
        assert_eq!(
            table_to_bang(&bad),
            Err(Error::NotCompletelyMonotone { a: 2, b: 1, value: "-1/10".into() })
        );
    }

    #[test]
    fn recovery_of_vertex_atoms_is_exact() {
        let m = mix(&[(&[qi(1), qi(0)], q(1, 3)), (&[qi(0), qi(1)], q(2, 3))]);
        let b = iota(&m, 4).unwrap();
        let rec = recover_measure(&b, 4, 1e-6, Mode::Exact).unwrap();
        assert_eq!(rec.residual, 0.0);
        assert_eq!(iota(&rec.measure, 4).unwrap(), b);
    }

    #[test]
    fn recovery_in_float_mode() {
        let m = mix(&[(&[q(1, 2), q(1, 2)], qi(1))]);
        let b = iota(&m, 6).unwrap();
        let rec = recover_measure(&b, 16, 1e-6, Mode::Float).unwrap();
        assert!(rec.residual <= 1e-6, "{}", rec.residual);
        assert!(rec.diagnostic.is_none());
    }

    #[test]
    fn coarse_grid_asks_for_more_resolution() {
        let m = mix(&[(&[q(1, 3), q(2, 3)], qi(1))]);
        let rec = recover_measure(&iota(&m, 4).unwrap(), 2, 1e-9, Mode::Exact).unwrap();
        assert!(rec.residual > 1e-9);
        assert!(rec.diagnostic.unwrap().contains("increase resolution"));
    }

    #[test]
    fn recovery_rejects_non_total() {
        let x = pcoh::PcsVector::new(vec![q(2, 5), q(2, 5)]).unwrap();
        let b = pcoh::promotion(&Alphabet::bool(), &x, 3).unwrap();
        assert!(matches!(recover_measure(&b, 8, 1e-6, Mode::Exact), Err(Error::NotTotal { .. })));
    }

    #[test]
    fn iota_square() {
        let m = mix(&[(&[q(1, 3), q(2, 3)], q(1, 4)), (&[q(5, 7), q(2, 7)], q(3, 4))]);
        assert!(verify_iota_cone(&m, 4).unwrap().iter().all(|r| r.passed));
        let v = mix(&[(&[qi(0), qi(1)], qi(1))]);
        assert!(verify_iota_cone(&v, 3).unwrap().iter().all(|r| r.passed));
    }
}
