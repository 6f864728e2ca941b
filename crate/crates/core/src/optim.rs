//! Small dense linear programming.
//!
//! A two-phase tableau simplex with Bland's rule, generic over the scalar:
//! [`Q`] gives exact answers, `f64` a fast approximate one. Every optimal
//! solve returns a dual certificate and the measured duality gap.

use std::fmt::Debug;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{self, Q};

pub const MAX_VARIABLES: usize = 5_000;
pub const MAX_CONSTRAINTS: usize = 2_000;
/// Pivot budget per tableau row and column; reached only when float
/// round-off defeats the anticycling rule.
const MAX_PIVOTS_PER_DIM: usize = 200;

/// Arithmetic mode for a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// Field operations the tableau needs, plus a zero test that is exact for
/// rationals and thresholded for floats.
pub trait LpScalar: Clone + Debug + PartialOrd + Send + Sync {
    fn lp_zero() -> Self;
    fn lp_one() -> Self;
    fn from_q(x: &Q) -> Self;
    fn to_f64(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Strictly positive beyond the mode tolerance.
    fn is_pos(&self) -> bool;
    /// Strictly negative beyond the mode tolerance.
    fn is_neg(&self) -> bool;
    fn is_zero_tol(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
    /// Exact arithmetic: no tolerances anywhere.
    const EXACT: bool;
    /// Snaps round-off in a right-hand side back to zero.
    fn settle(&mut self) {}
    fn magnitude(&self) -> Self {
        if self.is_neg() || *self < Self::lp_zero() {
            self.neg()
        } else {
            self.clone()
        }
    }
}

impl LpScalar for Q {
    const EXACT: bool = true;

    fn lp_zero() -> Self {
        num_traits::Zero::zero()
    }
    fn lp_one() -> Self {
        num_traits::One::one()
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn to_f64(&self) -> f64 {
        rational::to_f64(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Pivoting tolerance for the float tableau.
const FLOAT_EPS: f64 = 1e-11;
/// Float pivots must be at least this fraction of the column's largest entry.
const FLOAT_PIVOT_REL: f64 = 1e-7;
/// Primal feasibility slack of the float ratio test.
const HARRIS_DELTA: f64 = 1e-9;
/// Degenerate float pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;

impl LpScalar for f64 {
    const EXACT: bool = false;

    fn lp_zero() -> Self {
        0.0
    }
    fn lp_one() -> Self {
        1.0
    }
    fn from_q(x: &Q) -> Self {
        rational::to_f64(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_EPS
    }
    fn settle(&mut self) {
        if self.abs() < FLOAT_EPS || (*self < 0.0 && *self > -HARRIS_DELTA) {
            *self = 0.0;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// maximize `objective · x` subject to `rows[i] · x (sense_i) rhs[i]`, `x ≥ 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<Q>,
    pub rows: Vec<Vec<Q>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<Q>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Q>) -> Self {
        LinearProgram { objective, ..Default::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, row: Vec<Q>, sense: Sense, rhs: Q) -> &mut Self {
        self.rows.push(row);
        self.senses.push(sense);
        self.rhs.push(rhs);
        self
    }

    pub fn le(&mut self, row: Vec<Q>, rhs: Q) -> &mut Self {
        self.constrain(row, Sense::Le, rhs)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if n > MAX_VARIABLES {
            return Err(Error::LpTooLarge(format!("{n} variables > {MAX_VARIABLES}")));
        }
        if self.rows.len() > MAX_CONSTRAINTS {
            return Err(Error::LpTooLarge(format!(
                "{} constraints > {MAX_CONSTRAINTS}",
                self.rows.len()
            )));
        }
        if self.senses.len() != self.rows.len() || self.rhs.len() != self.rows.len() {
            return Err(Error::Dimension("constraint rows, senses and bounds differ in length".into()));
        }
        if let Some((i, r)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Dimension(format!("row {i} has {} coefficients, expected {n}", r.len())));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    pub value: S,
    pub primal: Vec<S>,
    /// One multiplier per constraint: ≥ 0 on `Le` rows, ≤ 0 on `Ge` rows.
    pub dual: Vec<S>,
    /// `|rhs · dual − value|`, evaluated in the solve's own arithmetic.
    pub duality_gap: S,
    /// Largest violation of `Aᵀ·dual ≥ objective` or of the dual sign rules.
    pub dual_infeasibility: S,
    /// Largest violation of a primal constraint.
    pub primal_infeasibility: S,
    pub pivots: usize,
}

impl<S: LpScalar> LpSolution<S> {
    fn without_certificate(status: LpStatus, n: usize, m: usize, pivots: usize) -> Self {
        LpSolution {
            status,
            value: S::lp_zero(),
            primal: vec![S::lp_zero(); n],
            dual: vec![S::lp_zero(); m],
            duality_gap: S::lp_zero(),
            dual_infeasibility: S::lp_zero(),
            primal_infeasibility: S::lp_zero(),
            pivots,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    /// Dumps every tableau to stderr.
    pub trace: bool,
}

struct Tableau<S> {
    /// `m` rows of `ncols + 1` entries, right-hand side last.
    t: Vec<Vec<S>>,
    /// Objective row in the same layout: reduced costs `c_B·T_j − c_j`.
    obj: Vec<S>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
    trace: bool,
}

impl<S: LpScalar> Tableau<S> {
    fn rhs(&self, i: usize) -> &S {
        &self.t[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for x in self.t[r].iter_mut() {
            *x = x.div(&p);
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero_tol() && f.to_f64() == 0.0 {
                continue;
            }
            for (x, pr) in row.iter_mut().zip(&prow) {
                *x = x.sub(&f.mul(pr));
            }
            row[c] = S::lp_zero();
        }
        let f = self.obj[c].clone();
        for (x, pr) in self.obj.iter_mut().zip(&prow) {
            *x = x.sub(&f.mul(pr));
        }
        self.obj[c] = S::lp_zero();
        let last = self.ncols;
        for row in self.t.iter_mut() {
            row[last].settle();
        }
        self.basis[r] = c;
        self.pivots += 1;
        if self.trace {
            self.dump();
        }
    }

    fn set_objective(&mut self, costs: &[S]) {
        let mut obj: Vec<S> = costs.iter().map(|c| c.neg()).collect();
        obj.push(S::lp_zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            for (o, x) in obj.iter_mut().zip(&self.t[i]) {
                *o = o.add(&cb.mul(x));
            }
        }
        self.obj = obj;
    }

    /// Pivots to optimality. Returns `Ok(false)` when unbounded.
    ///
    /// Exact tableaus use Bland's rule throughout. Float tableaus price by
    /// the most negative reduced cost with a two-pass (Harris) ratio test,
    /// and switch to Bland's rule for good after a long run of degenerate pivots.
    fn optimize(&mut self, allowed: &dyn Fn(usize) -> bool) -> Result<bool> {
        let cap = MAX_PIVOTS_PER_DIM * (self.t.len() + self.ncols);
        let mut degenerate_run = 0;
        let mut bland = S::EXACT;
        loop {
            if self.pivots > cap {
                return Err(Error::LpStalled(self.pivots));
            }
            // once degeneracy has stalled progress, stay on Bland's rule
            bland |= degenerate_run > DEGENERATE_RUN;
            let entering = if bland {
                (0..self.ncols).find(|&j| allowed(j) && self.obj[j].is_neg())
            } else {
                (0..self.ncols)
                    .filter(|&j| allowed(j) && self.obj[j].is_neg())
                    .min_by(|&a, &b| self.obj[a].partial_cmp(&self.obj[b]).expect("finite").then(a.cmp(&b)))
            };
            let Some(c) = entering else { return Ok(true) };
            let leaving = if bland { self.leaving_bland(c) } else { self.leaving_harris(c) };
            let Some(r) = leaving else { return Ok(false) };
            if self.rhs(r).is_zero_tol() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, c);
        }
    }

    /// Minimum ratio, ties to the smallest basic index.
    fn leaving_bland(&self, c: usize) -> Option<usize> {
        let floor = if S::EXACT {
            0.0
        } else {
            FLOAT_PIVOT_REL * self.t.iter().map(|row| row[c].to_f64()).fold(0.0, f64::max)
        };
        let mut best: Option<(usize, S)> = None;
        for i in 0..self.t.len() {
            let a = &self.t[i][c];
            if !a.is_pos() || a.to_f64() < floor {
                continue;
            }
            let ratio = self.rhs(i).div(a);
            let better = match &best {
                None => true,
                Some((bi, br)) => {
                    let d = ratio.sub(br);
                    d.is_neg() || (d.is_zero_tol() && self.basis[i] < self.basis[*bi])
                }
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Largest pivot among the rows whose ratio is within the feasibility
    /// tolerance of the minimum.
    fn leaving_harris(&self, c: usize) -> Option<usize> {
        let column_max = self.t.iter().map(|row| row[c].to_f64()).fold(0.0, f64::max);
        let usable = |i: usize| {
            let a = self.t[i][c].to_f64();
            (a > FLOAT_EPS && a >= FLOAT_PIVOT_REL * column_max).then_some(a)
        };
        let theta = (0..self.t.len())
            .filter_map(|i| usable(i).map(|a| (self.rhs(i).to_f64().max(0.0) + HARRIS_DELTA) / a))
            .fold(f64::INFINITY, f64::min);
        if theta.is_infinite() {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.t.len() {
            let Some(a) = usable(i) else { continue };
            if self.rhs(i).to_f64().max(0.0) / a > theta {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, ba)) => a > ba || (a == ba && self.basis[i] < self.basis[bi]),
            };
            if better {
                best = Some((i, a));
            }
        }
        best.map(|(i, _)| i)
    }

    fn dump(&self) {
        eprintln!("tableau after {} pivots, basis {:?}", self.pivots, self.basis);
        for row in &self.t {
            eprintln!("  {:?}", row.iter().map(LpScalar::to_f64).collect::<Vec<_>>());
        }
        eprintln!("  obj {:?}", self.obj.iter().map(LpScalar::to_f64).collect::<Vec<_>>());
    }
}

pub fn solve<S: LpScalar>(lp: &LinearProgram) -> Result<LpSolution<S>> {
    solve_with(lp, SolveOptions::default())
}

pub fn solve_with<S: LpScalar>(lp: &LinearProgram, opts: SolveOptions) -> Result<LpSolution<S>> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.rows.len();

    // Normalise to nonnegative right-hand sides.
    let mut flip = vec![false; m];
    let mut senses = lp.senses.clone();
    for i in 0..m {
        if lp.rhs[i].is_negative() {
            flip[i] = true;
            senses[i] = match senses[i] {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }
    let n_slack = senses.iter().filter(|s| **s != Sense::Eq).count();
    let n_art = senses.iter().filter(|s| **s != Sense::Le).count();
    let ncols = n + n_slack + n_art;
    let art_start = n + n_slack;

    let mut t = vec![vec![S::lp_zero(); ncols + 1]; m];
    let mut basis = vec![0; m];
    // Column holding `e_i` in the initial tableau, for dual recovery.
    let mut unit_col = vec![0; m];
    let (mut si, mut ai) = (n, art_start);
    for i in 0..m {
        let sign = if flip[i] { -rational::one() } else { rational::one() };
        for j in 0..n {
            t[i][j] = S::from_q(&(&lp.rows[i][j] * &sign));
        }
        t[i][ncols] = S::from_q(&(&lp.rhs[i] * &sign));
        match senses[i] {
            Sense::Le => {
                t[i][si] = S::lp_one();
                basis[i] = si;
                unit_col[i] = si;
                si += 1;
            }
            Sense::Ge => {
                t[i][si] = S::lp_one().neg();
                si += 1;
                t[i][ai] = S::lp_one();
                basis[i] = ai;
                unit_col[i] = ai;
                ai += 1;
            }
            Sense::Eq => {
                t[i][ai] = S::lp_one();
                basis[i] = ai;
                unit_col[i] = ai;
                ai += 1;
            }
        }
    }

    let mut tab = Tableau { t, obj: Vec::new(), basis, ncols, pivots: 0, trace: opts.trace };

    if n_art > 0 {
        let mut phase1 = vec![S::lp_zero(); ncols];
        for c in phase1.iter_mut().skip(art_start) {
            *c = S::lp_one().neg();
        }
        tab.set_objective(&phase1);
        tab.optimize(&|_| true)?;
        let infeasibility = tab.obj[ncols].clone();
        if infeasibility.is_neg() {
            return Ok(LpSolution::without_certificate(LpStatus::Infeasible, n, m, tab.pivots));
        }
        // Drive zero-valued artificials out of the basis where possible.
        for r in 0..m {
            if tab.basis[r] < art_start {
                continue;
            }
            if let Some(c) = (0..art_start).find(|&j| !tab.t[r][j].is_zero_tol()) {
                tab.pivot(r, c);
            }
        }
    }

    let mut costs: Vec<S> = lp.objective.iter().map(S::from_q).collect();
    costs.resize(ncols, S::lp_zero());
    tab.set_objective(&costs);
    if !tab.optimize(&|j| j < art_start)? {
        return Ok(LpSolution::without_certificate(LpStatus::Unbounded, n, m, tab.pivots));
    }

    let mut primal = vec![S::lp_zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            primal[b] = tab.rhs(i).clone();
        }
    }
    let value = tab.obj[ncols].clone();
    let dual: Vec<S> = (0..m)
        .map(|i| {
            let y = tab.obj[unit_col[i]].clone();
            if flip[i] {
                y.neg()
            } else {
                y
            }
        })
        .collect();

    let mut sol = LpSolution {
        status: LpStatus::Optimal,
        value,
        primal,
        dual,
        duality_gap: S::lp_zero(),
        dual_infeasibility: S::lp_zero(),
        primal_infeasibility: S::lp_zero(),
        pivots: tab.pivots,
    };
    certify(lp, &mut sol);
    Ok(sol)
}

/// Fills in the gap and infeasibility measures from the original data.
fn certify<S: LpScalar>(lp: &LinearProgram, sol: &mut LpSolution<S>) {
    let n = lp.num_vars();
    let rows: Vec<Vec<S>> = lp.rows.iter().map(|r| r.iter().map(S::from_q).collect()).collect();
    let rhs: Vec<S> = lp.rhs.iter().map(S::from_q).collect();

    let mut worst_primal = S::lp_zero();
    let bump = |worst: &mut S, v: S| {
        if v > *worst {
            *worst = v;
        }
    };
    for x in &sol.primal {
        bump(&mut worst_primal, x.neg());
    }
    for (i, row) in rows.iter().enumerate() {
        let lhs = row.iter().zip(&sol.primal).fold(S::lp_zero(), |acc, (a, x)| acc.add(&a.mul(x)));
        let excess = lhs.sub(&rhs[i]);
        let v = match lp.senses[i] {
            Sense::Le => excess,
            Sense::Ge => excess.neg(),
            Sense::Eq => excess.magnitude(),
        };
        bump(&mut worst_primal, v);
    }

    let mut worst_dual = S::lp_zero();
    for (i, y) in sol.dual.iter().enumerate() {
        match lp.senses[i] {
            Sense::Le => bump(&mut worst_dual, y.neg()),
            Sense::Ge => bump(&mut worst_dual, y.clone()),
            Sense::Eq => {}
        }
    }
    for j in 0..n {
        let col = rows.iter().zip(&sol.dual).fold(S::lp_zero(), |acc, (r, y)| acc.add(&r[j].mul(y)));
        bump(&mut worst_dual, S::from_q(&lp.objective[j]).sub(&col));
    }
    let bound = rhs.iter().zip(&sol.dual).fold(S::lp_zero(), |acc, (b, y)| acc.add(&b.mul(y)));
    sol.duality_gap = bound.sub(&sol.value).magnitude();
    sol.dual_infeasibility = worst_dual;
    sol.primal_infeasibility = worst_primal;
}

/// L∞ fit of `target` by a convex combination of the columns of `a`:
/// minimise `t` subject to `|A·w − target| ≤ t`, `Σ w = 1`, `w ≥ 0`.
/// The primal point is `(w, t)`; the solution's value is `−t`.
pub fn feasibility_minmax<S: LpScalar>(a: &[Vec<Q>], target: &[Q]) -> Result<LpSolution<S>> {
    let m = target.len();
    if a.len() != m {
        return Err(Error::Dimension(format!("{} rows vs {} targets", a.len(), m)));
    }
    let p = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != p) {
        return Err(Error::Dimension("ragged design matrix".into()));
    }
    let mut objective = vec![rational::zero(); p + 1];
    objective[p] = -rational::one();
    let mut lp = LinearProgram::new(objective);
    for (row, b) in a.iter().zip(target) {
        let mut up = row.clone();
        up.push(-rational::one());
        lp.le(up, b.clone());
        let mut down: Vec<Q> = row.iter().map(|x| -x).collect();
        down.push(-rational::one());
        lp.le(down, -b);
    }
    let mut simplex = vec![rational::one(); p];
    simplex.push(rational::zero());
    lp.constrain(simplex, Sense::Eq, rational::one());
    solve(&lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn lp(objective: &[i64], rows: &[(&[i64], i64)]) -> LinearProgram {
        let mut p = LinearProgram::new(objective.iter().map(|&c| qi(c)).collect());
        for (r, b) in rows {
            p.le(r.iter().map(|&c| qi(c)).collect(), qi(*b));
        }
        p
    }

    #[test]
    fn single_bound() {
        let s: LpSolution<Q> = solve(&lp(&[1], &[(&[1], 1)])).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, qi(1));
        assert_eq!(s.duality_gap, qi(0));
    }

    #[test]
    fn degenerate_face_is_deterministic() {
        let p = lp(&[1, 1], &[(&[1, 1], 1)]);
        let a: LpSolution<Q> = solve(&p).unwrap();
        let b: LpSolution<Q> = solve(&p).unwrap();
        assert_eq!(a.value, qi(1));
        assert_eq!(a.primal, b.primal);
        // Bland enters the lowest index first.
        assert_eq!(a.primal, vec![qi(1), qi(0)]);
    }

    #[test]
    fn unbounded_is_reported() {
        let s: LpSolution<f64> = solve(&lp(&[1], &[])).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
        let s: LpSolution<Q> = solve(&lp(&[1, 0], &[(&[0, 1], 3)])).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_is_reported() {
        let mut p = LinearProgram::new(vec![qi(1)]);
        p.constrain(vec![qi(1)], Sense::Ge, qi(2));
        p.le(vec![qi(1)], qi(1));
        let s: LpSolution<Q> = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
    }

    #[test]
    fn ge_and_negative_rhs_rows() {
        // maximize -x - y s.t. x + y >= 2, x - y <= -1  →  x = 1/2, y = 3/2
        let mut p = LinearProgram::new(vec![qi(-1), qi(-1)]);
        p.constrain(vec![qi(1), qi(1)], Sense::Ge, qi(2));
        p.le(vec![qi(1), qi(-1)], qi(-1));
        let s: LpSolution<Q> = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, qi(-2));
        assert_eq!(s.duality_gap, qi(0));
        assert_eq!(s.dual_infeasibility, qi(0));
        assert_eq!(s.primal_infeasibility, qi(0));
    }

    #[test]
    fn beale_cycling_instance_terminates() {
        // Beale's example cycles under the textbook largest-coefficient rule.
        let mut p = LinearProgram::new(vec![q(3, 4), qi(-150), q(1, 50), qi(-6)]);
        p.le(vec![q(1, 4), qi(-60), q(-1, 25), qi(9)], qi(0));
        p.le(vec![q(1, 2), qi(-90), q(-1, 50), qi(3)], qi(0));
        p.le(vec![qi(0), qi(0), qi(1), qi(0)], qi(1));
        let s: LpSolution<Q> = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, q(1, 20));
        assert_eq!(s.duality_gap, qi(0));
        let f: LpSolution<f64> = solve(&p).unwrap();
        assert!((f.value - 0.05).abs() < 1e-12);
    }

    #[test]
    fn size_cap_and_dimension_errors() {
        let p = LinearProgram::new(vec![qi(0); MAX_VARIABLES + 1]);
        assert!(matches!(solve::<f64>(&p), Err(Error::LpTooLarge(_))));
        let mut p = LinearProgram::new(vec![qi(1), qi(1)]);
        p.le(vec![qi(1)], qi(1));
        assert!(matches!(solve::<Q>(&p), Err(Error::Dimension(_))));
    }

    #[test]
    fn minmax_inside_hull_is_exact_zero() {
        let a = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        let s: LpSolution<Q> = feasibility_minmax(&a, &[q(1, 3), q(2, 3)]).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.primal[2], qi(0));
        assert_eq!(&s.primal[..2], &[q(1, 3), q(2, 3)]);
    }

    #[test]
    fn minmax_orthogonal_offset() {
        // Columns (1,0,0) and (0,1,0); the target sticks out by ε along the
        // third axis, which no convex combination can reach.
        let eps = q(1, 100);
        let a = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![qi(0), qi(0)]];
        let s: LpSolution<Q> = feasibility_minmax(&a, &[q(1, 2), q(1, 2), eps.clone()]).unwrap();
        assert_eq!(s.primal[2], eps);
        let f: LpSolution<f64> = feasibility_minmax(&a, &[q(1, 2), q(1, 2), eps]).unwrap();
        assert!((f.primal[2] - 0.01).magnitude() < 1e-12);
    }

    #[test]
    fn minmax_without_columns_is_infeasible() {
        let a: Vec<Vec<Q>> = vec![vec![], vec![]];
        let s: LpSolution<Q> = feasibility_minmax(&a, &[qi(0), qi(1)]).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
    }
}
