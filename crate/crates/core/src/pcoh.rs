//! Probabilistic coherence spaces over finite webs.
//!
//! A [`Pcs`] is presented by a finite list of generators; its clique is the
//! biorthogonal closure of that list, decided by linear programming. The
//! multiset objects use δ-coordinates: the symmetric equaliser `eq_n` sends
//! a multiset to the indicator of its enumerations (contrast with the
//! uniform-enumeration coordinates of [`crate::stoch`]).

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multiset::{difference, multinomial, multiset_of, Alphabet, Multiset, MultisetBasis, TupleIndex};
use crate::optim::{self, LinearProgram, LpScalar, LpStatus, Mode};
use crate::rational::{self, Q};
use crate::space::IndexSpace;
use crate::stoch::Permutation;

/// Tolerance of float-mode membership tests.
pub const FLOAT_TOL: f64 = 1e-9;

/// Nonnegative coefficients over a web.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PcsVector {
    #[serde(with = "rational::serde_q_vec")]
    coeffs: Vec<Q>,
}

impl PcsVector {
    pub fn new(coeffs: Vec<Q>) -> Result<Self> {
        if coeffs.iter().any(Signed::is_negative) {
            return Err(Error::OutsideClique("negative coefficient".into()));
        }
        Ok(PcsVector { coeffs })
    }

    pub fn zero(len: usize) -> Self {
        PcsVector { coeffs: vec![Q::zero(); len] }
    }

    pub fn basis(len: usize, a: usize) -> Self {
        let mut coeffs = vec![Q::zero(); len];
        coeffs[a] = Q::one();
        PcsVector { coeffs }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: &Q) -> PcsVector {
        PcsVector { coeffs: self.coeffs.iter().map(|x| x * s).collect() }
    }

    pub fn tensor(&self, other: &PcsVector) -> PcsVector {
        let mut coeffs = Vec::with_capacity(self.len() * other.len());
        for a in &self.coeffs {
            for b in &other.coeffs {
                coeffs.push(a * b);
            }
        }
        PcsVector { coeffs }
    }

    fn as_row(&self) -> Matrix {
        Matrix::row_vector(self.coeffs.clone())
    }
}

/// `⟨x, u⟩ = Σ_a x_a u_a`.
pub fn pairing(x: &PcsVector, u: &PcsVector) -> Result<Q> {
    if x.len() != u.len() {
        return Err(Error::Dimension(format!("web sizes {} and {}", x.len(), u.len())));
    }
    Ok(x.coeffs.iter().zip(&u.coeffs).map(|(a, b)| a * b).sum())
}

/// `u ∈ G^⊥`: every generator pairs with `u` to at most one.
pub fn dual_membership(generators: &[PcsVector], u: &PcsVector, mode: Mode) -> Result<bool> {
    for g in generators {
        let p = pairing(g, u)?;
        let ok = match mode {
            Mode::Exact => p <= Q::one(),
            Mode::Float => rational::to_f64(&p) <= 1.0 + FLOAT_TOL,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verdict of a biorthogonal membership test, with the LP optimum
/// `sup { ⟨x,u⟩ : u ∈ G^⊥ }`.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Inside { optimum: Q },
    /// `witness` is a dual vector with `⟨x, witness⟩ = optimum > 1`.
    Outside { optimum: Q, witness: PcsVector },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }

    pub fn optimum(&self) -> &Q {
        match self {
            Membership::Inside { optimum } | Membership::Outside { optimum, .. } => optimum,
        }
    }
}

/// Decides `x ∈ G^⊥⊥` by maximising `⟨x,u⟩` over `u ≥ 0, ⟨g,u⟩ ≤ 1`.
pub fn biorthogonal_membership(generators: &[PcsVector], x: &PcsVector, mode: Mode) -> Result<Membership> {
    match mode {
        Mode::Exact => membership_in::<Q>(generators, x),
        Mode::Float => membership_in::<f64>(generators, x),
    }
}

fn membership_in<S: LpScalar + ToQ>(generators: &[PcsVector], x: &PcsVector) -> Result<Membership> {
    if let Some(g) = generators.iter().find(|g| g.len() != x.len()) {
        return Err(Error::Dimension(format!("generator over {} points, element over {}", g.len(), x.len())));
    }
    let mut lp = LinearProgram::new(x.coeffs.clone());
    for g in generators {
        lp.le(g.coeffs.clone(), Q::one());
    }
    let sol = optim::solve::<S>(&lp)?;
    match sol.status {
        LpStatus::Unbounded => {
            let unsupported = (0..x.len())
                .find(|&a| x.coeffs[a].is_positive() && generators.iter().all(|g| g.coeffs[a].is_zero()))
                .unwrap_or(0);
            Err(Error::WebCondition(format!("web point {unsupported} is not supported by any generator")))
        }
        LpStatus::Infeasible => unreachable!("u = 0 is always feasible"),
        LpStatus::Optimal => {
            let optimum = sol.value.to_q()?;
            if sol.value.at_most_one() {
                Ok(Membership::Inside { optimum })
            } else {
                let witness = sol
                    .primal
                    .iter()
                    .map(|u| u.to_q().map(|q| if q.is_negative() { Q::zero() } else { q }))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Membership::Outside { optimum, witness: PcsVector { coeffs: witness } })
            }
        }
    }
}

/// Conversion of a solver scalar back to an exact rational.
pub trait ToQ {
    fn to_q(&self) -> Result<Q>;
    /// `≤ 1`, exactly or within [`FLOAT_TOL`].
    fn at_most_one(&self) -> bool;
}

impl ToQ for Q {
    fn to_q(&self) -> Result<Q> {
        Ok(self.clone())
    }
    fn at_most_one(&self) -> bool {
        *self <= Q::one()
    }
}

impl ToQ for f64 {
    fn to_q(&self) -> Result<Q> {
        rational::from_f64(*self)
    }
    fn at_most_one(&self) -> bool {
        *self <= 1.0 + FLOAT_TOL
    }
}

/// How a [`Pcs`] was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcsKind {
    Ground,
    Unit,
    Tensor,
    With,
    Symmetric { n: usize },
    BangTruncation { depth: usize, grid: usize },
}

/// Finite web plus generators of the clique.
#[derive(Clone, Debug, PartialEq)]
pub struct Pcs {
    web: IndexSpace,
    generators: Vec<PcsVector>,
    kind: PcsKind,
}

impl Pcs {
    /// Checks the web condition: every point carries positive mass in some
    /// generator (finite suprema are automatic for finite lists).
    pub fn new(web: IndexSpace, generators: Vec<PcsVector>, kind: PcsKind) -> Result<Self> {
        let d = web.size();
        if let Some(g) = generators.iter().find(|g| g.len() != d) {
            return Err(Error::Dimension(format!("generator of length {} on a web of {d} points", g.len())));
        }
        for a in 0..d {
            if !generators.iter().any(|g| g.coeffs[a].is_positive()) {
                return Err(Error::WebCondition(format!("point {a} of {web}")));
            }
        }
        let mut seen = HashSet::new();
        let generators = generators.into_iter().filter(|g| seen.insert(g.clone())).collect();
        Ok(Pcs { web, generators, kind })
    }

    pub fn web(&self) -> &IndexSpace {
        &self.web
    }

    pub fn dim(&self) -> usize {
        self.web.size()
    }

    pub fn generators(&self) -> &[PcsVector] {
        &self.generators
    }

    pub fn kind(&self) -> &PcsKind {
        &self.kind
    }

    pub fn contains(&self, x: &PcsVector, mode: Mode) -> Result<Membership> {
        biorthogonal_membership(&self.generators, x, mode)
    }
}

/// `X^PCoh`: subprobability distributions on a finite set.
pub fn ground_pcs(alphabet: &Alphabet) -> Pcs {
    let k = alphabet.len();
    Pcs::new(IndexSpace::alphabet(alphabet), (0..k).map(|a| PcsVector::basis(k, a)).collect(), PcsKind::Ground)
        .expect("unit vectors support every point")
}

/// The monoidal unit, clique `[0,1]`.
pub fn unit_pcs() -> Pcs {
    Pcs::new(IndexSpace::Unit, vec![PcsVector::basis(1, 0)], PcsKind::Unit).expect("nonempty")
}

pub fn tensor_pcs(a: &Pcs, b: &Pcs) -> Pcs {
    let gens = a.generators.iter().flat_map(|g| b.generators.iter().map(move |h| g.tensor(h))).collect();
    Pcs::new(IndexSpace::product(a.web.clone(), b.web.clone()), gens, PcsKind::Tensor).expect("products of supports")
}

/// Cartesian product `A & B`, web the disjoint union.
pub fn with_pcs(a: &Pcs, b: &Pcs) -> Pcs {
    let gens = a
        .generators
        .iter()
        .flat_map(|g| {
            b.generators.iter().map(move |h| {
                let mut c = g.coeffs.clone();
                c.extend(h.coeffs.iter().cloned());
                PcsVector { coeffs: c }
            })
        })
        .collect();
    Pcs::new(IndexSpace::with(a.web.clone(), b.web.clone()), gens, PcsKind::With).expect("blockwise supports")
}

/// Nonnegative matrix between webs (row = source point).
#[derive(Clone, Debug, PartialEq)]
pub struct PcsMatrix {
    source: IndexSpace,
    target: IndexSpace,
    matrix: Matrix,
    morphism_checked: bool,
}

/// Result of pushing every source generator through a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismCertificate {
    /// Largest LP optimum over the images of the source generators.
    pub worst_optimum: Q,
    /// First generator whose image leaves the target clique.
    pub failing_generator: Option<usize>,
}

impl MorphismCertificate {
    pub fn holds(&self) -> bool {
        self.failing_generator.is_none()
    }
}

impl PcsMatrix {
    pub fn new(source: IndexSpace, target: IndexSpace, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != source.size() || matrix.cols() != target.size() {
            return Err(Error::Dimension(format!("{}x{} matrix for {source} -> {target}", matrix.rows(), matrix.cols())));
        }
        if !matrix.is_nonnegative() {
            return Err(Error::Dimension("PCS matrices are nonnegative".into()));
        }
        Ok(PcsMatrix { source, target, matrix, morphism_checked: false })
    }

    pub fn source(&self) -> &IndexSpace {
        &self.source
    }

    pub fn target(&self) -> &IndexSpace {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_morphism_checked(&self) -> bool {
        self.morphism_checked
    }

    pub fn apply(&self, x: &PcsVector) -> Result<PcsVector> {
        let y = x.as_row().then(&self.matrix)?;
        Ok(PcsVector { coeffs: y.row(0).to_vec() })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PcsMatrix) -> Result<PcsMatrix> {
        self.target.ensure_same(&other.source)?;
        PcsMatrix::new(self.source.clone(), other.target.clone(), self.matrix.then(&other.matrix)?)
    }

    /// Certifies `P(source) → P(target)` on generators and records the flag.
    pub fn certify(&mut self, source: &Pcs, target: &Pcs, mode: Mode) -> Result<MorphismCertificate> {
        self.source.ensure_same(source.web())?;
        self.target.ensure_same(target.web())?;
        let mut cert = MorphismCertificate { worst_optimum: Q::zero(), failing_generator: None };
        for (i, g) in source.generators().iter().enumerate() {
            let verdict = target.contains(&self.apply(g)?, mode)?;
            if *verdict.optimum() > cert.worst_optimum {
                cert.worst_optimum = verdict.optimum().clone();
            }
            if !verdict.is_inside() && cert.failing_generator.is_none() {
                cert.failing_generator = Some(i);
            }
        }
        self.morphism_checked = cert.holds();
        Ok(cert)
    }
}

/// 0/1 matrix from size-`n` multisets over `k` points to `k^n` tuples.
pub fn eq_matrix(k: usize, n: usize) -> Matrix {
    let basis = MultisetBasis::exact(k, n);
    let mut m = Matrix::zeros(basis.len(), k.pow(n as u32));
    for r in 0..k.pow(n as u32) {
        let mu = multiset_of(&TupleIndex::unrank(r, k, n), k).expect("in range");
        m[(basis.position(&mu).expect("complete"), r)] = Q::one();
    }
    m
}

/// The PCS equaliser of the symmetries of `A^{⊗n}`, from the multiset web.
pub fn eq_n_pcoh(pcs: &Pcs, n: usize) -> PcsMatrix {
    let k = pcs.dim();
    PcsMatrix::new(
        IndexSpace::multisets(pcs.web.clone(), n),
        IndexSpace::tuples(pcs.web.clone(), n),
        eq_matrix(k, n),
    )
    .expect("shape")
}

/// Permutation matrix of a coordinate symmetry on `k^n` tuples.
pub fn symmetry_matrix(perm: &Permutation, k: usize) -> Matrix {
    let size = k.pow(perm.len() as u32);
    Matrix::identity(size).permute_columns(&perm.tuple_map(k))
}

/// Restriction `M_{n+1}(A & 1) → M_n(A & 1)` on ≤-bounded multisets: keeps
/// every multiset of size ≤ n, drops those of size n + 1.
pub fn dd_bang(pcs: &Pcs, n: usize) -> PcsMatrix {
    let k = pcs.dim();
    PcsMatrix::new(
        IndexSpace::bounded_multisets(pcs.web.clone(), n + 1),
        IndexSpace::bounded_multisets(pcs.web.clone(), n),
        restriction(k, n + 1, n),
    )
    .expect("shape")
}

/// Restriction from multisets of size ≤ `from` to size ≤ `to`.
pub fn restriction(k: usize, from: usize, to: usize) -> Matrix {
    let big = MultisetBasis::bounded(k, from);
    let small = MultisetBasis::bounded(k, to);
    let mut m = Matrix::zeros(big.len(), small.len());
    for (i, mu) in big.items().iter().enumerate() {
        if let Some(j) = small.position(mu) {
            m[(i, j)] = Q::one();
        }
    }
    m
}

/// De Finetti draw-and-delete in δ-coordinates: `(μ, ν) ↦ [ν ⊆ μ]`.
pub fn dd_definetti_pcoh(alphabet: &Alphabet, n: usize) -> PcsMatrix {
    let k = alphabet.len();
    let top = MultisetBasis::exact(k, n + 1);
    let bottom = MultisetBasis::exact(k, n);
    let mut m = Matrix::zeros(top.len(), bottom.len());
    for (i, mu) in top.items().iter().enumerate() {
        for a in 0..k {
            if let Some(nu) = mu.without(a) {
                m[(i, bottom.position(&nu).expect("complete"))] = Q::one();
            }
        }
    }
    let x = IndexSpace::alphabet(alphabet);
    PcsMatrix::new(IndexSpace::multisets(x.clone(), n + 1), IndexSpace::multisets(x, n), m).expect("shape")
}

/// `M_n A`: clique `{x | eq_n·x ∈ A^{⊗n}}`, generated by the preimages of
/// the symmetrised tensors of generators.
pub fn mn_pcs(pcs: &Pcs, n: usize) -> Pcs {
    let k = pcs.dim();
    let m = pcs.generators.len();
    let web_basis = MultisetBasis::exact(k, n);
    let perms = Permutation::all(n);
    let norm = Q::new(1.into(), (perms.len() as i64).into());
    let mut gens = Vec::new();
    for choice in MultisetBasis::exact(m, n).items() {
        let picks = choice.canonical_tuple().entries;
        let coeffs: Vec<Q> = web_basis
            .items()
            .iter()
            .map(|mu| {
                let a = mu.canonical_tuple().entries;
                let sum: Q = perms
                    .iter()
                    .map(|p| {
                        (0..n)
                            .map(|i| pcs.generators[picks[p.image()[i]]].coeffs[a[i]].clone())
                            .product::<Q>()
                    })
                    .sum();
                sum * &norm
            })
            .collect();
        gens.push(PcsVector { coeffs });
    }
    let web = IndexSpace::multisets(pcs.web.clone(), n);
    match n {
        0 => Pcs::new(web, vec![PcsVector::basis(1, 0)], PcsKind::Symmetric { n }),
        _ => Pcs::new(web, gens, PcsKind::Symmetric { n }),
    }
    .expect("symmetrised generators keep supports")
}

/// `M_n α` for `α = ⟨id, weaken⟩ : X → X & 1`: entry `(μ, ν)` is
/// `multinomial(μ − ν)` when `ν ⊆ μ`, else zero.
pub fn mn_alpha(alphabet: &Alphabet, n: usize) -> PcsMatrix {
    let k = alphabet.len();
    let rows = MultisetBasis::exact(k, n);
    let cols = MultisetBasis::bounded(k, n);
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (i, mu) in rows.items().iter().enumerate() {
        for (j, nu) in cols.items().iter().enumerate() {
            if let Some(rest) = difference(mu, nu) {
                m[(i, j)] = Q::from_integer(multinomial(&rest).into());
            }
        }
    }
    let x = IndexSpace::alphabet(alphabet);
    PcsMatrix::new(IndexSpace::multisets(x.clone(), n), IndexSpace::bounded_multisets(x, n), m).expect("shape")
}

/// Depth-truncated element of `!X`: coefficients on every multiset of size
/// ≤ `depth`, stored in the bounded canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct BangElement {
    alphabet: Alphabet,
    depth: usize,
    basis: MultisetBasis,
    coeffs: Vec<Q>,
}

impl BangElement {
    pub fn new(alphabet: Alphabet, depth: usize, coeffs: Vec<Q>) -> Result<Self> {
        let basis = MultisetBasis::bounded(alphabet.len(), depth);
        if coeffs.len() != basis.len() {
            return Err(Error::Dimension(format!("{} coefficients for {} multisets", coeffs.len(), basis.len())));
        }
        if coeffs.iter().any(Signed::is_negative) {
            return Err(Error::OutsideClique("negative coefficient".into()));
        }
        Ok(BangElement { alphabet, depth, basis, coeffs })
    }

    /// Builds the table from a function of the multiset.
    pub fn from_fn(alphabet: Alphabet, depth: usize, f: impl Fn(&Multiset) -> Q) -> Result<Self> {
        let basis = MultisetBasis::bounded(alphabet.len(), depth);
        let coeffs = basis.items().iter().map(f).collect();
        Self::new(alphabet, depth, coeffs)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn basis(&self) -> &MultisetBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient at `mu`; zero beyond the truncation depth.
    pub fn get(&self, mu: &Multiset) -> Q {
        self.basis.position(mu).map_or_else(Q::zero, |i| self.coeffs[i].clone())
    }

    pub fn as_vector(&self) -> PcsVector {
        PcsVector { coeffs: self.coeffs.clone() }
    }

    /// Entries in graded order (size ascending, then canonical).
    pub fn graded(&self) -> Vec<(Multiset, Q)> {
        (0..=self.depth)
            .flat_map(|n| MultisetBasis::exact(self.alphabet.len(), n).items().to_vec())
            .map(|mu| {
                let v = self.get(&mu);
                (mu, v)
            })
            .collect()
    }
}

/// Promotion `x^!`: coefficient `Π_a x_a^{μ(a)}` at every `|μ| ≤ depth`.
pub fn promotion(alphabet: &Alphabet, x: &PcsVector, depth: usize) -> Result<BangElement> {
    if x.len() != alphabet.len() {
        return Err(Error::Dimension("promotion of a vector over another web".into()));
    }
    let mass: Q = x.coeffs.iter().sum();
    if mass > Q::one() {
        return Err(Error::OutsideClique(format!("mass {} > 1", rational::format(&mass))));
    }
    BangElement::from_fn(alphabet.clone(), depth, |mu| power(&x.coeffs, mu))
}

pub(crate) fn power(x: &[Q], mu: &Multiset) -> Q {
    x.iter()
        .zip(mu.counts())
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| num_traits::pow(w.clone(), c as usize))
        .product()
}

/// `ρ_{∞,n}`: restriction of a `!X` element to multisets of size ≤ `n`.
pub fn rho_inf_n(b: &BangElement, n: usize) -> Result<PcsVector> {
    if n > b.depth {
        return Err(Error::Depth { depth: b.depth, level: n });
    }
    let small = MultisetBasis::bounded(b.alphabet.len(), n);
    Ok(PcsVector { coeffs: small.items().iter().map(|mu| b.get(mu)).collect() })
}

/// Truncation of `!X` at `depth`, generated by promotions of the grid points
/// `{ x : x_a ∈ (1/grid)ℕ, Σ x ≤ 1 }`. Membership verdicts against it are
/// sound for "inside"; "outside" is relative to the grid resolution.
pub fn bang_pcs(alphabet: &Alphabet, depth: usize, grid: usize) -> Result<Pcs> {
    let k = alphabet.len();
    let step = Q::new(1.into(), (grid as i64).into());
    let mut gens = Vec::new();
    for point in MultisetBasis::bounded(k, grid).items() {
        let x: Vec<Q> = point.counts().iter().map(|&c| Q::from_integer((c as i64).into()) * &step).collect();
        gens.push(promotion(alphabet, &PcsVector { coeffs: x }, depth)?.as_vector());
    }
    Pcs::new(
        IndexSpace::bounded_multisets(IndexSpace::alphabet(alphabet), depth),
        gens,
        PcsKind::BangTruncation { depth, grid },
    )
}
