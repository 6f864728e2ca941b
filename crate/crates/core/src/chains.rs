//! Draw-and-delete chains over a copointed object, for either backend.
//!
//! Levels are indexed by size-`n` multisets over the carrier's `d` points,
//! in the canonical order of [`crate::multiset`]. All maps are exact
//! matrices with rows indexed by the source. The defining square at level
//! `n` reads `DD_n · eq_n = eq_{n+1} · (I_{d^n} ⊗ w)` in this convention.
//!
//! Cones carry an optional parameter `Y` (a finite set of `y` points,
//! appended as the fastest-varying coordinate): a leg at level `n` is a
//! matrix `apex × (level_n · y)`.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multiset::{multinomial, Alphabet, MultisetBasis};
use crate::pcoh::{self, BangElement, Pcs};
use crate::rational::{self, Q};
use crate::report::CheckReport;
use crate::space::IndexSpace;
use crate::stoch::{self, AtomicMeasure, Permutation};

pub const ANCHOR_DD_SQUARE: &str = "draw-and-delete-defining-square";
pub const ANCHOR_CHAIN_MORPHISM: &str = "copointed-morphism-lifts-to-chain-morphism";
pub const ANCHOR_CONE_EQUIVALENCE: &str = "dd-cones-correspond-to-symmetric-delete-cones";
pub const ANCHOR_TENSOR: &str = "symmetric-equalisers-commute-with-tensor";
pub const ANCHOR_CONJUGATION: &str = "urn-and-delta-coordinates-conjugate";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Stoch,
    Pcoh,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Carrier {
    Stoch(IndexSpace),
    Pcoh(Pcs),
}

/// Closed forms known for a weakening.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// All-ones column: the discard.
    Discard,
    /// Projection onto a trailing unit point (`A & 1` with `π₂`).
    UnitPoint,
    Other,
}

/// A pair `(A, w : A → 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CopointedObject {
    carrier: Carrier,
    weaken: Matrix,
}

impl CopointedObject {
    /// Checks that `weaken` is a `d × 1` backend morphism into the unit.
    pub fn new(carrier: Carrier, weaken: Matrix) -> Result<Self> {
        let d = match &carrier {
            Carrier::Stoch(s) => s.size(),
            Carrier::Pcoh(p) => p.dim(),
        };
        if weaken.rows() != d || weaken.cols() != 1 {
            return Err(Error::Dimension(format!(
                "weakening is {}×{}, expected {d}×1",
                weaken.rows(),
                weaken.cols()
            )));
        }
        if !weaken.is_nonnegative() {
            return Err(Error::NotAKernel("negative weakening entry".into()));
        }
        match &carrier {
            Carrier::Stoch(_) => {
                if let Some(i) = (0..d).find(|&i| weaken[(i, 0)] > Q::one()) {
                    return Err(Error::NotAKernel(format!("weakening row {i} has mass above one")));
                }
            }
            Carrier::Pcoh(p) => {
                for (g, gen) in p.generators().iter().enumerate() {
                    let s: Q = gen.coeffs().iter().zip(weaken.entries()).map(|(a, b)| a * b).sum();
                    if s > Q::one() {
                        return Err(Error::OutsideClique(format!("weakening sends generator {g} to {}", rational::format(&s))));
                    }
                }
            }
        }
        Ok(CopointedObject { carrier, weaken })
    }

    /// Free copointed object in `Stoch`: the set with its discard.
    pub fn stoch_free(alphabet: &Alphabet) -> Self {
        let k = alphabet.len();
        Self::new(Carrier::Stoch(IndexSpace::alphabet(alphabet)), ones(k)).expect("discard is a kernel")
    }

    /// `X^PCoh` weakened by the all-ones column.
    pub fn pcoh_definetti(alphabet: &Alphabet) -> Self {
        let k = alphabet.len();
        Self::new(Carrier::Pcoh(pcoh::ground_pcs(alphabet)), ones(k)).expect("total mass is at most one")
    }

    /// Free copointed object in `PCoh`: `A & 1` weakened by the projection
    /// onto the unit point.
    pub fn pcoh_free(pcs: &Pcs) -> Self {
        let with = pcoh::with_pcs(pcs, &pcoh::unit_pcs());
        let d = with.dim();
        let mut w = Matrix::zeros(d, 1);
        w[(d - 1, 0)] = Q::one();
        Self::new(Carrier::Pcoh(with), w).expect("projection preserves cliques")
    }

    pub fn backend(&self) -> Backend {
        match self.carrier {
            Carrier::Stoch(_) => Backend::Stoch,
            Carrier::Pcoh(_) => Backend::Pcoh,
        }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn weaken(&self) -> &Matrix {
        &self.weaken
    }

    /// Number of points of the carrier.
    pub fn dim(&self) -> usize {
        self.weaken.rows()
    }

    fn shape(&self) -> Shape {
        let d = self.dim();
        if self.weaken.entries().iter().all(One::is_one) {
            Shape::Discard
        } else if self.weaken.entries()[..d - 1].iter().all(Zero::is_zero) && self.weaken[(d - 1, 0)].is_one() {
            Shape::UnitPoint
        } else {
            Shape::Other
        }
    }
}

fn ones(d: usize) -> Matrix {
    Matrix::column_vector(vec![Q::one(); d])
}

/// The symmetric equaliser `M_n → d^n` in the backend's coordinates:
/// uniform over enumerations (`Stoch`) or their indicator (`PCoh`).
pub fn equaliser(backend: Backend, d: usize, n: usize) -> Matrix {
    let mut m = pcoh::eq_matrix(d, n);
    if backend == Backend::Stoch {
        for (i, mu) in MultisetBasis::exact(d, n).items().iter().enumerate() {
            let s = Q::new(1.into(), multinomial(mu).into());
            for x in m.row_mut(i) {
                if !x.is_zero() {
                    *x = s.clone();
                }
            }
        }
    }
    m
}

/// Index of column `(r, j)` in a `(base · y)`-column matrix.
fn col(r: usize, j: usize, y: usize) -> usize {
    r * y + j
}

/// Solves `X · (eq ⊗ I_y) = rhs` by reading each multiset's canonical
/// enumeration; the caller verifies the result.
fn solve_through_eq(eq: &Matrix, d: usize, n: usize, y: usize, rhs: &Matrix) -> Result<Matrix> {
    if rhs.cols() != eq.cols() * y {
        return Err(Error::Dimension(format!("{} columns cannot factor through {}·{y}", rhs.cols(), eq.cols())));
    }
    let basis = MultisetBasis::exact(d, n);
    let mut out = Matrix::zeros(rhs.rows(), basis.len() * y);
    for (i, mu) in basis.items().iter().enumerate() {
        let c = mu.canonical_tuple().rank(d);
        let pivot = &eq[(i, c)];
        for j in 0..y {
            for r in 0..rhs.rows() {
                out[(r, col(i, j, y))] = &rhs[(r, col(c, j, y))] / pivot;
            }
        }
    }
    Ok(out)
}

fn with_param(m: &Matrix, y: usize) -> Matrix {
    if y == 1 {
        m.clone()
    } else {
        m.kron(&Matrix::identity(y))
    }
}

/// Truncation `M_0 ← M_1 ← … ← M_N` of the draw-and-delete chain.
#[derive(Clone, Debug, PartialEq)]
pub struct DDChain {
    object: CopointedObject,
    eq: Vec<Matrix>,
    dd: Vec<Matrix>,
}

/// Builds the chain up to level `depth`. Closed forms are used when the
/// weakening has one, and cross-checked against the universal solve.
pub fn build_dd_chain(obj: &CopointedObject, depth: usize) -> Result<DDChain> {
    let d = obj.dim();
    let backend = obj.backend();
    let eq: Vec<Matrix> = (0..=depth).map(|n| equaliser(backend, d, n)).collect();
    let mut dd = Vec::with_capacity(depth);
    for n in 0..depth {
        let rhs = eq[n + 1].then(&Matrix::identity(d.pow(n as u32)).kron(&obj.weaken))?;
        let solved = solve_through_eq(&eq[n], d, n, 1, &rhs)?;
        let closed = match (backend, obj.shape()) {
            (Backend::Stoch, Shape::Discard) => Some(stoch::dd_definetti_stoch(&Alphabet::letters(d), n).matrix().clone()),
            (Backend::Pcoh, Shape::Discard) => Some(pcoh::dd_definetti_pcoh(&Alphabet::letters(d), n).matrix().clone()),
            (Backend::Pcoh, Shape::UnitPoint) => Some(pcoh::restriction(d - 1, n + 1, n)),
            _ => None,
        };
        let m = match closed {
            Some(c) if c != solved => {
                return Err(Error::SquareUnsatisfiable {
                    level: n,
                    detail: "closed form disagrees with the universal solve".into(),
                })
            }
            Some(c) => c,
            None => solved,
        };
        if m.then(&eq[n])? != rhs {
            return Err(Error::SquareUnsatisfiable { level: n, detail: "no factorisation through the equaliser".into() });
        }
        dd.push(m);
    }
    Ok(DDChain { object: obj.clone(), eq, dd })
}

impl DDChain {
    pub fn object(&self) -> &CopointedObject {
        &self.object
    }

    pub fn backend(&self) -> Backend {
        self.object.backend()
    }

    pub fn depth(&self) -> usize {
        self.dd.len()
    }

    /// Points of the carrier.
    pub fn dim(&self) -> usize {
        self.object.dim()
    }

    pub fn level(&self, n: usize) -> MultisetBasis {
        MultisetBasis::exact(self.dim(), n)
    }

    pub fn eq(&self, n: usize) -> &Matrix {
        &self.eq[n]
    }

    pub fn dd(&self, n: usize) -> &Matrix {
        &self.dd[n]
    }

    /// Test hook: perturbs one entry of `DD_level`.
    pub fn inject_fault(&mut self, level: usize) {
        self.dd[level][(0, 0)] += Q::one();
    }

    /// Deviation of every defining square.
    pub fn verify_squares(&self) -> Result<Vec<CheckReport>> {
        let d = self.dim();
        (0..self.depth())
            .map(|n| {
                let lhs = self.dd[n].then(&self.eq[n])?;
                let rhs = self.eq[n + 1].then(&Matrix::identity(d.pow(n as u32)).kron(&self.object.weaken))?;
                let dev = lhs.max_abs_diff(&rhs)?;
                let name = format!("{:?} dd square", self.backend()).to_lowercase();
                Ok(CheckReport::exact(name, ANCHOR_DD_SQUARE, Some(n), dev))
            })
            .collect()
    }

    /// `f · (eq_n ⊗ I_y)`.
    fn through_eq(&self, f: &Matrix, n: usize, y: usize) -> Result<Matrix> {
        f.then(&with_param(&self.eq[n], y))
    }

    /// Unique `g` with `g · (eq_n ⊗ I_y) = f`, or the deviation left over
    /// when `f` does not factor.
    pub fn factor(&self, f: &Matrix, n: usize, y: usize) -> Result<(Matrix, Q)> {
        let g = solve_through_eq(&self.eq[n], self.dim(), n, y, f)?;
        let dev = self.through_eq(&g, n, y)?.max_abs_diff(f)?;
        Ok((g, dev))
    }

    /// First transposition under which `f` (into `d^n · y`) is not invariant.
    pub fn asymmetry(&self, f: &Matrix, n: usize, y: usize) -> Option<Permutation> {
        let d = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                let mut image: Vec<usize> = (0..n).collect();
                image.swap(i, j);
                let p = Permutation::new(image).expect("transposition");
                if permute_param(f, &p.tuple_map(d), y) != *f {
                    return Some(p);
                }
            }
        }
        None
    }

    /// `I_{d^n} ⊗ w ⊗ I_y`, the delete map from `d^{n+1}` to `d^n`.
    fn delete(&self, n: usize, y: usize) -> Matrix {
        with_param(&Matrix::identity(self.dim().pow(n as u32)).kron(&self.object.weaken), y)
    }

    /// Largest compatibility deviation of a cone.
    pub fn cone_deviation(&self, cone: &Cone) -> Result<(Q, Option<usize>)> {
        let mut worst = Q::zero();
        let mut at = None;
        for n in 0..cone.legs.len().saturating_sub(1) {
            let down = match cone.kind {
                ConeKind::DrawDelete => with_param(&self.dd[n], cone.param),
                ConeKind::Delete => self.delete(n, cone.param),
            };
            let dev = cone.legs[n + 1].then(&down)?.max_abs_diff(&cone.legs[n])?;
            if dev > worst {
                worst = dev;
                at = Some(n);
            }
        }
        Ok((worst, at))
    }

    fn check_shape(&self, cone: &Cone, kind: ConeKind) -> Result<()> {
        if cone.kind != kind {
            return Err(Error::Dimension(format!("expected a {kind:?} cone")));
        }
        if cone.legs.len() > self.depth() + 1 {
            return Err(Error::Depth { depth: self.depth(), level: cone.legs.len() - 1 });
        }
        for (n, leg) in cone.legs.iter().enumerate() {
            let width = match kind {
                ConeKind::DrawDelete => self.eq[n].rows(),
                ConeKind::Delete => self.eq[n].cols(),
            };
            if leg.rows() != cone.apex || leg.cols() != width * cone.param {
                return Err(Error::Dimension(format!("leg {n} is {}×{}", leg.rows(), leg.cols())));
            }
        }
        Ok(())
    }
}

/// Column permutation of `f` by a tuple map, extended by the identity on `Y`.
fn permute_param(f: &Matrix, map: &[usize], y: usize) -> Matrix {
    let full: Vec<usize> = (0..map.len() * y).map(|c| col(map[c / y], c % y, y)).collect();
    f.permute_columns(&full)
}

/// Components `M_n A₁ → M_n A₂` of a chain morphism.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMorphism {
    pub components: Vec<Matrix>,
}

/// Lifts `α : A₁ → A₂` with `α · w₂ = w₁` to the chains. Each component is
/// the unique solution of `comp_n · eq₂_n = eq₁_n · α^{⊗n}`.
pub fn lift_copointed_morphism(alpha: &Matrix, c1: &DDChain, c2: &DDChain) -> Result<ChainMorphism> {
    if c1.backend() != c2.backend() {
        return Err(Error::Dimension("chains over different backends".into()));
    }
    let (d1, d2) = (c1.dim(), c2.dim());
    if alpha.rows() != d1 || alpha.cols() != d2 {
        return Err(Error::Dimension(format!("α is {}×{}, expected {d1}×{d2}", alpha.rows(), alpha.cols())));
    }
    let pulled = alpha.then(&c2.object.weaken)?;
    if let Some(i) = (0..d1).find(|&i| pulled[(i, 0)] != c1.object.weaken[(i, 0)]) {
        return Err(Error::NotCopointed { source_index: i });
    }
    let top = c1.depth().min(c2.depth());
    let mut power = Matrix::identity(1);
    let mut components = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let rhs = c1.eq[n].then(&power)?;
        let (comp, dev) = c2.factor(&rhs, n, 1)?;
        if !dev.is_zero() {
            return Err(Error::SquareUnsatisfiable { level: n, detail: "α^⊗n ∘ eq does not factor".into() });
        }
        components.push(comp);
        power = power.kron(alpha);
    }
    Ok(ChainMorphism { components })
}

/// Deviation of each square `comp_{n+1} · DD₂_n = DD₁_n · comp_n`.
pub fn verify_chain_morphism(m: &ChainMorphism, c1: &DDChain, c2: &DDChain) -> Result<Vec<CheckReport>> {
    (0..m.components.len().saturating_sub(1))
        .map(|n| {
            let lhs = m.components[n + 1].then(&c2.dd[n])?;
            let rhs = c1.dd[n].then(&m.components[n])?;
            Ok(CheckReport::exact("chain morphism square", ANCHOR_CHAIN_MORPHISM, Some(n), lhs.max_abs_diff(&rhs)?))
        })
        .collect()
}

/// `⟨id, w⟩ : A → A & 1`, which commutes with the weakenings of `A` and of
/// the free copointed object.
pub fn unit_pairing(obj: &CopointedObject) -> Matrix {
    let d = obj.dim();
    let mut m = Matrix::zeros(d, d + 1);
    for i in 0..d {
        m[(i, i)] = Q::one();
        m[(i, d)] = obj.weaken[(i, 0)].clone();
    }
    m
}

/// `diag(multinomial(μ))` over size-`n` multisets on `k` points: the change
/// from urn coordinates to δ-coordinates.
pub fn stoch_to_pcoh_coords(k: usize, n: usize) -> Matrix {
    Matrix::diagonal(MultisetBasis::exact(k, n).items().iter().map(|mu| Q::from_integer(multinomial(mu).into())).collect())
}

/// Deviation of `D_{n+1} · DD^stoch_n = DD^pcoh_n · D_n`.
pub fn conjugation_deviation(k: usize, n: usize) -> Result<Q> {
    let a = Alphabet::letters(k);
    let lhs = stoch_to_pcoh_coords(k, n + 1).then(stoch::dd_definetti_stoch(&a, n).matrix())?;
    let rhs = pcoh::dd_definetti_pcoh(&a, n).matrix().then(&stoch_to_pcoh_coords(k, n))?;
    lhs.max_abs_diff(&rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    /// Legs into the multiset levels, compatible with `DD`.
    DrawDelete,
    /// Legs into the tuple levels `d^n`, compatible with the delete maps.
    Delete,
}

/// Finite cone of legs `apex → level_n ⊗ Y`, `0 ≤ n < legs.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone {
    pub kind: ConeKind,
    /// Points of the apex.
    pub apex: usize,
    /// Points of the parameter `Y` (1 for none).
    pub param: usize,
    pub legs: Vec<Matrix>,
}

/// Mediates a symmetric delete-cone through the equalisers.
pub fn dagger_factorize(chain: &DDChain, cone: &Cone) -> Result<Cone> {
    chain.check_shape(cone, ConeKind::Delete)?;
    let mut legs = Vec::with_capacity(cone.legs.len());
    for (n, f) in cone.legs.iter().enumerate() {
        if let Some(p) = chain.asymmetry(f, n, cone.param) {
            return Err(Error::AsymmetricLeg { level: n, permutation: p.image().to_vec() });
        }
        let (g, dev) = chain.factor(f, n, cone.param)?;
        if !dev.is_zero() {
            return Err(Error::SquareUnsatisfiable { level: n, detail: "symmetric leg did not factor".into() });
        }
        legs.push(g);
    }
    let out = Cone { kind: ConeKind::DrawDelete, apex: cone.apex, param: cone.param, legs };
    if let (dev, Some(level)) = chain.cone_deviation(&out)? {
        if !dev.is_zero() {
            return Err(Error::IncompatibleCone { level });
        }
    }
    Ok(out)
}

/// Composes each leg of a DD-cone with its equaliser.
pub fn omega_from_dd_cone(chain: &DDChain, cone: &Cone) -> Result<Cone> {
    chain.check_shape(cone, ConeKind::DrawDelete)?;
    if let (dev, Some(level)) = chain.cone_deviation(cone)? {
        if !dev.is_zero() {
            return Err(Error::IncompatibleCone { level });
        }
    }
    let legs = cone
        .legs
        .iter()
        .enumerate()
        .map(|(n, g)| chain.through_eq(g, n, cone.param))
        .collect::<Result<Vec<_>>>()?;
    Ok(Cone { kind: ConeKind::Delete, apex: cone.apex, param: cone.param, legs })
}

/// Nonnegative matrix with rows summing to one, entries in quarters.
fn random_stochastic<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        let raw: Vec<i64> = (0..cols).map(|_| rng.gen_range(0..5)).collect();
        let total: i64 = raw.iter().sum();
        for (c, &x) in raw.iter().enumerate() {
            m[(r, c)] = match total {
                0 => Q::from_integer(i64::from(c == 0).into()),
                _ => rational::q(x, total),
            };
        }
    }
    m
}

/// DD-cone generated by a random top leg pushed down the chain.
pub fn random_dd_cone<R: Rng>(chain: &DDChain, apex: usize, param: usize, rng: &mut R) -> Result<Cone> {
    let top = chain.depth();
    let mut legs = vec![random_stochastic(apex, chain.eq[top].rows() * param, rng)];
    for n in (0..top).rev() {
        let next = legs.last().expect("nonempty").then(&with_param(&chain.dd[n], param))?;
        legs.push(next);
    }
    legs.reverse();
    Ok(Cone { kind: ConeKind::DrawDelete, apex, param, legs })
}

/// Symmetric delete-cone: a random top leg into `d^N · y`, averaged over
/// all symmetries and pushed down by the delete maps.
pub fn random_delete_cone<R: Rng>(chain: &DDChain, apex: usize, param: usize, rng: &mut R) -> Result<Cone> {
    let top = chain.depth();
    let d = chain.dim();
    let raw = random_stochastic(apex, d.pow(top as u32) * param, rng);
    let perms = Permutation::all(top);
    let weight = rational::q(1, perms.len() as i64);
    let mut sym = Matrix::zeros(raw.rows(), raw.cols());
    for p in &perms {
        sym = sym.add(&permute_param(&raw, &p.tuple_map(d), param))?;
    }
    let mut legs = vec![sym.scale(&weight)];
    for n in (0..top).rev() {
        let next = legs.last().expect("nonempty").then(&chain.delete(n, param))?;
        legs.push(next);
    }
    legs.reverse();
    Ok(Cone { kind: ConeKind::Delete, apex, param, legs })
}

/// Largest deviation of `dagger ∘ omega` and `omega ∘ dagger` from the
/// identity on the given cones.
pub fn round_trip_deviation(chain: &DDChain, dd_cone: &Cone, delete_cone: &Cone) -> Result<Q> {
    let mut worst = Q::zero();
    let back = dagger_factorize(chain, &omega_from_dd_cone(chain, dd_cone)?)?;
    for (a, b) in back.legs.iter().zip(&dd_cone.legs) {
        worst = worst.max(a.max_abs_diff(b)?);
    }
    let forth = omega_from_dd_cone(chain, &dagger_factorize(chain, delete_cone)?)?;
    for (a, b) in forth.legs.iter().zip(&delete_cone.legs) {
        worst = worst.max(a.max_abs_diff(b)?);
    }
    Ok(worst)
}

/// Outcome of [`verify_tensor_parametrized`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorReport {
    pub samples: usize,
    pub param: usize,
    /// Largest `|g · (eq_n ⊗ I_Y) − f|` over the sampled symmetric `f`.
    #[serde(with = "rational::serde_q")]
    pub factorisation: Q,
    /// Largest deviation of the parametrized cone round trips.
    #[serde(with = "rational::serde_q")]
    pub round_trip: Q,
}

impl TensorReport {
    pub fn holds(&self) -> bool {
        self.factorisation.is_zero() && self.round_trip.is_zero()
    }

    pub fn to_checks(&self) -> Vec<CheckReport> {
        vec![
            CheckReport::exact(format!("factorisation through eq ⊗ Y (|Y|={})", self.param), ANCHOR_TENSOR, None, self.factorisation.clone()),
            CheckReport::exact(format!("parametrized round trip (|Y|={})", self.param), ANCHOR_CONE_EQUIVALENCE, None, self.round_trip.clone()),
        ]
    }
}

/// Samples symmetric maps into `level_n ⊗ Y` at every level and checks their
/// factorisation through `eq_n ⊗ id_Y`, plus cone round trips over `Y`.
pub fn verify_tensor_parametrized(chain: &DDChain, param: usize, samples: usize, seed: u64) -> Result<TensorReport> {
    let mut factorisation = Q::zero();
    let mut round_trip = Q::zero();
    for s in 0..samples {
        let mut rng = stoch::trial_rng(seed, s as u64);
        let dd = random_dd_cone(chain, 2, param, &mut rng)?;
        let del = random_delete_cone(chain, 2, param, &mut rng)?;
        for (n, f) in del.legs.iter().enumerate() {
            factorisation = factorisation.max(chain.factor(f, n, param)?.1);
        }
        round_trip = round_trip.max(round_trip_deviation(chain, &dd, &del)?);
    }
    Ok(TensorReport { samples, param, factorisation, round_trip })
}

/// De Finetti cone of a mixing measure on the `Stoch` chain of its
/// alphabet: apex the unit, leg `n` the urn law of the first `n` draws.
pub fn cone_from_mixing(mixing: &AtomicMeasure, depth: usize) -> Result<Cone> {
    let legs = (0..=depth).map(|n| Ok(Matrix::row_vector(mixing.urn_law(n)?))).collect::<Result<Vec<_>>>()?;
    Ok(Cone { kind: ConeKind::DrawDelete, apex: 1, param: 1, legs })
}

/// Cone on the free `PCoh` chain over `X` determined by a `!X` element:
/// leg `n` is its restriction to multisets of size ≤ `n`.
pub fn cone_from_bang(b: &BangElement) -> Result<Cone> {
    let legs = (0..=b.depth())
        .map(|n| Ok(Matrix::row_vector(pcoh::rho_inf_n(b, n)?.coeffs().to_vec())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Cone { kind: ConeKind::DrawDelete, apex: 1, param: 1, legs })
}

/// Inverse of [`cone_from_bang`]: the top leg of a compatible cone.
pub fn bang_from_cone(chain: &DDChain, alphabet: &Alphabet, cone: &Cone) -> Result<BangElement> {
    chain.check_shape(cone, ConeKind::DrawDelete)?;
    if cone.apex != 1 || cone.param != 1 {
        return Err(Error::Dimension("a !X element is a cone from the unit".into()));
    }
    if let (dev, Some(level)) = chain.cone_deviation(cone)? {
        if !dev.is_zero() {
            return Err(Error::IncompatibleCone { level });
        }
    }
    let top = cone.legs.last().ok_or_else(|| Error::Dimension("empty cone".into()))?;
    BangElement::new(alphabet.clone(), cone.legs.len() - 1, top.entries().to_vec())
}
