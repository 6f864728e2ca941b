//! Finite stochastic kernels.
//!
//! Kernels are exact rational matrices between finite index sets; an entry
//! `(s, t)` is the mass given to `t` from `s`. The module also carries the
//! De Finetti draw-and-delete chain in urn coordinates (uniform-enumeration
//! equalisers), the multinomial cone, and the Monte Carlo side: sampling
//! exchangeable sequences from an atomic mixing measure and tabulating their
//! empirical frequencies.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multiset::{multinomial, multiset_of, Alphabet, Multiset, MultisetBasis, TupleIndex};
use crate::rational::{self, Q};
use crate::space::IndexSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Stochastic,
    Substochastic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FinKernel {
    source: IndexSpace,
    target: IndexSpace,
    matrix: Matrix,
    kind: KernelKind,
}

impl FinKernel {
    pub fn new(source: IndexSpace, target: IndexSpace, matrix: Matrix, kind: KernelKind) -> Result<Self> {
        if matrix.rows() != source.size() || matrix.cols() != target.size() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source,
                target
            )));
        }
        if !matrix.is_nonnegative() {
            return Err(Error::NotAKernel("negative entry".into()));
        }
        for (i, s) in matrix.row_sums().iter().enumerate() {
            let ok = match kind {
                KernelKind::Stochastic => s.is_one(),
                KernelKind::Substochastic => *s <= Q::one(),
            };
            if !ok {
                return Err(Error::NotAKernel(format!(
                    "row {i} sums to {} ({kind:?})",
                    rational::format(s)
                )));
            }
        }
        Ok(FinKernel { source, target, matrix, kind })
    }

    pub fn identity(space: IndexSpace) -> Self {
        let n = space.size();
        FinKernel { source: space.clone(), target: space, matrix: Matrix::identity(n), kind: KernelKind::Stochastic }
    }

    /// The unique kernel into the one-point space.
    pub fn discard(space: IndexSpace) -> Self {
        let n = space.size();
        FinKernel {
            source: space,
            target: IndexSpace::Unit,
            matrix: Matrix::column_vector(vec![Q::one(); n]),
            kind: KernelKind::Stochastic,
        }
    }

    /// Deterministic kernel sending `s` to `map[s]`.
    pub fn deterministic(source: IndexSpace, target: IndexSpace, map: &[usize]) -> Result<Self> {
        let mut m = Matrix::zeros(source.size(), target.size());
        if map.len() != source.size() {
            return Err(Error::Dimension("map length differs from source size".into()));
        }
        for (s, &t) in map.iter().enumerate() {
            if t >= target.size() {
                return Err(Error::IndexOutOfRange { index: t, bound: target.size() });
            }
            m[(s, t)] = Q::one();
        }
        Ok(FinKernel { source, target, matrix: m, kind: KernelKind::Stochastic })
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

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Pushes a (sub)distribution on the source forward.
    pub fn push(&self, dist: &[Q]) -> Result<Vec<Q>> {
        let row = Matrix::row_vector(dist.to_vec());
        Ok(row.then(&self.matrix)?.row(0).to_vec())
    }
}

fn combine(a: KernelKind, b: KernelKind) -> KernelKind {
    if a == KernelKind::Stochastic && b == KernelKind::Stochastic {
        KernelKind::Stochastic
    } else {
        KernelKind::Substochastic
    }
}

/// `g ∘ f`: first `f`, then `g`.
pub fn compose(f: &FinKernel, g: &FinKernel) -> Result<FinKernel> {
    f.target.ensure_same(&g.source)?;
    Ok(FinKernel {
        source: f.source.clone(),
        target: g.target.clone(),
        matrix: f.matrix.then(&g.matrix)?,
        kind: combine(f.kind, g.kind),
    })
}

/// Product kernel `f ⊗ g`.
pub fn tensor(f: &FinKernel, g: &FinKernel) -> FinKernel {
    FinKernel {
        source: IndexSpace::product(f.source.clone(), g.source.clone()),
        target: IndexSpace::product(f.target.clone(), g.target.clone()),
        matrix: f.matrix.kron(&g.matrix),
        kind: combine(f.kind, g.kind),
    }
}

/// A bijection of `{0..n}`; `image[i]` is where coordinate `i` is sent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Permutation(image));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// Every permutation of `{0..n}`, lexicographic.
    pub fn all(n: usize) -> Vec<Permutation> {
        if n == 0 {
            return vec![Permutation::identity(0)];
        }
        (0..n).permutations(n).map(|image| Permutation { image }).collect()
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(&self, other: &Permutation) -> Permutation {
        Permutation { image: other.image.iter().map(|&i| self.image[i]).collect() }
    }

    /// Index map on the `k^n` tuples: tuple `a` goes to `b` with
    /// `b[image[i]] = a[i]`.
    pub fn tuple_map(&self, k: usize) -> Vec<usize> {
        let n = self.image.len();
        (0..k.pow(n as u32))
            .map(|r| {
                let a = TupleIndex::unrank(r, k, n);
                let mut b = vec![0; n];
                for (i, &x) in a.entries.iter().enumerate() {
                    b[self.image[i]] = x;
                }
                TupleIndex::new(b).rank(k)
            })
            .collect()
    }
}

/// `Y^{⊗n}` for a finite index set.
pub fn tuple_space(base: &IndexSpace, n: usize) -> IndexSpace {
    IndexSpace::tuples(base.clone(), n)
}

/// The coordinate permutation as a deterministic kernel on `X^{⊗n}`.
pub fn symmetry_kernel(perm: &Permutation, alphabet: &Alphabet) -> FinKernel {
    let space = tuple_space(&IndexSpace::alphabet(alphabet), perm.len());
    FinKernel::deterministic(space.clone(), space, &perm.tuple_map(alphabet.len()))
        .expect("permutation map is in range")
}

/// `(1/n!) Σ_σ σ` on `k^n` tuples.
pub fn symmetrizer(k: usize, n: usize) -> Matrix {
    let size = k.pow(n as u32);
    let perms = Permutation::all(n);
    let weight = Q::new(1.into(), (perms.len() as i64).into());
    let mut m = Matrix::zeros(size, size);
    for p in &perms {
        for (a, b) in p.tuple_map(k).into_iter().enumerate() {
            m[(a, b)] += &weight;
        }
    }
    m
}

/// Maps each tuple to its multiset.
pub fn coeq_n_stoch(alphabet: &Alphabet, n: usize) -> FinKernel {
    let k = alphabet.len();
    let basis = MultisetBasis::exact(k, n);
    let map: Vec<usize> = (0..k.pow(n as u32))
        .map(|r| {
            let mu = multiset_of(&TupleIndex::unrank(r, k, n), k).expect("in range");
            basis.position(&mu).expect("complete basis")
        })
        .collect();
    let x = IndexSpace::alphabet(alphabet);
    FinKernel::deterministic(tuple_space(&x, n), IndexSpace::multisets(x, n), &map).expect("in range")
}

/// Spreads each multiset uniformly over its enumerations.
pub fn eq_n_stoch(alphabet: &Alphabet, n: usize) -> FinKernel {
    let k = alphabet.len();
    let basis = MultisetBasis::exact(k, n);
    let mut m = Matrix::zeros(basis.len(), k.pow(n as u32));
    for r in 0..k.pow(n as u32) {
        let mu = multiset_of(&TupleIndex::unrank(r, k, n), k).expect("in range");
        let i = basis.position(&mu).expect("complete basis");
        m[(i, r)] = Q::new(1.into(), multinomial(&mu).into());
    }
    let x = IndexSpace::alphabet(alphabet);
    FinKernel {
        source: IndexSpace::multisets(x.clone(), n),
        target: tuple_space(&x, n),
        matrix: m,
        kind: KernelKind::Stochastic,
    }
}

/// Urn draw-and-delete `M_{n+1}X → M_nX`: remove one ball uniformly.
pub fn dd_definetti_stoch(alphabet: &Alphabet, n: usize) -> FinKernel {
    let k = alphabet.len();
    let top = MultisetBasis::exact(k, n + 1);
    let bottom = MultisetBasis::exact(k, n);
    let mut m = Matrix::zeros(top.len(), bottom.len());
    let denom = (n + 1) as i64;
    for (i, mu) in top.items().iter().enumerate() {
        for a in 0..k {
            if let Some(nu) = mu.without(a) {
                let j = bottom.position(&nu).expect("complete basis");
                m[(i, j)] = Q::new((mu.count(a) as i64).into(), denom.into());
            }
        }
    }
    let x = IndexSpace::alphabet(alphabet);
    FinKernel {
        source: IndexSpace::multisets(x.clone(), n + 1),
        target: IndexSpace::multisets(x, n),
        matrix: m,
        kind: KernelKind::Stochastic,
    }
}

/// Point of the (sub)simplex over an alphabet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<serde_json::Value>", into = "Vec<String>")]
pub struct ProbVector {
    weights: Vec<Q>,
}

impl TryFrom<Vec<serde_json::Value>> for ProbVector {
    type Error = Error;
    fn try_from(v: Vec<serde_json::Value>) -> Result<Self> {
        ProbVector::new(v.iter().map(rational::from_json).collect::<Result<Vec<_>>>()?)
    }
}

impl From<ProbVector> for Vec<String> {
    fn from(p: ProbVector) -> Self {
        p.weights.iter().map(rational::format).collect()
    }
}

impl ProbVector {
    /// Nonnegative weights with total mass at most one.
    pub fn new(weights: Vec<Q>) -> Result<Self> {
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::NotADistribution("negative weight".into()));
        }
        let total: Q = weights.iter().sum();
        if total > Q::one() {
            return Err(Error::NotADistribution(format!("mass {} > 1", rational::format(&total))));
        }
        Ok(ProbVector { weights })
    }

    /// As [`ProbVector::new`] but requiring total mass exactly one.
    pub fn proper(weights: Vec<Q>) -> Result<Self> {
        let p = Self::new(weights)?;
        if !p.is_proper() {
            return Err(Error::NotADistribution(format!("mass {} != 1", rational::format(&p.mass()))));
        }
        Ok(p)
    }

    pub fn dirac(k: usize, a: usize) -> Self {
        let mut weights = vec![Q::zero(); k];
        weights[a] = Q::one();
        ProbVector { weights }
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn mass(&self) -> Q {
        self.weights.iter().sum()
    }

    pub fn is_proper(&self) -> bool {
        self.mass().is_one()
    }

    /// `Π_a r(a)^{μ(a)}`.
    pub fn power(&self, mu: &Multiset) -> Q {
        self.weights
            .iter()
            .zip(mu.counts())
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| num_traits::pow(w.clone(), c as usize))
            .product()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.weights.iter().map(rational::to_f64).collect()
    }
}

/// `mass(μ) = multinomial(μ) · Π r^μ` over size-`n` multisets, canonical order.
pub fn multkern(r: &ProbVector, n: usize) -> Result<Vec<Q>> {
    if !r.is_proper() {
        return Err(Error::NotADistribution("multinomial law needs a proper distribution".into()));
    }
    Ok(MultisetBasis::exact(r.len(), n)
        .items()
        .iter()
        .map(|mu| Q::from_integer(multinomial(mu).into()) * r.power(mu))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: ProbVector,
    #[serde(with = "rational::serde_q")]
    pub weight: Q,
}

/// Finitely supported (sub)probability measure on the simplex `Δ(X)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Alphabet>,
    pub atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let m = AtomicMeasure { alphabet: None, atoms };
        m.validate()?;
        Ok(m)
    }

    pub fn dirac(point: ProbVector) -> Self {
        AtomicMeasure { alphabet: None, atoms: vec![Atom { point, weight: Q::one() }] }
    }

    pub fn from_pairs(pairs: Vec<(Vec<Q>, Q)>) -> Result<Self> {
        let atoms = pairs
            .into_iter()
            .map(|(p, w)| Ok(Atom { point: ProbVector::new(p)?, weight: w }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }

    /// Points are proper distributions of one common dimension; weights are
    /// nonnegative with total at most one.
    pub fn validate(&self) -> Result<()> {
        let k = self.dimension();
        for a in &self.atoms {
            if a.point.len() != k {
                return Err(Error::Dimension("atoms of different dimensions".into()));
            }
            if !a.point.is_proper() {
                return Err(Error::NotADistribution("atom off the simplex".into()));
            }
            if a.weight.is_negative() {
                return Err(Error::NotADistribution("negative atom weight".into()));
            }
        }
        if let Some(alpha) = &self.alphabet {
            if !self.atoms.is_empty() && alpha.len() != k {
                return Err(Error::Dimension("alphabet size differs from atom dimension".into()));
            }
        }
        if self.total_weight() > Q::one() {
            return Err(Error::NotADistribution("total weight exceeds one".into()));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.atoms
            .first()
            .map(|a| a.point.len())
            .or_else(|| self.alphabet.as_ref().map(Alphabet::len))
            .unwrap_or(0)
    }

    pub fn total_weight(&self) -> Q {
        self.atoms.iter().map(|a| &a.weight).sum()
    }

    pub fn is_probability(&self) -> bool {
        self.total_weight().is_one()
    }

    fn require_probability(&self) -> Result<()> {
        self.validate()?;
        if !self.is_probability() {
            return Err(Error::NotADistribution(format!(
                "mixing measure has total weight {}",
                rational::format(&self.total_weight())
            )));
        }
        Ok(())
    }

    /// `∫ Π r^μ dμ(r)`.
    pub fn moment(&self, mu: &Multiset) -> Q {
        self.atoms.iter().map(|a| &a.weight * a.point.power(mu)).sum()
    }

    /// Law of the first `n` draws, as an urn: `Σ_j w_j · multkern(r_j, n)`.
    pub fn urn_law(&self, n: usize) -> Result<Vec<Q>> {
        let size = MultisetBasis::exact(self.dimension(), n).len();
        let mut out = vec![Q::zero(); size];
        for a in &self.atoms {
            for (o, x) in out.iter_mut().zip(multkern(&a.point, n)?) {
                *o += &a.weight * x;
            }
        }
        Ok(out)
    }
}

/// Seeded generator for trial `stream`; streams never overlap, so results do
/// not depend on how trials are scheduled across threads.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

struct MixtureSampler {
    atom: WeightedIndex<f64>,
    symbols: Vec<Option<WeightedIndex<f64>>>,
    points: Vec<Vec<f64>>,
}

impl MixtureSampler {
    fn new(mixing: &AtomicMeasure) -> Result<Self> {
        mixing.require_probability()?;
        let weights: Vec<f64> = mixing.atoms.iter().map(|a| rational::to_f64(&a.weight)).collect();
        let atom = WeightedIndex::new(&weights).map_err(|e| Error::NotADistribution(e.to_string()))?;
        let points: Vec<Vec<f64>> = mixing.atoms.iter().map(|a| a.point.to_f64()).collect();
        let symbols = points.iter().map(|p| WeightedIndex::new(p).ok()).collect();
        Ok(MixtureSampler { atom, symbols, points })
    }

    fn draw_atom<R: Rng>(&self, rng: &mut R) -> usize {
        self.atom.sample(rng)
    }

    fn draw_symbol<R: Rng>(&self, atom: usize, rng: &mut R) -> usize {
        match &self.symbols[atom] {
            Some(w) => w.sample(rng),
            None => self.points[atom].iter().position(|&x| x > 0.0).unwrap_or(0),
        }
    }
}

/// One exchangeable sequence: draw an atom by weight, then i.i.d. symbols.
pub fn simulate_exchangeable(mixing: &AtomicMeasure, length: usize, seed: u64) -> Result<Vec<usize>> {
    let sampler = MixtureSampler::new(mixing)?;
    let mut rng = trial_rng(seed, 0);
    let atom = sampler.draw_atom(&mut rng);
    Ok((0..length).map(|_| sampler.draw_symbol(atom, &mut rng)).collect())
}

/// Normalised count vector of a length-`prefix_length` prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmpiricalSample {
    pub counts: Vec<u32>,
    pub prefix_length: usize,
}

impl EmpiricalSample {
    pub fn frequency(&self) -> Vec<f64> {
        let n = self.prefix_length.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// Histogram of the empirical frequency `Z_n` over independent trials.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalLaw {
    pub prefix_length: usize,
    pub trials: usize,
    pub histogram: BTreeMap<Vec<u32>, u64>,
}

impl EmpiricalLaw {
    /// `E[Π_a Z_n(a)^{μ(a)}]`.
    pub fn moment(&self, mu: &Multiset) -> f64 {
        let n = self.prefix_length.max(1) as f64;
        let total: f64 = self
            .histogram
            .iter()
            .map(|(counts, &c)| {
                let v: f64 = counts
                    .iter()
                    .zip(mu.counts())
                    .map(|(&x, &e)| (x as f64 / n).powi(e as i32))
                    .product();
                v * c as f64
            })
            .sum();
        total / self.trials as f64
    }

    /// Variance of the frequency of symbol `a`.
    pub fn variance(&self, a: usize) -> f64 {
        let k = self.histogram.keys().next().map_or(0, Vec::len);
        let m1 = self.moment(&Multiset::singleton(k, a));
        let mut two = Multiset::empty(k);
        two = two.with(a).with(a);
        self.moment(&two) - m1 * m1
    }

    /// `frequency,count` rows (one frequency column per symbol beyond two).
    pub fn to_csv(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        let k = alphabet.len();
        if k == 2 {
            out.push_str("frequency,count\n");
        } else {
            let cols: Vec<String> = alphabet.symbols().iter().map(|s| format!("frequency_{s}")).collect();
            let _ = writeln!(out, "{},count", cols.join(","));
        }
        let n = self.prefix_length.max(1) as f64;
        for (counts, c) in &self.histogram {
            let freqs: Vec<String> = if k == 2 {
                vec![format!("{}", counts[0] as f64 / n)]
            } else {
                counts.iter().map(|&x| format!("{}", x as f64 / n)).collect()
            };
            let _ = writeln!(out, "{},{}", freqs.join(","), c);
        }
        out
    }
}

/// Simulates `trials` independent prefixes of length `n` and tabulates
/// their empirical frequencies. Trial `i` uses stream `i` of `seed`.
pub fn empirical_law(mixing: &AtomicMeasure, n: usize, trials: usize, seed: u64) -> Result<EmpiricalLaw> {
    if trials == 0 {
        return Err(Error::Dimension("at least one trial is required".into()));
    }
    let sampler = MixtureSampler::new(mixing)?;
    let k = mixing.dimension();
    let samples: Vec<Vec<u32>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let atom = sampler.draw_atom(&mut rng);
            let mut counts = vec![0u32; k];
            for _ in 0..n {
                counts[sampler.draw_symbol(atom, &mut rng)] += 1;
            }
            counts
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for s in samples {
        *histogram.entry(s).or_insert(0) += 1;
    }
    Ok(EmpiricalLaw { prefix_length: n, trials, histogram })
}

/// Draws an urn of size `n` from `multkern(r, n)` by sampling `n` symbols.
pub fn sample_urn<R: Rng>(r: &ProbVector, n: usize, rng: &mut R) -> Result<Multiset> {
    let w = WeightedIndex::new(r.to_f64()).map_err(|e| Error::NotADistribution(e.to_string()))?;
    let mut counts = vec![0u32; r.len()];
    for _ in 0..n {
        counts[w.sample(rng)] += 1;
    }
    Ok(Multiset::new(counts))
}

/// Removes `steps` balls one at a time, each uniformly from the urn.
pub fn draw_and_delete<R: Rng>(urn: &Multiset, steps: usize, rng: &mut R) -> Result<Multiset> {
    let mut mu = urn.clone();
    for _ in 0..steps {
        let size = mu.size();
        if size == 0 {
            return Err(Error::Dimension("cannot draw from an empty urn".into()));
        }
        let mut pick = rng.gen_range(0..size);
        let a = mu
            .counts()
            .iter()
            .position(|&c| {
                if pick < c {
                    true
                } else {
                    pick -= c;
                    false
                }
            })
            .expect("pick below size");
        mu = mu.without(a).expect("drawn symbol present");
    }
    Ok(mu)
}

/// Outcome of checking `σ ∘ f = f` for every coordinate permutation.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualiserReport {
    pub max_deviation: Q,
    /// A permutation attaining the maximal deviation, when it is nonzero.
    pub witness: Option<Permutation>,
}

impl EqualiserReport {
    pub fn holds(&self) -> bool {
        self.max_deviation.is_zero()
    }
}

/// Checks that `f`, a matrix into a `k^n` tuple space, is invariant under
/// every coordinate permutation.
pub fn check_symmetric(f: &Matrix, k: usize, n: usize) -> Result<EqualiserReport> {
    if f.cols() != k.pow(n as u32) {
        return Err(Error::Dimension(format!("{} columns is not {k}^{n}", f.cols())));
    }
    let mut report = EqualiserReport { max_deviation: Q::zero(), witness: None };
    for p in Permutation::all(n) {
        let moved = f.permute_columns(&p.tuple_map(k));
        let d = moved.max_abs_diff(f)?;
        if d > report.max_deviation {
            report.max_deviation = d;
            report.witness = Some(p);
        }
    }
    Ok(report)
}

/// `verify_equalises` for a kernel into `X^{⊗n}`.
pub fn verify_equalises(f: &FinKernel, n: usize) -> Result<EqualiserReport> {
    let size = f.target().size();
    let k = (1..=size.max(1))
        .find(|k| k.pow(n as u32) == size)
        .ok_or_else(|| Error::Dimension(format!("target of size {size} is not an {n}-fold power")))?;
    let k = if n == 0 { 1 } else { k };
    check_symmetric(f.matrix(), k, n)
}
