//! Finite index sets: the sources and targets of kernels and PCS matrices.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiset::{binomial, Alphabet};

/// Descriptor of a finite, canonically ordered index set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexSpace {
    /// The one-point set: monoidal unit and terminal object.
    Unit,
    Alphabet(Alphabet),
    /// `base^{⊗n}`, Kronecker order.
    Tuples { base: Box<IndexSpace>, n: usize },
    /// Size-`n` multisets over `base`.
    Multisets { base: Box<IndexSpace>, n: usize },
    /// Multisets of size ≤ `n` over `base`; the web of `M_n(base & 1)`.
    BoundedMultisets { base: Box<IndexSpace>, n: usize },
    Product { left: Box<IndexSpace>, right: Box<IndexSpace> },
    /// Disjoint union, left block first; the web of a cartesian product.
    With { left: Box<IndexSpace>, right: Box<IndexSpace> },
}

impl IndexSpace {
    pub fn alphabet(a: &Alphabet) -> Self {
        IndexSpace::Alphabet(a.clone())
    }

    pub fn tuples(base: IndexSpace, n: usize) -> Self {
        IndexSpace::Tuples { base: Box::new(base), n }
    }

    pub fn multisets(base: IndexSpace, n: usize) -> Self {
        IndexSpace::Multisets { base: Box::new(base), n }
    }

    pub fn bounded_multisets(base: IndexSpace, n: usize) -> Self {
        IndexSpace::BoundedMultisets { base: Box::new(base), n }
    }

    pub fn product(left: IndexSpace, right: IndexSpace) -> Self {
        IndexSpace::Product { left: Box::new(left), right: Box::new(right) }
    }

    pub fn with(left: IndexSpace, right: IndexSpace) -> Self {
        IndexSpace::With { left: Box::new(left), right: Box::new(right) }
    }

    pub fn size(&self) -> usize {
        match self {
            IndexSpace::Unit => 1,
            IndexSpace::Alphabet(a) => a.len(),
            IndexSpace::Tuples { base, n } => base.size().pow(*n as u32),
            IndexSpace::Multisets { base, n } => {
                let d = base.size() as u64;
                if d == 0 {
                    return usize::from(*n == 0);
                }
                binomial(*n as u64 + d - 1, d - 1).to_usize().unwrap_or(usize::MAX)
            }
            IndexSpace::BoundedMultisets { base, n } => {
                let d = base.size() as u64;
                binomial(*n as u64 + d, d).to_usize().unwrap_or(usize::MAX)
            }
            IndexSpace::Product { left, right } => left.size() * right.size(),
            IndexSpace::With { left, right } => left.size() + right.size(),
        }
    }

    /// Flattened tensor factors, used to decide whether two descriptors
    /// denote the same ordered set (`X^{⊗n} ⊗ X` is `X^{⊗(n+1)}`).
    fn factors(&self) -> Vec<(IndexSpace, usize)> {
        let mut out: Vec<(IndexSpace, usize)> = Vec::new();
        let push = |base: IndexSpace, n: usize, out: &mut Vec<(IndexSpace, usize)>| {
            if n == 0 {
                return;
            }
            if let Some(last) = out.last_mut() {
                if last.0 == base {
                    last.1 += n;
                    return;
                }
            }
            out.push((base, n));
        };
        match self {
            IndexSpace::Unit => {}
            // size ≤ n over B is size n over B & 1, padded by the unit point
            IndexSpace::BoundedMultisets { base, n } => push(
                IndexSpace::multisets(IndexSpace::with((**base).clone(), IndexSpace::Unit), *n),
                1,
                &mut out,
            ),
            IndexSpace::Alphabet(_) | IndexSpace::Multisets { .. } | IndexSpace::With { .. } => {
                push(self.clone(), 1, &mut out)
            }
            IndexSpace::Tuples { base, n } => {
                for (b, m) in base.factors() {
                    // (b^m)^n only flattens when the base is a single factor
                    push(b, m * n, &mut out);
                }
            }
            IndexSpace::Product { left, right } => {
                for (b, m) in left.factors().into_iter().chain(right.factors()) {
                    push(b, m, &mut out);
                }
            }
        }
        out
    }

    pub fn same_set(&self, other: &IndexSpace) -> bool {
        self.factors() == other.factors()
    }

    pub fn ensure_same(&self, other: &IndexSpace) -> Result<()> {
        if self.same_set(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch { left: self.to_string(), right: other.to_string() })
        }
    }
}

impl fmt::Display for IndexSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSpace::Unit => write!(f, "1"),
            IndexSpace::Alphabet(a) => write!(f, "{{{}}}", a.symbols().join(",")),
            IndexSpace::Tuples { base, n } => write!(f, "{base}^{n}"),
            IndexSpace::Multisets { base, n } => write!(f, "M{n}({base})"),
            IndexSpace::BoundedMultisets { base, n } => write!(f, "M{n}({base}&1)"),
            IndexSpace::Product { left, right } => write!(f, "({left}⊗{right})"),
            IndexSpace::With { left, right } => write!(f, "({left}&{right})"),
        }
    }
}
