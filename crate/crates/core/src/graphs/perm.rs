use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::NodeId;

/// A bijection on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<NodeId>", into = "Vec<NodeId>")]
pub struct Permutation {
    mapping: Vec<NodeId>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            mapping: (0..n as NodeId).collect(),
        }
    }

    pub fn from_vec(mapping: Vec<NodeId>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &x in &mapping {
            let x = x as usize;
            if x >= n {
                return Err(Error::NotAPermutation(format!("value {x} out of range 0..{n}")));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation(format!("value {x} repeated")));
            }
        }
        Ok(Permutation { mapping })
    }

    /// Uniformly random permutation (Fisher-Yates).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut mapping: Vec<NodeId> = (0..n as NodeId).collect();
        mapping.shuffle(rng);
        Permutation { mapping }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> NodeId {
        self.mapping[v]
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.mapping
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.mapping.iter().enumerate() {
            inv[x as usize] = i as NodeId;
        }
        Permutation { mapping: inv }
    }

    /// `then ∘ self`: apply `self` first.
    pub fn then(&self, then: &Permutation) -> Result<Permutation> {
        if self.len() != then.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: then.len(),
            });
        }
        Ok(Permutation {
            mapping: self.mapping.iter().map(|&x| then.apply(x as usize)).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &x)| i == x as usize)
    }
}

impl TryFrom<Vec<NodeId>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<NodeId>) -> Result<Self> {
        Permutation::from_vec(v)
    }
}

impl From<Permutation> for Vec<NodeId> {
    fn from(p: Permutation) -> Self {
        p.mapping
    }
}
