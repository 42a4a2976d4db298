//! Permutations of `0..n` in postfix (left-to-right) notation.
//!
//! A permutation is stored as its image array, `image[x] = xα`. Products read
//! left to right: `x(αβ) = (xα)β`, so `p.then(&q)` applies `p` first. Every
//! identity over translations and inverse maps in this crate is written in
//! this order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    /// Builds a permutation from its image array, rejecting anything that is
    /// not a bijection on `0..n`.
    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n || seen[y] {
                return Err(LoopError::NotABijection { images: image });
            }
            seen[y] = true;
        }
        Ok(Self { image })
    }

    /// Caller guarantees `image` is a bijection.
    pub(crate) fn from_images_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(image.clone()).is_ok());
        Self { image }
    }

    /// Transposition `(a b)` on `n` points.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(LoopError::Index {
                element: a.max(b),
                order: n,
            });
        }
        let mut p = Self::identity(n);
        p.image.swap(a, b);
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// Image of `x`, i.e. `xα`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn into_images(self) -> Vec<usize> {
        self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// The product `self · other`, applying `self` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(LoopError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Same as [`compose`](Self::compose) but panics on a degree mismatch.
    pub fn then(&self, other: &Self) -> Self {
        assert_eq!(
            self.degree(),
            other.degree(),
            "composing permutations of different degree"
        );
        Self {
            image: self.image.iter().map(|&y| other.image[y]).collect(),
        }
    }

    /// Left-to-right product of a non-empty sequence.
    pub fn product<'a, I>(factors: I) -> Self
    where
        I: IntoIterator<Item = &'a Permutation>,
    {
        let mut it = factors.into_iter();
        let first = it.next().expect("empty permutation product").clone();
        it.fold(first, |acc, p| acc.then(p))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Self { image: inv }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut result = Self::identity(self.degree());
        let mut sq = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        result
    }

    /// Cycle lengths in non-increasing order (fixed points included as 1s).
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, lcm)
    }

    pub fn fixed_points(&self) -> usize {
        self.image
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x == y)
            .count()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.degree() == other.degree()
            && self
                .image
                .iter()
                .zip(&other.image)
                .all(|(&a, &b)| other.image[a] == self.image[b])
    }

    /// Disjoint-cycle notation, e.g. `(0 1 2)(3)`.
    pub fn cycle_notation(&self) -> String {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            out.push('(');
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&x.to_string());
                first = false;
                x = self.image[x];
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = LoopError;

    fn try_from(image: Vec<usize>) -> Result<Self> {
        Self::from_images(image)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.image)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}
