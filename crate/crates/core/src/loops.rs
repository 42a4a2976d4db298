//! Cayley-table quasigroups and loops.
//!
//! Elements are the indices `0..n`. A [`Quasigroup`] is any Latin square; a
//! [`FiniteLoop`] additionally carries its two-sided identity and the right
//! and left inverse maps `J_ρ : x ↦ x^ρ`, `J_λ : x ↦ x^λ`, computed once at
//! construction.

use std::fmt;

use crate::error::{Line, LoopError, Result};
use crate::perm::Permutation;

/// Read access to a finite binary operation given by a table.
pub trait CayleyTable {
    fn order(&self) -> usize;
    fn mul(&self, x: usize, y: usize) -> usize;
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quasigroup {
    order: usize,
    table: Vec<usize>,
}

impl Quasigroup {
    /// Validates shape, range and the Latin property.
    pub fn from_rows<R: AsRef<[usize]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(LoopError::Empty);
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(LoopError::Shape {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(LoopError::EntryOutOfRange {
                        row: i,
                        col: j,
                        value: v,
                        order: n,
                    });
                }
            }
            table.extend_from_slice(row);
        }
        let q = Self { order: n, table };
        q.check_latin()?;
        Ok(q)
    }

    pub(crate) fn from_flat_unchecked(order: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let q = Self { order, table };
        debug_assert!(q.check_latin().is_ok());
        q
    }

    fn check_latin(&self) -> Result<()> {
        let n = self.order;
        for i in 0..n {
            let mut seen = vec![false; n];
            for j in 0..n {
                let v = self.table[i * n + j];
                if std::mem::replace(&mut seen[v], true) {
                    return Err(LoopError::LatinViolation {
                        line: Line::Row(i),
                        symbol: v,
                    });
                }
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for i in 0..n {
                let v = self.table[i * n + j];
                if std::mem::replace(&mut seen[v], true) {
                    return Err(LoopError::LatinViolation {
                        line: Line::Column(j),
                        symbol: v,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y]
    }

    /// Row-major flat table.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.order..(x + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// The unique `x` with `a·x = b`.
    pub fn left_div(&self, a: usize, b: usize) -> usize {
        self.row(a).iter().position(|&v| v == b).expect("Latin row")
    }

    /// The unique `y` with `y·a = b`.
    pub fn right_div(&self, b: usize, a: usize) -> usize {
        (0..self.order)
            .find(|&y| self.mul(y, a) == b)
            .expect("Latin column")
    }

    /// The two-sided identity, if any.
    pub fn identity(&self) -> Option<usize> {
        (0..self.order).find(|&e| (0..self.order).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// Promotes to a loop when a two-sided identity exists.
    pub fn into_loop(self) -> std::result::Result<FiniteLoop, Quasigroup> {
        match self.identity() {
            Some(e) => Ok(FiniteLoop::with_identity(self, e)),
            None => Err(self),
        }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|x| (x + 1..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = self.mul(x, y);
                (0..n).all(|z| self.mul(xy, z) == self.mul(x, self.mul(y, z)))
            })
        })
    }
}

impl CayleyTable for Quasigroup {
    fn order(&self) -> usize {
        self.order
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        Quasigroup::mul(self, x, y)
    }
}

impl fmt::Debug for Quasigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quasigroup")
            .field("order", &self.order)
            .field("rows", &self.rows())
            .finish()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteLoop {
    quasi: Quasigroup,
    identity: usize,
    rho: Permutation,
    lambda: Permutation,
}

impl FiniteLoop {
    pub fn from_rows<R: AsRef<[usize]>>(rows: &[R]) -> Result<Self> {
        Quasigroup::from_rows(rows)?
            .into_loop()
            .map_err(|_| LoopError::NotALoop)
    }

    /// Builds the loop `x·y = op(x, y)` on `0..n`; `op` must define a loop.
    pub fn from_fn(n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let rows: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| op(x, y)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub(crate) fn from_flat_unchecked(order: usize, table: Vec<usize>) -> Self {
        Quasigroup::from_flat_unchecked(order, table)
            .into_loop()
            .expect("table has an identity")
    }

    fn with_identity(quasi: Quasigroup, identity: usize) -> Self {
        let n = quasi.order;
        let mut rho = vec![0; n];
        let mut lambda = vec![0; n];
        for x in 0..n {
            for y in 0..n {
                if quasi.mul(x, y) == identity {
                    rho[x] = y;
                    lambda[y] = x;
                }
            }
        }
        let rho = Permutation::from_images_unchecked(rho);
        let lambda = Permutation::from_images_unchecked(lambda);
        assert!(
            rho.then(&lambda).is_identity() && lambda.then(&rho).is_identity(),
            "J_rho and J_lambda must be mutually inverse"
        );
        Self {
            quasi,
            identity,
            rho,
            lambda,
        }
    }

    /// The cyclic group `Z_n` under addition mod `n`.
    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(n, |x, y| (x + y) % n).expect("Z_n is a loop")
    }

    /// `Z_2 × Z_2` with elements encoded as two-bit integers.
    pub fn klein_four() -> Self {
        Self::from_fn(4, |x, y| x ^ y).expect("Klein group is a loop")
    }

    /// The symmetric group on three letters, elements listed in
    /// lexicographic order of their image arrays (element 0 is the identity).
    pub fn symmetric3() -> Self {
        use itertools::Itertools;
        let perms: Vec<Permutation> = (0..3)
            .permutations(3)
            .map(|v| Permutation::from_images(v).unwrap())
            .collect();
        Self::from_fn(6, |x, y| {
            let prod = perms[x].then(&perms[y]);
            perms.iter().position(|p| *p == prod).unwrap()
        })
        .expect("S_3 is a loop")
    }

    pub fn order(&self) -> usize {
        self.quasi.order
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.quasi.mul(x, y)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[usize] {
        self.quasi.table()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.quasi.rows()
    }

    pub fn as_quasigroup(&self) -> &Quasigroup {
        &self.quasi
    }

    fn check_index(&self, x: usize) -> Result<()> {
        if x < self.order() {
            Ok(())
        } else {
            Err(LoopError::Index {
                element: x,
                order: self.order(),
            })
        }
    }

    /// `L_x : y ↦ xy`.
    pub fn left_translation(&self, x: usize) -> Result<Permutation> {
        self.check_index(x)?;
        Ok(Permutation::from_images_unchecked(self.quasi.row(x).to_vec()))
    }

    /// `R_x : y ↦ yx`.
    pub fn right_translation(&self, x: usize) -> Result<Permutation> {
        self.check_index(x)?;
        Ok(Permutation::from_images_unchecked(
            (0..self.order()).map(|y| self.mul(y, x)).collect(),
        ))
    }

    /// Crate-internal shorthand for an index already known to be valid.
    pub(crate) fn lt(&self, x: usize) -> Permutation {
        self.left_translation(x).expect("valid element")
    }

    pub(crate) fn rt(&self, x: usize) -> Permutation {
        self.right_translation(x).expect("valid element")
    }

    /// `(J_ρ, J_λ)`.
    pub fn inverse_maps(&self) -> (&Permutation, &Permutation) {
        (&self.rho, &self.lambda)
    }

    pub fn j_rho(&self) -> &Permutation {
        &self.rho
    }

    pub fn j_lambda(&self) -> &Permutation {
        &self.lambda
    }

    /// `x^ρ`, the `y` with `xy = e`.
    #[inline]
    pub fn right_inverse(&self, x: usize) -> usize {
        self.rho.apply(x)
    }

    /// `x^λ`, the `y` with `yx = e`.
    #[inline]
    pub fn left_inverse(&self, x: usize) -> usize {
        self.lambda.apply(x)
    }

    /// The two-sided inverse of `x`, when `x^ρ = x^λ`.
    pub fn two_sided_inverse(&self, x: usize) -> Option<usize> {
        let r = self.right_inverse(x);
        (r == self.left_inverse(x)).then_some(r)
    }

    pub fn has_two_sided_inverses(&self) -> bool {
        self.rho == self.lambda
    }

    pub fn left_div(&self, a: usize, b: usize) -> usize {
        self.quasi.left_div(a, b)
    }

    pub fn right_div(&self, b: usize, a: usize) -> usize {
        self.quasi.right_div(b, a)
    }

    pub fn is_commutative(&self) -> bool {
        self.quasi.is_commutative()
    }

    pub fn is_associative(&self) -> bool {
        self.quasi.is_associative()
    }

    /// The isomorphic copy of `self` along `sigma`: `xσ ∘ yσ = (x·y)σ`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<FiniteLoop> {
        let n = self.order();
        if sigma.degree() != n {
            return Err(LoopError::DegreeMismatch {
                left: n,
                right: sigma.degree(),
            });
        }
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[sigma.apply(x) * n + sigma.apply(y)] = sigma.apply(self.mul(x, y));
            }
        }
        Ok(Self::from_flat_unchecked(n, table))
    }
}

impl CayleyTable for FiniteLoop {
    fn order(&self) -> usize {
        self.quasi.order
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.quasi.mul(x, y)
    }
}

impl fmt::Debug for FiniteLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLoop")
            .field("identity", &self.identity)
            .field("rows", &self.rows())
            .finish()
    }
}

/// Result of reading a table: a loop when a two-sided identity exists,
/// otherwise a bare quasigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Loop(FiniteLoop),
    Quasigroup(Quasigroup),
}

impl Structure {
    pub fn as_quasigroup(&self) -> &Quasigroup {
        match self {
            Structure::Loop(l) => l.as_quasigroup(),
            Structure::Quasigroup(q) => q,
        }
    }

    pub fn identity(&self) -> Option<usize> {
        match self {
            Structure::Loop(l) => Some(l.identity()),
            Structure::Quasigroup(_) => None,
        }
    }

    pub fn into_loop(self) -> Result<FiniteLoop> {
        match self {
            Structure::Loop(l) => Ok(l),
            Structure::Quasigroup(_) => Err(LoopError::NotALoop),
        }
    }

    pub fn order(&self) -> usize {
        self.as_quasigroup().order()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.as_quasigroup().rows()
    }
}

impl From<Quasigroup> for Structure {
    fn from(q: Quasigroup) -> Self {
        match q.into_loop() {
            Ok(l) => Structure::Loop(l),
            Err(q) => Structure::Quasigroup(q),
        }
    }
}

/// Reads a square grid, returning a loop if it has a two-sided identity.
pub fn from_table<R: AsRef<[usize]>>(rows: &[R]) -> Result<Structure> {
    Quasigroup::from_rows(rows).map(Structure::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3_is_a_loop_with_identity_zero() {
        let s = from_table(&[[0, 1, 2], [1, 2, 0], [2, 0, 1]]).unwrap();
        assert_eq!(s.identity(), Some(0));
        let l = s.into_loop().unwrap();
        assert_eq!(l.j_rho().images(), &[0, 2, 1]);
        assert_eq!(l.j_lambda().images(), &[0, 2, 1]);
    }

    #[test]
    fn repeated_symbol_in_row_is_rejected() {
        let err = from_table(&[[0, 1], [1, 1]]).unwrap_err();
        assert!(matches!(
            err,
            LoopError::LatinViolation {
                line: Line::Row(1),
                symbol: 1
            }
        ));
    }

    #[test]
    fn repeated_symbol_in_column_is_rejected() {
        let err = from_table(&[[0, 1], [0, 1]]).unwrap_err();
        assert!(matches!(
            err,
            LoopError::LatinViolation {
                line: Line::Column(0),
                symbol: 0
            }
        ));
    }

    #[test]
    fn shape_and_range_errors() {
        assert!(matches!(
            from_table(&[vec![0, 1], vec![1]]).unwrap_err(),
            LoopError::Shape { row: 1, .. }
        ));
        assert!(matches!(
            from_table(&[[0, 2], [1, 0]]).unwrap_err(),
            LoopError::EntryOutOfRange { value: 2, .. }
        ));
        assert!(matches!(
            from_table::<[usize; 0]>(&[]).unwrap_err(),
            LoopError::Empty
        ));
    }

    #[test]
    fn quasigroup_without_identity() {
        let s = from_table(&[[1, 0, 2], [0, 2, 1], [2, 1, 0]]).unwrap();
        assert!(matches!(s, Structure::Quasigroup(_)));
        // none of the three candidates acts as identity on either side
        let q = s.as_quasigroup();
        for e in 0..3 {
            let left = (0..3).all(|x| q.mul(e, x) == x);
            let right = (0..3).all(|x| q.mul(x, e) == x);
            assert!(!(left && right));
        }
    }

    #[test]
    fn identity_may_be_any_index() {
        // Z_3 relabelled so that the identity is 2
        let l = FiniteLoop::cyclic(3)
            .relabel(&Permutation::from_images(vec![2, 0, 1]).unwrap())
            .unwrap();
        assert_eq!(l.identity(), 2);
        assert!(l.left_translation(2).unwrap().is_identity());
    }

    #[test]
    fn translations() {
        let z4 = FiniteLoop::cyclic(4);
        assert_eq!(z4.left_translation(1).unwrap().cycle_notation(), "(0 1 2 3)");
        assert!(z4.left_translation(0).unwrap().is_identity());
        assert!(z4.right_translation(0).unwrap().is_identity());
        for x in 0..4 {
            assert_eq!(z4.left_translation(x).unwrap(), z4.right_translation(x).unwrap());
        }
        assert!(matches!(
            z4.left_translation(4).unwrap_err(),
            LoopError::Index { element: 4, order: 4 }
        ));

        let s3 = FiniteLoop::symmetric3();
        assert!((0..6).any(|x| s3.left_translation(x).unwrap() != s3.right_translation(x).unwrap()));
    }

    #[test]
    fn group_inverse_maps_are_involutions() {
        for l in [FiniteLoop::cyclic(5), FiniteLoop::klein_four(), FiniteLoop::symmetric3()] {
            let (r, lam) = l.inverse_maps();
            assert_eq!(r, lam);
            assert!(r.then(r).is_identity());
        }
    }

    #[test]
    fn symmetric3_is_a_nonabelian_group() {
        let s3 = FiniteLoop::symmetric3();
        assert_eq!(s3.identity(), 0);
        assert!(s3.is_associative());
        assert!(!s3.is_commutative());
    }

    #[test]
    fn rows_round_trip() {
        let l = FiniteLoop::symmetric3();
        let back = from_table(&l.rows()).unwrap().into_loop().unwrap();
        assert_eq!(back, l);
    }
}
