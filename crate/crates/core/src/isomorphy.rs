//! Isomorphism, automorphisms, isotopy and canonical forms.
//!
//! Isomorphisms are found by backtracking over element images. Candidates
//! are restricted to elements with the same invariant vector (cycle types
//! of both translations and a few inverse-map facts), and every assignment
//! is closed under the multiplication before branching again, so in
//! practice only generators are ever branched on.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::isotopy::{is_isotopism, principal_isotope, IsotopismTriple};
use crate::loops::FiniteLoop;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct ElementInvariant {
    left_cycles: Vec<usize>,
    right_cycles: Vec<usize>,
    idempotent: bool,
    self_inverse: bool,
    two_sided_inverse: bool,
}

fn invariants(l: &FiniteLoop) -> Vec<ElementInvariant> {
    (0..l.order())
        .map(|x| ElementInvariant {
            left_cycles: l.lt(x).cycle_type(),
            right_cycles: l.rt(x).cycle_type(),
            idempotent: l.mul(x, x) == x,
            self_inverse: l.right_inverse(x) == x,
            two_sided_inverse: l.two_sided_inverse(x).is_some(),
        })
        .collect()
}

const UNMAPPED: usize = usize::MAX;

struct Search<'a> {
    g: &'a FiniteLoop,
    h: &'a FiniteLoop,
    inv_g: Vec<ElementInvariant>,
    inv_h: Vec<ElementInvariant>,
    map: Vec<usize>,
    used: Vec<bool>,
    trail: Vec<usize>,
    first_only: bool,
    found: Vec<Permutation>,
}

impl Search<'_> {
    fn assign(&mut self, x: usize, y: usize) -> bool {
        if self.used[y] || self.inv_g[x] != self.inv_h[y] {
            return false;
        }
        self.map[x] = y;
        self.used[y] = true;
        self.trail.push(x);
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().unwrap();
            self.used[self.map[x]] = false;
            self.map[x] = UNMAPPED;
        }
    }

    /// Extends the partial map to everything its domain generates; false on
    /// a contradiction.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            let domain = self.trail.clone();
            for &a in &domain {
                for &b in &domain {
                    let c = self.g.mul(a, b);
                    let image = self.h.mul(self.map[a], self.map[b]);
                    if self.map[c] == UNMAPPED {
                        if !self.assign(c, image) {
                            return false;
                        }
                        changed = true;
                    } else if self.map[c] != image {
                        return false;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn dfs(&mut self) {
        let Some(x) = self.map.iter().position(|&m| m == UNMAPPED) else {
            let candidate = Permutation::from_images_unchecked(self.map.clone());
            self.found.push(candidate);
            return;
        };
        for y in 0..self.h.order() {
            if self.first_only && !self.found.is_empty() {
                return;
            }
            let mark = self.trail.len();
            if self.assign(x, y) && self.propagate() {
                self.dfs();
            }
            self.undo_to(mark);
        }
    }
}

fn search(g: &FiniteLoop, h: &FiniteLoop, first_only: bool) -> Vec<Permutation> {
    let n = g.order();
    if n != h.order() || g.j_rho().cycle_type() != h.j_rho().cycle_type() {
        return Vec::new();
    }
    let inv_g = invariants(g);
    let inv_h = invariants(h);
    if inv_g.iter().sorted().ne(inv_h.iter().sorted()) {
        return Vec::new();
    }
    let mut s = Search {
        g,
        h,
        inv_g,
        inv_h,
        map: vec![UNMAPPED; n],
        used: vec![false; n],
        trail: Vec::new(),
        first_only,
        found: Vec::new(),
    };
    if s.assign(g.identity(), h.identity()) && s.propagate() {
        s.dfs();
    }
    for a in &s.found {
        let t = IsotopismTriple::isomorphism(a.clone());
        assert!(
            is_isotopism(g.as_quasigroup(), h.as_quasigroup(), &t).unwrap_or(false),
            "search produced a non-isomorphism"
        );
    }
    s.found
}

/// An `A` with `xA ∘ yA = (x·y)A`, if one exists.
pub fn find_isomorphism(g: &FiniteLoop, h: &FiniteLoop) -> Option<Permutation> {
    search(g, h, true).pop()
}

/// All automorphisms, sorted by image array.
pub fn automorphisms(g: &FiniteLoop) -> Vec<Permutation> {
    let mut all = search(g, g, false);
    all.sort();
    all
}

/// An isotopism `G → H`, found by testing every principal isotope of `G`
/// for isomorphism with `H`.
pub fn are_isotopic(g: &FiniteLoop, h: &FiniteLoop) -> Option<IsotopismTriple> {
    let n = g.order();
    if n != h.order() {
        return None;
    }
    for f in 0..n {
        for gg in 0..n {
            let p = principal_isotope(g, f, gg).expect("valid elements");
            if let Some(a) = find_isomorphism(&p, h) {
                let t = IsotopismTriple {
                    a: g.rt(gg).then(&a),
                    b: g.lt(f).then(&a),
                    c: a,
                };
                debug_assert!(is_isotopism(g.as_quasigroup(), h.as_quasigroup(), &t).unwrap());
                return Some(t);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    #[serde(with = "loop_rows")]
    pub canonical: FiniteLoop,
    /// Maps each input element to its canonical label.
    pub relabeling: Permutation,
}

mod loop_rows {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::loops::FiniteLoop;

    pub fn serialize<S: Serializer>(l: &FiniteLoop, s: S) -> Result<S::Ok, S::Error> {
        l.rows().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<FiniteLoop, D::Error> {
        let rows = Vec::<Vec<usize>>::deserialize(d)?;
        FiniteLoop::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Writes the table relabelled by `order` (new label `i` is old element
/// `order[i]`) into `out`, aborting as soon as it compares greater than
/// `best`. Returns true when the result is strictly smaller.
fn relabelled_smaller(l: &FiniteLoop, order: &[usize], to_new: &mut [usize], best: &[usize], out: &mut [usize]) -> bool {
    let n = l.order();
    for (new, &old) in order.iter().enumerate() {
        to_new[old] = new;
    }
    let mut decided_smaller = false;
    for i in 0..n {
        for j in 0..n {
            let v = to_new[l.mul(order[i], order[j])];
            out[i * n + j] = v;
            if !decided_smaller {
                match v.cmp(&best[i * n + j]) {
                    std::cmp::Ordering::Less => decided_smaller = true,
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
    }
    decided_smaller
}

/// Lexicographically least table over all relabelings sending the identity
/// to 0. Cost is `(n-1)!` relabelings with early abort.
pub fn canonical_form(g: &FiniteLoop) -> CanonicalForm {
    let n = g.order();
    let e = g.identity();
    let others: Vec<usize> = (0..n).filter(|&x| x != e).collect();
    let mut best = vec![usize::MAX; n * n];
    let mut best_order: Vec<usize> = Vec::new();
    let mut scratch = vec![0; n * n];
    let mut to_new = vec![0; n];
    for perm in others.iter().copied().permutations(others.len()) {
        let mut order = Vec::with_capacity(n);
        order.push(e);
        order.extend(perm);
        if relabelled_smaller(g, &order, &mut to_new, &best, &mut scratch) {
            std::mem::swap(&mut best, &mut scratch);
            best_order = order;
        }
    }
    let mut to_new = vec![0; n];
    for (new, &old) in best_order.iter().enumerate() {
        to_new[old] = new;
    }
    CanonicalForm {
        canonical: FiniteLoop::from_flat_unchecked(n, best),
        relabeling: Permutation::from_images_unchecked(to_new),
    }
}

/// Whether a reduced table (identity 0) equals its own canonical form.
pub fn is_canonical(n: usize, table: &[usize]) -> bool {
    let l = FiniteLoop::from_flat_unchecked(n, table.to_vec());
    let mut scratch = vec![0; n * n];
    let mut to_new = vec![0; n];
    (1..n).permutations(n - 1).all(|perm| {
        let mut order = Vec::with_capacity(n);
        order.push(0);
        order.extend(perm);
        !relabelled_smaller(&l, &order, &mut to_new, table, &mut scratch)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_isomorphism() {
        let s3 = FiniteLoop::symmetric3();
        let a = find_isomorphism(&s3, &s3).unwrap();
        assert!(is_isotopism(s3.as_quasigroup(), s3.as_quasigroup(), &IsotopismTriple::isomorphism(a)).unwrap());
    }

    #[test]
    fn z4_and_klein_are_not_isomorphic() {
        assert!(find_isomorphism(&FiniteLoop::cyclic(4), &FiniteLoop::klein_four()).is_none());
        assert!(find_isomorphism(&FiniteLoop::cyclic(4), &FiniteLoop::cyclic(5)).is_none());
    }

    #[test]
    fn relabelled_copy_is_found() {
        let s3 = FiniteLoop::symmetric3();
        let sigma = Permutation::from_images(vec![0, 4, 2, 5, 1, 3]).unwrap();
        let h = s3.relabel(&sigma).unwrap();
        let a = find_isomorphism(&s3, &h).unwrap();
        assert!(is_isotopism(s3.as_quasigroup(), h.as_quasigroup(), &IsotopismTriple::isomorphism(a)).unwrap());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&FiniteLoop::cyclic(3)).len(), 2);
        assert_eq!(automorphisms(&FiniteLoop::cyclic(4)).len(), 2);
        assert_eq!(automorphisms(&FiniteLoop::klein_four()).len(), 6);
        assert_eq!(automorphisms(&FiniteLoop::symmetric3()).len(), 6);
    }

    #[test]
    fn automorphisms_form_a_group() {
        for l in crate::enumeration::enumerate_loops(5).unwrap() {
            let auts = automorphisms(&l);
            assert!(auts.contains(&Permutation::identity(5)));
            for a in &auts {
                assert!(auts.contains(&a.inverse()));
                for b in &auts {
                    assert!(auts.contains(&a.then(b)));
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let s3 = FiniteLoop::symmetric3();
        let c0 = canonical_form(&s3);
        for images in [vec![0, 2, 1, 5, 4, 3], vec![3, 1, 0, 2, 5, 4]] {
            let h = s3.relabel(&Permutation::from_images(images).unwrap()).unwrap();
            let c = canonical_form(&h);
            assert_eq!(c.canonical, c0.canonical);
            assert_eq!(c.canonical.identity(), 0);
            assert_eq!(h.relabel(&c.relabeling).unwrap(), c.canonical);
        }
    }

    #[test]
    fn canonical_form_of_canonical_loop_is_unchanged() {
        // the natural labelling of Z4 is not the smallest one
        let z4 = FiniteLoop::cyclic(4);
        let c = canonical_form(&z4);
        assert_ne!(c.canonical, z4);
        assert!(!is_canonical(4, z4.table()));
        assert!(is_canonical(4, c.canonical.table()));
        assert_eq!(c.canonical.rows()[1], vec![1, 0, 3, 2]);
        let again = canonical_form(&c.canonical);
        assert_eq!(again.canonical, c.canonical);
    }

    #[test]
    fn isotopic_principal_isotope_is_found() {
        let l = crate::enumeration::enumerate_loops(5).unwrap().nth(17).unwrap();
        let h = principal_isotope(&l, 2, 3).unwrap();
        let t = are_isotopic(&l, &h).unwrap();
        assert!(is_isotopism(l.as_quasigroup(), h.as_quasigroup(), &t).unwrap());
        assert!(are_isotopic(&FiniteLoop::cyclic(4), &FiniteLoop::klein_four()).is_none());
    }
}
