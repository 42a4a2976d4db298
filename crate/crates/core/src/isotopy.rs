//! Isotopes, isotopisms and the T-conditions.
//!
//! A triple `(A, B, C)` of bijections is an isotopism `(G,·) → (H,∘)` when
//! `xA ∘ yB = (x·y)C` for all `x, y`. The `f,g`-principal isotope of a loop
//! is the image under `(R_g, L_f, I)`, i.e. `x ∘ y = (xR_g^{-1})·(yL_f^{-1})`,
//! whose identity is `f·g`.
//!
//! The T-conditions compare the inverse maps `J'_ρ, J'_λ` of the isotope,
//! always read off the isotope's own table, with conjugates of `J_ρ, J_λ`:
//!
//! | flag  | equality                 |
//! |-------|--------------------------|
//! | `t1`  | `A = B`                  |
//! | `t21` | `J'_ρ = C^{-1} J_ρ B`    |
//! | `t22` | `J'_ρ = A^{-1} J_ρ C`    |
//! | `t31` | `J'_λ = C^{-1} J_λ A`    |
//! | `t32` | `J'_λ = B^{-1} J_λ C`    |
//!
//! with `t2 = t21 ∧ t22`, `t3 = t31 ∧ t32` and `t = t1 ∧ (t2 ∨ t3)`.

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{LoopError, Result};
use crate::loops::{CayleyTable, FiniteLoop, Quasigroup, Structure};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IsotopismTriple {
    #[serde(rename = "A")]
    pub a: Permutation,
    #[serde(rename = "B")]
    pub b: Permutation,
    #[serde(rename = "C")]
    pub c: Permutation,
}

// Accepts both `{"A":[..],"B":[..],"C":[..]}` and `[[..],[..],[..]]`.
impl<'de> Deserialize<'de> for IsotopismTriple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Named {
                #[serde(rename = "A")]
                a: Permutation,
                #[serde(rename = "B")]
                b: Permutation,
                #[serde(rename = "C")]
                c: Permutation,
            },
            Array([Permutation; 3]),
        }
        let (a, b, c) = match Repr::deserialize(d)? {
            Repr::Named { a, b, c } => (a, b, c),
            Repr::Array([a, b, c]) => (a, b, c),
        };
        let t = IsotopismTriple { a, b, c };
        t.degree().map_err(serde::de::Error::custom)?;
        Ok(t)
    }
}

impl IsotopismTriple {
    pub fn identity(n: usize) -> Self {
        Self::isomorphism(Permutation::identity(n))
    }

    /// `(A, A, A)`.
    pub fn isomorphism(a: Permutation) -> Self {
        Self {
            b: a.clone(),
            c: a.clone(),
            a,
        }
    }

    /// `(R_g, L_f, I)`.
    pub fn principal(l: &FiniteLoop, f: usize, g: usize) -> Result<Self> {
        Ok(Self {
            a: l.right_translation(g)?,
            b: l.left_translation(f)?,
            c: Permutation::identity(l.order()),
        })
    }

    /// Common degree of the three components.
    pub fn degree(&self) -> Result<usize> {
        let n = self.a.degree();
        for p in [&self.b, &self.c] {
            if p.degree() != n {
                return Err(LoopError::DegreeMismatch {
                    left: n,
                    right: p.degree(),
                });
            }
        }
        Ok(n)
    }

    fn expect_degree(&self, n: usize) -> Result<()> {
        let d = self.degree()?;
        if d != n {
            return Err(LoopError::DegreeMismatch { left: n, right: d });
        }
        Ok(())
    }
}

/// Translation elements of a principal isotope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrincipalIsotopeSpec {
    pub f: usize,
    pub g: usize,
}

impl PrincipalIsotopeSpec {
    pub fn triple(&self, l: &FiniteLoop) -> Result<IsotopismTriple> {
        IsotopismTriple::principal(l, self.f, self.g)
    }

    pub fn build(&self, l: &FiniteLoop) -> Result<FiniteLoop> {
        principal_isotope(l, self.f, self.g)
    }
}

/// The quasigroup `a ∘ b = ((aA^{-1})·(bB^{-1}))C`.
pub fn isotope_of(q: &Quasigroup, t: &IsotopismTriple) -> Result<Quasigroup> {
    let n = q.order();
    t.expect_degree(n)?;
    let (ai, bi) = (t.a.inverse(), t.b.inverse());
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = t.c.apply(q.mul(ai.apply(a), bi.apply(b)));
        }
    }
    Ok(Quasigroup::from_flat_unchecked(n, table))
}

/// Isotope of a loop, promoted to a loop when it has a two-sided identity.
pub fn apply_isotopism(l: &FiniteLoop, t: &IsotopismTriple) -> Result<Structure> {
    isotope_of(l.as_quasigroup(), t).map(Structure::from)
}

/// `xA ∘ yB = (x·y)C` for all `x, y`.
pub fn is_isotopism<G: CayleyTable, H: CayleyTable>(g: &G, h: &H, t: &IsotopismTriple) -> Result<bool> {
    let n = g.order();
    if h.order() != n {
        return Err(LoopError::DegreeMismatch {
            left: n,
            right: h.order(),
        });
    }
    t.expect_degree(n)?;
    Ok((0..n).all(|x| (0..n).all(|y| h.mul(t.a.apply(x), t.b.apply(y)) == t.c.apply(g.mul(x, y)))))
}

/// The `f,g`-principal isotope `x ∘ y = (xR_g^{-1})·(yL_f^{-1})`.
pub fn principal_isotope(l: &FiniteLoop, f: usize, g: usize) -> Result<FiniteLoop> {
    let n = l.order();
    let rg_inv = l.right_translation(g)?.inverse();
    let lf_inv = l.left_translation(f)?.inverse();
    let mut table = vec![0; n * n];
    for x in 0..n {
        let xg = rg_inv.apply(x);
        for y in 0..n {
            table[x * n + y] = l.mul(xg, lf_inv.apply(y));
        }
    }
    let iso = FiniteLoop::from_flat_unchecked(n, table);
    assert_eq!(iso.identity(), l.mul(f, g), "principal isotope identity is f·g");
    Ok(iso)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TConditionReport {
    pub t1: bool,
    pub t21: bool,
    pub t22: bool,
    pub t31: bool,
    pub t32: bool,
    pub t2: bool,
    pub t3: bool,
    pub t: bool,
}

impl TConditionReport {
    pub fn from_primitive(t1: bool, t21: bool, t22: bool, t31: bool, t32: bool) -> Self {
        let t2 = t21 && t22;
        let t3 = t31 && t32;
        Self {
            t1,
            t21,
            t22,
            t31,
            t32,
            t2,
            t3,
            t: t1 && (t2 || t3),
        }
    }

    pub fn is_consistent(&self) -> bool {
        *self == Self::from_primitive(self.t1, self.t21, self.t22, self.t31, self.t32)
    }
}

/// Evaluates every T sub-condition for an isotopism `t : G → H`.
pub fn t_conditions(g: &FiniteLoop, h: &FiniteLoop, t: &IsotopismTriple) -> Result<TConditionReport> {
    if !is_isotopism(g, h, t)? {
        return Err(LoopError::NotAnIsotopism);
    }
    Ok(t_conditions_unchecked(g, h, t))
}

pub(crate) fn t_conditions_unchecked(g: &FiniteLoop, h: &FiniteLoop, t: &IsotopismTriple) -> TConditionReport {
    let (jr, jl) = g.inverse_maps();
    let (jr2, jl2) = h.inverse_maps();
    let (ai, bi, ci) = (t.a.inverse(), t.b.inverse(), t.c.inverse());
    TConditionReport::from_primitive(
        t.a == t.b,
        *jr2 == Permutation::product([&ci, jr, &t.b]),
        *jr2 == Permutation::product([&ai, jr, &t.c]),
        *jl2 == Permutation::product([&ci, jl, &t.a]),
        *jl2 == Permutation::product([&bi, jl, &t.c]),
    )
}

/// `J'_ρ = A^{-1}J_ρA` or `J'_λ = A^{-1}J_λA` for a bijection `A : G → H`.
pub fn weak_t21(g: &FiniteLoop, h: &FiniteLoop, a: &Permutation) -> Result<bool> {
    let n = g.order();
    for d in [h.order(), a.degree()] {
        if d != n {
            return Err(LoopError::DegreeMismatch { left: n, right: d });
        }
    }
    let ai = a.inverse();
    Ok(*h.j_rho() == Permutation::product([&ai, g.j_rho(), a])
        || *h.j_lambda() == Permutation::product([&ai, g.j_lambda(), a]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TWitness {
    pub f: usize,
    pub g: usize,
    pub report: TConditionReport,
}

/// Every `(f, g)` whose principal isotope satisfies the full T condition,
/// in `f`-major order.
pub fn find_t_witnesses(l: &FiniteLoop) -> Vec<TWitness> {
    let n = l.order();
    (0..n)
        .into_par_iter()
        .map(|f| {
            (0..n)
                .filter_map(|g| {
                    let h = principal_isotope(l, f, g).expect("valid elements");
                    let t = IsotopismTriple::principal(l, f, g).expect("valid elements");
                    let report = t_conditions_unchecked(l, &h, &t);
                    report.t.then_some(TWitness { f, g, report })
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// `xA · yB = (x·y)C` within `l`.
pub fn is_autotopism(l: &FiniteLoop, t: &IsotopismTriple) -> Result<bool> {
    is_isotopism(l, l, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_triple_reproduces_the_loop() {
        let l = FiniteLoop::symmetric3();
        let s = apply_isotopism(&l, &IsotopismTriple::identity(6)).unwrap();
        assert_eq!(s, Structure::Loop(l));
    }

    #[test]
    fn principal_triple_matches_principal_isotope() {
        let l = FiniteLoop::symmetric3();
        for f in 0..6 {
            for g in 0..6 {
                let t = IsotopismTriple::principal(&l, f, g).unwrap();
                let via_triple = apply_isotopism(&l, &t).unwrap().into_loop().unwrap();
                assert_eq!(via_triple, principal_isotope(&l, f, g).unwrap());
                assert!(is_isotopism(&l, &via_triple, &t).unwrap());
            }
        }
    }

    #[test]
    fn z3_relabelled_by_a_transposition() {
        // a ∘ b = ((a(0 1)) + (b(0 1)))(0 1)
        let z3 = FiniteLoop::cyclic(3);
        let s = perm(&[1, 0, 2]);
        let t = IsotopismTriple::isomorphism(s);
        let q = apply_isotopism(&z3, &t).unwrap();
        assert_eq!(q.rows(), vec![vec![2, 0, 1], vec![0, 1, 2], vec![1, 2, 0]]);
        assert_eq!(q.identity(), Some(1));
    }

    #[test]
    fn general_isotope_may_lack_identity() {
        let z3 = FiniteLoop::cyclic(3);
        let t = IsotopismTriple {
            a: perm(&[1, 0, 2]),
            b: Permutation::identity(3),
            c: Permutation::identity(3),
        };
        // 1 is a left identity, but 0 and 1 need different right identities
        assert!(matches!(apply_isotopism(&z3, &t).unwrap(), Structure::Quasigroup(_)));
    }

    #[test]
    fn z4_principal_isotope_formula() {
        // x ∘ y = (x - 2) + (y - 1) = x + y - 3, identity 3
        let z4 = FiniteLoop::cyclic(4);
        let h = principal_isotope(&z4, 1, 2).unwrap();
        assert_eq!(h.identity(), 3);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(h.mul(x, y), (x + y + 1) % 4);
            }
        }
        assert_eq!(principal_isotope(&z4, 0, 0).unwrap(), z4);
        assert!(principal_isotope(&z4, 4, 0).is_err());
    }

    #[test]
    fn perturbed_triple_is_rejected() {
        let l = FiniteLoop::symmetric3();
        let h = principal_isotope(&l, 2, 4).unwrap();
        let mut t = IsotopismTriple::principal(&l, 2, 4).unwrap();
        assert!(is_isotopism(&l, &h, &t).unwrap());
        let mut c = t.c.clone().into_images();
        c.swap(1, 2);
        t.c = perm(&c);
        assert!(!is_isotopism(&l, &h, &t).unwrap());
        assert!(matches!(t_conditions(&l, &h, &t).unwrap_err(), LoopError::NotAnIsotopism));
    }

    #[test]
    fn trivial_isotope_satisfies_every_condition() {
        let l = FiniteLoop::symmetric3();
        let r = t_conditions(&l, &l, &IsotopismTriple::identity(6)).unwrap();
        assert_eq!(r, TConditionReport::from_primitive(true, true, true, true, true));
        assert!(r.t);
    }

    #[test]
    fn z3_one_one_isotope() {
        let z3 = FiniteLoop::cyclic(3);
        let h = principal_isotope(&z3, 1, 1).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(h.mul(x, y), (x + y + 1) % 3);
            }
        }
        // J'_ρ : x ↦ 1 - x, and J_ρ L_1 : x ↦ -x ↦ 1 - x
        assert_eq!(h.j_rho().images(), &[1, 0, 2]);
        let t = IsotopismTriple::principal(&z3, 1, 1).unwrap();
        let r = t_conditions(&z3, &h, &t).unwrap();
        assert!(r.t1 && r.t21 && r.t && r.is_consistent());
    }

    #[test]
    fn noncommuting_translations_break_t1() {
        let s3 = FiniteLoop::symmetric3();
        let (f, g) = (0..6)
            .flat_map(|f| (0..6).map(move |g| (f, g)))
            .find(|&(f, g)| f != g && s3.rt(g) != s3.lt(f))
            .unwrap();
        let h = principal_isotope(&s3, f, g).unwrap();
        let r = t_conditions(&s3, &h, &IsotopismTriple::principal(&s3, f, g).unwrap()).unwrap();
        assert!(!r.t1 && !r.t);
    }

    #[test]
    fn weak_t21_examples() {
        let s3 = FiniteLoop::symmetric3();
        assert!(weak_t21(&s3, &s3, &Permutation::identity(6)).unwrap());
        let a = perm(&[0, 3, 5, 1, 2, 4]);
        let h = s3.relabel(&a).unwrap();
        assert!(weak_t21(&s3, &h, &a).unwrap());
        assert!(weak_t21(&s3, &h, &Permutation::identity(5)).is_err());
    }

    #[test]
    fn weak_t21_fails_between_z4_and_klein() {
        use itertools::Itertools;
        let (z4, k) = (FiniteLoop::cyclic(4), FiniteLoop::klein_four());
        // J_ρ of Z_4 is (1 3); Klein's is the identity, and conjugation keeps cycle type
        assert_eq!(z4.j_rho().cycle_type(), vec![2, 1, 1]);
        assert!(k.j_rho().is_identity());
        for images in (0..4).permutations(4) {
            assert!(!weak_t21(&z4, &k, &perm(&images)).unwrap());
        }
    }

    #[test]
    fn cyclic_witnesses() {
        let pairs = |n| -> Vec<(usize, usize)> {
            find_t_witnesses(&FiniteLoop::cyclic(n)).iter().map(|w| (w.f, w.g)).collect()
        };
        assert_eq!(pairs(3), vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(pairs(4), vec![(0, 0)]);
        assert_eq!(pairs(6), vec![(0, 0), (2, 2), (4, 4)]);
    }

    #[test]
    fn abelian_autotopism() {
        let z5 = FiniteLoop::cyclic(5);
        assert!(is_autotopism(&z5, &IsotopismTriple::identity(5)).unwrap());
        for g in 0..5 {
            let t = IsotopismTriple {
                a: z5.rt(g),
                b: z5.lt(g),
                c: z5.lt(z5.mul(g, g)),
            };
            assert!(is_autotopism(&z5, &t).unwrap());
        }
    }

    #[test]
    fn triple_json_forms() {
        let t = IsotopismTriple::principal(&FiniteLoop::cyclic(3), 1, 2).unwrap();
        let named = serde_json::to_string(&t).unwrap();
        assert_eq!(named, r#"{"A":[2,0,1],"B":[1,2,0],"C":[0,1,2]}"#);
        let back: IsotopismTriple = serde_json::from_str(&named).unwrap();
        assert_eq!(back, t);
        let arr: IsotopismTriple = serde_json::from_str("[[2,0,1],[1,2,0],[0,1,2]]").unwrap();
        assert_eq!(arr, t);
        assert!(serde_json::from_str::<IsotopismTriple>("[[0,1],[1,0],[0,1,2]]").is_err());
    }
}
