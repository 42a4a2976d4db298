//! Element-wise and global loop properties.
//!
//! Every predicate is a direct all-pairs (or all-triples) scan of the Cayley
//! table. Failed checks carry the lexicographically first violating tuple;
//! [`Property::violated_at`] re-evaluates a witness independently of the scan.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};
use crate::loops::FiniteLoop;
use crate::perm::Permutation;

/// The equivalent characterizations of the weak inverse property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WipForm {
    /// `xy·z = e ⟹ x·yz = e`.
    Implication,
    /// `y(xy)^ρ = x^ρ`.
    RightInverse,
    /// `(xy)^λ x = y^λ`.
    LeftInverse,
    /// `R_y J_ρ L_y = J_ρ` for every `y`.
    Translational,
    /// `L_x J_λ R_x = J_λ` for every `x`.
    TranslationalLeft,
}

/// Methods accepted by [`has_wip`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WipMethod {
    Definitional,
    Translational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Wip(WipForm),
    Cip,
    Lip,
    Rip,
    Ip,
    /// `(xy)J_ρ^m · xJ_ρ^{m+1} = yJ_ρ^m`.
    MInverse(i64),
    /// Two-sided inverses everywhere and `(xy)^{-1} = x^{-1}y^{-1}`.
    Aip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl Property {
    pub fn name(&self) -> String {
        match self {
            Property::Wip(WipForm::RightInverse) => "wip".into(),
            Property::Wip(WipForm::Implication) => "wip-implication".into(),
            Property::Wip(WipForm::LeftInverse) => "wip-left".into(),
            Property::Wip(WipForm::Translational) => "wip-translational".into(),
            Property::Wip(WipForm::TranslationalLeft) => "wip-translational-left".into(),
            Property::Cip => "cip".into(),
            Property::Lip => "lip".into(),
            Property::Rip => "rip".into(),
            Property::Ip => "ip".into(),
            Property::MInverse(m) => format!("m-inverse:{m}"),
            Property::Aip => "aip".into(),
        }
    }

    pub fn check(&self, l: &FiniteLoop) -> PropertyReport {
        let witness = match *self {
            Property::Wip(form) => wip_witness(l, form),
            Property::Cip => first_pair(l, |x, y| cip_ok(l, x, y)),
            Property::Lip => first_pair(l, |x, y| lip_ok(l, x, y)),
            Property::Rip => first_pair(l, |x, y| rip_ok(l, x, y)),
            Property::Ip => first_pair(l, |x, y| lip_ok(l, x, y) && rip_ok(l, x, y)),
            Property::MInverse(m) => {
                let (jm, jm1) = m_powers(l, m);
                first_pair(l, |x, y| m_inverse_ok(l, &jm, &jm1, x, y))
            }
            Property::Aip => aip_witness(l),
        };
        PropertyReport {
            property: self.name(),
            holds: witness.is_none(),
            witness,
        }
    }

    pub fn holds(&self, l: &FiniteLoop) -> bool {
        self.check(l).holds
    }

    /// Re-evaluates whether `witness` exhibits a violation of this property.
    pub fn violated_at(&self, l: &FiniteLoop, witness: &[usize]) -> bool {
        let n = l.order();
        if witness.iter().any(|&v| v >= n) {
            return false;
        }
        match (*self, witness) {
            (Property::Wip(WipForm::Implication), &[x, y, z]) => {
                l.mul(l.mul(x, y), z) == l.identity() && l.mul(x, l.mul(y, z)) != l.identity()
            }
            (Property::Wip(WipForm::RightInverse | WipForm::Translational), &[x, y]) => {
                !wip_right_ok(l, x, y)
            }
            (Property::Wip(WipForm::LeftInverse | WipForm::TranslationalLeft), &[x, y]) => {
                !wip_left_ok(l, x, y)
            }
            (Property::Cip, &[x, y]) => !cip_ok(l, x, y),
            (Property::Lip, &[x, y]) => !lip_ok(l, x, y),
            (Property::Rip, &[x, y]) => !rip_ok(l, x, y),
            (Property::Ip, &[x, y]) => !(lip_ok(l, x, y) && rip_ok(l, x, y)),
            (Property::MInverse(m), &[x, y]) => {
                let (jm, jm1) = m_powers(l, m);
                !m_inverse_ok(l, &jm, &jm1, x, y)
            }
            (Property::Aip, &[x]) => l.two_sided_inverse(x).is_none(),
            (Property::Aip, &[x, y]) => l.has_two_sided_inverses() && !aip_ok(l, x, y),
            _ => false,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Property {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "wip" => Property::Wip(WipForm::RightInverse),
            "wip-implication" => Property::Wip(WipForm::Implication),
            "wip-left" => Property::Wip(WipForm::LeftInverse),
            "wip-translational" => Property::Wip(WipForm::Translational),
            "wip-translational-left" => Property::Wip(WipForm::TranslationalLeft),
            "cip" => Property::Cip,
            "lip" => Property::Lip,
            "rip" => Property::Rip,
            "ip" => Property::Ip,
            "aip" => Property::Aip,
            other => match other.strip_prefix("m-inverse:") {
                Some(m) => Property::MInverse(
                    m.parse()
                        .map_err(|_| LoopError::Parse(format!("bad exponent in `{other}`")))?,
                ),
                None => return Err(LoopError::Parse(format!("unknown property `{other}`"))),
            },
        })
    }
}

fn first_pair(l: &FiniteLoop, ok: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    let n = l.order();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| !ok(x, y))
        .map(|(x, y)| vec![x, y])
}

fn wip_right_ok(l: &FiniteLoop, x: usize, y: usize) -> bool {
    l.mul(y, l.right_inverse(l.mul(x, y))) == l.right_inverse(x)
}

fn wip_left_ok(l: &FiniteLoop, x: usize, y: usize) -> bool {
    l.mul(l.left_inverse(l.mul(x, y)), x) == l.left_inverse(y)
}

fn cip_ok(l: &FiniteLoop, x: usize, y: usize) -> bool {
    l.mul(l.mul(x, y), l.right_inverse(x)) == y
}

fn lip_ok(l: &FiniteLoop, x: usize, y: usize) -> bool {
    l.mul(l.left_inverse(x), l.mul(x, y)) == y
}

fn rip_ok(l: &FiniteLoop, x: usize, y: usize) -> bool {
    l.mul(l.mul(x, y), l.right_inverse(y)) == x
}

fn m_powers(l: &FiniteLoop, m: i64) -> (Permutation, Permutation) {
    // J_ρ^{-1} = J_λ, so negative powers come out of Permutation::pow directly
    (l.j_rho().pow(m), l.j_rho().pow(m + 1))
}

fn m_inverse_ok(l: &FiniteLoop, jm: &Permutation, jm1: &Permutation, x: usize, y: usize) -> bool {
    l.mul(jm.apply(l.mul(x, y)), jm1.apply(x)) == jm.apply(y)
}

fn aip_ok(l: &FiniteLoop, x: usize, y: usize) -> bool {
    l.right_inverse(l.mul(x, y)) == l.mul(l.right_inverse(x), l.right_inverse(y))
}

fn aip_witness(l: &FiniteLoop) -> Option<Vec<usize>> {
    if let Some(x) = (0..l.order()).find(|&x| l.two_sided_inverse(x).is_none()) {
        return Some(vec![x]);
    }
    first_pair(l, |x, y| aip_ok(l, x, y))
}

fn wip_witness(l: &FiniteLoop, form: WipForm) -> Option<Vec<usize>> {
    let n = l.order();
    let e = l.identity();
    match form {
        WipForm::Implication => {
            for x in 0..n {
                for y in 0..n {
                    let xy = l.mul(x, y);
                    for z in 0..n {
                        if l.mul(xy, z) == e && l.mul(x, l.mul(y, z)) != e {
                            return Some(vec![x, y, z]);
                        }
                    }
                }
            }
            None
        }
        WipForm::RightInverse => first_pair(l, |x, y| wip_right_ok(l, x, y)),
        WipForm::LeftInverse => first_pair(l, |x, y| wip_left_ok(l, x, y)),
        WipForm::Translational => (0..n).find_map(|y| {
            let lhs = Permutation::product([&l.rt(y), l.j_rho(), &l.lt(y)]);
            (0..n)
                .find(|&x| lhs.apply(x) != l.j_rho().apply(x))
                .map(|x| vec![x, y])
        }),
        WipForm::TranslationalLeft => (0..n).find_map(|x| {
            let lhs = Permutation::product([&l.lt(x), l.j_lambda(), &l.rt(x)]);
            (0..n)
                .find(|&y| lhs.apply(y) != l.j_lambda().apply(y))
                .map(|y| vec![x, y])
        }),
    }
}

pub fn has_wip(l: &FiniteLoop, method: WipMethod) -> PropertyReport {
    let form = match method {
        WipMethod::Definitional => WipForm::RightInverse,
        WipMethod::Translational => WipForm::Translational,
    };
    Property::Wip(form).check(l)
}

pub fn is_wip(l: &FiniteLoop) -> bool {
    wip_witness(l, WipForm::RightInverse).is_none()
}

pub fn has_cip(l: &FiniteLoop) -> PropertyReport {
    Property::Cip.check(l)
}

pub fn is_cip(l: &FiniteLoop) -> bool {
    has_cip(l).holds
}

/// CIP through translations: `R_{x^ρ} = L_x^{-1}` for every `x`.
pub fn cip_via_translations(l: &FiniteLoop) -> bool {
    (0..l.order()).all(|x| l.rt(l.right_inverse(x)) == l.lt(x).inverse())
}

pub fn has_lip(l: &FiniteLoop) -> PropertyReport {
    Property::Lip.check(l)
}

pub fn has_rip(l: &FiniteLoop) -> PropertyReport {
    Property::Rip.check(l)
}

pub fn has_ip(l: &FiniteLoop) -> PropertyReport {
    Property::Ip.check(l)
}

pub fn has_aip(l: &FiniteLoop) -> PropertyReport {
    Property::Aip.check(l)
}

pub fn m_inverse_check(l: &FiniteLoop, m: i64) -> PropertyReport {
    Property::MInverse(m).check(l)
}

/// Elements commuting with every element.
pub fn centrum(l: &FiniteLoop) -> Vec<usize> {
    let n = l.order();
    (0..n)
        .filter(|&x| (0..n).all(|y| l.mul(x, y) == l.mul(y, x)))
        .collect()
}

pub fn in_centrum(l: &FiniteLoop, x: usize) -> bool {
    (0..l.order()).all(|y| l.mul(x, y) == l.mul(y, x))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nuclei {
    /// `a·xy = ax·y`.
    pub left: Vec<usize>,
    /// `x·ay = xa·y`.
    pub middle: Vec<usize>,
    /// `xy·a = x·ya`.
    pub right: Vec<usize>,
}

pub fn nuclei(l: &FiniteLoop) -> Nuclei {
    let n = l.order();
    let assoc = |x: usize, y: usize, z: usize| l.mul(l.mul(x, y), z) == l.mul(x, l.mul(y, z));
    let slot = |pick: &dyn Fn(usize, usize, usize) -> bool| -> Vec<usize> {
        (0..n)
            .filter(|&a| (0..n).all(|x| (0..n).all(|y| pick(a, x, y))))
            .collect()
    };
    Nuclei {
        left: slot(&|a, x, y| assoc(a, x, y)),
        middle: slot(&|a, x, y| assoc(x, a, y)),
        right: slot(&|a, x, y| assoc(x, y, a)),
    }
}

/// Per-element identities. The inverse-property traits are `None` when a
/// referenced element lacks a two-sided inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementTraits {
    pub element: usize,
    pub flexible: bool,
    pub left_alternative: bool,
    pub right_alternative: bool,
    pub centrum: bool,
    /// `(yx)^{-1} = y^{-1}x^{-1}` for all `y`.
    pub rho_aipe: Option<bool>,
    /// `(xy)^{-1} = x^{-1}y^{-1}` for all `y`.
    pub lambda_aipe: Option<bool>,
    /// `(yx)^{-1} = x^{-1}y^{-1}` for all `y`.
    pub rho_aaipe: Option<bool>,
    /// `(xy)^{-1} = y^{-1}x^{-1}` for all `y`.
    pub lambda_aaipe: Option<bool>,
}

impl ElementTraits {
    pub fn alternative(&self) -> bool {
        self.left_alternative && self.right_alternative
    }
}

pub fn element_traits(l: &FiniteLoop, x: usize) -> Result<ElementTraits> {
    let n = l.order();
    if x >= n {
        return Err(LoopError::Index { element: x, order: n });
    }
    let all = |f: &dyn Fn(usize) -> bool| (0..n).all(f);
    let xx = l.mul(x, x);
    let inv = |z: usize| l.two_sided_inverse(z);

    // each closure returns Some(ok) when all referenced inverses exist
    let inverse_trait = |f: &dyn Fn(usize) -> Option<bool>| -> Option<bool> {
        let mut holds = true;
        for y in 0..n {
            holds &= f(y)?;
        }
        Some(holds)
    };
    let rho_aipe = inverse_trait(&|y| {
        Some(inv(l.mul(y, x))? == l.mul(inv(y)?, inv(x)?))
    });
    let lambda_aipe = inverse_trait(&|y| {
        Some(inv(l.mul(x, y))? == l.mul(inv(x)?, inv(y)?))
    });
    let rho_aaipe = inverse_trait(&|y| {
        Some(inv(l.mul(y, x))? == l.mul(inv(x)?, inv(y)?))
    });
    let lambda_aaipe = inverse_trait(&|y| {
        Some(inv(l.mul(x, y))? == l.mul(inv(y)?, inv(x)?))
    });

    Ok(ElementTraits {
        element: x,
        flexible: all(&|y| l.mul(x, l.mul(y, x)) == l.mul(l.mul(x, y), x)),
        left_alternative: all(&|y| l.mul(xx, y) == l.mul(x, l.mul(x, y))),
        right_alternative: all(&|y| l.mul(y, xx) == l.mul(l.mul(y, x), x)),
        centrum: in_centrum(l, x),
        rho_aipe,
        lambda_aipe,
        rho_aaipe,
        lambda_aaipe,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakInverseFlags {
    pub right: bool,
    pub left: bool,
}

/// Right flag: `J_ρ = αJ_ρα`; left flag: `J_λ = αJ_λα`.
pub fn is_weak_inverse_permutation(l: &FiniteLoop, alpha: &Permutation) -> Result<WeakInverseFlags> {
    if alpha.degree() != l.order() {
        return Err(LoopError::DegreeMismatch {
            left: l.order(),
            right: alpha.degree(),
        });
    }
    let right = Permutation::product([alpha, l.j_rho(), alpha]) == *l.j_rho();
    let left = Permutation::product([alpha, l.j_lambda(), alpha]) == *l.j_lambda();
    assert_eq!(
        right, left,
        "weak right and weak left inverse permutations must coincide"
    );
    Ok(WeakInverseFlags { right, left })
}

pub fn is_weak_inverse(l: &FiniteLoop, alpha: &Permutation) -> bool {
    is_weak_inverse_permutation(l, alpha).is_ok_and(|f| f.right)
}

/// Every weak inverse permutation of `l`, by scanning all `n!` bijections.
pub fn all_weak_inverse_permutations(l: &FiniteLoop) -> Vec<Permutation> {
    use itertools::Itertools;
    let n = l.order();
    (0..n)
        .permutations(n)
        .map(Permutation::from_images_unchecked)
        .filter(|a| is_weak_inverse(l, a))
        .collect()
}

/// The group generated by pairwise commuting weak inverse permutations,
/// sorted by image array.
pub fn weak_inverse_closure(l: &FiniteLoop, gens: &[Permutation]) -> Result<Vec<Permutation>> {
    let n = l.order();
    for (i, g) in gens.iter().enumerate() {
        if !is_weak_inverse_permutation(l, g)?.right {
            return Err(LoopError::NotWeakInverse(i));
        }
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !gens[i].commutes_with(&gens[j]) {
                return Err(LoopError::NotCommuting(i, j));
            }
        }
    }
    let mut group: BTreeSet<Permutation> = BTreeSet::new();
    let mut frontier = vec![Permutation::identity(n)];
    group.insert(Permutation::identity(n));
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = p.then(g);
            if group.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    let members: Vec<Permutation> = group.into_iter().collect();
    for a in &members {
        assert!(is_weak_inverse(l, a), "closure left the weak inverse set");
        assert!(members.contains(&a.inverse()), "closure is not a group");
        for b in &members {
            assert!(a.commutes_with(b), "closure is not abelian");
        }
    }
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    /// The order-5 loop with the smallest reduced table that is not WIP.
    fn non_wip_order5() -> FiniteLoop {
        crate::enumeration::enumerate_loops(5)
            .unwrap()
            .find(|l| !is_wip(l))
            .unwrap()
    }

    #[test]
    fn groups_have_every_inverse_property() {
        for l in [FiniteLoop::cyclic(4), FiniteLoop::klein_four(), FiniteLoop::symmetric3()] {
            assert!(has_wip(&l, WipMethod::Definitional).holds);
            assert!(has_wip(&l, WipMethod::Translational).holds);
            assert!(has_lip(&l).holds && has_rip(&l).holds && has_ip(&l).holds);
            // odd m reads (xy)^-1 x = y^-1, true in every group
            for m in [-3, -1, 1, 3] {
                assert!(m_inverse_check(&l, m).holds, "m = {m}");
            }
            // even m reads xy.x^-1 = y, i.e. commutativity
            for m in [-2, 0, 2] {
                assert_eq!(m_inverse_check(&l, m).holds, l.is_commutative(), "m = {m}");
            }
        }
    }

    #[test]
    fn abelian_groups_are_cip_and_s3_is_not() {
        assert!(has_cip(&FiniteLoop::cyclic(5)).holds);
        assert!(has_cip(&FiniteLoop::klein_four()).holds);
        let s3 = FiniteLoop::symmetric3();
        let r = has_cip(&s3);
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert!(Property::Cip.violated_at(&s3, &w));
        assert_ne!(s3.mul(w[0], w[1]), s3.mul(w[1], w[0]));
        assert!(!cip_via_translations(&s3));
    }

    #[test]
    fn non_wip_witness_rechecks() {
        let l = non_wip_order5();
        for form in [
            WipForm::Implication,
            WipForm::RightInverse,
            WipForm::LeftInverse,
            WipForm::Translational,
            WipForm::TranslationalLeft,
        ] {
            let r = Property::Wip(form).check(&l);
            assert!(!r.holds, "{form:?}");
            assert!(Property::Wip(form).violated_at(&l, r.witness.as_ref().unwrap()));
        }
    }

    #[test]
    fn lip_failure_has_witness() {
        let l = crate::enumeration::enumerate_loops(5)
            .unwrap()
            .find(|l| !has_lip(l).holds)
            .unwrap();
        let r = has_lip(&l);
        let w = r.witness.unwrap();
        assert_ne!(l.mul(l.left_inverse(w[0]), l.mul(w[0], w[1])), w[1]);
    }

    #[test]
    fn property_names_parse_back() {
        for s in ["wip", "cip", "lip", "rip", "ip", "aip", "m-inverse:-1", "wip-translational"] {
            assert_eq!(s.parse::<Property>().unwrap().name(), s);
        }
        assert!("m-inverse:x".parse::<Property>().is_err());
        assert!("moufang".parse::<Property>().is_err());
    }

    #[test]
    fn centrum_examples() {
        assert_eq!(centrum(&FiniteLoop::cyclic(4)), vec![0, 1, 2, 3]);
        assert_eq!(centrum(&FiniteLoop::symmetric3()), vec![0]);
    }

    #[test]
    fn group_nuclei_are_everything() {
        let s3 = FiniteLoop::symmetric3();
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(nuclei(&s3), Nuclei { left: all.clone(), middle: all.clone(), right: all });
    }

    #[test]
    fn nuclei_contain_identity() {
        for l in crate::enumeration::enumerate_loops(5).unwrap() {
            let nu = nuclei(&l);
            assert!(nu.left.contains(&0) && nu.middle.contains(&0) && nu.right.contains(&0));
            assert!(centrum(&l).contains(&0));
        }
    }

    #[test]
    fn identity_element_has_every_trait() {
        let l = non_wip_order5();
        let t = element_traits(&l, l.identity()).unwrap();
        assert!(t.flexible && t.alternative() && t.centrum);
        // e^{-1} = e exists but other referenced elements may lack two-sided inverses
        let g = element_traits(&FiniteLoop::symmetric3(), 0).unwrap();
        assert_eq!(g.rho_aipe, Some(true));
        assert_eq!(g.lambda_aaipe, Some(true));
    }

    #[test]
    fn abelian_group_elements_are_aipe() {
        let l = FiniteLoop::cyclic(6);
        for x in 0..6 {
            let t = element_traits(&l, x).unwrap();
            assert_eq!(t.rho_aipe, Some(true));
            assert_eq!(t.lambda_aipe, Some(true));
        }
    }

    #[test]
    fn nonabelian_group_elements_are_aaipe_but_not_all_aipe() {
        let l = FiniteLoop::symmetric3();
        let traits: Vec<_> = (0..6).map(|x| element_traits(&l, x).unwrap()).collect();
        assert!(traits.iter().all(|t| t.rho_aaipe == Some(true) && t.lambda_aaipe == Some(true)));
        assert!(traits.iter().any(|t| t.rho_aipe == Some(false)));
    }

    #[test]
    fn traits_not_applicable_without_two_sided_inverses() {
        let l = crate::enumeration::enumerate_loops(5)
            .unwrap()
            .find(|l| !l.has_two_sided_inverses())
            .unwrap();
        let x = (0..5).find(|&x| l.two_sided_inverse(x).is_none()).unwrap();
        let t = element_traits(&l, x).unwrap();
        assert_eq!(t.rho_aipe, None);
        assert!(element_traits(&l, 5).is_err());
    }

    #[test]
    fn weak_inverse_examples() {
        let z5 = FiniteLoop::cyclic(5);
        assert_eq!(
            is_weak_inverse_permutation(&z5, &Permutation::identity(5)).unwrap(),
            WeakInverseFlags { right: true, left: true }
        );
        assert!(is_weak_inverse(&z5, z5.j_rho()));
        assert!(is_weak_inverse_permutation(&z5, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn closure_examples() {
        let z5 = FiniteLoop::cyclic(5);
        let trivial = weak_inverse_closure(&z5, &[Permutation::identity(5)]).unwrap();
        assert_eq!(trivial.len(), 1);
        let two = weak_inverse_closure(&z5, &[z5.j_rho().clone()]).unwrap();
        assert_eq!(two.len(), 2);
    }

    #[test]
    fn closure_rejects_bad_generators() {
        let s3 = FiniteLoop::symmetric3();
        let weak = all_weak_inverse_permutations(&s3);
        let (i, j) = (0..weak.len())
            .flat_map(|i| (0..weak.len()).map(move |j| (i, j)))
            .find(|&(i, j)| !weak[i].commutes_with(&weak[j]))
            .unwrap();
        let err = weak_inverse_closure(&s3, &[weak[i].clone(), weak[j].clone()]).unwrap_err();
        assert!(matches!(err, LoopError::NotCommuting(0, 1)));

        let not_weak = (0..6)
            .map(|k| perm(&{
                let mut v: Vec<usize> = (0..6).collect();
                v.swap(0, k.max(1));
                v
            }))
            .find(|p| !is_weak_inverse(&s3, p))
            .unwrap();
        let err = weak_inverse_closure(&s3, &[Permutation::identity(6), not_weak]).unwrap_err();
        assert!(matches!(err, LoopError::NotWeakInverse(1)));
    }
}
