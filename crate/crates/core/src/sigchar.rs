//! Truncated signature characters of Verma modules.
//!
//! `M(λ)` has highest weight `λ − ρ`; every character here carries that base.
//! Inside the Wallach region the signature character is the closed product
//! `R(λ)`; elsewhere it is reached by crossing walls, either one at a time or
//! through the subset sum over an alcove gallery.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::{AffineElt, AffineHyperplane, AffineWeyl, Gallery};
use crate::algebra::{expand_inverse_factor, CharacterTerm, TruncatedCharacter};
use crate::error::{Error, Result};
use crate::rootsys::{LatticeVector, Rational, RootSystem, Weight};
use crate::signs::Signs;
use crate::weyl::{CoxeterGroup, ElemId};

pub const DEFAULT_CUTOFF: usize = 8;
/// Galleries longer than this would need more than 2²⁰ subset terms.
pub const MAX_GALLERY_LEN: usize = 20;

/// Signatures `(p_j, q_j)` of the forms induced on the Jantzen levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureLevels {
    pub levels: Vec<(u64, u64)>,
}

/// Signatures for small `t > 0` and small `t < 0`.
pub fn jantzen_signature_split(levels: &SignatureLevels) -> ((u64, u64), (u64, u64)) {
    let mut pos = (0, 0);
    let mut neg = (0, 0);
    for (j, &(p, q)) in levels.levels.iter().enumerate() {
        pos.0 += p;
        pos.1 += q;
        if j % 2 == 0 {
            neg.0 += p;
            neg.1 += q;
        } else {
            neg.0 += q;
            neg.1 += p;
        }
    }
    (pos, neg)
}

/// Sign of `⟨Fⁿv, Fⁿv⟩` in a rank-one Verma module with `⟨λ, α∨⟩ = pairing`.
///
/// With `[E, F] = H`, `Hv = (pairing − 1)v` and `F̄ = cE` (`c = −1` on a
/// noncompact root), invariance gives
/// `⟨Fⁿv, Fⁿv⟩ = c·n(pairing − n)·⟨Fⁿ⁻¹v, Fⁿ⁻¹v⟩`.
pub fn sl2_norm_sign(pairing: Rational, compact: bool, n: u32) -> i8 {
    let c: i8 = if compact { 1 } else { -1 };
    let mut sign: i8 = 1;
    for k in 1..=n {
        let f = pairing - Rational::from_integer(k as i64);
        if f.is_zero() {
            return 0;
        }
        sign *= c * if f.is_positive() { 1 } else { -1 };
    }
    sign
}

/// [`sl2_norm_sign`] read off a rank-one system and its grading.
pub fn sl2_gram_oracle(rs: &RootSystem, lambda: &Weight, n: u32) -> Result<i8> {
    if rs.rank() != 1 {
        return Err(Error::Domain(format!("{} is not of rank one", rs.label())));
    }
    let alpha = rs.simple_root(0);
    Ok(sl2_norm_sign(rs.pairing(lambda, &alpha)?, rs.is_compact_root(&alpha), n))
}

/// One selected subset `I` of the alcove sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditTerm {
    /// 1-based gallery positions.
    pub subset: Vec<usize>,
    pub epsilon: i8,
    /// `ε(I)·2^{|I|}`.
    pub coefficient: i64,
    /// The reflected-translated parameter fed to `R`.
    pub parameter: Weight,
}

#[derive(Debug, Clone)]
pub struct AlcoveSum {
    pub alcove: AffineElt,
    pub gallery: Gallery,
    pub character: TruncatedCharacter,
    /// Subsets with nonzero `ε(I)`, in mask order.
    pub audit: Vec<AuditTerm>,
}

#[derive(Debug, Clone)]
pub struct SignatureEngine {
    rs: RootSystem,
    affine: AffineWeyl,
    signs: Signs,
    cutoff: usize,
    compact_factor: Vec<(LatticeVector, i8)>,
}

impl SignatureEngine {
    pub fn new(rs: &RootSystem, cutoff: usize) -> Result<Self> {
        Ok(Self::with_group(rs, Arc::new(CoxeterGroup::weyl(rs)?), cutoff))
    }

    pub fn with_group(rs: &RootSystem, group: Arc<CoxeterGroup>, cutoff: usize) -> Self {
        let compact_factor = rs
            .positive_roots()
            .iter()
            .map(|a| (a.clone(), if rs.is_compact_root(a) { 1 } else { -1 }))
            .collect();
        SignatureEngine {
            rs: rs.clone(),
            affine: AffineWeyl::with_group(rs, group.clone()),
            signs: Signs::with_group(rs, group),
            cutoff,
            compact_factor,
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn affine(&self) -> &AffineWeyl {
        &self.affine
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn in_wallach_region(&self, lambda: &Weight) -> bool {
        let one = Rational::one();
        self.rs.positive_roots().iter().all(|a| self.rs.pairing_unchecked(lambda, a) < one)
    }

    /// `R(λ)`, valid as `ch_s M(λ)` on the Wallach region.
    pub fn wallach_character(&self, lambda: &Weight) -> Result<TruncatedCharacter> {
        self.check_rank(lambda)?;
        if !self.in_wallach_region(lambda) {
            return Err(Error::Precondition(format!("{lambda} is outside the Wallach region")));
        }
        Ok(self.r_character(lambda))
    }

    /// The formal product `R(λ)` with no region check.
    fn r_character(&self, lambda: &Weight) -> TruncatedCharacter {
        let base = lambda - &self.rs.rho();
        let mut ch = TruncatedCharacter::monomial(Weight::zero(self.rs.rank()), self.cutoff);
        for (alpha, sign) in &self.compact_factor {
            ch = ch.mul(&expand_inverse_factor(alpha, *sign, self.cutoff));
        }
        ch.translate(base)
    }

    /// `ch_s M(λ_to)` from `ch_s M(λ_from)` across the single wall `h`:
    /// `e^{λ_to − λ_from}·chs + 2ε·reflected`, where `reflected = ch_s M(λ_to − nα)`
    /// and `ε = ε(A_to, A_from)`.
    pub fn wall_cross(
        &self,
        chs: &TruncatedCharacter,
        lambda_from: &Weight,
        lambda_to: &Weight,
        h: &AffineHyperplane,
        eps: i8,
        reflected: &TruncatedCharacter,
    ) -> Result<TruncatedCharacter> {
        let crossings = self
            .affine
            .segment_crossings(lambda_from, lambda_to)
            .ok_or_else(|| Error::Path("segment passes through a codimension-2 face".into()))?;
        if crossings.len() != 1 || crossings[0].1 != *h {
            return Err(Error::Path(format!(
                "segment {lambda_from} → {lambda_to} crosses {} hyperplanes, expected exactly H_{{{},{}}}",
                crossings.len(),
                h.root,
                h.level
            )));
        }
        let rho = self.rs.rho();
        if chs.base() != &(lambda_from - &rho) {
            return Err(Error::Domain(format!("character base is not {lambda_from} − ρ")));
        }
        let mut out = chs.translate(lambda_to - &rho);
        if eps != 0 {
            let target = &(lambda_to - &self.rs.root_to_weight(&h.root.scale(h.level))) - &rho;
            if reflected.base() != &target {
                return Err(Error::Domain(format!(
                    "reflected character has base {}, expected {target}",
                    reflected.base()
                )));
            }
            out.add_scaled(reflected, 2 * eps as i64, &self.rs)?;
        }
        Ok(out)
    }

    /// `ε(A, A′)` for `A = a` and its neighbour across `h`, with the chamber
    /// read off `tilde(a)`.
    pub fn alcove_sign(&self, a: &AffineElt, h: &AffineHyperplane) -> Result<i8> {
        if !h.is_reducibility() {
            return Ok(0);
        }
        let chamber = self.affine.tilde(a);
        let e = self.signs.epsilon_hyperplane(&h.root, h.level, chamber)?;
        let side = h.value(&self.rs, &self.affine.barycenter(a));
        Ok(if side.is_positive() { e } else { -e })
    }

    fn linear(&self, g: ElemId) -> AffineElt {
        AffineElt { translation: LatticeVector::zero(self.rs.rank()), finite: g }
    }

    fn moved(&self, g: ElemId, h: &AffineHyperplane) -> AffineHyperplane {
        AffineHyperplane::new(self.affine.group().apply_root(g, &h.root), h.level)
    }

    /// The subset sum over the straight-line gallery from `wA₀ ∋ λ` to `w̃A₀`.
    pub fn signature_character_alcove_sum(&self, lambda: &Weight) -> Result<AlcoveSum> {
        let u = self.affine.alcove_of(lambda)?;
        let gallery = self.affine.gallery(&u)?;
        self.alcove_sum_with_gallery(lambda, gallery)
    }

    /// The subset sum over a caller-supplied gallery starting at `λ`'s alcove.
    pub fn alcove_sum_with_gallery(&self, lambda: &Weight, gallery: Gallery) -> Result<AlcoveSum> {
        let u = self.affine.alcove_of(lambda)?;
        if gallery.alcoves.first() != Some(&u) {
            return Err(Error::Path("gallery does not start at the alcove of λ".into()));
        }
        let len = gallery.len();
        if len > MAX_GALLERY_LEN {
            return Err(Error::Resource(format!("gallery of length {len} exceeds {MAX_GALLERY_LEN}")));
        }
        let group = self.affine.group();
        let terms: Vec<Option<AuditTerm>> = (0u64..1 << len)
            .into_par_iter()
            .map(|mask| -> Result<Option<AuditTerm>> {
                let mut g = group.identity();
                let mut mu = lambda.clone();
                let mut eps: i8 = 1;
                let mut subset = Vec::new();
                for i in 0..len {
                    if mask >> i & 1 == 0 {
                        continue;
                    }
                    let h = &gallery.hyperplanes[i];
                    let a = self.affine.compose(&self.linear(g), &gallery.alcoves[i]);
                    let e = self.alcove_sign(&a, &self.moved(g, h))?;
                    if e == 0 {
                        return Ok(None);
                    }
                    eps *= e;
                    let shift = group.apply_root(g, &h.root).scale(h.level);
                    mu = &mu - &self.rs.root_to_weight(&shift);
                    g = group.right_mul_reflection(g, &h.root);
                    subset.push(i + 1);
                }
                let coefficient = eps as i64 * (1i64 << subset.len());
                Ok(Some(AuditTerm { subset, epsilon: eps, coefficient, parameter: mu }))
            })
            .collect::<Result<_>>()?;
        let audit: Vec<AuditTerm> = terms.into_iter().flatten().collect();
        let mut character = TruncatedCharacter::zero(lambda - &self.rs.rho(), self.cutoff);
        for t in &audit {
            character.add_scaled(&self.r_character(&t.parameter), t.coefficient, &self.rs)?;
        }
        Ok(AlcoveSum { alcove: u, gallery, character, audit })
    }

    /// `ch_s M(λ)` by crossing the gallery's walls one at a time, starting
    /// from the Wallach region at its far end.
    pub fn signature_character_wall_crossing(&self, lambda: &Weight) -> Result<TruncatedCharacter> {
        let u = self.affine.alcove_of(lambda)?;
        let gallery = self.affine.gallery(&u)?;
        self.wall_crossing_along(lambda, &gallery)
    }

    pub fn wall_crossing_along(&self, lambda: &Weight, gallery: &Gallery) -> Result<TruncatedCharacter> {
        if gallery.len() > MAX_GALLERY_LEN {
            return Err(Error::Resource(format!(
                "gallery of length {} exceeds {MAX_GALLERY_LEN}",
                gallery.len()
            )));
        }
        self.cross_from(gallery, self.affine.group().identity(), 0, lambda)
    }

    /// `ch_s M(p)` for `p ∈ g·C_i`.
    fn cross_from(&self, gallery: &Gallery, g: ElemId, i: usize, p: &Weight) -> Result<TruncatedCharacter> {
        let here = self.affine.compose(&self.linear(g), &gallery.alcoves[i]);
        if self.affine.alcove_of(p)? != here {
            return Err(Error::Path(format!("{p} left the transported gallery at step {i}")));
        }
        if i == gallery.len() {
            return self.wallach_character(p);
        }
        let h = self.moved(g, &gallery.hyperplanes[i]);
        let next = self.affine.apply(&self.affine.reflection(&h), p);
        let far = self.cross_from(gallery, g, i + 1, &next)?;
        let eps = self.alcove_sign(&here, &h)?;
        let reflected = if eps == 0 {
            TruncatedCharacter::zero(Weight::zero(self.rs.rank()), self.cutoff)
        } else {
            let q = p - &self.rs.root_to_weight(&h.root.scale(h.level));
            let g2 = self.affine.group().right_mul_reflection(g, &gallery.hyperplanes[i].root);
            self.cross_from(gallery, g2, i + 1, &q)?
        };
        self.wall_cross(&far, &next, p, &h, eps, &reflected)
    }

    /// Terms whose coefficient exceeds the weight multiplicity `P(μ)` in absolute value.
    pub fn kostant_violations(&self, ch: &TruncatedCharacter) -> Vec<CharacterTerm> {
        ch.terms().into_iter().filter(|t| t.c.unsigned_abs() > self.rs.kostant_partition(&t.mu)).collect()
    }

    fn check_rank(&self, lambda: &Weight) -> Result<()> {
        if lambda.rank() != self.rs.rank() {
            return Err(Error::Domain(format!(
                "weight {lambda} has rank {}, expected {}",
                lambda.rank(),
                self.rs.rank()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(label: &str, nc: &[usize], cutoff: usize) -> SignatureEngine {
        SignatureEngine::new(&RootSystem::from_label(label, nc).unwrap(), cutoff).unwrap()
    }

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    fn a1_string(ch: &TruncatedCharacter) -> Vec<i64> {
        (0..=ch.cutoff() as i64).map(|k| ch.coeff(&LatticeVector(vec![k]))).collect()
    }

    #[test]
    fn jantzen_examples() {
        let one = SignatureLevels { levels: vec![(3, 2)] };
        assert_eq!(jantzen_signature_split(&one), ((3, 2), (3, 2)));
        let two = SignatureLevels { levels: vec![(1, 0), (1, 0)] };
        assert_eq!(jantzen_signature_split(&two), ((2, 0), (1, 1)));
        let zero = SignatureLevels { levels: vec![(0, 0); 4] };
        assert_eq!(jantzen_signature_split(&zero), ((0, 0), (0, 0)));
    }

    #[test]
    fn sl2_oracle_matches_wallach_patterns() {
        let half = Rational::new(1, 2);
        for n in 0..8 {
            assert_eq!(sl2_norm_sign(half, true, n), if n % 2 == 0 { 1 } else { -1 });
            assert_eq!(sl2_norm_sign(half, false, n), 1);
            assert_eq!(sl2_norm_sign(Rational::new(-7, 3), false, n), 1);
        }
        assert_eq!(sl2_norm_sign(Rational::from_integer(2), true, 2), 0);
        assert_eq!(sl2_norm_sign(Rational::from_integer(2), true, 1), 1);
        assert_eq!(sl2_norm_sign(Rational::from_integer(5), false, 0), 1);
    }

    #[test]
    fn wallach_rank_one() {
        let c = engine("A1", &[], 3);
        assert_eq!(a1_string(&c.wallach_character(&w("1/2")).unwrap()), vec![1, -1, 1, -1]);
        let n = engine("A1", &[1], 3);
        assert_eq!(a1_string(&n.wallach_character(&w("1/2")).unwrap()), vec![1, 1, 1, 1]);
        assert!(matches!(n.wallach_character(&w("3/2")), Err(Error::Precondition(_))));
    }

    #[test]
    fn wallach_cutoff_zero() {
        let e = engine("B2", &[1], 0);
        let lambda = w("-1/3,-1/5");
        let ch = e.wallach_character(&lambda).unwrap();
        let terms = ch.terms();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].c, 1);
        assert_eq!(ch.base(), &(&lambda - &e.root_system().rho()));
    }

    #[test]
    fn wall_cross_rank_one_matches_oracle() {
        for nc in [&[][..], &[1][..]] {
            let e = engine("A1", nc, 8);
            let rs = e.root_system().clone();
            let h = AffineHyperplane::new(LatticeVector(vec![1]), 1);
            let from = w("1/2");
            let to = w("3/2");
            let eps = e.alcove_sign(&e.affine().alcove_of(&to).unwrap(), &h).unwrap();
            let reflected = e.wallach_character(&w("-1/2")).unwrap();
            let ch =
                e.wall_cross(&e.wallach_character(&from).unwrap(), &from, &to, &h, eps, &reflected).unwrap();
            for n in 0..=8 {
                assert_eq!(
                    ch.coeff(&LatticeVector(vec![n])),
                    sl2_gram_oracle(&rs, &to, n as u32).unwrap() as i64
                );
            }
        }
    }

    #[test]
    fn wall_cross_checks_segment() {
        let e = engine("A1", &[1], 4);
        let h = AffineHyperplane::new(LatticeVector(vec![1]), 1);
        let ch = e.wallach_character(&w("1/2")).unwrap();
        let err = e.wall_cross(&ch, &w("1/2"), &w("5/2"), &h, 1, &ch);
        assert!(matches!(err, Err(Error::Path(_))));
        // ε = 0: pure translation.
        let moved = e.wall_cross(&ch, &w("1/2"), &w("3/2"), &h, 0, &ch).unwrap();
        assert_eq!(moved, ch.translate(&w("3/2") - &e.root_system().rho()));
    }

    #[test]
    fn wall_cross_antisymmetry() {
        let e = engine("A1", &[1], 6);
        let rho = e.root_system().rho();
        let h = AffineHyperplane::new(LatticeVector(vec![1]), 1);
        let (a, b) = (w("1/3"), w("4/3"));
        let ua = e.affine().alcove_of(&a).unwrap();
        let ub = e.affine().alcove_of(&b).unwrap();
        let eps_ba = e.alcove_sign(&ub, &h).unwrap();
        let eps_ab = e.alcove_sign(&ua, &h).unwrap();
        assert_eq!(eps_ab, -eps_ba);
        let start = e.wallach_character(&a).unwrap();
        let refl_b = e.wallach_character(&w("-2/3")).unwrap();
        let there = e.wall_cross(&start, &a, &b, &h, eps_ba, &refl_b).unwrap();
        let refl_a = refl_b.translate(&(&a - &e.root_system().root_to_weight(&h.root)) - &rho);
        let back = e.wall_cross(&there, &b, &a, &h, eps_ab, &refl_a).unwrap();
        assert_eq!(back, start);
    }

    #[test]
    fn wallach_region_single_term() {
        let e = engine("A2", &[1], 5);
        let lambda = w("-1/3,-1/5");
        let sum = e.signature_character_alcove_sum(&lambda).unwrap();
        assert_eq!(sum.audit.len(), 1);
        assert!(sum.audit[0].subset.is_empty());
        assert_eq!(sum.character, e.wallach_character(&lambda).unwrap());
    }

    #[test]
    fn a1_two_term_sum() {
        let e = engine("A1", &[1], 8);
        let lambda = w("3/2");
        let sum = e.signature_character_alcove_sum(&lambda).unwrap();
        assert_eq!(sum.gallery.len(), 1);
        assert_eq!(sum.audit.len(), 2);
        assert_eq!(sum.character, e.signature_character_wall_crossing(&lambda).unwrap());
        assert_eq!(a1_string(&sum.character), vec![1, -1, -1, -1, -1, -1, -1, -1, -1]);
    }

    #[test]
    fn a2_two_walls_deep() {
        for nc in [&[1][..], &[2][..], &[1, 2][..], &[][..]] {
            let e = engine("A2", nc, 8);
            let lambda = w("3/2,-1/5");
            let sum = e.signature_character_alcove_sum(&lambda).unwrap();
            assert_eq!(sum.gallery.len(), 2);
            assert!(sum.audit.len() <= 4);
            assert_eq!(sum.character, e.signature_character_wall_crossing(&lambda).unwrap());
            assert!(e.kostant_violations(&sum.character).is_empty());
        }
    }

    #[test]
    fn on_wall_is_degenerate() {
        let e = engine("A2", &[1], 4);
        assert!(matches!(e.signature_character_alcove_sum(&w("1,-1/3")), Err(Error::Degenerate(_))));
    }
}
