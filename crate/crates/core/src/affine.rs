//! Affine Weyl group, alcoves and galleries.
//!
//! An affine element `(τ, w)` acts by `λ ↦ wλ + τ` with `τ` in the root
//! lattice. The fundamental alcove is the antidominant one,
//! `A₀ = {λ : −1 < ⟨λ, α∨⟩ < 0 for all α > 0}`.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::{LatticeVector, Rational, RootSystem, Weight};
use crate::weyl::{CoxeterGroup, ElemId};

/// `H_{γ,N} = {λ : ⟨λ, γ∨⟩ = N}`, stored with `γ` positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffineHyperplane {
    pub root: LatticeVector,
    pub level: i64,
}

impl AffineHyperplane {
    /// Normalizes `H_{−γ,−N}` to `H_{γ,N}`.
    pub fn new(root: LatticeVector, level: i64) -> Self {
        if root.is_negative() {
            AffineHyperplane { root: -&root, level: -level }
        } else {
            AffineHyperplane { root, level }
        }
    }

    /// `⟨λ, γ∨⟩ − N`; positive on `H⁺`.
    pub fn value(&self, rs: &RootSystem, lambda: &Weight) -> Rational {
        rs.pairing_unchecked(lambda, &self.root) - Rational::from_integer(self.level)
    }

    /// Reducibility hyperplanes have positive level.
    pub fn is_reducibility(&self) -> bool {
        self.level > 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffineElt {
    pub translation: LatticeVector,
    pub finite: ElemId,
}

#[derive(Debug, Clone, Serialize)]
pub struct Gallery {
    /// `C₀ = wA₀, …, C_ℓ = w̃A₀`.
    pub alcoves: Vec<AffineElt>,
    /// `rᵢ`, with `Cᵢ = rᵢ C_{i−1}`.
    pub reflections: Vec<AffineElt>,
    pub hyperplanes: Vec<AffineHyperplane>,
}

impl Gallery {
    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }
}

const MAX_PERTURBATIONS: usize = 64;
const PERTURBATION_PRIMES: [i64; 4] = [2, 3, 5, 7];

#[derive(Debug, Clone)]
pub struct AffineWeyl {
    rs: RootSystem,
    group: Arc<CoxeterGroup>,
    theta_s: LatticeVector,
    vertices: Vec<Weight>,
    barycenter: Weight,
}

impl AffineWeyl {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        Ok(Self::with_group(rs, Arc::new(CoxeterGroup::weyl(rs)?)))
    }

    pub fn with_group(rs: &RootSystem, group: Arc<CoxeterGroup>) -> Self {
        let n = rs.rank();
        let theta_s = rs.highest_short_root().clone();
        let c = rs.coroot_coefficients(&theta_s);
        let mut vertices = vec![Weight::zero(n)];
        for (i, &ci) in c.iter().enumerate() {
            let mut v = Weight::zero(n);
            v.0[i] = Rational::new(-1, ci);
            vertices.push(v);
        }
        let barycenter =
            vertices.iter().fold(Weight::zero(n), |acc, v| &acc + v).scale(Rational::new(1, n as i64 + 1));
        AffineWeyl { rs: rs.clone(), group, theta_s, vertices, barycenter }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn identity(&self) -> AffineElt {
        AffineElt { translation: LatticeVector::zero(self.rs.rank()), finite: self.group.identity() }
    }

    pub fn translation(&self, tau: LatticeVector) -> AffineElt {
        AffineElt { translation: tau, finite: self.group.identity() }
    }

    /// `(τ₁, w₁)(τ₂, w₂) = (τ₁ + w₁τ₂, w₁w₂)`.
    pub fn compose(&self, a: &AffineElt, b: &AffineElt) -> AffineElt {
        AffineElt {
            translation: &a.translation + &self.group.apply_root(a.finite, &b.translation),
            finite: self.group.mul(a.finite, b.finite),
        }
    }

    pub fn inverse(&self, a: &AffineElt) -> AffineElt {
        let winv = self.group.inverse(a.finite);
        AffineElt { translation: -&self.group.apply_root(winv, &a.translation), finite: winv }
    }

    pub fn apply(&self, u: &AffineElt, lambda: &Weight) -> Weight {
        &self.group.apply_weight(u.finite, lambda) + &self.rs.root_to_weight(&u.translation)
    }

    /// Reflection through `H_{γ,N}`: `λ ↦ s_γλ + Nγ`.
    pub fn reflection(&self, h: &AffineHyperplane) -> AffineElt {
        let finite = self.group.reflection(&h.root).expect("positive root of the system");
        AffineElt { translation: h.root.scale(h.level), finite }
    }

    /// The reflection across the wall `H_{θ_s,−1}` of `A₀`.
    fn affine_wall(&self) -> AffineElt {
        self.reflection(&AffineHyperplane::new(self.theta_s.clone(), -1))
    }

    /// Vertices of `A₀`: `0` and `−ω_i / c_i`, where `θ_s∨ = Σ c_i α_i∨`.
    pub fn fundamental_vertices(&self) -> &[Weight] {
        &self.vertices
    }

    pub fn vertices(&self, u: &AffineElt) -> Vec<Weight> {
        self.vertices.iter().map(|v| self.apply(u, v)).collect()
    }

    pub fn barycenter(&self, u: &AffineElt) -> Weight {
        self.apply(u, &self.barycenter)
    }

    pub fn on_some_hyperplane(&self, lambda: &Weight) -> bool {
        self.rs.positive_roots().iter().any(|r| self.rs.pairing_unchecked(lambda, r).is_integer())
    }

    /// The unique `u` with `λ ∈ uA₀`.
    pub fn alcove_of(&self, lambda: &Weight) -> Result<AffineElt> {
        if lambda.rank() != self.rs.rank() {
            return Err(Error::Domain(format!("weight {lambda} has the wrong rank")));
        }
        if self.on_some_hyperplane(lambda) {
            return Err(Error::Degenerate(format!("{lambda} lies on an affine hyperplane")));
        }
        let rs = &self.rs;
        let zero = Rational::zero();
        let minus_one = -Rational::one();
        let mut u = self.identity();
        let mut mu = lambda.clone();
        loop {
            let r = if let Some(i) =
                (0..rs.rank()).find(|&i| rs.pairing_unchecked(&mu, &rs.simple_root(i)) > zero)
            {
                AffineElt { translation: LatticeVector::zero(rs.rank()), finite: self.group.generator(i) }
            } else if rs.pairing_unchecked(&mu, &self.theta_s) < minus_one {
                self.affine_wall()
            } else {
                return Ok(u);
            };
            mu = self.apply(&r, &mu);
            u = self.compose(&u, &r);
        }
    }

    /// `w = ts ↦ s`.
    pub fn bar(&self, u: &AffineElt) -> ElemId {
        u.finite
    }

    /// The `w̃` with `uA₀ ⊂ w̃𝔠₀`.
    pub fn tilde(&self, u: &AffineElt) -> ElemId {
        self.chamber_of(&self.barycenter(u))
    }

    pub fn projections(&self, u: &AffineElt) -> (ElemId, ElemId) {
        (self.bar(u), self.tilde(u))
    }

    /// The chamber `w𝔠₀` containing a regular point.
    pub fn chamber_of(&self, lambda: &Weight) -> ElemId {
        let rs = &self.rs;
        let zero = Rational::zero();
        let mut w = self.group.identity();
        let mut mu = lambda.clone();
        while let Some(i) = (0..rs.rank()).find(|&i| rs.pairing_unchecked(&mu, &rs.simple_root(i)) > zero) {
            mu = rs.reflect_weight(&rs.simple_root(i), &mu);
            w = self.group.right_mul(w, i);
        }
        w
    }

    /// `H_{γ,N}` meets the interior of `s𝔠₀`; exact form of the sampling test.
    pub fn meets_chamber(&self, gamma: &LatticeVector, n: i64, s: ElemId) -> bool {
        meets_chamber(&self.group, gamma, n, s)
    }

    /// Gallery along the straight segment between barycenters of `uA₀` and `w̃A₀`.
    pub fn gallery(&self, u: &AffineElt) -> Result<Gallery> {
        self.gallery_through(u, &[])
    }

    /// Gallery along the polyline from `uA₀` through `waypoints` to `w̃A₀`.
    pub fn gallery_through(&self, u: &AffineElt, waypoints: &[Weight]) -> Result<Gallery> {
        let end = AffineElt { translation: LatticeVector::zero(self.rs.rank()), finite: self.tilde(u) };
        for k in 0..MAX_PERTURBATIONS {
            let delta = Rational::new(1, 400 * (k as i64 + 1));
            let mut points = vec![self.perturb(&self.barycenter(u), delta, 0)];
            for (j, p) in waypoints.iter().enumerate() {
                points.push(self.perturb(p, delta, j + 1));
            }
            points.push(self.perturb(&self.barycenter(&end), delta, waypoints.len() + 1));
            if self.alcove_of(&points[0]).ok().as_ref() != Some(u)
                || self.alcove_of(points.last().unwrap()).ok().as_ref() != Some(&end)
                || points.iter().any(|p| self.on_some_hyperplane(p))
            {
                continue;
            }
            if let Some(g) = self.walk(u, &points)? {
                if g.alcoves.last() != Some(&end) {
                    return Err(Error::Path("gallery does not end at w̃A₀".into()));
                }
                return Ok(g);
            }
        }
        Err(Error::Path("no generic perturbation found".into()))
    }

    fn perturb(&self, p: &Weight, delta: Rational, salt: usize) -> Weight {
        Weight(
            p.0.iter()
                .enumerate()
                .map(|(i, c)| {
                    let prime = PERTURBATION_PRIMES[(i + salt) % PERTURBATION_PRIMES.len()];
                    c + delta * Rational::new(1, prime * (i as i64 + 1))
                })
                .collect(),
        )
    }

    /// Hyperplanes crossed by the open segment `p → q`, in order, with their
    /// crossing parameters; `None` when two crossings coincide.
    pub fn segment_crossings(&self, p: &Weight, q: &Weight) -> Option<Vec<(Rational, AffineHyperplane)>> {
        let rs = &self.rs;
        let mut events = Vec::new();
        for gamma in rs.positive_roots() {
            let a = rs.pairing_unchecked(p, gamma);
            let b = rs.pairing_unchecked(q, gamma);
            if a == b {
                continue;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let mut n = lo.floor().to_integer() + 1;
            while Rational::from_integer(n) < hi {
                if Rational::from_integer(n) > lo {
                    let t = (Rational::from_integer(n) - a) / (b - a);
                    events.push((t, AffineHyperplane::new(gamma.clone(), n)));
                }
                n += 1;
            }
        }
        events.sort_by_key(|x| x.0);
        if events.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(events)
    }

    fn walk(&self, start: &AffineElt, points: &[Weight]) -> Result<Option<Gallery>> {
        let mut gallery =
            Gallery { alcoves: vec![start.clone()], reflections: Vec::new(), hyperplanes: Vec::new() };
        let mut current = start.clone();
        for seg in points.windows(2) {
            let (p, q) = (&seg[0], &seg[1]);
            let Some(events) = self.segment_crossings(p, q) else {
                return Ok(None);
            };
            let mut prev_t = Rational::zero();
            for (idx, (t, h)) in events.iter().enumerate() {
                let next_t = events.get(idx + 1).map_or(Rational::one(), |e| e.0);
                let r = self.reflection(h);
                let next = self.compose(&r, &current);
                // Sanity: the sampled alcoves on both sides agree with the bookkeeping.
                let before = lerp(p, q, (prev_t + t) / Rational::from_integer(2));
                let after = lerp(p, q, (*t + next_t) / Rational::from_integer(2));
                if self.alcove_of(&before)? != current || self.alcove_of(&after)? != next {
                    return Err(Error::Path(format!(
                        "inconsistent crossing of H_{{{},{}}}",
                        h.root, h.level
                    )));
                }
                if h.value(&self.rs, &before).signum() == h.value(&self.rs, &after).signum() {
                    return Err(Error::Path("crossing without sign change".into()));
                }
                gallery.reflections.push(r);
                gallery.hyperplanes.push(h.clone());
                gallery.alcoves.push(next.clone());
                current = next;
                prev_t = *t;
            }
        }
        Ok(Some(gallery))
    }
}

fn lerp(p: &Weight, q: &Weight, t: Rational) -> Weight {
    Weight(p.0.iter().zip(&q.0).map(|(a, b)| a + (b - a) * t).collect())
}

/// `H_{γ,N}` meets the interior of `s𝔠₀`: `N > 0` and `γ ∈ Δ(s⁻¹)`.
pub fn meets_chamber(group: &CoxeterGroup, gamma: &LatticeVector, n: i64, s: ElemId) -> bool {
    n > 0 && gamma.is_positive() && group.inverts(group.inverse(s), gamma)
}
