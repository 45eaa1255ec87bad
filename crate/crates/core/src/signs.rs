//! Signs `ε(H_{γ,N}, s)` of wall crossings and the `w_γ` words they are read from.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::{CartanType, LatticeVector, RootSystem};
use crate::weyl::{CoxeterGroup, ElemId};

/// `γ = s_{i₁}⋯s_{i_{k−1}} α_{i_k}` with `w_γ = s_{i₁}⋯s_{i_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WGammaWitness {
    pub gamma: LatticeVector,
    /// 0-based simple-reflection indices `i₁, …, i_k`.
    pub word: Vec<usize>,
    /// `ht(s_{i_j}⋯s_{i_{k−1}} α_{i_k})` for `j = 1..k`; strictly decreasing.
    pub heights: Vec<i64>,
}

impl WGammaWitness {
    fn from_word(rs: &RootSystem, word: Vec<usize>) -> Self {
        let k = word.len();
        let mut root = rs.simple_root(word[k - 1]);
        let mut heights = vec![root.height()];
        for &i in word[..k - 1].iter().rev() {
            root = rs.reflect_simple(i, &root);
            heights.push(root.height());
        }
        heights.reverse();
        WGammaWitness { gamma: root, word, heights }
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|i| char::from_digit(*i as u32 + 1, 10).unwrap_or('?')).collect()
    }

    pub fn heights_decrease(&self) -> bool {
        self.heights.windows(2).all(|w| w[0] > w[1])
    }
}

type G2Row = ([i64; 2], [(&'static str, i8); 6]);

/// Hard-coded chamber table for G₂ (α₁ long, α₂ short): for each positive root
/// the six chambers `s𝔠₀` its hyperplanes meet, with the sign multiplying `δ_γ^N`.
const G2_TABLE: [G2Row; 6] = [
    ([1, 0], [("1", 1), ("12", 1), ("121", 1), ("1212", 1), ("12121", 1), ("121212", 1)]),
    ([1, 1], [("12", 1), ("121", -1), ("1212", -1), ("12121", -1), ("121212", -1), ("21212", 1)]),
    ([2, 3], [("121", 1), ("1212", -1), ("12121", 1), ("121212", 1), ("21212", -1), ("2121", 1)]),
    ([1, 2], [("1212", 1), ("12121", -1), ("121212", 1), ("21212", 1), ("2121", -1), ("212", 1)]),
    ([1, 3], [("12121", 1), ("121212", -1), ("21212", -1), ("2121", -1), ("212", -1), ("21", 1)]),
    ([0, 1], [("121212", 1), ("21212", 1), ("2121", 1), ("212", 1), ("21", 1), ("2", 1)]),
];

/// One row of the G₂ table as `(γ, [(chamber word, sign multiplier)])`.
pub fn g2_table() -> Vec<(LatticeVector, Vec<(String, i8)>)> {
    G2_TABLE
        .iter()
        .map(|(g, row)| (LatticeVector(g.to_vec()), row.iter().map(|(w, s)| (w.to_string(), *s)).collect()))
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PairingSets {
    pub s2: Vec<LatticeVector>,
    pub s3: Vec<LatticeVector>,
}

/// Root system together with its full Weyl group.
#[derive(Debug, Clone)]
pub struct Signs {
    rs: RootSystem,
    group: Arc<CoxeterGroup>,
}

impl Signs {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        Ok(Signs { rs: rs.clone(), group: Arc::new(CoxeterGroup::weyl(rs)?) })
    }

    pub fn with_group(rs: &RootSystem, group: Arc<CoxeterGroup>) -> Self {
        Signs { rs: rs.clone(), group }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    fn check_positive(&self, gamma: &LatticeVector) -> Result<()> {
        if self.rs.positive_root_index(gamma).is_none() {
            return Err(Error::Domain(format!("{gamma} is not a positive root")));
        }
        Ok(())
    }

    /// Greedy `w_γ`: repeatedly lower the height with the lowest-index simple
    /// reflection that does so.
    pub fn w_gamma(&self, gamma: &LatticeVector) -> Result<WGammaWitness> {
        self.check_positive(gamma)?;
        let rs = &self.rs;
        let mut word = Vec::new();
        let mut root = gamma.clone();
        while root.height() > 1 {
            let i = (0..rs.rank())
                .find(|&i| rs.coroot_pairing(&root, &rs.simple_root(i)) > 0)
                .expect("a non-simple positive root pairs positively with some simple coroot");
            word.push(i);
            root = rs.reflect_simple(i, &root);
        }
        word.push(root.0.iter().position(|&c| c == 1).expect("simple root"));
        Ok(WGammaWitness::from_word(rs, word))
    }

    /// A witness for `γ = xα` with `Δ(w_{xα}⁻¹) ⊆ Δ((xs)⁻¹)`.
    ///
    /// Follows the inductive construction: peel left descents `t` off `x`,
    /// prepending `t` to the word when `t` lowers the height of `xα` and
    /// skipping it when `t` fixes `xα`, backtracking over the choice of `t`.
    /// If no peeling sequence works, every decreasing-height word for `γ` is
    /// tried in lexicographic order.
    pub fn w_gamma_adapted(&self, x: ElemId, alpha: usize) -> Result<WGammaWitness> {
        Ok(self.w_gamma_adapted_traced(x, alpha)?.0)
    }

    /// Like [`Signs::w_gamma_adapted`], also reporting whether the fallback
    /// search was needed.
    pub fn w_gamma_adapted_traced(&self, x: ElemId, alpha: usize) -> Result<(WGammaWitness, bool)> {
        let g = &*self.group;
        if g.is_right_descent(x, alpha) {
            return Err(Error::Precondition(format!(
                "x = {} has s{} as a right descent",
                g.word_string(x),
                alpha + 1
            )));
        }
        let target = g.inversion_set(g.inverse(g.right_mul(x, alpha)));
        let contained = |w: &WGammaWitness| {
            let elem = g.from_word(&w.word).expect("valid word");
            g.length(elem) == w.word.len()
                && g.inversion_set(g.inverse(elem)).iter().all(|b| target.contains(b))
        };
        let mut prefix = Vec::new();
        if let Some(w) = self.peel(x, alpha, &mut prefix, &contained) {
            return Ok((w, false));
        }
        let gamma = g.apply_root(x, &self.rs.simple_root(alpha));
        self.all_witnesses(&gamma).into_iter().find(|w| contained(w)).map(|w| (w, true)).ok_or_else(|| {
            Error::Precondition(format!(
                "no w_γ for {gamma} inside Δ(({}·s{})⁻¹)",
                g.word_string(x),
                alpha + 1
            ))
        })
    }

    fn peel(
        &self,
        x: ElemId,
        alpha: usize,
        prefix: &mut Vec<usize>,
        accept: &dyn Fn(&WGammaWitness) -> bool,
    ) -> Option<WGammaWitness> {
        let g = &*self.group;
        let rs = &self.rs;
        let gamma = g.apply_root(x, &rs.simple_root(alpha));
        if gamma.height() == 1 {
            let mut word = prefix.clone();
            word.push(gamma.0.iter().position(|&c| c == 1).expect("simple root"));
            let w = WGammaWitness::from_word(rs, word);
            return accept(&w).then_some(w);
        }
        for t in (0..rs.rank()).filter(|&t| g.is_left_descent(x, t)) {
            let p = rs.coroot_pairing(&gamma, &rs.simple_root(t));
            if p < 0 {
                continue;
            }
            if p > 0 {
                prefix.push(t);
            }
            let found = self.peel(g.left_mul(x, t), alpha, prefix, accept);
            if p > 0 {
                prefix.pop();
            }
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Every word `s_{i₁}⋯s_{i_k}` with `γ = s_{i₁}⋯s_{i_{k−1}}α_{i_k}` and
    /// strictly decreasing heights, in lexicographic order.
    pub fn all_witnesses(&self, gamma: &LatticeVector) -> Vec<WGammaWitness> {
        let rs = &self.rs;
        let mut out = Vec::new();
        let mut stack = vec![(gamma.clone(), Vec::new())];
        while let Some((root, word)) = stack.pop() {
            if root.height() == 1 {
                let mut word = word;
                word.push(root.0.iter().position(|&c| c == 1).expect("simple root"));
                out.push(WGammaWitness::from_word(rs, word));
                continue;
            }
            for i in (0..rs.rank()).rev() {
                if rs.coroot_pairing(&root, &rs.simple_root(i)) > 0 {
                    let mut w = word.clone();
                    w.push(i);
                    stack.push((rs.reflect_simple(i, &root), w));
                }
            }
        }
        out
    }

    /// `β ∈ Δ(s⁻¹)`.
    fn in_chamber_set(&self, s_inv: ElemId, beta: &LatticeVector) -> bool {
        beta.is_positive() && self.group.inverts(s_inv, beta)
    }

    /// `Δ(w⁻¹)` for the element spelled by `word`.
    fn witness_inversions(&self, witness: &WGammaWitness) -> Vec<LatticeVector> {
        let g = &*self.group;
        let w = g.from_word(&witness.word).expect("valid generator indices");
        g.inversion_set(g.inverse(w))
    }

    /// `𝒮²` and `𝒮³` for the adapted witness of `xα`.
    pub fn pairing_sets(&self, x: ElemId, alpha: usize) -> Result<PairingSets> {
        let witness = self.w_gamma_adapted(x, alpha)?;
        let g = &*self.group;
        let xs_inv = g.inverse(g.right_mul(x, alpha));
        Ok(self.pairing_sets_for(&witness, xs_inv))
    }

    /// `𝒮²` and `𝒮³` for an arbitrary witness and chamber `s` (given as `s⁻¹`).
    pub fn pairing_sets_for(&self, witness: &WGammaWitness, s_inv: ElemId) -> PairingSets {
        let rs = &self.rs;
        let gamma = &witness.gamma;
        let len = rs.squared_length(gamma);
        let mut sets = PairingSets::default();
        for beta in self.witness_inversions(witness) {
            if !self.in_chamber_set(s_inv, &beta) {
                continue;
            }
            if rs.squared_length(&beta) == len {
                if beta != *gamma && self.in_chamber_set(s_inv, &rs.reflect(&beta, gamma)) {
                    sets.s2.push(beta);
                }
            } else {
                let other = -&rs.reflect(&beta, &rs.reflect(gamma, &beta));
                if self.in_chamber_set(s_inv, &other) {
                    sets.s3.push(beta);
                }
            }
        }
        sets
    }

    /// Whether `γ` spans a G₂ with some other root (root length ratio √3).
    pub fn in_g2_subsystem(&self, gamma: &LatticeVector) -> bool {
        let lg = self.rs.squared_length(gamma);
        self.rs.positive_roots().iter().any(|b| {
            let lb = self.rs.squared_length(b);
            (lb == 3 * lg || lg == 3 * lb) && self.rs.inner(b, gamma) != 0
        })
    }

    /// `H_{γ,N}` meets the interior of `s𝔠₀`.
    pub fn meets_chamber(&self, gamma: &LatticeVector, n: i64, s: ElemId) -> bool {
        crate::affine::meets_chamber(&self.group, gamma, n, s)
    }

    /// `ε(H_{γ,N}, s)`; zero when the hyperplane misses the chamber.
    pub fn epsilon_hyperplane(&self, gamma: &LatticeVector, n: i64, s: ElemId) -> Result<i8> {
        self.check_positive(gamma)?;
        if !self.meets_chamber(gamma, n, s) {
            return Ok(0);
        }
        if self.rs.cartan_type() == CartanType::G {
            return self.g2_lookup(gamma, n, s);
        }
        if self.in_g2_subsystem(gamma) {
            return Err(Error::Unsupported(format!("{gamma} lies in a G2 subsystem")));
        }
        Ok(self.epsilon_formula(&self.w_gamma(gamma)?, n, s))
    }

    fn g2_lookup(&self, gamma: &LatticeVector, n: i64, s: ElemId) -> Result<i8> {
        let (_, row) = G2_TABLE
            .iter()
            .find(|(g, _)| g[..] == gamma.0[..])
            .ok_or_else(|| Error::Domain(format!("{gamma} is not a G2 root")))?;
        let delta: i8 = if self.rs.is_compact_root(gamma) { 1 } else { -1 };
        for (word, sign) in row {
            if self.group.parse_word(word)? == s {
                return Ok(sign * delta.pow(n as u32));
            }
        }
        Err(Error::Domain(format!("chamber {} is not listed for {gamma}", self.group.word_string(s))))
    }

    /// The three-factor product evaluated on a given witness word.
    pub fn epsilon_formula(&self, witness: &WGammaWitness, n: i64, s: ElemId) -> i8 {
        let rs = &self.rs;
        let gamma = &witness.gamma;
        let len = rs.squared_length(gamma);
        let first = witness
            .word
            .iter()
            .filter(|&&i| rs.is_noncompact_simple(i) && rs.squared_length(&rs.simple_root(i)) >= len)
            .count() as i64
            * n;
        let sets = self.pairing_sets_for(witness, self.group.inverse(s));
        let exponent = first + sets.s2.len() as i64 + sets.s3.len() as i64;
        if exponent % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `ε(H_{xα,N}, xs) = (−1)^{ε(N·xα)}`.
    pub fn epsilon_simplified(&self, x: ElemId, alpha: usize, n: i64) -> Result<i8> {
        let g = &*self.group;
        if g.is_right_descent(x, alpha) {
            return Err(Error::Precondition(format!(
                "x = {} has s{} as a right descent",
                g.word_string(x),
                alpha + 1
            )));
        }
        let gamma = g.apply_root(x, &self.rs.simple_root(alpha));
        if !self.meets_chamber(&gamma, n, g.right_mul(x, alpha)) {
            return Err(Error::Precondition(format!("H_{{{gamma},{n}}} misses the chamber")));
        }
        Ok(if self.rs.epsilon_grading(&gamma.scale(n)) == 0 { 1 } else { -1 })
    }
}
