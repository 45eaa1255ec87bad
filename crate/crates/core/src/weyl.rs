//! Finite Coxeter groups realized as reflection groups on a root lattice.
//!
//! The same type serves the full Weyl group and integral Weyl groups `W_λ`,
//! which are generated by reflections in a sub-root-system `Π_λ` and carry
//! their own length function.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rootsys::{LatticeVector, Rational, RootSystem, Weight};

/// Order of the largest group the default cap allows (type F4).
pub const DEFAULT_MAX_ORDER: usize = 1152;

/// Index of an element in the enumeration (shortlex order of canonical words).
pub type ElemId = usize;

#[derive(Debug, Clone)]
struct Element {
    /// Action on simple-root coordinates, row-major.
    root_matrix: Vec<i64>,
    /// Action on fundamental-weight coordinates, row-major.
    weight_matrix: Vec<i64>,
    word: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CoxeterGroup {
    rank: usize,
    generators: Vec<LatticeVector>,
    positive: Vec<LatticeVector>,
    positive_index: HashMap<LatticeVector, usize>,
    elems: Vec<Element>,
    index: HashMap<Vec<i64>, ElemId>,
    right: Vec<Vec<ElemId>>,
    left: Vec<Vec<ElemId>>,
    inverse: Vec<ElemId>,
    mul: Vec<u32>,
    reflections: Vec<ElemId>,
    below: Vec<Vec<u64>>,
    longest: ElemId,
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

fn identity(n: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

/// Reflection `s_β` on root and weight coordinates.
fn reflection_matrices(rs: &RootSystem, beta: &LatticeVector) -> (Vec<i64>, Vec<i64>) {
    let n = rs.rank();
    let mut root_m = vec![0; n * n];
    for c in 0..n {
        let img = rs.reflect(beta, &rs.simple_root(c));
        for r in 0..n {
            root_m[r * n + c] = img.0[r];
        }
    }
    let coroot = rs.coroot_coefficients(beta);
    let beta_w = rs.root_to_weight(beta);
    let mut weight_m = identity(n);
    for c in 0..n {
        for r in 0..n {
            weight_m[r * n + c] -= coroot[c] * beta_w.0[r].to_integer();
        }
    }
    (root_m, weight_m)
}

fn key_of(weight_matrix: &[i64], n: usize) -> Vec<i64> {
    // Image of ρ; its stabilizer is trivial.
    (0..n).map(|r| weight_matrix[r * n..(r + 1) * n].iter().sum()).collect()
}

impl CoxeterGroup {
    /// The Weyl group of `rs`, with the default order cap.
    pub fn weyl(rs: &RootSystem) -> Result<Self> {
        Self::weyl_with_cap(rs, DEFAULT_MAX_ORDER)
    }

    pub fn weyl_with_cap(rs: &RootSystem, max_order: usize) -> Result<Self> {
        let gens: Vec<LatticeVector> = (0..rs.rank()).map(|i| rs.simple_root(i)).collect();
        Self::generated_by(rs, gens, rs.positive_roots().to_vec(), max_order)
    }

    /// Reflection group generated by `generators`, a simple system for the
    /// positive roots `positive` (both in ambient simple-root coordinates).
    pub fn generated_by(
        rs: &RootSystem,
        generators: Vec<LatticeVector>,
        positive: Vec<LatticeVector>,
        max_order: usize,
    ) -> Result<Self> {
        let n = rs.rank();
        let gen_mats: Vec<(Vec<i64>, Vec<i64>)> =
            generators.iter().map(|g| reflection_matrices(rs, g)).collect();
        let k = generators.len();

        let mut elems =
            vec![Element { root_matrix: identity(n), weight_matrix: identity(n), word: Vec::new() }];
        let mut index: HashMap<Vec<i64>, ElemId> = HashMap::new();
        index.insert(key_of(&elems[0].weight_matrix, n), 0);
        let mut right: Vec<Vec<ElemId>> = vec![vec![usize::MAX; k]];

        // Breadth-first in shortlex order: the first word found for an element
        // is its shortlex-minimal reduced word.
        let mut level_start = 0;
        while level_start < elems.len() {
            let level_end = elems.len();
            for w in level_start..level_end {
                for (i, (gr, gw)) in gen_mats.iter().enumerate() {
                    let wm = mat_mul(&elems[w].weight_matrix, gw, n);
                    let key = key_of(&wm, n);
                    let id = match index.get(&key) {
                        Some(&id) => id,
                        None => {
                            if elems.len() >= max_order {
                                return Err(Error::Resource(format!("group order exceeds cap {max_order}")));
                            }
                            let mut word = elems[w].word.clone();
                            word.push(i);
                            let rm = mat_mul(&elems[w].root_matrix, gr, n);
                            elems.push(Element { root_matrix: rm, weight_matrix: wm, word });
                            right.push(vec![usize::MAX; k]);
                            let id = elems.len() - 1;
                            index.insert(key, id);
                            id
                        }
                    };
                    right[w][i] = id;
                }
            }
            level_start = level_end;
        }

        let order = elems.len();
        let mut left = vec![vec![0; k]; order];
        for w in 0..order {
            for (i, (_, gw)) in gen_mats.iter().enumerate() {
                let wm = mat_mul(gw, &elems[w].weight_matrix, n);
                left[w][i] = index[&key_of(&wm, n)];
            }
        }

        let mut group = CoxeterGroup {
            rank: n,
            positive_index: positive.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect(),
            generators,
            positive,
            elems,
            index,
            right,
            left,
            inverse: Vec::new(),
            mul: Vec::new(),
            reflections: Vec::new(),
            below: Vec::new(),
            longest: order - 1,
        };
        group.build_tables(rs);
        Ok(group)
    }

    fn build_tables(&mut self, rs: &RootSystem) {
        let order = self.elems.len();
        let n = self.rank;

        self.mul = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                let mut x = a;
                for &i in &self.elems[b].word {
                    x = self.right[x][i];
                }
                self.mul[a * order + b] = x as u32;
            }
        }
        self.inverse = (0..order)
            .map(|w| {
                let mut x = 0;
                for &i in self.elems[w].word.iter().rev() {
                    x = self.right[x][i];
                }
                x
            })
            .collect();

        self.reflections = self
            .positive
            .iter()
            .map(|beta| {
                let (_, wm) = reflection_matrices(rs, beta);
                self.index[&key_of(&wm, n)]
            })
            .collect();

        let words = order.div_ceil(64);
        let mut below: Vec<Vec<u64>> = vec![vec![0; words]; order];
        // Elements are stored in nondecreasing length, so every element
        // covered by `w` is already complete when `w` is processed.
        for w in 0..order {
            let lw = self.length(w);
            let mut set = vec![0u64; words];
            set[w / 64] |= 1 << (w % 64);
            for &t in &self.reflections {
                let y = self.mul(t, w);
                if lw > 0 && self.length(y) + 1 == lw {
                    for (dst, src) in set.iter_mut().zip(&below[y]) {
                        *dst |= src;
                    }
                }
            }
            below[w] = set;
        }
        self.below = below;
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Simple roots of this Coxeter system in ambient coordinates.
    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn positive_roots(&self) -> &[LatticeVector] {
        &self.positive
    }

    pub fn identity(&self) -> ElemId {
        0
    }

    pub fn longest(&self) -> ElemId {
        self.longest
    }

    pub fn elements(&self) -> std::ops::Range<ElemId> {
        0..self.elems.len()
    }

    pub fn length(&self, w: ElemId) -> usize {
        self.elems[w].word.len()
    }

    /// Shortlex-minimal reduced word (generator indices, 0-based).
    pub fn word(&self, w: ElemId) -> &[usize] {
        &self.elems[w].word
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul[a * self.order() + b] as ElemId
    }

    pub fn inverse(&self, w: ElemId) -> ElemId {
        self.inverse[w]
    }

    /// `w·s_i`.
    pub fn right_mul(&self, w: ElemId, i: usize) -> ElemId {
        self.right[w][i]
    }

    /// `s_i·w`.
    pub fn left_mul(&self, w: ElemId, i: usize) -> ElemId {
        self.left[w][i]
    }

    pub fn generator(&self, i: usize) -> ElemId {
        self.right[0][i]
    }

    pub fn is_right_descent(&self, w: ElemId, i: usize) -> bool {
        self.length(self.right[w][i]) < self.length(w)
    }

    pub fn is_left_descent(&self, w: ElemId, i: usize) -> bool {
        self.length(self.left[w][i]) < self.length(w)
    }

    pub fn from_word(&self, word: &[usize]) -> Result<ElemId> {
        let mut x = 0;
        for &i in word {
            if i >= self.num_generators() {
                return Err(Error::Config(format!("generator index {} out of range", i + 1)));
            }
            x = self.right[x][i];
        }
        Ok(x)
    }

    /// Parses `"121"` (1-based generator digits) or `"e"`.
    pub fn parse_word(&self, s: &str) -> Result<ElemId> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(0);
        }
        let word = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d >= 1)
                    .map(|d| d as usize - 1)
                    .ok_or_else(|| Error::Config(format!("bad word '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_word(&word)
    }

    pub fn word_string(&self, w: ElemId) -> String {
        let word = self.word(w);
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter().map(|i| char::from_digit(*i as u32 + 1, 10).unwrap_or('?')).collect()
        }
    }

    pub fn apply_root(&self, w: ElemId, v: &LatticeVector) -> LatticeVector {
        let m = &self.elems[w].root_matrix;
        let n = self.rank;
        LatticeVector((0..n).map(|r| (0..n).map(|c| m[r * n + c] * v.0[c]).sum()).collect())
    }

    pub fn apply_weight(&self, w: ElemId, lambda: &Weight) -> Weight {
        let m = &self.elems[w].weight_matrix;
        let n = self.rank;
        Weight(
            (0..n)
                .map(|r| {
                    (0..n).map(|c| lambda.0[c] * m[r * n + c]).fold(Rational::from_integer(0), |a, b| a + b)
                })
                .collect(),
        )
    }

    /// Looks up an element of this group by its action on weights.
    pub fn find_by_action(&self, weight_matrix_key: &[i64]) -> Option<ElemId> {
        self.index.get(weight_matrix_key).copied()
    }

    /// `w(ρ)` of the ambient system, an identifier valid across subgroups.
    pub fn ambient_key(&self, w: ElemId) -> Vec<i64> {
        key_of(&self.elems[w].weight_matrix, self.rank)
    }

    /// `Δ(w) = {β > 0 : wβ < 0}` over this system's positive roots.
    pub fn inversion_set(&self, w: ElemId) -> Vec<LatticeVector> {
        self.positive.iter().filter(|b| self.apply_root(w, b).is_negative()).cloned().collect()
    }

    /// Whether positive root `beta` lies in `Δ(w)`.
    pub fn inverts(&self, w: ElemId, beta: &LatticeVector) -> bool {
        self.apply_root(w, beta).is_negative()
    }

    /// The reflection `s_β` for a positive root of this system.
    pub fn reflection(&self, beta: &LatticeVector) -> Option<ElemId> {
        self.positive_index.get(beta).map(|&i| self.reflections[i])
    }

    /// `w·s_β` for a positive root `β` of this system.
    pub fn right_mul_reflection(&self, w: ElemId, beta: &LatticeVector) -> ElemId {
        let s = self.reflection(beta).expect("positive root of the system");
        self.mul(w, s)
    }

    pub fn bruhat_leq(&self, x: ElemId, y: ElemId) -> bool {
        self.below[y][x / 64] >> (x % 64) & 1 == 1
    }

    /// Elements `z` with `x ≤ z ≤ y`.
    pub fn interval(&self, x: ElemId, y: ElemId) -> Vec<ElemId> {
        self.elements().filter(|&z| self.bruhat_leq(x, z) && self.bruhat_leq(z, y)).collect()
    }
}

/// Integral root system `Δ_λ` with its simple system and Weyl group.
#[derive(Debug, Clone)]
pub struct IntegralData {
    /// Positive roots `α` with `⟨λ, α∨⟩ ∈ ℤ` (Δ_λ is this set and its negatives).
    pub positive: Vec<LatticeVector>,
    pub pi_lambda: Vec<LatticeVector>,
    pub group: CoxeterGroup,
    pub w_lambda_0: ElemId,
}

impl IntegralData {
    /// All of `Δ_λ`, positive roots first.
    pub fn delta_lambda(&self) -> Vec<LatticeVector> {
        let mut all = self.positive.clone();
        all.extend(self.positive.iter().map(|r| -r));
        all
    }
}

pub fn integral_data(rs: &RootSystem, lambda: &Weight) -> Result<IntegralData> {
    integral_data_with_cap(rs, lambda, DEFAULT_MAX_ORDER)
}

pub fn integral_data_with_cap(rs: &RootSystem, lambda: &Weight, max_order: usize) -> Result<IntegralData> {
    if lambda.rank() != rs.rank() {
        return Err(Error::Domain(format!(
            "weight has {} coordinates, system has rank {}",
            lambda.rank(),
            rs.rank()
        )));
    }
    let positive: Vec<LatticeVector> = rs
        .positive_roots()
        .iter()
        .filter(|r| rs.pairing_unchecked(lambda, r).is_integer())
        .cloned()
        .collect();
    let in_set: std::collections::HashSet<&LatticeVector> = positive.iter().collect();
    let pi_lambda: Vec<LatticeVector> = positive
        .iter()
        .filter(|beta| positive.iter().filter(|g| g != beta).all(|g| in_set.contains(&rs.reflect(beta, g))))
        .cloned()
        .collect();
    let group = CoxeterGroup::generated_by(rs, pi_lambda.clone(), positive.clone(), max_order)?;
    let w_lambda_0 = group.longest();
    Ok(IntegralData { positive, pi_lambda, group, w_lambda_0 })
}

/// `⟨λ, α∨⟩ ≠ 0` for every root.
pub fn is_regular(rs: &RootSystem, lambda: &Weight) -> bool {
    rs.positive_roots().iter().all(|r| rs.pairing_unchecked(lambda, r) != Rational::from_integer(0))
}

/// `⟨λ, α∨⟩ ∉ {1, 2, 3, …}` for every positive root.
pub fn is_antidominant(rs: &RootSystem, lambda: &Weight) -> bool {
    rs.positive_roots().iter().all(|r| {
        let p = rs.pairing_unchecked(lambda, r);
        !(p.is_integer() && p > Rational::from_integer(0))
    })
}
